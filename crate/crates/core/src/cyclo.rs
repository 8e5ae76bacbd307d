//! Exact arithmetic in Q(ζ_m) on the power basis 1, ζ, …, ζ^{φ(m)−1}, and
//! reduction to F_{p^r} along a chosen ζ ↦ ζ̄.
//!
//! Reduction goes through the Teichmüller lift of ζ̄ in the Galois ring
//! GR(p^M, r), which gives the valuation at the prime selected by ζ̄ even
//! when coefficients have p in their denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::ff::{FieldCtx, Fq};

/// Φ_m with integer coefficients, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    // x^m − 1 divided by Φ_d for all proper divisors d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in arith::divisors(m) {
        if d == m {
            continue;
        }
        num = poly_div_exact(&num, &cyclotomic_poly(d));
    }
    num
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (db..a.len()).rev() {
        let c = r[i] / b[db];
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    m: u64,
    c: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero(m: u64) -> Self {
        let d = arith::euler_phi(m) as usize;
        Cyclo { m, c: vec![BigRational::zero(); d] }
    }

    pub fn from_rational(m: u64, r: BigRational) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = r;
        z
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational(m, BigRational::one())
    }

    /// ζ_m^e.
    pub fn zeta_pow(m: u64, e: u64) -> Self {
        let mut full = vec![BigRational::zero(); (e % m) as usize + 1];
        full[(e % m) as usize] = BigRational::one();
        Self::reduce_poly(m, full)
    }

    fn reduce_poly(m: u64, mut full: Vec<BigRational>) -> Self {
        let phi = cyclotomic_poly(m);
        let d = phi.len() - 1;
        for i in (d..full.len()).rev() {
            let c = std::mem::take(&mut full[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                full[i - d + j] -= &c * BigRational::from_integer(BigInt::from(phi[j]));
            }
        }
        full.resize(d, BigRational::zero());
        Cyclo { m, c: full }
    }

    pub fn order(&self) -> u64 {
        self.m
    }
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.m, o.m);
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.m, o.m);
        Cyclo { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.m, o.m);
        let mut full = vec![BigRational::zero(); self.c.len() + o.c.len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        Self::reduce_poly(self.m, full)
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo { m: self.m, c: self.c.iter().map(|a| a * r).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// The value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.c[1..].iter().all(|a| a.is_zero()).then(|| self.c[0].clone())
    }
}

/// 𝔭-adic data of an element of Q(ζ_m), where 𝔭 is the prime cut out by
/// ζ ↦ ζ̄: x = p^valuation · u with u a 𝔭-unit reducing to `unit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadicValue {
    Zero,
    Value { valuation: i64, unit: Fq },
}

impl PadicValue {
    /// Reduction mod 𝔭, if integral.
    pub fn reduction(&self) -> Option<Fq> {
        match *self {
            PadicValue::Zero => Some(0),
            PadicValue::Value { valuation: 0, unit } => Some(unit),
            PadicValue::Value { valuation, .. } if valuation > 0 => Some(0),
            _ => None,
        }
    }
}

/// Working p-adic precision; comfortably above every valuation that can
/// occur for Bernoulli numbers and theta coefficients in scope.
const PADIC_DIGITS: u32 = 40;

struct GaloisRing {
    pm: BigInt,
    modulus: Vec<BigInt>,
    r: usize,
}

impl GaloisRing {
    fn new(f: &FieldCtx) -> Self {
        let pm = BigInt::from(f.p()).pow(PADIC_DIGITS);
        let modulus = f.modulus().iter().map(|&c| BigInt::from(c)).collect();
        GaloisRing { pm, modulus, r: f.r() as usize }
    }

    fn norm(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.pm)
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let r = self.r;
        let mut full = vec![BigInt::zero(); 2 * r - 1];
        for i in 0..r {
            for j in 0..r {
                full[i + j] += &a[i] * &b[j];
            }
        }
        for d in (r..2 * r - 1).rev() {
            let c = std::mem::take(&mut full[d]);
            for i in 0..r {
                full[d - r + i] -= &c * &self.modulus[i];
            }
        }
        full.truncate(r);
        full.iter().map(|x| self.norm(x)).collect()
    }

    fn pow(&self, a: &[BigInt], mut e: u64) -> Vec<BigInt> {
        let mut base = a.to_vec();
        let mut acc = vec![BigInt::zero(); self.r];
        acc[0] = BigInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Evaluates `x` at the Teichmüller lift of `zeta_bar` (which must be a
/// primitive m-th root of unity in `f`, m = x.order()).
pub fn padic_eval(x: &Cyclo, f: &FieldCtx, zeta_bar: Fq) -> PadicValue {
    let gr = GaloisRing::new(f);
    let p = BigInt::from(f.p());
    // Teichmüller lift: iterate t ↦ t^q.
    let mut t: Vec<BigInt> = f.coeffs(zeta_bar).into_iter().map(BigInt::from).collect();
    for _ in 0..PADIC_DIGITS {
        t = gr.pow(&t, f.order() as u64);
    }
    let denom = x.c.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut acc = vec![BigInt::zero(); gr.r];
    let mut tp = {
        let mut one = vec![BigInt::zero(); gr.r];
        one[0] = BigInt::one();
        one
    };
    for c in &x.c {
        let y = c.numer() * (&denom / c.denom());
        if !y.is_zero() {
            for (a, b) in acc.iter_mut().zip(&tp) {
                *a = gr.norm(&(&*a + &y * b));
            }
        }
        tp = gr.mul(&tp, &t);
    }
    if acc.iter().all(|a| a.is_zero()) {
        return PadicValue::Zero;
    }
    let v_num = acc.iter().filter(|a| !a.is_zero()).map(|a| arith::val_p(a, f.p() as u64)).min().unwrap();
    let v_den = arith::val_p(&denom, f.p() as u64);
    let scale = p.pow(v_num);
    let digits: Vec<u32> = acc.iter().map(|a| (a / &scale).mod_floor(&p).to_u32().unwrap()).collect();
    let unit_num = f.from_coeffs(&digits);
    let den_unit = (&denom / p.pow(v_den)).mod_floor(&p);
    let den_unit = f.from_int(den_unit.to_i64().unwrap());
    PadicValue::Value {
        valuation: v_num as i64 - v_den as i64,
        unit: f.div(unit_num, den_unit).expect("denominator unit is invertible"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_arithmetic() {
        let z = Cyclo::zeta_pow(5, 1);
        let z5 = (0..5).fold(Cyclo::one(5), |acc, _| acc.mul(&z));
        assert_eq!(z5, Cyclo::one(5));
        // ζ + ζ⁻¹ satisfies φ² + φ − 1 = 0
        let phi = z.add(&Cyclo::zeta_pow(5, 4));
        let lhs = phi.mul(&phi).add(&phi).sub(&Cyclo::one(5));
        assert!(lhs.is_zero());
        assert_eq!(Cyclo::zeta_pow(4, 2).as_rational(), Some(rat(-1, 1)));
    }

    #[test]
    fn padic_rationals() {
        let f = make_field(5, 1).unwrap();
        let v = padic_eval(&Cyclo::from_rational(1, rat(1, 240)), &f, 1);
        // 1/240 = 5^{-1} · 1/48 and 48 ≡ 3 mod 5, 3⁻¹ = 2
        assert_eq!(v, PadicValue::Value { valuation: -1, unit: 2 });
        assert_eq!(
            padic_eval(&Cyclo::from_rational(1, rat(-7, 3)), &f, 1).reduction(),
            Some(f.div(f.from_int(-7), 3).unwrap())
        );
        assert_eq!(padic_eval(&Cyclo::zero(1), &f, 1), PadicValue::Zero);
    }

    #[test]
    fn padic_picks_the_prime_above_p() {
        // 2 + i has valuation 1 at the prime where i ↦ 3 (2 + 3 = 5) and
        // valuation 0 where i ↦ 2.
        let f = make_field(5, 1).unwrap();
        let x = Cyclo::from_rational(4, rat(2, 1)).add(&Cyclo::zeta_pow(4, 1));
        assert!(matches!(padic_eval(&x, &f, 3), PadicValue::Value { valuation: 1, .. }));
        assert_eq!(padic_eval(&x, &f, 2), PadicValue::Value { valuation: 0, unit: 4 });
    }

    #[test]
    fn padic_in_extension() {
        let f = make_field(5, 2).unwrap();
        let z3 = f.root_of_unity(3).unwrap();
        let x = Cyclo::zeta_pow(3, 1).add(&Cyclo::from_rational(3, rat(1, 7)));
        let expect = f.add(z3, f.inv(f.from_int(7)).unwrap());
        assert_eq!(padic_eval(&x, &f, z3).reduction(), Some(expect));
    }
}
