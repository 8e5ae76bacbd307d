//! Binary quadratic forms, their theta series, and the weight-one dihedral
//! newforms attached to class characters of imaginary quadratic fields of
//! odd prime class number.
//!
//! Newform coefficients live in Z[ζ_h]; they are stored as integer vectors
//! on 1, ζ, …, ζ^{h−2} (reduced modulo Φ_h = 1 + x + … + x^{h−1}).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use crate::arith;
use crate::ff::{FieldCtx, Fq};
use crate::qseries::QExpansion;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DihedralError {
    #[error("NotFundamental: {0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("UnsupportedClassNumber: h({d}) = {h}")]
    UnsupportedClassNumber { d: i64, h: usize },
    #[error("UnknownDiscriminant: {0}")]
    UnknownDiscriminant(String),
    #[error("NoMultiplicativeAssignment for D = {0}")]
    NoMultiplicativeAssignment(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }
    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
    /// The inverse class (a, −b, c), renormalised when already ambiguous.
    pub fn inverse(&self) -> QuadForm {
        let inv = QuadForm::new(self.a, -self.b, self.c);
        if inv.is_reduced() {
            inv
        } else {
            *self
        }
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.unsigned_abs();
    let squarefree = |n: u64| arith::factor(n).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(m),
        0 => {
            let m4 = d / 4;
            matches!(m4.rem_euclid(4), 2 | 3) && squarefree(m4.unsigned_abs())
        }
        _ => false,
    }
}

/// All reduced primitive forms of discriminant D, ordered by (a, b).
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>, DihedralError> {
    if !is_fundamental(d) {
        return Err(DihedralError::NotFundamental(d));
    }
    let mut out = Vec::new();
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, num / (4 * a));
            if f.is_reduced() && arith::gcd(arith::gcd(a as u64, b.unsigned_abs()), f.c as u64) == 1 {
                out.push(f);
            }
        }
    }
    out.sort_by_key(|f| (f.a, -f.b));
    Ok(out)
}

/// Representation numbers r_Q(n) for n < prec.
pub fn theta_series(q: &QuadForm, prec: usize) -> Vec<i64> {
    let mut r = vec![0i64; prec];
    if prec == 0 {
        return r;
    }
    let d = -q.disc() as f64;
    // Q(x, y) ≥ |D| y² / 4a
    let ymax = ((4.0 * q.a as f64 * prec as f64) / d).sqrt() as i64 + 1;
    for y in -ymax..=ymax {
        // a x² + b y x + c y² < prec
        let disc = (q.b * y) as f64 * (q.b * y) as f64 - 4.0 * q.a as f64 * ((q.c * y * y) as f64 - prec as f64);
        if disc < 0.0 {
            continue;
        }
        let s = disc.sqrt();
        let lo = ((-(q.b * y) as f64 - s) / (2.0 * q.a as f64)).floor() as i64 - 1;
        let hi = ((-(q.b * y) as f64 + s) / (2.0 * q.a as f64)).ceil() as i64 + 1;
        for x in lo..=hi {
            let v = q.eval(x, y);
            if v >= 0 && (v as usize) < prec {
                r[v as usize] += 1;
            }
        }
    }
    r
}

/// Element of Z[ζ_h] on the basis 1, ζ, …, ζ^{h−2}.
pub type Cyc = Vec<i64>;

fn cyc_reduce(mut v: Vec<i64>, h: usize) -> Cyc {
    // from Z[x]/(x^h − 1) modulo Φ_h
    if v.len() == h {
        let top = v.pop().unwrap();
        for x in v.iter_mut() {
            *x -= top;
        }
    }
    v
}

fn cyc_mul(a: &Cyc, b: &Cyc, h: usize) -> Cyc {
    let mut full = vec![0i64; h];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            full[(i + j) % h] += x * y;
        }
    }
    cyc_reduce(full, h)
}

/// The weight-one newform attached to an odd class character of Q(√D).
#[derive(Debug, Clone)]
pub struct DihedralForm {
    pub d: i64,
    pub h: usize,
    /// Exponent j with χ(class) = ζ_h^j, per reduced form.
    pub assignment: Vec<(QuadForm, usize)>,
    pub coeffs: Vec<Cyc>,
}

impl DihedralForm {
    pub fn level(&self) -> u64 {
        self.d.unsigned_abs()
    }
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients as integers when they lie in Z.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c[1..].iter().all(|&x| x == 0).then_some(c[0])).collect()
    }

    /// Reduction along ζ_h ↦ ζ̄ (an h-th root of unity in `ctx`, possibly 1
    /// when p = h).
    pub fn reduce(&self, ctx: &FieldCtx, zeta_bar: Fq) -> QExpansion {
        debug_assert_eq!(ctx.pow(zeta_bar, self.h as u64), 1);
        let pw: Vec<Fq> = (0..self.h).map(|j| ctx.pow(zeta_bar, j as u64)).collect();
        QExpansion::new(
            ctx,
            self.coeffs
                .iter()
                .map(|c| c.iter().zip(&pw).fold(0, |acc, (&x, &z)| ctx.add(acc, ctx.mul(ctx.from_int(x), z))))
                .collect(),
        )
    }

    /// The distinct reductions over `ctx`, one per admissible ζ̄. Empty
    /// when `ctx` lacks the needed roots of unity.
    pub fn reductions(&self, ctx: &FieldCtx) -> Vec<QExpansion> {
        let h = self.h as u64;
        let zetas: Vec<Fq> = if ctx.p() as u64 == h {
            vec![1]
        } else {
            match ctx.root_of_unity(h) {
                Some(z) => (1..h).map(|j| ctx.pow(z, j)).collect(),
                None => return vec![],
            }
        };
        let mut out: Vec<QExpansion> = Vec::new();
        for z in zetas {
            let g = self.reduce(ctx, z);
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }

    /// Checks a_mn = a_m a_n for coprime m, n and the prime-power recursion
    /// a_{ℓ^{e+1}} = a_ℓ a_{ℓ^e} − χ_D(ℓ) a_{ℓ^{e−1}} below the precision.
    pub fn is_multiplicative(&self) -> bool {
        let n = self.prec();
        let h = self.h;
        let one = cyc_reduce(
            {
                let mut v = vec![0; h];
                v[0] = 1;
                v
            },
            h,
        );
        if n > 1 && self.coeffs[1] != one {
            return false;
        }
        for m in 2..n {
            for k in m..n {
                if m * k >= n {
                    break;
                }
                if arith::gcd(m as u64, k as u64) == 1
                    && self.coeffs[m * k] != cyc_mul(&self.coeffs[m], &self.coeffs[k], h)
                {
                    return false;
                }
            }
        }
        for l in arith::primes_up_to(n as u64) {
            let l = l as usize;
            let chi = arith::kronecker(self.d, l as u64) as i64;
            let (mut prev, mut cur, mut pw) = (one.clone(), self.coeffs[l].clone(), l);
            while pw * l < n {
                let al = cyc_mul(&self.coeffs[l], &cur, h);
                let next: Cyc = al.iter().zip(&prev).map(|(a, b)| a - chi * b).collect();
                if self.coeffs[pw * l] != next {
                    return false;
                }
                prev = cur;
                cur = next;
                pw *= l;
            }
        }
        true
    }
}

/// Newforms (1/2)Σ_A χ(A)Θ_A for the odd class characters of Q(√D) with
/// h(D) an odd prime, one per Galois orbit of characters, each checked for
/// multiplicativity to `prec`.
pub fn weight_one_newforms(d: i64, prec: usize) -> Result<Vec<DihedralForm>, DihedralError> {
    let forms = reduced_forms(d)?;
    let h = forms.len();
    if h < 3 || !arith::is_prime(h as u64) || h > 7 {
        return Err(DihedralError::UnsupportedClassNumber { d, h });
    }
    // Pair each non-principal class with its inverse.
    let mut pairs: Vec<(QuadForm, QuadForm)> = Vec::new();
    for f in &forms[1..] {
        let inv = f.inverse();
        if !pairs.iter().any(|&(a, b)| a == *f || b == *f) {
            pairs.push((*f, inv));
        }
    }
    let thetas: Vec<Vec<i64>> = forms.iter().map(|f| theta_series(f, prec)).collect();
    let idx = |f: &QuadForm| forms.iter().position(|g| g == f).unwrap();
    let mut out = Vec::new();
    for perm in permutations((1..=pairs.len()).collect()) {
        let mut assignment = vec![(forms[0], 0usize)];
        for (&(a, b), &j) in pairs.iter().zip(&perm) {
            assignment.push((a, j));
            if b != a {
                assignment.push((b, h - j));
            }
        }
        let mut coeffs = Vec::with_capacity(prec);
        for n in 0..prec {
            let mut v = vec![0i64; h];
            if n > 0 {
                for &(f, j) in &assignment {
                    v[j] += thetas[idx(&f)][n];
                }
                // every r_Q(n) with n ≥ 1 is even
                for x in v.iter_mut() {
                    debug_assert!(*x % 2 == 0);
                    *x /= 2;
                }
            }
            coeffs.push(cyc_reduce(v, h));
        }
        let form = DihedralForm { d, h, assignment, coeffs };
        if form.is_multiplicative() {
            out.push(form);
            // remaining survivors are Galois conjugates of this one
            break;
        }
    }
    if out.is_empty() {
        return Err(DihedralError::NoMultiplicativeAssignment(d));
    }
    Ok(out)
}

/// The single newform for D, taking the first surviving assignment.
pub fn weight_one_newform(d: i64, prec: usize) -> Result<DihedralForm, DihedralError> {
    Ok(weight_one_newforms(d, prec)?.remove(0))
}

fn permutations(v: Vec<usize>) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.clone();
        let x = rest.remove(i);
        for mut p in permutations(rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Discriminant of an integer polynomial (coefficients lowest first).
pub fn poly_discriminant(f: &[i64]) -> BigInt {
    let n = f.len() - 1;
    let df: Vec<i64> = (1..=n).map(|i| i as i64 * f[i]).collect();
    let res = resultant(f, &df);
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    res * sign / BigInt::from(f[n])
}

/// Resultant via fraction-free elimination on the Sylvester matrix.
pub fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, &c) in f.iter().rev().enumerate() {
            a[i][i + j] = BigInt::from(c);
        }
    }
    for i in 0..m {
        for (j, &c) in g.iter().rev().enumerate() {
            a[n + i][i + j] = BigInt::from(c);
        }
    }
    bareiss_det(a)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, Deserialize)]
struct DataFile {
    version: u32,
    discriminants: Vec<DataEntry>,
}

#[derive(Debug, Clone, Deserialize)]
struct DataEntry {
    #[serde(rename = "D")]
    d: i64,
    class_number: usize,
    forms: Vec<[i64; 3]>,
    polynomial: Vec<i64>,
}

const DATA: &str = include_str!("../data/dihedral.json");
pub const DATA_VERSION: u32 = 1;

fn data() -> DataFile {
    let d: DataFile = serde_json::from_str(DATA).expect("shipped dihedral data parses");
    assert_eq!(d.version, DATA_VERSION);
    d
}

/// Shipped reduced forms for a discriminant, if tabulated.
pub fn shipped_forms(d: i64) -> Option<(usize, Vec<QuadForm>)> {
    data()
        .discriminants
        .into_iter()
        .find(|e| e.d == d)
        .map(|e| (e.class_number, e.forms.iter().map(|f| QuadForm::new(f[0], f[1], f[2])).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SplittingPoly {
    pub d: i64,
    /// Integer coefficients, lowest degree first, monic.
    pub coeffs: Vec<i64>,
    pub validated: bool,
}

/// Checks that a monic degree-h polynomial has discriminant D^{(h−1)/2}
/// times a nonzero square, as for a generator of the degree-h subfield of
/// the Hilbert class field.
pub fn validate_splitting_poly(d: i64, coeffs: &[i64]) -> Result<(), DihedralError> {
    let h = reduced_forms(d)?.len();
    let fail = |why: &str| Err(DihedralError::UnknownDiscriminant(format!("D = {d}: {why}")));
    if coeffs.len() != h + 1 || *coeffs.last().unwrap() != 1 {
        return fail("degree must equal the class number and the polynomial must be monic");
    }
    let disc = poly_discriminant(coeffs);
    let base = BigInt::from(d).pow(((h - 1) / 2) as u32);
    if disc.is_zero() || (&disc % &base) != BigInt::zero() {
        return fail(&format!("discriminant {disc} is not a multiple of D^{}", (h - 1) / 2));
    }
    let quo = disc / base;
    if quo.is_negative() || quo.sqrt().pow(2) != quo {
        return fail("discriminant ratio is not a square");
    }
    Ok(())
}

pub fn splitting_poly(d: i64) -> Result<SplittingPoly, DihedralError> {
    let entry = data()
        .discriminants
        .into_iter()
        .find(|e| e.d == d)
        .ok_or_else(|| DihedralError::UnknownDiscriminant(format!("no shipped polynomial for D = {d}")))?;
    validate_splitting_poly(d, &entry.polynomial)?;
    Ok(SplittingPoly { d, coeffs: entry.polynomial, validated: true })
}

/// A user-supplied polynomial, accepted without validation.
pub fn splitting_poly_override(d: i64, coeffs: Vec<i64>) -> SplittingPoly {
    SplittingPoly { d, coeffs, validated: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn class_numbers() {
        assert_eq!(
            reduced_forms(-23).unwrap(),
            vec![QuadForm::new(1, 1, 6), QuadForm::new(2, 1, 3), QuadForm::new(2, -1, 3)]
        );
        assert_eq!(reduced_forms(-47).unwrap().len(), 5);
        assert_eq!(reduced_forms(-4).unwrap(), vec![QuadForm::new(1, 0, 1)]);
        assert_eq!(reduced_forms(-12), Err(DihedralError::NotFundamental(-12)));
        for d in [-23, -47] {
            let (h, forms) = shipped_forms(d).unwrap();
            let mut computed = reduced_forms(d).unwrap();
            let mut shipped = forms.clone();
            computed.sort();
            shipped.sort();
            assert_eq!((h, shipped), (computed.len(), computed));
        }
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_series(&QuadForm::new(1, 0, 1), 6), vec![1, 4, 4, 0, 4, 8]);
        assert_eq!(theta_series(&QuadForm::new(1, 1, 6), 2)[1], 2);
        assert_eq!(theta_series(&QuadForm::new(2, 1, 3), 3)[1..], [0, 2]);
    }

    #[test]
    fn level_23_newform() {
        let f = weight_one_newform(-23, 30).unwrap();
        let z = f.integer_coeffs().unwrap();
        assert_eq!(&z[..9], &[0, 1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(z[23], 1);
        assert_eq!(z[6], z[2] * z[3]);
    }

    #[test]
    fn level_47_newform_over_golden_ring() {
        let f = weight_one_newform(-47, 200).unwrap();
        assert!(f.is_multiplicative());
        assert!(f.integer_coeffs().is_none());
        // a_2 is a root of x² + x − 1 = 0 (ζ + ζ⁻¹ up to conjugation)
        let a2 = &f.coeffs[2];
        let sq = cyc_mul(a2, a2, 5);
        let s: Vec<i64> = sq.iter().zip(a2).map(|(x, y)| x + y).collect();
        assert_eq!(s, vec![1, 0, 0, 0]);
        // mod 5 the unique prime above 5 sends ζ to 1
        let ctx = make_field(5, 1).unwrap();
        assert_eq!(f.reductions(&ctx).len(), 1);
    }

    #[test]
    fn inert_primes_vanish() {
        for d in [-23i64, -47] {
            let f = weight_one_newform(d, 400).unwrap();
            for l in arith::primes_up_to(399) {
                let inert = arith::kronecker(d, l) == -1;
                assert_eq!(f.coeffs[l as usize].iter().all(|&x| x == 0), inert, "D={d} ℓ={l}");
            }
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(poly_discriminant(&[-1, -1, 0, 1]), BigInt::from(-23));
        assert_eq!(poly_discriminant(&[1, -2, 1, 1, -1, 1]), BigInt::from(47 * 47));
        assert_eq!(splitting_poly(-23).unwrap().coeffs, vec![-1, -1, 0, 1]);
        assert!(splitting_poly(-47).unwrap().validated);
        assert!(validate_splitting_poly(-47, &[1, 0, -2, -1, 0, 1]).is_err());
        assert!(matches!(splitting_poly(-31), Err(DihedralError::UnknownDiscriminant(_))));
        assert!(!splitting_poly_override(-31, vec![1, 1, 0, 1]).validated);
    }
}
