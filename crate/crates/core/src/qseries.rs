//! Truncated q-expansions and the weight-shifting maps: Hasse
//! multiplication, V (q ↦ q^p) and θ (a_n ↦ n·a_n).
//!
//! Precision is explicit: a series of precision B knows a_0..a_{B−1} and
//! nothing else. Every operation returns the precision it can justify.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith;
use crate::ff::{FieldCtx, Fq};
use crate::linalg::{Echelon, Matrix};
use crate::ntt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QsError {
    #[error("ContextMismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("InsufficientPrecision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
}

/// Σ_{n < prec} a_n qⁿ over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct QExpansion {
    ctx: FieldCtx,
    coeffs: Vec<Fq>,
}

impl std::fmt::Debug for QExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .take(12)
            .map(|(n, &c)| format!("{}q^{n}", self.ctx.fmt_elem(c)))
            .collect();
        write!(f, "{} + O(q^{}) over {}", shown.join(" + "), self.prec(), self.ctx.label())
    }
}

impl QExpansion {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<Fq>) -> Self {
        QExpansion { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &FieldCtx, prec: usize) -> Self {
        Self::new(ctx, vec![0; prec])
    }

    pub fn one(ctx: &FieldCtx, prec: usize) -> Self {
        let mut c = vec![0; prec];
        if prec > 0 {
            c[0] = 1;
        }
        Self::new(ctx, c)
    }

    pub fn from_ints(ctx: &FieldCtx, c: &[i64]) -> Self {
        Self::new(ctx, c.iter().map(|&x| ctx.from_int(x)).collect())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }
    pub fn into_coeffs(self) -> Vec<Fq> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<Fq, QsError> {
        self.coeffs.get(n).copied().ok_or(QsError::InsufficientPrecision { needed: n + 1, available: self.prec() })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn truncate(&self, prec: usize) -> Result<Self, QsError> {
        if prec > self.prec() {
            return Err(QsError::InsufficientPrecision { needed: prec, available: self.prec() });
        }
        Ok(Self::new(&self.ctx, self.coeffs[..prec].to_vec()))
    }

    fn check_ctx(&self, o: &QExpansion) -> Result<(), QsError> {
        if self.ctx != o.ctx {
            return Err(QsError::ContextMismatch(self.ctx.label(), o.ctx.label()));
        }
        Ok(())
    }

    pub fn add(&self, o: &QExpansion) -> Result<Self, QsError> {
        self.check_ctx(o)?;
        let f = &self.ctx;
        Ok(Self::new(f, self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f.add(a, b)).collect()))
    }

    pub fn sub(&self, o: &QExpansion) -> Result<Self, QsError> {
        self.check_ctx(o)?;
        let f = &self.ctx;
        Ok(Self::new(f, self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f.sub(a, b)).collect()))
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.ctx;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Cauchy product at precision min(prec_f, prec_g).
    pub fn mul(&self, o: &QExpansion) -> Result<Self, QsError> {
        self.check_ctx(o)?;
        let n = self.prec().min(o.prec());
        Ok(Self::new(&self.ctx, mul_coeffs(&self.ctx, &self.coeffs, &o.coeffs, n)))
    }

    /// θ: a_n ↦ n·a_n.
    pub fn theta(&self) -> Self {
        let f = &self.ctx;
        let p = f.p() as usize;
        Self::new(f, self.coeffs.iter().enumerate().map(|(n, &a)| f.mul(a, (n % p) as Fq)).collect())
    }

    /// V: q ↦ q^p, output precision `prec_out`; needs ⌈prec_out/p⌉ input
    /// coefficients.
    pub fn v_op(&self, p: usize, prec_out: usize) -> Result<Self, QsError> {
        self.scale_q(p, prec_out)
    }

    /// q ↦ q^t at output precision `prec_out`.
    pub fn scale_q(&self, t: usize, prec_out: usize) -> Result<Self, QsError> {
        assert!(t >= 1);
        let needed = prec_out.div_ceil(t);
        if needed > self.prec() {
            return Err(QsError::InsufficientPrecision { needed, available: self.prec() });
        }
        let mut c = vec![0; prec_out];
        for (n, &a) in self.coeffs.iter().take(needed).enumerate() {
            c[n * t] = a;
        }
        Ok(Self::new(&self.ctx, c))
    }

    /// Inverse of V on series supported on multiples of p: b_n = a_{np},
    /// at precision ⌈prec/p⌉.
    pub fn un_v(&self, p: usize) -> Self {
        let n = self.prec().div_ceil(p);
        Self::new(&self.ctx, (0..n).map(|i| self.coeffs[i * p]).collect())
    }

    /// True when every coefficient with p ∤ n vanishes.
    pub fn in_q_p(&self) -> bool {
        let p = self.ctx.p() as usize;
        self.coeffs.iter().enumerate().all(|(n, &a)| n % p == 0 || a == 0)
    }
}

/// Truncated product of raw coefficient arrays. Extension-field products
/// split each coefficient into its r base-p digits and convolve digitwise.
pub fn mul_coeffs(f: &FieldCtx, a: &[Fq], b: &[Fq], n: usize) -> Vec<Fq> {
    let p = f.p();
    if f.is_prime_field() {
        return ntt::mul_trunc(a, b, n, p);
    }
    let r = f.r() as usize;
    let digits = |v: &[Fq]| -> Vec<Vec<u32>> {
        let mut pw = 1u32;
        (0..r)
            .map(|_| {
                let d = v.iter().map(|&x| (x / pw) % p).collect();
                pw = pw.wrapping_mul(p);
                d
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let x = p; // the generator x encodes as digit vector (0, 1, 0, …)
    let mut out = vec![0; n];
    for k in 0..2 * r - 1 {
        let mut ck = vec![0u32; n];
        for i in k.saturating_sub(r - 1)..=k.min(r - 1) {
            let prod = ntt::mul_trunc(&da[i], &db[k - i], n, p);
            for (c, v) in ck.iter_mut().zip(prod) {
                *c += v;
                if *c >= p {
                    *c -= p;
                }
            }
        }
        let xk = f.pow(x, k as u64);
        for (o, c) in out.iter_mut().zip(ck) {
            if c != 0 {
                *o = f.add(*o, f.mul(c, xk));
            }
        }
    }
    out
}

/// Hasse multiplication: the Hasse invariant has q-expansion 1, so only
/// the weight changes.
pub fn hasse_shift(f: &QExpansion, from_weight: u32) -> (QExpansion, u32) {
    (f.clone(), from_weight + f.ctx().p() - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SturmBound {
    pub weight: u32,
    pub level: u64,
    pub index: u64,
    pub bound: usize,
}

/// ⌈k·μ/12⌉ + 1 with μ the Γ₀(N) index.
pub fn sturm_bound(k: u32, n: u64) -> SturmBound {
    let mu = arith::gamma0_index(n);
    let bound = ((k as u64 * mu).div_ceil(12) + 1) as usize;
    SturmBound { weight: k, level: n, index: mu, bound }
}

/// Echelonized span of series sharing a context and precision.
pub fn row_space(vs: &[QExpansion]) -> Result<Echelon, QsError> {
    let Some(first) = vs.first() else {
        return Err(QsError::InsufficientPrecision { needed: 1, available: 0 });
    };
    let prec = vs.iter().map(|v| v.prec()).min().unwrap();
    let mut m = Matrix::zeros(first.ctx(), 0, prec);
    for v in vs {
        first.check_ctx(v)?;
        m.push_row(&v.coeffs[..prec]);
    }
    Ok(m.echelon())
}

/// Integer q-expansion, used for characteristic-zero inputs (theta series,
/// eta products) before reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSeries {
    pub coeffs: Vec<BigInt>,
}

impl ZSeries {
    pub fn from_i64(c: &[i64]) -> Self {
        ZSeries { coeffs: c.iter().map(|&x| BigInt::from(x)).collect() }
    }
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }
    pub fn mul(&self, o: &ZSeries) -> ZSeries {
        let n = self.prec().min(o.prec());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        ZSeries { coeffs: out }
    }
    pub fn sub(&self, o: &ZSeries) -> ZSeries {
        ZSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
    pub fn reduce(&self, f: &FieldCtx) -> QExpansion {
        let p = BigInt::from(f.p());
        QExpansion::new(
            f,
            self.coeffs
                .iter()
                .map(|a| {
                    let r = a % &p;
                    let r = if r.is_negative() { r + &p } else { r };
                    r.to_u32().unwrap()
                })
                .collect(),
        )
    }
    pub fn to_i64(&self) -> Vec<i64> {
        self.coeffs.iter().map(|a| a.to_i64().expect("coefficient fits i64")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn basic_products() {
        let f = make_field(5, 1).unwrap();
        let a = QExpansion::from_ints(&f, &[1, 1, 0, 0]);
        let b = QExpansion::from_ints(&f, &[1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), QExpansion::from_ints(&f, &[1, 0, -1, 0]));
        assert_eq!(a.mul(&QExpansion::one(&f, 4)).unwrap(), a);
        let g = make_field(7, 1).unwrap();
        assert!(matches!(a.mul(&QExpansion::one(&g, 4)), Err(QsError::ContextMismatch(..))));
    }

    #[test]
    fn extension_products_match_schoolbook() {
        use rand::{Rng, SeedableRng};
        let f = make_field(5, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a: Vec<Fq> = (0..120).map(|_| rng.gen_range(0..f.order())).collect();
        let b: Vec<Fq> = (0..90).map(|_| rng.gen_range(0..f.order())).collect();
        let mut slow = vec![0; 150];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < 150 {
                    slow[i + j] = f.add(slow[i + j], f.mul(x, y));
                }
            }
        }
        assert_eq!(mul_coeffs(&f, &a, &b, 150), slow);
    }

    #[test]
    fn theta_and_v_examples() {
        let f = make_field(5, 1).unwrap();
        assert!(QExpansion::one(&f, 10).theta().is_zero());
        let g = QExpansion::from_ints(&f, &[0, 1, 0, 2]);
        assert_eq!(g.theta(), QExpansion::from_ints(&f, &[0, 1, 0, 1]));
        let q = QExpansion::from_ints(&f, &[0, 1]);
        assert_eq!(q.v_op(5, 6).unwrap().coeffs(), &[0, 0, 0, 0, 0, 1]);
        let h = QExpansion::from_ints(&f, &[1, 1, 1]);
        let vh = h.v_op(5, 11).unwrap();
        assert_eq!(vh, QExpansion::from_ints(&f, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]));
        assert_eq!(vh.coeff(1), Ok(0));
        assert!(vh.theta().is_zero());
        assert!(h.v_op(5, 15).is_ok());
        assert!(matches!(h.v_op(5, 16), Err(QsError::InsufficientPrecision { .. })));
        assert_eq!(vh.un_v(5), h);
    }

    #[test]
    fn hasse_bookkeeping() {
        let f = make_field(5, 1).unwrap();
        let g = QExpansion::from_ints(&f, &[0, 1, 2]);
        let (h, k) = hasse_shift(&g, 1);
        assert_eq!((h.clone(), k), (g, 5));
        assert_eq!(hasse_shift(&h, k).1, 9);
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_bound(5, 23).bound, 11);
        assert_eq!(sturm_bound(5, 2323).index, 2448);
        assert_eq!(sturm_bound(5, 2323).bound, 1021);
        assert_eq!(sturm_bound(1, 1).bound, 2);
    }

    #[test]
    fn row_space_examples() {
        let f = make_field(5, 1).unwrap();
        let a = QExpansion::from_ints(&f, &[1, 1]);
        let b = QExpansion::from_ints(&f, &[0, 1]);
        let e = row_space(&[a.clone(), b]).unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.basis.row(0), &[1, 0]);
        assert_eq!(row_space(&[a.clone(), a]).unwrap().rank(), 1);
    }
}
