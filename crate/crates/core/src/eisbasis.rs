//! Bases of M_k(Γ_H(N), χ) mod p from Eisenstein series, E₂-differences
//! and theta series of binary quadratic forms.
//!
//! A basis is found by multiplying base series into weight k with the
//! right nebentypus and keeping products that raise the rank at the
//! Sturm bound, until the rank reaches the Cohen–Oesterlé dimension. The
//! space remembers the products it used (its recipes) and a transform
//! taking them to echelon form, so it can be re-evaluated to any
//! precision with the same pivots.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::characters::{kronecker_char, representable_chars, CharError, DirichletChar, UnitGroup};
use crate::cyclo::{padic_eval, Cyclo, PadicValue};
use crate::dihedral::{is_fundamental, reduced_forms, theta_series};
use crate::ff::{FieldCtx, Fq};
use crate::linalg::{axpy, Echelon, Matrix};
use crate::qseries::{mul_coeffs, sturm_bound, QExpansion, SturmBound};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EisError {
    #[error("WeightOneUnsupported: weight-one dimensions are not given by a formula")]
    WeightOneUnsupported,
    #[error("ParityMismatch: ψ(−1)φ(−1) ≠ (−1)^{0}")]
    ParityMismatch(u32),
    #[error("LevelMismatch: t·cond ψ·cond φ = {product} does not divide N = {level}")]
    LevelMismatch { product: u64, level: u64 },
    #[error("NotModular: E_2 is only quasi-modular; use E_2(q) − t·E_2(q^t)")]
    NotModular,
    #[error("PDividesLevel: p = {p} divides N = {level}")]
    PDividesLevel { p: u32, level: u64 },
    #[error("SpanDeficient: products reach rank {achieved} of {expected}")]
    SpanDeficient { achieved: usize, expected: usize },
    #[error("RankExceedsFormula: rank {rank} exceeds the dimension formula {formula}")]
    RankExceedsFormula { rank: usize, formula: usize },
    #[error("NonRationalDimension: character sum is not rational")]
    NonRationalDimension,
    #[error("{0}")]
    Char(#[from] CharError),
}

/// B_{k,φ} = f^{k−1} Σ_{a=1}^{f} φ̃(a) B_k(a/f), f the conductor of φ and φ̃
/// the primitive character inducing it, valued in Q(ζ_ord φ).
pub fn gen_bernoulli(k: u32, phi: &DirichletChar) -> Cyclo {
    let f = phi.conductor();
    let m = phi.order();
    let bk = arith::bernoulli_poly(k as usize);
    let mut acc = Cyclo::zero(m);
    for a in 1..=f {
        let Some(j) = phi.primitive_log(a as i64) else { continue };
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        let b = arith::eval_rational_poly(&bk, &x);
        acc = acc.add(&Cyclo::zeta_pow(m, j).scale(&b));
    }
    acc.scale(&BigRational::from_integer(BigInt::from(f).pow(k - 1)))
}

/// Reduction of an element of Q(ζ_m) along the working field's ζ̄_m.
pub fn reduce_cyclo(x: &Cyclo, ctx: &FieldCtx) -> PadicValue {
    let zeta = ctx.root_of_unity(x.order()).expect("character values lie in the field");
    padic_eval(x, ctx, zeta)
}

#[derive(Debug, Clone)]
pub struct EisensteinSeries {
    pub weight: u32,
    pub psi: String,
    pub phi: String,
    pub t: u64,
    /// Characteristic-zero constant term.
    pub constant: Cyclo,
    /// Set when the constant term has negative valuation at p; the series
    /// is then scaled by its inverse and reduces to a constant.
    pub rescaled: bool,
    pub series: QExpansion,
}

/// Σ_{d|n} ψ(n/d) φ(d) d^{k−1} for 1 ≤ n < prec with primitive ψ, φ.
fn divisor_sums(k: u32, psi: &DirichletChar, phi: &DirichletChar, prec: usize) -> Vec<Fq> {
    let f = psi.ctx();
    let tp = psi.primitive_table();
    let tf = phi.primitive_table();
    let val = |tab: &[Fq], n: usize| tab[n % tab.len()];
    let p = f.p() as u64;
    if f.is_prime_field() {
        let mut acc = vec![0u64; prec];
        for d in 1..prec {
            let w = val(&tf, d) as u64 * arith::pow_mod(d as u64 % p, (k - 1) as u64, p) % p;
            if w == 0 {
                continue;
            }
            for (m, n) in (d..prec).step_by(d).enumerate() {
                acc[n] += w * val(&tp, m + 1) as u64;
            }
            if d % 1024 == 0 {
                for x in acc.iter_mut() {
                    *x %= p;
                }
            }
        }
        acc.into_iter().map(|x| (x % p) as Fq).collect()
    } else {
        let mut acc = vec![0; prec];
        for d in 1..prec {
            let w = f.mul(val(&tf, d), f.from_int(arith::pow_mod(d as u64 % p, (k - 1) as u64, p) as i64));
            if w == 0 {
                continue;
            }
            for (m, n) in (d..prec).step_by(d).enumerate() {
                acc[n] = f.add(acc[n], f.mul(w, val(&tp, m + 1)));
            }
        }
        acc
    }
}

/// E_k(ψ, φ)(q^t) reduced to the working field.
pub fn eisenstein_qexp(
    k: u32,
    psi: &DirichletChar,
    phi: &DirichletChar,
    t: u64,
    prec: usize,
) -> Result<EisensteinSeries, EisError> {
    let n = psi.modulus();
    if k == 0 {
        return Err(EisError::ParityMismatch(k));
    }
    if (psi.is_odd() != phi.is_odd()) != (k % 2 == 1) {
        return Err(EisError::ParityMismatch(k));
    }
    let product = t * psi.conductor() * phi.conductor();
    if !n.is_multiple_of(product) {
        return Err(EisError::LevelMismatch { product, level: n });
    }
    if k == 2 && psi.is_trivial() && phi.is_trivial() {
        return Err(EisError::NotModular);
    }
    let f = psi.ctx().clone();
    let constant = if psi.is_trivial() {
        let b = gen_bernoulli(k, phi);
        b.scale(&BigRational::new(BigInt::from(-1), BigInt::from(2 * k)))
    } else if k == 1 && phi.is_trivial() {
        gen_bernoulli(1, psi).scale(&BigRational::new(BigInt::from(-1), BigInt::from(2)))
    } else {
        Cyclo::zero(1)
    };
    let c0 = reduce_cyclo(&constant, &f);
    let inner = prec.div_ceil(t as usize);
    let mut a = divisor_sums(k, psi, phi, inner);
    let rescaled = matches!(c0, PadicValue::Value { valuation, .. } if valuation < 0);
    if rescaled {
        a.iter_mut().for_each(|x| *x = 0);
        if !a.is_empty() {
            a[0] = 1;
        }
    } else if !a.is_empty() {
        a[0] = c0.reduction().unwrap();
    }
    let series = QExpansion::new(&f, a).scale_q(t as usize, prec).expect("inner precision suffices");
    Ok(EisensteinSeries { weight: k, psi: psi.label(), phi: phi.label(), t, constant, rescaled, series })
}

/// E₂(q) − t·E₂(q^t), weight 2, trivial character, level t.
pub fn e2_difference(ctx: &FieldCtx, t: u64, prec: usize) -> QExpansion {
    let p = ctx.p() as u64;
    let mut sigma = vec![0u64; prec];
    for d in 1..prec {
        for n in (d..prec).step_by(d) {
            sigma[n] += d as u64 % p;
        }
    }
    let mut a: Vec<Fq> = sigma.iter().map(|&s| (s % p) as Fq).collect();
    for (m, n) in (0..prec).step_by(t as usize).enumerate() {
        if m > 0 {
            a[n] = ctx.sub(a[n], ctx.mul(ctx.from_int(t as i64), (sigma[m] % p) as Fq));
        }
    }
    // constant −(1 − t)/24
    let c = ctx.div(ctx.from_int(t as i64 - 1), ctx.from_int(24)).unwrap();
    if prec > 0 {
        a[0] = c;
    }
    QExpansion::new(ctx, a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dimensions {
    pub cusp: usize,
    pub eisenstein: usize,
    pub total: usize,
}

fn lambda(r: u32, s: u32, p: u64) -> u64 {
    if 2 * s <= r {
        if r.is_multiple_of(2) {
            let rp = r / 2;
            p.pow(rp) + p.pow(rp - 1)
        } else {
            2 * p.pow((r - 1) / 2)
        }
    } else {
        2 * p.pow(r - s)
    }
}

/// dim M_k(Γ₁(N), χ) and its cusp/Eisenstein split (Cohen–Oesterlé), k ≥ 2.
pub fn dimension_formula(n: u64, k: u32, chi: &DirichletChar) -> Result<Dimensions, EisError> {
    if k == 1 {
        return Err(EisError::WeightOneUnsupported);
    }
    let zero = Dimensions { cusp: 0, eisenstein: 0, total: 0 };
    if k == 0 || chi.is_odd() != (k % 2 == 1) {
        return Ok(zero);
    }
    let cond = chi.conductor();
    let mut prod_lambda = 1u64;
    for (q, r) in arith::factor(n) {
        let mut s = 0;
        let mut c = cond;
        while c.is_multiple_of(q) {
            c /= q;
            s += 1;
        }
        prod_lambda *= lambda(r, s, q);
    }
    let m = chi.order();
    let char_sum = |poly: &dyn Fn(u64) -> u64| -> Result<BigRational, EisError> {
        let mut acc = Cyclo::zero(m);
        for x in 0..n {
            if poly(x).is_multiple_of(n) {
                acc = acc.add(&chi.lift_value(x as i64));
            }
        }
        acc.as_rational().ok_or(EisError::NonRationalDimension)
    };
    let s4 = char_sum(&|x| x * x + 1)?;
    let s3 = char_sum(&|x| x * x + x + 1)?;
    let rat = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let g4 = match k % 4 {
        2 => rat(-1, 4),
        0 => rat(1, 4),
        _ => BigRational::zero(),
    };
    let g3 = match k % 3 {
        2 => rat(-1, 3),
        0 => rat(1, 3),
        _ => BigRational::zero(),
    };
    let mu = arith::gamma0_index(n) as i64;
    let val = rat((k as i64 - 1) * mu, 12) - rat(prod_lambda as i64, 2) + g4 * s4 + g3 * s3;
    assert!(val.is_integer(), "Cohen–Oesterlé value must be integral");
    let mut cusp = val.to_integer();
    let trivial = chi.is_trivial();
    if k == 2 && trivial {
        cusp += BigInt::one();
    }
    let eis = if k == 2 && trivial { prod_lambda - 1 } else { prod_lambda };
    let cusp = cusp.to_i64().unwrap();
    assert!(cusp >= 0);
    Ok(Dimensions { cusp: cusp as usize, eisenstein: eis as usize, total: cusp as usize + eis as usize })
}

/// Identifies one base series independently of pool ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseKey {
    Eis { k: u32, psi: String, phi: String, t: u64 },
    E2 { t: u64 },
    Theta { d: i64, form: (i64, i64, i64), t: u64 },
}

impl std::fmt::Display for BaseKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaseKey::Eis { k, psi, phi, t } => write!(f, "E{k}[{psi};{phi}](q^{t})"),
            BaseKey::E2 { t } => write!(f, "E2'(q^{t})"),
            BaseKey::Theta { d, form, t } => write!(f, "Θ{d}{form:?}(q^{t})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaseSeries {
    pub key: BaseKey,
    pub weight: u32,
    /// Nebentypus as an exponent vector on the unit group mod N.
    pub chi: Vec<u64>,
}

/// Base series of weight ≤ max_weight at level N with representable
/// characters, plus a per-precision evaluation cache.
pub struct BasePool {
    level: u64,
    ctx: FieldCtx,
    group: Arc<UnitGroup>,
    chars: Vec<DirichletChar>,
    items: Vec<BaseSeries>,
    cache: Mutex<(usize, HashMap<usize, Arc<Vec<Fq>>>)>,
}

impl std::fmt::Debug for BasePool {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BasePool(N={}, {} items over {})", self.level, self.items.len(), self.ctx.label())
    }
}

/// Negative fundamental discriminants whose absolute value divides N.
pub fn fundamental_discriminants_dividing(n: u64) -> Vec<i64> {
    let mut out: Vec<i64> =
        arith::divisors(n).into_iter().map(|m| -(m as i64)).filter(|&d| is_fundamental(d)).collect();
    out.sort_by_key(|d| d.abs());
    out
}

impl BasePool {
    pub fn new(level: u64, max_weight: u32, ctx: &FieldCtx) -> Self {
        let group = UnitGroup::new(level);
        let chars = representable_chars(level, ctx);
        let mut items = Vec::new();
        let divs = |m: u64| arith::divisors(m);
        for k in 1..=max_weight {
            for (i, psi) in chars.iter().enumerate() {
                for (j, phi) in chars.iter().enumerate() {
                    if k == 1 && j < i {
                        continue;
                    }
                    if (psi.is_odd() != phi.is_odd()) != (k % 2 == 1) {
                        continue;
                    }
                    let c = psi.conductor() * phi.conductor();
                    if !level.is_multiple_of(c) {
                        continue;
                    }
                    let chi: Vec<u64> = psi.mul(phi).exponents().to_vec();
                    if k == 2 && psi.is_trivial() && phi.is_trivial() {
                        for t in divs(level).into_iter().filter(|&t| t > 1) {
                            items.push(BaseSeries { key: BaseKey::E2 { t }, weight: 2, chi: chi.clone() });
                        }
                        continue;
                    }
                    for t in divs(level / c) {
                        items.push(BaseSeries {
                            key: BaseKey::Eis { k, psi: psi.label(), phi: phi.label(), t },
                            weight: k,
                            chi: chi.clone(),
                        });
                    }
                }
            }
        }
        if max_weight >= 1 {
            for d in fundamental_discriminants_dividing(level) {
                let Some(kc) = kronecker_char(d, level, ctx) else { continue };
                let forms = reduced_forms(d).expect("fundamental");
                for t in divs(level / d.unsigned_abs()) {
                    for q in forms.iter().filter(|q| q.b >= 0) {
                        items.push(BaseSeries {
                            key: BaseKey::Theta { d, form: (q.a, q.b, q.c), t },
                            weight: 1,
                            chi: kc.exponents().to_vec(),
                        });
                    }
                }
            }
        }
        BasePool { level, ctx: ctx.clone(), group, chars, items, cache: Mutex::new((0, HashMap::new())) }
    }

    pub fn level(&self) -> u64 {
        self.level
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn items(&self) -> &[BaseSeries] {
        &self.items
    }
    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn index_of(&self, key: &BaseKey) -> Option<usize> {
        self.items.iter().position(|b| &b.key == key)
    }

    fn char_by_label(&self, label: &str) -> &DirichletChar {
        self.chars.iter().find(|c| c.label() == label).expect("pool character")
    }

    fn compute(&self, idx: usize, prec: usize) -> Vec<Fq> {
        let f = &self.ctx;
        match &self.items[idx].key {
            BaseKey::Eis { k, psi, phi, t } => {
                let (psi, phi) = (self.char_by_label(psi), self.char_by_label(phi));
                eisenstein_qexp(*k, psi, phi, *t, prec).expect("pool entries are admissible").series.into_coeffs()
            }
            BaseKey::E2 { t } => e2_difference(f, *t, prec).into_coeffs(),
            BaseKey::Theta { form, t, .. } => {
                let q = crate::dihedral::QuadForm::new(form.0, form.1, form.2);
                let inner = prec.div_ceil(*t as usize);
                let th: Vec<Fq> = theta_series(&q, inner).into_iter().map(|x| f.from_int(x)).collect();
                QExpansion::new(f, th).scale_q(*t as usize, prec).unwrap().into_coeffs()
            }
        }
    }

    /// Coefficients of base series `idx` below `prec`. Only the most
    /// recently requested precision is cached.
    pub fn eval(&self, idx: usize, prec: usize) -> Arc<Vec<Fq>> {
        {
            let guard = self.cache.lock().unwrap();
            if guard.0 == prec {
                if let Some(v) = guard.1.get(&idx) {
                    return v.clone();
                }
            }
        }
        let v = Arc::new(self.compute(idx, prec));
        let mut guard = self.cache.lock().unwrap();
        if guard.0 != prec {
            *guard = (prec, HashMap::new());
        }
        guard.1.insert(idx, v.clone());
        v
    }

    /// Product of the listed base series below `prec`.
    pub fn eval_monomial(&self, mono: &[usize], prec: usize) -> Vec<Fq> {
        let mut acc = self.eval(mono[0], prec).as_ref().clone();
        for &i in &mono[1..] {
            acc = mul_coeffs(&self.ctx, &acc, &self.eval(i, prec), prec);
        }
        acc
    }

    fn mul_chi(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(self.group.orders()).map(|((x, y), o)| (x + y) % o).collect()
    }

    /// All multisets of `nf` base series of total weight k and nebentypus
    /// χ, capped at `cap` entries.
    fn monomials(&self, k: u32, chi: &[u64], nf: usize, cap: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..self.items.len()).filter(|&i| self.items[i].weight <= k).collect();
        order.sort_by_key(|&i| (self.items[i].weight, i));
        let ident = vec![0u64; chi.len()];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            pool: &BasePool,
            order: &[usize],
            start: usize,
            wleft: u32,
            c: Vec<u64>,
            acc: &mut Vec<usize>,
            nleft: usize,
            chi: &[u64],
            out: &mut Vec<Vec<usize>>,
            cap: usize,
        ) {
            if out.len() >= cap {
                return;
            }
            if nleft == 0 {
                if wleft == 0 && c == chi {
                    out.push(acc.clone());
                }
                return;
            }
            // remaining factors each weigh at least one
            if (wleft as usize) < nleft {
                return;
            }
            for s in start..order.len() {
                let it = &pool.items[order[s]];
                if it.weight > wleft {
                    break;
                }
                if nleft == 1 && it.weight != wleft {
                    continue;
                }
                acc.push(order[s]);
                let c2 = pool.mul_chi(&c, &it.chi);
                rec(pool, order, s, wleft - it.weight, c2, acc, nleft - 1, chi, out, cap);
                acc.pop();
            }
        }
        rec(self, &order, 0, k, ident, &mut Vec::new(), nf, chi, &mut out, cap);
        out
    }
}

/// Semi-echelon accumulator for the incremental span search.
struct Accumulator {
    ctx: FieldCtx,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Accumulator {
    /// Reduces `v` and keeps it if independent.
    fn offer(&mut self, mut v: Vec<Fq>) -> bool {
        let f = self.ctx.clone();
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy(&f, &mut v, f.neg(c), r);
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(v[pc]).unwrap();
        crate::linalg::scale_in_place(&f, &mut v, inv);
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }
}

pub const SEARCH_SEED: u64 = 0x7e7a_d0b1;
const MONOMIAL_CAP: usize = 400_000;
/// Extra candidates tested after reaching the formula rank.
const EXCESS_PROBES: usize = 16;

/// M_k(Γ_H(N), χ) over a finite field, as q-expansions.
#[derive(Debug)]
pub struct ModFormSpace {
    pub level: u64,
    pub weight: u32,
    pub chi: DirichletChar,
    pub sturm: SturmBound,
    pub formula: Dimensions,
    pool: Arc<BasePool>,
    recipes: Vec<Vec<usize>>,
    /// T with T·G(P) = echelon basis, G the recipe evaluations.
    transform: Matrix,
    base_prec: usize,
    basis: Echelon,
}

impl ModFormSpace {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }
    pub fn ctx(&self) -> &FieldCtx {
        self.chi.ctx()
    }
    pub fn prec(&self) -> usize {
        self.base_prec
    }
    pub fn basis(&self) -> &Echelon {
        &self.basis
    }
    pub fn pool(&self) -> &Arc<BasePool> {
        &self.pool
    }
    pub fn pivots(&self) -> &[usize] {
        &self.basis.pivots
    }
    pub fn max_pivot(&self) -> usize {
        self.basis.pivots.last().copied().unwrap_or(0)
    }
    pub fn transform(&self) -> &Matrix {
        &self.transform
    }
    pub fn recipes(&self) -> &[Vec<usize>] {
        &self.recipes
    }
    pub fn recipe_keys(&self) -> Vec<Vec<BaseKey>> {
        self.recipes.iter().map(|m| m.iter().map(|&i| self.pool.items[i].key.clone()).collect()).collect()
    }

    /// Reassembles a space from stored recipes and transform, checking
    /// that they reproduce the stored echelon basis.
    pub fn from_parts(
        chi: &DirichletChar,
        weight: u32,
        pool: Arc<BasePool>,
        recipes: Vec<Vec<usize>>,
        transform: Matrix,
        basis: Echelon,
    ) -> Result<Self, EisError> {
        let level = chi.modulus();
        let formula = dimension_formula(level, weight, chi)?;
        let base_prec = basis.basis.cols();
        let space = ModFormSpace {
            level,
            weight,
            chi: chi.clone(),
            sturm: sturm_bound(weight, level),
            formula,
            pool,
            recipes,
            transform,
            base_prec,
            basis,
        };
        let again = space.basis_matrix_at(base_prec);
        if again != space.basis.basis {
            return Err(EisError::SpanDeficient { achieved: 0, expected: space.dim() });
        }
        Ok(space)
    }

    fn eval_recipes(&self, prec: usize) -> Matrix {
        let mut g = Matrix::zeros(self.ctx(), 0, prec);
        for m in &self.recipes {
            g.push_row(&self.pool.eval_monomial(m, prec));
        }
        g
    }

    fn basis_matrix_at(&self, prec: usize) -> Matrix {
        if self.dim() == 0 {
            return Matrix::zeros(self.ctx(), 0, prec);
        }
        self.transform.mul(&self.eval_recipes(prec))
    }

    /// The echelon basis extended (or truncated) to `prec` coefficients;
    /// pivots are those found at the Sturm bound.
    pub fn basis_at(&self, prec: usize) -> Echelon {
        if prec == self.base_prec {
            return self.basis.clone();
        }
        assert!(prec > self.max_pivot(), "precision below the pivot range");
        let basis =
            if prec < self.base_prec { self.basis.basis.truncate_cols(prec) } else { self.basis_matrix_at(prec) };
        Echelon { basis, pivots: self.basis.pivots.clone() }
    }

    /// Rows of `coords · basis` at precision `prec`, accumulated one
    /// recipe at a time so the full basis is never held at that precision.
    pub fn combine_at(&self, coords: &Matrix, prec: usize) -> Matrix {
        let f = self.ctx().clone();
        let w = coords.mul(&self.transform);
        let mut out = Matrix::zeros(&f, coords.rows(), prec);
        for (j, m) in self.recipes.iter().enumerate() {
            if (0..w.rows()).all(|i| w.get(i, j) == 0) {
                continue;
            }
            let g = self.pool.eval_monomial(m, prec);
            for i in 0..w.rows() {
                axpy(&f, out.row_mut(i), w.get(i, j), &g);
            }
        }
        out
    }

    /// Membership of a q-expansion (at least Sturm precision).
    pub fn contains(&self, g: &QExpansion) -> bool {
        let n = self.sturm.bound.min(g.prec()).max(self.max_pivot() + 1);
        if g.prec() < n {
            return false;
        }
        let b = self.basis_at(n);
        b.contains(&g.coeffs()[..n])
    }
}

/// Builds M_k(Γ_H(N), χ) over χ's field by products of base series.
pub fn weight_k_basis(n: u64, k: u32, chi: &DirichletChar, prec: Option<usize>) -> Result<ModFormSpace, EisError> {
    let ctx = chi.ctx().clone();
    if k == 1 {
        return Err(EisError::WeightOneUnsupported);
    }
    if n.is_multiple_of(ctx.p() as u64) {
        return Err(EisError::PDividesLevel { p: ctx.p(), level: n });
    }
    let formula = dimension_formula(n, k, chi)?;
    let sturm = sturm_bound(k, n);
    let p0 = prec.unwrap_or(sturm.bound).max(sturm.bound);
    let pool = Arc::new(BasePool::new(n, k, &ctx));
    let target = formula.total;
    let mut acc = Accumulator { ctx: ctx.clone(), rows: vec![], pivots: vec![] };
    let mut recipes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let chi_exps = chi.exponents().to_vec();
    let mut probes = 0;
    'outer: for nf in 1..=k as usize {
        if target == 0 {
            break;
        }
        let mut monos = pool.monomials(k, &chi_exps, nf, MONOMIAL_CAP);
        monos.shuffle(&mut rng);
        for m in monos {
            let v = pool.eval_monomial(&m, p0);
            if acc.rows.len() == target {
                if acc.offer(v) {
                    return Err(EisError::RankExceedsFormula { rank: target + 1, formula: target });
                }
                probes += 1;
                if probes >= EXCESS_PROBES {
                    break 'outer;
                }
                continue;
            }
            if acc.offer(v) {
                recipes.push(m);
            }
        }
    }
    if acc.rows.len() < target {
        return Err(EisError::SpanDeficient { achieved: acc.rows.len(), expected: target });
    }
    let mut g = Matrix::zeros(&ctx, 0, p0);
    for m in &recipes {
        g.push_row(&pool.eval_monomial(m, p0));
    }
    let (basis, transform) = g.echelon_with_transform();
    debug_assert_eq!(basis.rank(), target);
    Ok(ModFormSpace {
        level: n,
        weight: k,
        chi: chi.clone(),
        sturm,
        formula,
        pool,
        recipes,
        transform,
        base_prec: p0,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::DirichletChar;
    use crate::ff::make_field;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn chi23(f: &FieldCtx) -> DirichletChar {
        DirichletChar::parse(&UnitGroup::new(23), f, "23:11").unwrap()
    }

    #[test]
    fn bernoulli_examples() {
        let f = make_field(5, 1).unwrap();
        let one = DirichletChar::trivial(&UnitGroup::new(1), &f);
        assert_eq!(gen_bernoulli(2, &one).as_rational(), Some(rat(1, 6)));
        assert_eq!(gen_bernoulli(4, &one).as_rational(), Some(rat(-1, 30)));
        // B_{1,χ} = (1/23) Σ a χ(a), with Legendre symbols as the oracle
        let chi = chi23(&f);
        let s: i64 = (1..23).map(|a| a * arith::kronecker(-23, a as u64) as i64).sum();
        assert_eq!(gen_bernoulli(1, &chi).as_rational(), Some(rat(s, 23)));
        assert_eq!(s / 23, -3); // h(−23) = 3
    }

    #[test]
    fn hasse_realisations() {
        for (p, k) in [(5u64, 4u32), (7, 6)] {
            let f = make_field(p, 1).unwrap();
            let one = DirichletChar::trivial(&UnitGroup::new(1), &f);
            let e = eisenstein_qexp(k, &one, &one, 1, 200).unwrap();
            assert!(e.rescaled);
            assert_eq!(e.series, QExpansion::one(&f, 200));
        }
    }

    #[test]
    fn weight_one_eisenstein_level_23() {
        let f = make_field(5, 1).unwrap();
        let chi = chi23(&f);
        let triv = DirichletChar::trivial(&UnitGroup::new(23), &f);
        let e = eisenstein_qexp(1, &triv, &chi, 1, 30).unwrap();
        assert_eq!(e.series.coeffs()[1], 1);
        assert_eq!(e.series.coeffs()[2], 2);
        // constant −B_{1,χ}/2 = 3/2
        assert_eq!(e.constant.as_rational(), Some(rat(3, 2)));
        assert!(matches!(eisenstein_qexp(2, &triv, &chi, 1, 10), Err(EisError::ParityMismatch(2))));
        assert!(matches!(eisenstein_qexp(1, &triv, &chi, 2, 10), Err(EisError::LevelMismatch { .. })));
    }

    #[test]
    fn divisor_sums_match_direct() {
        let f = make_field(7, 1).unwrap();
        let chars = representable_chars(35, &f);
        for psi in &chars {
            for phi in &chars {
                let fast = divisor_sums(3, psi, phi, 80);
                for n in 1..80usize {
                    let mut s = 0;
                    for d in arith::divisors(n as u64) {
                        let term = f.mul(
                            f.mul(psi.primitive_value((n as u64 / d) as i64), phi.primitive_value(d as i64)),
                            f.from_int(arith::pow_mod(d, 2, 7) as i64),
                        );
                        s = f.add(s, term);
                    }
                    assert_eq!(fast[n], s);
                }
            }
        }
    }

    fn genus_x0(n: u64) -> i64 {
        // oracle: g = 1 + μ/12 − ν₂/4 − ν₃/3 − c/2
        let mu = arith::gamma0_index(n) as f64;
        let nu2 = (0..n).filter(|x| (x * x + 1) % n == 0).count() as f64;
        let nu3 = (0..n).filter(|x| (x * x + x + 1) % n == 0).count() as f64;
        let c: u64 = arith::divisors(n).iter().map(|&d| arith::euler_phi(arith::gcd(d, n / d))).sum();
        (1.0 + mu / 12.0 - nu2 / 4.0 - nu3 / 3.0 - c as f64 / 2.0).round() as i64
    }

    #[test]
    fn dimension_examples() {
        let f = make_field(5, 1).unwrap();
        let d = dimension_formula(23, 5, &chi23(&f)).unwrap();
        assert_eq!((d.cusp, d.total), (7, 9));
        let triv23 = DirichletChar::trivial(&UnitGroup::new(23), &f);
        assert_eq!(dimension_formula(23, 2, &triv23).unwrap().total, 3);
        assert_eq!(dimension_formula(23, 5, &triv23).unwrap().total, 0);
        let one = DirichletChar::trivial(&UnitGroup::new(1), &f);
        assert_eq!(dimension_formula(1, 12, &one).unwrap().total, 2);
        assert_eq!(dimension_formula(1, 4, &one).unwrap().total, 1);
        assert_eq!(dimension_formula(23, 1, &triv23), Err(EisError::WeightOneUnsupported));
        for n in [11u64, 23, 35, 36, 49, 64, 97, 100] {
            let t = DirichletChar::trivial(&UnitGroup::new(n), &f);
            assert_eq!(dimension_formula(n, 2, &t).unwrap().cusp as i64, genus_x0(n), "N={n}");
        }
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(dimension_formula(23, 7, &chi23(&f7)).unwrap().total, 13);
        let chi47 = DirichletChar::parse(&UnitGroup::new(47), &f, "47:23").unwrap();
        assert_eq!(dimension_formula(47, 5, &chi47).unwrap().total, 17);
    }

    #[test]
    fn dimensions_sum_to_gamma1() {
        // Γ₁(13): genus 2, 12 cusps, all regular, no elliptic points, so
        // dim S_k = (k−1)(g−1) + (k−2)c/2 for k ≥ 3 and g for k = 2.
        let f = make_field(5, 2).unwrap();
        let chars = crate::characters::enumerate_chars(13, &f).unwrap();
        assert_eq!(chars.len(), 12);
        for k in 2u32..=6 {
            let total: usize = chars.iter().map(|c| dimension_formula(13, k, c).unwrap().cusp).sum();
            let oracle = if k == 2 { 2 } else { (k as usize - 1) + (k as usize - 2) * 6 };
            assert_eq!(total, oracle, "k={k}");
        }
    }

    #[test]
    fn small_bases() {
        let f = make_field(5, 1).unwrap();
        let one = DirichletChar::trivial(&UnitGroup::new(1), &f);
        let m4 = weight_k_basis(1, 4, &one, None).unwrap();
        assert_eq!(m4.dim(), 1);
        assert!(m4.contains(&QExpansion::one(&f, 20)));
        let m12 = weight_k_basis(1, 12, &one, None).unwrap();
        assert_eq!(m12.dim(), 2);
        let s = weight_k_basis(23, 5, &chi23(&f), None).unwrap();
        assert_eq!(s.dim(), 9);
        let wide = s.basis_at(3 * s.sturm.bound + 1);
        assert_eq!(wide.pivots, s.pivots());
        assert_eq!(wide.basis.truncate_cols(s.prec()), s.basis().basis);
        let c = Matrix::identity(&f, 9);
        assert_eq!(s.combine_at(&c, 50), s.basis_at(50).basis);
    }

    #[test]
    fn products_close_up() {
        let f = make_field(7, 1).unwrap();
        let chi = chi23(&f);
        let triv = DirichletChar::trivial(&UnitGroup::new(23), &f);
        let m3 = weight_k_basis(23, 3, &chi, None).unwrap();
        let m6 = weight_k_basis(23, 6, &triv, None).unwrap();
        let b3 = m3.basis_at(m6.sturm.bound);
        for i in 0..m3.dim() {
            for j in i..m3.dim() {
                let a = QExpansion::new(&f, b3.basis.row(i).to_vec());
                let b = QExpansion::new(&f, b3.basis.row(j).to_vec());
                assert!(m6.contains(&a.mul(&b).unwrap()));
            }
        }
    }
}
