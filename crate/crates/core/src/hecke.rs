//! Hecke operators on q-expansions and on spaces of forms, localisation at
//! eigensystems, and the oldform plane at an auxiliary prime.
//!
//! Operator matrices follow the row convention of [`crate::linalg`]: if
//! the basis rows are b_i then op(b_i) = Σ_j M_ij b_j.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith;
use crate::characters::DirichletChar;
use crate::eisbasis::ModFormSpace;
use crate::ff::{poly_roots, splitting_degree, FieldCtx, Fq};
use crate::linalg::{restrict, Echelon, Matrix};
use crate::qseries::{QExpansion, QsError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("InsufficientPrecision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("NotInSpan: image of basis row {row} under {op} leaves the space")]
    NotInSpan { op: String, row: usize },
    #[error("AmbiguousSolve: {op} image known to {available} coefficients, pivots reach {max_pivot}")]
    AmbiguousSolve { op: String, available: usize, max_pivot: usize },
    #[error("FieldTooSmall: eigenvalues of {op} need r = {min_r}")]
    FieldTooSmall { op: String, min_r: u32 },
    #[error("NotAnEigenvalue: {value} is not an eigenvalue of {op}")]
    NotAnEigenvalue { op: String, value: String },
    #[error("NonOrdinary: a_p = 0")]
    NonOrdinary,
    #[error("LevelNotCoprime: ℓ = {ell} divides N = {level}")]
    LevelNotCoprime { ell: u64, level: u64 },
    #[error("NotLocal: {op} has several eigenvalues on the component")]
    NotLocal { op: String },
}

impl From<QsError> for HeckeError {
    fn from(e: QsError) -> Self {
        match e {
            QsError::InsufficientPrecision { needed, available } => {
                HeckeError::InsufficientPrecision { needed, available }
            }
            QsError::ContextMismatch(a, b) => HeckeError::NotInSpan { op: format!("context {a} vs {b}"), row: 0 },
        }
    }
}

/// Coefficients of T_n f (U_n on the part of n sharing primes with N):
/// a_m(T_n f) = Σ_{d | (m, n)} χ(d) d^{k−1} a_{mn/d²}. Output precision is
/// ⌈prec/n⌉.
pub fn apply_tn_coeffs(ctx: &FieldCtx, f: &[Fq], n: u64, k: u32, chi: &DirichletChar) -> Vec<Fq> {
    let n = n as usize;
    let out_prec = f.len().div_ceil(n);
    let p = ctx.p() as u64;
    let mut out: Vec<Fq> = (0..out_prec).map(|m| f[m * n]).collect();
    if n == 1 {
        return out;
    }
    for d in arith::divisors(n as u64).into_iter().skip(1) {
        let c = chi.value(d as i64);
        if c == 0 {
            continue;
        }
        let w = ctx.mul(c, ctx.from_int(arith::pow_mod(d % p, (k as u64).saturating_sub(1), p) as i64));
        if w == 0 {
            continue;
        }
        let d = d as usize;
        for m in (0..out_prec).step_by(d) {
            // m n / d² is an integer since d | m and d | n
            let idx = (m / d) * (n / d);
            out[m] = ctx.add(out[m], ctx.mul(w, f[idx]));
        }
    }
    out
}

pub fn apply_tn(f: &QExpansion, n: u64, k: u32, chi: &DirichletChar) -> QExpansion {
    QExpansion::new(f.ctx(), apply_tn_coeffs(f.ctx(), f.coeffs(), n, k, chi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Operator {
    /// T_n, which is U_n at primes dividing the level.
    T(u64),
    Diamond(u64),
    Identity,
    Zero,
}

impl std::fmt::Display for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Operator::T(n) => write!(f, "T_{n}"),
            Operator::Diamond(d) => write!(f, "<{d}>"),
            Operator::Identity => write!(f, "1"),
            Operator::Zero => write!(f, "0"),
        }
    }
}

/// Matrix of `op` on the row space `basis` of weight-k forms with
/// nebentypus χ. Each image is solved on the pivots and the residual is
/// checked on every coefficient the image determines.
pub fn operator_matrix(basis: &Echelon, op: Operator, k: u32, chi: &DirichletChar) -> Result<Matrix, HeckeError> {
    let f = basis.basis.ctx().clone();
    let d = basis.rank();
    match op {
        Operator::Identity => return Ok(Matrix::identity(&f, d)),
        Operator::Zero => return Ok(Matrix::zeros(&f, d, d)),
        Operator::Diamond(x) => return Ok(Matrix::scalar(&f, d, chi.value(x as i64))),
        Operator::T(_) => {}
    }
    let Operator::T(n) = op else { unreachable!() };
    let prec = basis.basis.cols();
    let out_prec = prec.div_ceil(n as usize);
    let max_pivot = basis.pivots.last().copied().unwrap_or(0);
    if d > 0 && out_prec <= max_pivot {
        return Err(HeckeError::AmbiguousSolve { op: op.to_string(), available: out_prec, max_pivot });
    }
    let mut m = Matrix::zeros(&f, d, d);
    for i in 0..d {
        let img = apply_tn_coeffs(&f, basis.basis.row(i), n, k, chi);
        let coords: Vec<Fq> = basis.pivots.iter().map(|&pc| img[pc]).collect();
        let mut rebuilt = vec![0; out_prec];
        for (j, &c) in coords.iter().enumerate() {
            crate::linalg::axpy(&f, &mut rebuilt, c, &basis.basis.row(j)[..out_prec]);
        }
        if rebuilt != img {
            return Err(HeckeError::NotInSpan { op: op.to_string(), row: i });
        }
        m.row_mut(i).copy_from_slice(&coords);
    }
    Ok(m)
}

/// Hecke eigenvalues labelling a maximal ideal: anaemic data at primes
/// ℓ ∤ pN and optional extended values (U_ℓ for ℓ | N, T_p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigensystem {
    pub ctx: FieldCtx,
    pub anemic: BTreeMap<u64, Fq>,
    pub extended: BTreeMap<u64, Fq>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct EigensystemJson {
    pub field: String,
    pub anemic: BTreeMap<String, String>,
    pub extended: BTreeMap<String, String>,
}

impl Eigensystem {
    pub fn new(ctx: &FieldCtx) -> Self {
        Eigensystem { ctx: ctx.clone(), anemic: BTreeMap::new(), extended: BTreeMap::new() }
    }
    pub fn core(&self) -> Eigensystem {
        Eigensystem { ctx: self.ctx.clone(), anemic: self.anemic.clone(), extended: BTreeMap::new() }
    }
    pub fn to_json(&self) -> EigensystemJson {
        let s = |m: &BTreeMap<u64, Fq>| m.iter().map(|(l, &v)| (l.to_string(), self.ctx.fmt_elem(v))).collect();
        EigensystemJson { field: self.ctx.label(), anemic: s(&self.anemic), extended: s(&self.extended) }
    }
}

/// Generalized eigenspace data for one maximal ideal.
#[derive(Debug, Clone)]
pub struct LocalComponent {
    pub level: u64,
    pub weight: u32,
    pub chi: DirichletChar,
    pub eigensystem: Eigensystem,
    /// Rows: the component inside the parent space, in its echelon
    /// coordinates.
    pub coords: Matrix,
    /// Component q-expansions in echelon form.
    pub basis: Echelon,
    /// Matrices on `basis` of T_ℓ for primes ℓ (U_ℓ when ℓ | N, T_p at p).
    pub ops: BTreeMap<u64, Matrix>,
}

impl LocalComponent {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }
    pub fn ctx(&self) -> &FieldCtx {
        self.chi.ctx()
    }
    pub fn prec(&self) -> usize {
        self.basis.basis.cols()
    }
    pub fn p(&self) -> u64 {
        self.ctx().p() as u64
    }
    /// Primes at which operators are stored, split by role.
    pub fn anemic_primes(&self) -> Vec<u64> {
        let p = self.p();
        self.ops.keys().copied().filter(|&l| l != p && !self.level.is_multiple_of(l)).collect()
    }
    pub fn level_primes(&self) -> Vec<u64> {
        self.ops.keys().copied().filter(|&l| self.level.is_multiple_of(l)).collect()
    }
    /// Generators of the algebra T: T_ℓ (ℓ ∤ pN) and U_ℓ (ℓ | N).
    pub fn t_generators(&self) -> Vec<Matrix> {
        let p = self.p();
        self.ops.iter().filter(|(&l, _)| l != p).map(|(_, m)| m.clone()).collect()
    }
    pub fn anemic_generators(&self) -> Vec<Matrix> {
        self.anemic_primes().iter().map(|l| self.ops[l].clone()).collect()
    }
    pub fn tp(&self) -> Option<&Matrix> {
        self.ops.get(&self.p())
    }

    /// Sub-component cut out by generalized kernels of (op_ℓ − a_ℓ).
    pub fn cut(&self, cuts: &[(u64, Fq)]) -> Result<LocalComponent, HeckeError> {
        let f = self.ctx().clone();
        let d = self.dim();
        let mut sub = Matrix::identity(&f, d);
        for &(l, a) in cuts {
            let op = self
                .ops
                .get(&l)
                .ok_or_else(|| HeckeError::NotAnEigenvalue { op: format!("T_{l}"), value: "unavailable".into() })?;
            let x = restrict(&sub, op).expect("stored operators preserve the component");
            let k = x.sub_scalar(a).generalized_kernel();
            if k.rows() == 0 {
                return Err(HeckeError::NotAnEigenvalue { op: format!("T_{l}"), value: f.fmt_elem(a) });
            }
            sub = k.mul(&sub);
        }
        let e = sub.mul(&self.basis.basis).echelon();
        let new_sub = crate::linalg::express_in(&self.basis.basis, &e.basis).unwrap();
        let mut ops = BTreeMap::new();
        for (&l, m) in &self.ops {
            ops.insert(l, restrict(&new_sub, m).expect("commuting operators preserve the cut"));
        }
        let mut eig = self.eigensystem.clone();
        for &(l, a) in cuts {
            if self.level.is_multiple_of(l) || l == self.p() {
                eig.extended.insert(l, a);
            } else {
                eig.anemic.insert(l, a);
            }
        }
        Ok(LocalComponent {
            level: self.level,
            weight: self.weight,
            chi: self.chi.clone(),
            eigensystem: eig,
            coords: new_sub.mul(&self.coords),
            basis: e,
            ops,
        })
    }

    /// The normalized eigenform (a_1 = 1) of a one-dimensional component,
    /// evaluated at `prec` coefficients of the parent space.
    pub fn eigenform_at(&self, space: &ModFormSpace, prec: usize) -> Option<QExpansion> {
        if self.dim() != 1 {
            return None;
        }
        let f = self.ctx();
        let row = space.combine_at(&self.coords, prec);
        let a1 = row.get(0, 1);
        let inv = f.inv(a1).ok()?;
        Some(QExpansion::new(f, row.row(0).to_vec()).scale(inv))
    }

    /// Distinct eigenvalues of a stored operator on the component.
    pub fn eigenvalues(&self, l: u64) -> Result<Vec<Fq>, HeckeError> {
        let m = &self.ops[&l];
        eigenvalues_of(m, &format!("T_{l}"))
    }

    /// Single eigenvalue of each generator of T (T_p excluded), or NotLocal.
    pub fn residual_eigenvalues(&self) -> Result<BTreeMap<u64, Fq>, HeckeError> {
        let mut out = BTreeMap::new();
        for &l in self.ops.keys().filter(|&&l| l != self.p()) {
            let ev = self.eigenvalues(l)?;
            if ev.len() != 1 {
                return Err(HeckeError::NotLocal { op: format!("T_{l}") });
            }
            out.insert(l, ev[0]);
        }
        Ok(out)
    }
}

/// Distinct roots of the characteristic polynomial, or FieldTooSmall.
pub fn eigenvalues_of(m: &Matrix, name: &str) -> Result<Vec<Fq>, HeckeError> {
    let f = m.ctx();
    let cp = m.charpoly();
    let roots = poly_roots(f, &cp);
    if roots.len() < m.rows() {
        let deg = splitting_degree(f, &cp);
        return Err(HeckeError::FieldTooSmall { op: name.to_string(), min_r: f.r() * deg });
    }
    let mut r = roots;
    r.dedup();
    Ok(r)
}

/// Precision at which T_ℓ for ℓ ≤ ℓmax is determined on the whole space
/// to the Sturm bound.
pub fn proof_precision(space: &ModFormSpace, ell_max: u64) -> usize {
    ell_max as usize * space.sturm.bound + 1
}

/// Matrices of T_ℓ on the whole space for the given primes, each checked
/// to at least the Sturm bound.
pub fn space_operators(space: &ModFormSpace, primes: &[u64]) -> Result<BTreeMap<u64, Matrix>, HeckeError> {
    let lmax = primes.iter().copied().max().unwrap_or(1);
    let basis = space.basis_at(proof_precision(space, lmax));
    let mut out = BTreeMap::new();
    for &l in primes {
        out.insert(l, operator_matrix(&basis, Operator::T(l), space.weight, &space.chi)?);
    }
    Ok(out)
}

/// Rows (in parent echelon coordinates) spanning the simultaneous
/// generalized eigenspace for the listed eigenvalues.
pub fn localize_coords(
    space: &ModFormSpace,
    ops: &BTreeMap<u64, Matrix>,
    cuts: &[(u64, Fq)],
) -> Result<Matrix, HeckeError> {
    let f = space.ctx().clone();
    let mut sub = Matrix::identity(&f, space.dim());
    for &(l, a) in cuts {
        let x = restrict(&sub, &ops[&l]).ok_or(HeckeError::NotInSpan { op: format!("T_{l}"), row: 0 })?;
        let k = x.sub_scalar(a).generalized_kernel();
        if k.rows() == 0 {
            return Err(HeckeError::NotAnEigenvalue { op: format!("T_{l}"), value: f.fmt_elem(a) });
        }
        sub = k.mul(&sub);
    }
    Ok(sub)
}

/// Largest prime ℓ at which operators are stored on a component: the
/// requested bound, every prime dividing N, and p.
pub fn component_prime_bound(space: &ModFormSpace, ell_bound: u64) -> u64 {
    let p = space.ctx().p() as u64;
    let lmax = arith::prime_divisors(space.level).into_iter().max().unwrap_or(1);
    ell_bound.max(lmax).max(p)
}

/// Re-evaluates the component spanned by `coords` at a precision where
/// T_ℓ is solvable for every prime ℓ ≤ L (L from
/// [`component_prime_bound`]) and stores those operators.
pub fn build_component(
    space: &ModFormSpace,
    coords: &Matrix,
    ell_bound: u64,
    eigensystem: Eigensystem,
) -> Result<LocalComponent, HeckeError> {
    let f = space.ctx().clone();
    let l = component_prime_bound(space, ell_bound);
    let low = coords.mul(&space.basis().basis).echelon();
    let max_pivot = low.pivots.last().copied().unwrap_or(0);
    let prec = l as usize * (max_pivot + 1) + 1;
    let rows = space.combine_at(coords, prec).echelon();
    debug_assert_eq!(rows.pivots, low.pivots);
    let coords = crate::linalg::express_in(&space.basis().basis, &rows.basis.truncate_cols(space.prec()))
        .expect("component lies in the space");
    let mut ops = BTreeMap::new();
    for q in arith::primes_up_to(l) {
        ops.insert(q, operator_matrix(&rows, Operator::T(q), space.weight, &space.chi)?);
    }
    let _ = f;
    Ok(LocalComponent {
        level: space.level,
        weight: space.weight,
        chi: space.chi.clone(),
        eigensystem,
        coords,
        basis: rows,
        ops,
    })
}

/// Localizes at a prescribed eigensystem: generalized kernels of T_ℓ − a_ℓ
/// on the whole space for the (small) primes in `coarse`, then on the
/// re-evaluated component for every remaining anaemic prime in `target`.
pub fn localize(
    space: &ModFormSpace,
    target: &BTreeMap<u64, Fq>,
    coarse: &[u64],
    ell_bound: u64,
) -> Result<LocalComponent, HeckeError> {
    let ops = space_operators(space, coarse)?;
    let cuts: Vec<(u64, Fq)> = coarse.iter().map(|l| (*l, target[l])).collect();
    let coords = localize_coords(space, &ops, &cuts)?;
    let mut eig = Eigensystem::new(space.ctx());
    for &(l, a) in &cuts {
        eig.anemic.insert(l, a);
    }
    let comp = build_component(space, &coords, ell_bound, eig)?;
    let rest: Vec<(u64, Fq)> = comp
        .anemic_primes()
        .into_iter()
        .filter(|l| !coarse.contains(l))
        .filter_map(|l| target.get(&l).map(|&a| (l, a)))
        .collect();
    comp.cut(&rest)
}

/// Splits the space into simultaneous generalized eigenspaces of T_ℓ for
/// primes ℓ ≤ ℓ_bound, ℓ ∤ pN.
pub fn anemic_decompose(space: &ModFormSpace, ell_bound: u64) -> Result<Vec<LocalComponent>, HeckeError> {
    let p = space.ctx().p() as u64;
    let primes: Vec<u64> =
        arith::primes_up_to(ell_bound).into_iter().filter(|&l| l != p && !space.level.is_multiple_of(l)).collect();
    let f = space.ctx().clone();
    if space.dim() == 0 {
        return Ok(vec![]);
    }
    let ops = space_operators(space, &primes)?;
    let mut pieces: Vec<(Matrix, BTreeMap<u64, Fq>)> = vec![(Matrix::identity(&f, space.dim()), BTreeMap::new())];
    for &l in &primes {
        let mut next = Vec::new();
        for (sub, eig) in pieces {
            let x = restrict(&sub, &ops[&l]).expect("Hecke-stable");
            for a in eigenvalues_of(&x, &format!("T_{l}"))? {
                let k = x.sub_scalar(a).generalized_kernel();
                let mut e = eig.clone();
                e.insert(l, a);
                next.push((k.mul(&sub), e));
            }
        }
        pieces = next;
    }
    let mut out = Vec::new();
    for (sub, eig) in pieces {
        let mut es = Eigensystem::new(&f);
        es.anemic = eig;
        out.push(build_component(space, &sub, ell_bound, es)?);
    }
    Ok(out)
}

/// Further cut by U_ℓ (ℓ | N) and T_p eigenvalues.
pub fn localize_extended(c: &LocalComponent, extra: &[(u64, Fq)]) -> Result<LocalComponent, HeckeError> {
    for &(l, a) in extra {
        let ev = c.eigenvalues(l)?;
        if !ev.contains(&a) {
            return Err(HeckeError::NotAnEigenvalue { op: format!("T_{l}"), value: c.ctx().fmt_elem(a) });
        }
    }
    c.cut(extra)
}

/// (f(q), f(q^ℓ)) at precision `prec`, optionally checked to lie in a
/// level-Nℓ space.
pub fn oldform_embed(
    f: &QExpansion,
    level: u64,
    ell: u64,
    prec: usize,
    target: Option<&ModFormSpace>,
) -> Result<(QExpansion, QExpansion), HeckeError> {
    if level.is_multiple_of(ell) {
        return Err(HeckeError::LevelNotCoprime { ell, level });
    }
    let a = f.truncate(prec)?;
    let b = f.scale_q(ell as usize, prec)?;
    if let Some(s) = target {
        for (i, g) in [&a, &b].into_iter().enumerate() {
            if !s.contains(g) {
                return Err(HeckeError::NotInSpan { op: "oldform embedding".into(), row: i });
            }
        }
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Serialize)]
pub struct UlBlock {
    pub ell: u64,
    pub t_ell: String,
    pub c: String,
    /// Column convention in the basis (g, c·g(q^ℓ)).
    pub matrix: [[String; 2]; 2],
    pub expected: [[String; 2]; 2],
    pub verdict: bool,
    /// (U_ℓ − b)² = 0 with U_ℓ ≠ b·I.
    pub non_semisimple: bool,
    pub checked_coefficients: usize,
}

/// Matrix of U_ℓ on the plane spanned by g(q) and g(q^ℓ) inside a level
/// Nℓ space, compared with [[t_ℓ, c], [−1, 0]], c = χ(ℓ)ℓ^{k−1}.
pub fn ul_block_check(space: &ModFormSpace, g: &QExpansion, level: u64, ell: u64) -> Result<UlBlock, HeckeError> {
    let f = space.ctx().clone();
    let k = space.weight;
    let chi = &space.chi;
    let check = space.sturm.bound;
    let prec = ell as usize * check;
    if g.prec() < prec {
        return Err(HeckeError::InsufficientPrecision { needed: prec, available: g.prec() });
    }
    let (g1, gl) = oldform_embed(g, level, ell, prec, Some(space))?;
    let c = f.mul(chi.primitive_value(ell as i64), f.pow(f.from_int(ell as i64), k as u64 - 1));
    let t = g.coeff(ell as usize)?;
    let h = gl.scale(c);
    // U_ℓ acts on level-Nℓ forms by a_m ↦ a_{ℓm}.
    let u = |x: &QExpansion| QExpansion::new(&f, (0..check).map(|m| x.coeffs()[m * ell as usize]).collect());
    let (ug, uh) = (u(&g1), u(&h));
    let (g_lo, h_lo) = (g1.truncate(check)?, h.truncate(check)?);
    // Solve u = x·g + y·h using two coefficients where (g, h) is invertible.
    let solve = |target: &QExpansion| -> Option<(Fq, Fq)> {
        for i in 0..check {
            for j in i + 1..check {
                let det = f.sub(f.mul(g_lo.coeffs()[i], h_lo.coeffs()[j]), f.mul(g_lo.coeffs()[j], h_lo.coeffs()[i]));
                if det == 0 {
                    continue;
                }
                let (ti, tj) = (target.coeffs()[i], target.coeffs()[j]);
                let x = f.div(f.sub(f.mul(ti, h_lo.coeffs()[j]), f.mul(tj, h_lo.coeffs()[i])), det).ok()?;
                let y = f.div(f.sub(f.mul(g_lo.coeffs()[i], tj), f.mul(g_lo.coeffs()[j], ti)), det).ok()?;
                let rebuilt = g_lo.scale(x).add(&h_lo.scale(y)).ok()?;
                return (rebuilt == *target).then_some((x, y));
            }
        }
        None
    };
    let (a11, a21) = solve(&ug).ok_or(HeckeError::NotInSpan { op: format!("U_{ell}"), row: 0 })?;
    let (a12, a22) = solve(&uh).ok_or(HeckeError::NotInSpan { op: format!("U_{ell}"), row: 1 })?;
    let m = [[a11, a12], [a21, a22]];
    let expected = [[t, c], [f.neg(1), 0]];
    let s = |m: [[Fq; 2]; 2]| m.map(|r| r.map(|x| f.fmt_elem(x)));
    // repeated root b = t/2 when t² = 4c
    let disc = f.sub(f.mul(t, t), f.mul(f.from_int(4), c));
    let non_semisimple = disc == 0 && {
        let b = f.div(t, f.from_int(2)).unwrap();
        let n = Matrix::from_rows(&f, 2, &[vec![f.sub(m[0][0], b), m[0][1]], vec![m[1][0], f.sub(m[1][1], b)]]);
        !n.is_zero() && n.mul(&n).is_zero()
    };
    Ok(UlBlock {
        ell,
        t_ell: f.fmt_elem(t),
        c: f.fmt_elem(c),
        matrix: s(m),
        expected: s(expected),
        verdict: m == expected,
        non_semisimple,
        checked_coefficients: check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnitRoot {
    pub value: Fq,
    /// Always set: mod p the Hecke polynomial at p degenerates to X(X − a_p).
    pub degenerate_mod_p: bool,
}

/// Unit root of X² − a_p X + χ(p)p^{k−1} mod p: since p^{k−1} ≡ 0 it is a_p.
pub fn unit_root_up(a_p: Fq) -> Result<UnitRoot, HeckeError> {
    if a_p == 0 {
        return Err(HeckeError::NonOrdinary);
    }
    Ok(UnitRoot { value: a_p, degenerate_mod_p: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::UnitGroup;
    use crate::dihedral::weight_one_newform;
    use crate::eisbasis::weight_k_basis;
    use crate::ff::make_field;

    fn setup() -> (FieldCtx, DirichletChar) {
        let f = make_field(5, 1).unwrap();
        let chi = DirichletChar::parse(&UnitGroup::new(23), &f, "23:11").unwrap();
        (f, chi)
    }

    fn f23(f: &FieldCtx, prec: usize) -> QExpansion {
        let z = weight_one_newform(-23, prec).unwrap().integer_coeffs().unwrap();
        QExpansion::new(f, z.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn tn_examples() {
        let (f, chi) = setup();
        let g = f23(&f, 200);
        let u = apply_tn(&g, 23, 1, &chi);
        assert_eq!(u.coeffs()[1], g.coeffs()[23]);
        let t2 = apply_tn(&g, 2, 1, &chi);
        assert_eq!(t2, g.truncate(100).unwrap().scale(f.neg(1)));
        assert!(apply_tn(&QExpansion::zero(&f, 40), 3, 5, &chi).is_zero());
        // composite: T_6 = T_2 T_3 on an eigenform
        let t6 = apply_tn(&g, 6, 1, &chi);
        assert_eq!(t6.coeffs()[1], f.mul(g.coeffs()[2], g.coeffs()[3]));
    }

    #[test]
    fn level_23_weight_5() {
        let (f, chi) = setup();
        let s = weight_k_basis(23, 5, &chi, None).unwrap();
        let ops = space_operators(&s, &[2, 3]).unwrap();
        assert_eq!(ops[&2].trace(), 1);
        assert_eq!(ops[&3].trace(), 2);
        assert!(ops[&2].commutes_with(&ops[&3]));
        let d = operator_matrix(&s.basis_at(30), Operator::Diamond(2), 5, &chi).unwrap();
        assert_eq!(d, Matrix::identity(&f, 9));
        assert!(operator_matrix(&s.basis_at(30), Operator::Zero, 5, &chi).unwrap().is_zero());
        assert_eq!(anemic_decompose(&s, 13).unwrap_err(), HeckeError::FieldTooSmall { op: "T_2".into(), min_r: 3 });
        let g = f23(&f, 20);
        let target: BTreeMap<u64, Fq> = [2, 3, 7, 11, 13].into_iter().map(|l| (l, g.coeffs()[l as usize])).collect();
        let dihedral = localize(&s, &target, &[2, 3], 13).unwrap();
        assert_eq!(dihedral.dim(), 2);
        assert!(dihedral.residual_eigenvalues().unwrap().contains_key(&23));

        let f3 = make_field(5, 3).unwrap();
        let chi3 = DirichletChar::parse(&UnitGroup::new(23), &f3, "23:11").unwrap();
        let s3 = weight_k_basis(23, 5, &chi3, None).unwrap();
        let comps = anemic_decompose(&s3, 3).unwrap();
        assert_eq!(comps.iter().map(|c| c.dim()).sum::<usize>(), 9);
        assert!(comps.iter().any(|c| c.eigensystem.anemic[&2] == f3.from_int(-1) && c.dim() == 2));
        for c in &comps {
            let gens: Vec<&Matrix> = c.ops.values().collect();
            for a in &gens {
                for b in &gens {
                    assert!(a.commutes_with(b));
                }
            }
        }
        // T_p has eigenvalues a_5 and 0 on the dihedral component
        let ev = dihedral.eigenvalues(5).unwrap();
        assert_eq!(ev.len(), 2);
        for a in ev {
            assert_eq!(localize_extended(&dihedral, &[(5, a)]).unwrap().dim(), 1);
        }
        assert!(matches!(localize_extended(&dihedral, &[(5, 3)]), Err(HeckeError::NotAnEigenvalue { .. })));
        assert_eq!(localize_extended(&dihedral, &[]).unwrap().dim(), 2);
    }

    #[test]
    fn ul_block_at_three() {
        let (f, chi) = setup();
        let s = weight_k_basis(23, 5, &chi, None).unwrap();
        let g20 = f23(&f, 20);
        let target: BTreeMap<u64, Fq> = [2, 3].into_iter().map(|l| (l, g20.coeffs()[l as usize])).collect();
        let comp = localize(&s, &target, &[2, 3], 7).unwrap();
        let a5 = comp.eigenvalues(5).unwrap().into_iter().find(|&a| a != 0).unwrap();
        let ord = localize_extended(&comp, &[(5, a5)]).unwrap();
        let chi69 = DirichletChar::parse(&UnitGroup::new(69), &f, "23:11").unwrap();
        let big = weight_k_basis(69, 5, &chi69, None).unwrap();
        let g = ord.eigenform_at(&s, 3 * big.sturm.bound).unwrap();
        let blk = ul_block_check(&big, &g, 23, 3).unwrap();
        assert!(blk.verdict, "{blk:?}");
        assert_eq!(blk.c, "1");
        assert!(!blk.non_semisimple);
        assert_eq!(unit_root_up(g.coeffs()[5]).unwrap().value, a5);
    }

    #[test]
    fn unit_root() {
        assert_eq!(unit_root_up(3).unwrap().value, 3);
        assert_eq!(unit_root_up(0), Err(HeckeError::NonOrdinary));
    }

    #[test]
    fn oldform_errors() {
        let (f, _) = setup();
        let g = f23(&f, 100);
        assert!(matches!(oldform_embed(&g, 23, 23, 50, None), Err(HeckeError::LevelNotCoprime { .. })));
        let (a, b) = oldform_embed(&g, 23, 7, 50, None).unwrap();
        assert_eq!(b.coeffs()[1], 0);
        assert_eq!(a.coeffs()[1], 1);
    }
}
