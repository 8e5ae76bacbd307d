//! Commutative matrix algebras acting on a local component: closure,
//! residual eigenvalues, the conductor-type ideal J, torsion submodules,
//! and the dual-number relation checker.
//!
//! Matrices act on row vectors (v ↦ v·M), matching [`crate::hecke`].

use serde::Serialize;

use crate::ff::{FieldCtx, Fq};
use crate::hecke::{eigenvalues_of, HeckeError};
use crate::linalg::{Echelon, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalAlgError {
    #[error("NonCommuting: generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("NotSubalgebra: basis element {0} of the smaller algebra is missing from the larger")]
    NotSubalgebra(usize),
    #[error("NotLocal: generator {0} has {1} distinct eigenvalues")]
    NotLocal(usize, usize),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

fn flatten(m: &Matrix) -> Vec<Fq> {
    m.data().to_vec()
}

/// Horizontal concatenation of square matrices of equal size.
fn hstack(ctx: &FieldCtx, n: usize, ms: &[Matrix]) -> Matrix {
    let mut out = Matrix::zeros(ctx, n, n * ms.len());
    for (k, m) in ms.iter().enumerate() {
        for i in 0..n {
            out.row_mut(i)[k * n..(k + 1) * n].copy_from_slice(m.row(i));
        }
    }
    out
}

/// Span of a list of n×n matrices, with an echelon form of their
/// flattenings for membership tests.
#[derive(Debug, Clone)]
pub struct MatrixSpan {
    n: usize,
    ctx: FieldCtx,
    pub elems: Vec<Matrix>,
    ech: Echelon,
}

impl MatrixSpan {
    pub fn new(ctx: &FieldCtx, n: usize) -> Self {
        MatrixSpan { n, ctx: ctx.clone(), elems: vec![], ech: Matrix::zeros(ctx, 0, n * n).echelon() }
    }

    /// Adds `m` if it is independent of the current span.
    pub fn push(&mut self, m: Matrix) -> bool {
        let mut v = flatten(&m);
        self.ech.reduce(&mut v);
        if v.iter().all(|&x| x == 0) {
            return false;
        }
        let mut rows = self.ech.basis.clone();
        rows.push_row(&v);
        self.ech = rows.echelon();
        self.elems.push(m);
        true
    }

    pub fn from_elems(ctx: &FieldCtx, n: usize, ms: impl IntoIterator<Item = Matrix>) -> Self {
        let mut s = MatrixSpan::new(ctx, n);
        for m in ms {
            s.push(m);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.ech.contains(&flatten(m))
    }

    /// Flattened elements as the rows of a matrix.
    pub fn as_rows(&self) -> Matrix {
        let rows: Vec<Vec<Fq>> = self.elems.iter().map(flatten).collect();
        Matrix::from_rows(&self.ctx, self.n * self.n, &rows)
    }

    pub fn combination(&self, x: &[Fq]) -> Matrix {
        let mut out = Matrix::zeros(&self.ctx, self.n, self.n);
        for (c, m) in x.iter().zip(&self.elems) {
            if *c != 0 {
                out = out.add(&m.scale(*c));
            }
        }
        out
    }
}

/// The unital algebra generated by commuting n×n matrices.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    pub ctx: FieldCtx,
    pub n: usize,
    pub gens: Vec<Matrix>,
    pub span: MatrixSpan,
}

impl FiniteAlgebra {
    pub fn closure(ctx: &FieldCtx, n: usize, gens: &[Matrix]) -> Result<Self, LocalAlgError> {
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !gens[i].commutes_with(&gens[j]) {
                    return Err(LocalAlgError::NonCommuting(i, j));
                }
            }
        }
        let mut span = MatrixSpan::new(ctx, n);
        span.push(Matrix::identity(ctx, n));
        let mut i = 0;
        while i < span.dim() {
            let b = span.elems[i].clone();
            for g in gens {
                span.push(b.mul(g));
            }
            i += 1;
        }
        Ok(FiniteAlgebra { ctx: ctx.clone(), n, gens: gens.to_vec(), span })
    }

    pub fn length(&self) -> usize {
        self.span.dim()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.span.elems
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.span.contains(m)
    }

    /// Residue eigenvalue of each generator; errors unless the algebra is
    /// local.
    pub fn residue_eigenvalues(&self) -> Result<Vec<Fq>, LocalAlgError> {
        let mut out = Vec::with_capacity(self.gens.len());
        for (i, g) in self.gens.iter().enumerate() {
            let ev = eigenvalues_of(g, &format!("generator {i}"))?;
            if ev.len() != 1 {
                return Err(LocalAlgError::NotLocal(i, ev.len()));
            }
            out.push(ev[0]);
        }
        Ok(out)
    }

    /// Generators g − λ(g) of the maximal ideal of a local algebra.
    pub fn maximal_ideal_generators(&self) -> Result<Vec<Matrix>, LocalAlgError> {
        let ev = self.residue_eigenvalues()?;
        Ok(self.gens.iter().zip(ev).map(|(g, l)| g.sub_scalar(l)).collect())
    }

    /// Length of the image of the algebra in End(M) for the row space `m`
    /// (an invariant subspace): the rank of {v·a : v ∈ M} over a ∈ basis.
    pub fn restricted_length(&self, m: &Matrix) -> usize {
        restricted_length(self.basis(), m)
    }
}

/// Rank of the stacked images of `m` under each matrix in `alg`.
pub fn restricted_length(alg: &[Matrix], m: &Matrix) -> usize {
    if alg.is_empty() || m.rows() == 0 {
        return 0;
    }
    let ctx = m.ctx();
    let rows: Vec<Vec<Fq>> = alg.iter().map(|a| m.mul(a).data().to_vec()).collect();
    Matrix::from_rows(ctx, m.rows() * m.cols(), &rows).rank()
}

/// Rows v with v·a = 0 for every a in `ops`.
pub fn common_kernel(ctx: &FieldCtx, n: usize, ops: &[Matrix]) -> Matrix {
    if ops.is_empty() {
        return Matrix::identity(ctx, n);
    }
    hstack(ctx, n, ops).left_kernel()
}

/// The [m]-torsion of the module F^n: common kernel of g − λ(g).
pub fn m_torsion(alg: &FiniteAlgebra) -> Result<Matrix, LocalAlgError> {
    Ok(common_kernel(&alg.ctx, alg.n, &alg.maximal_ideal_generators()?))
}

pub fn m_torsion_dim(alg: &FiniteAlgebra) -> Result<usize, LocalAlgError> {
    Ok(m_torsion(alg)?.rows())
}

#[derive(Debug, Clone)]
pub struct Annihilator {
    /// J as a span of matrices inside T.
    pub ideal: MatrixSpan,
    /// J·T̃ ⊆ J, checked element by element.
    pub is_ideal: bool,
    /// Every basis element a of T with a·T̃ ⊆ T lies in J.
    pub maximal: bool,
}

/// J = {a ∈ T : a·T̃ ⊆ T}, computed as the kernel of the map
/// x ↦ (Σ x_i t_i b_j mod T)_j for b_j a basis of T̃.
pub fn annihilator_of_quotient(t: &FiniteAlgebra, tt: &FiniteAlgebra) -> Result<Annihilator, LocalAlgError> {
    for (i, a) in t.basis().iter().enumerate() {
        if !tt.contains(a) {
            return Err(LocalAlgError::NotSubalgebra(i));
        }
    }
    let ctx = &t.ctx;
    let n = t.n;
    // functionals vanishing on T
    let y = t.span.as_rows().right_kernel();
    let mut blocks = Vec::new();
    for b in tt.basis() {
        let prods: Vec<Vec<Fq>> = t.basis().iter().map(|a| a.mul(b).data().to_vec()).collect();
        let pm = Matrix::from_rows(ctx, n * n, &prods);
        blocks.push(pm.mul(&y.transpose()));
    }
    let width: usize = blocks.iter().map(|b| b.cols()).sum();
    let mut a = Matrix::zeros(ctx, t.length(), width);
    let mut off = 0;
    for b in &blocks {
        for i in 0..t.length() {
            a.row_mut(i)[off..off + b.cols()].copy_from_slice(b.row(i));
        }
        off += b.cols();
    }
    let xs = if width == 0 { Matrix::identity(ctx, t.length()) } else { a.left_kernel() };
    let ideal = MatrixSpan::from_elems(ctx, n, (0..xs.rows()).map(|i| t.span.combination(xs.row(i))));
    let is_ideal = ideal.elems.iter().all(|j| tt.basis().iter().all(|b| ideal.contains(&j.mul(b))));
    let maximal =
        t.basis().iter().filter(|a| tt.basis().iter().all(|b| t.contains(&a.mul(b)))).all(|a| ideal.contains(a));
    Ok(Annihilator { ideal, is_ideal, maximal })
}

/// a + bε in k[ε]/ε².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualNumber {
    pub a: Fq,
    pub b: Fq,
}

impl DualNumber {
    pub fn new(a: Fq, b: Fq) -> Self {
        DualNumber { a, b }
    }
    pub fn add(self, f: &FieldCtx, o: Self) -> Self {
        DualNumber::new(f.add(self.a, o.a), f.add(self.b, o.b))
    }
    pub fn sub(self, f: &FieldCtx, o: Self) -> Self {
        DualNumber::new(f.sub(self.a, o.a), f.sub(self.b, o.b))
    }
    pub fn mul(self, f: &FieldCtx, o: Self) -> Self {
        DualNumber::new(f.mul(self.a, o.a), f.add(f.mul(self.a, o.b), f.mul(self.b, o.a)))
    }
    /// (a + bε)⁻¹ = a⁻¹ − b a⁻² ε; `None` when a = 0.
    pub fn inv(self, f: &FieldCtx) -> Option<Self> {
        let ai = f.inv(self.a).ok()?;
        Some(DualNumber::new(ai, f.neg(f.mul(self.b, f.mul(ai, ai)))))
    }
}

pub type DualMat = [[DualNumber; 2]; 2];

fn dm_mul(f: &FieldCtx, x: &DualMat, y: &DualMat) -> DualMat {
    let e = |i: usize, j: usize| x[i][0].mul(f, y[0][j]).add(f, x[i][1].mul(f, y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn dm_sub_scalar(f: &FieldCtx, x: &DualMat, s: DualNumber) -> DualMat {
    let mut out = *x;
    out[0][0] = out[0][0].sub(f, s);
    out[1][1] = out[1][1].sub(f, s);
    out
}

fn dm_is_zero(x: &DualMat) -> bool {
    x.iter().flatten().all(|d| d.a == 0 && d.b == 0)
}

/// ρ(τ), ρ(φ) over k[ε]/ε² and the chosen eigenvalue α of ρ(φ).
#[derive(Debug, Clone)]
pub struct DualNumberRep {
    pub ctx: FieldCtx,
    pub tau: DualMat,
    pub phi: DualMat,
    pub alpha: DualNumber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    pub trace_tau_is_two: bool,
    pub tau_unipotent: bool,
    pub tau_phi_alpha: bool,
    pub phi_alpha_inv_tau: bool,
    pub phi_quadratic: bool,
    pub verdict: bool,
}

/// Evaluates the five defining relations exactly:
/// Tr ρ(τ) = 2, (ρ(τ)−1)² = 0, (ρ(τ)−1)(ρ(φ)−α) = 0,
/// (ρ(φ)−α⁻¹)(ρ(τ)−1) = 0 and (ρ(φ)−α)(ρ(φ)−α⁻¹) = 0.
pub fn dual_number_check(rep: &DualNumberRep) -> DualCheck {
    let f = &rep.ctx;
    let one = DualNumber::new(1, 0);
    let tr = rep.tau[0][0].add(f, rep.tau[1][1]);
    let trace_tau_is_two = tr == DualNumber::new(f.from_int(2), 0);
    let t1 = dm_sub_scalar(f, &rep.tau, one);
    let pa = dm_sub_scalar(f, &rep.phi, rep.alpha);
    let ai = rep.alpha.inv(f).expect("α is a unit");
    let pai = dm_sub_scalar(f, &rep.phi, ai);
    let tau_unipotent = dm_is_zero(&dm_mul(f, &t1, &t1));
    let tau_phi_alpha = dm_is_zero(&dm_mul(f, &t1, &pa));
    let phi_alpha_inv_tau = dm_is_zero(&dm_mul(f, &pai, &t1));
    let phi_quadratic = dm_is_zero(&dm_mul(f, &pa, &pai));
    DualCheck {
        trace_tau_is_two,
        tau_unipotent,
        tau_phi_alpha,
        phi_alpha_inv_tau,
        phi_quadratic,
        verdict: trace_tau_is_two && tau_unipotent && tau_phi_alpha && phi_alpha_inv_tau && phi_quadratic,
    }
}
