//! Weight-one forms mod p seen inside weight p: the θ-kernel, the
//! dimension count against the [m]-torsion, the doubled submodule with its
//! pairing, and the comparison with characteristic-zero dihedral forms
//! after raising the level at an auxiliary prime.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith;
use crate::characters::{kronecker_char, representable_chars, DirichletChar};
use crate::dihedral::{splitting_poly, weight_one_newform, DihedralError, DihedralForm};
use crate::eisbasis::{weight_k_basis, EisError, ModFormSpace};
use crate::ff::{FieldCtx, Fq};
use crate::hecke::{localize, ul_block_check, Eigensystem, EigensystemJson, HeckeError, LocalComponent, UlBlock};
use crate::linalg::Matrix;
use crate::localalg::{annihilator_of_quotient, common_kernel, FiniteAlgebra, LocalAlgError, MatrixSpan};
use crate::primesearch::{check_prime, CandidatePrime, Status};
use crate::qseries::{sturm_bound, QExpansion};

/// Coefficients per weight-one series written into reports.
pub const REPORT_COEFFS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightOneError {
    #[error("InsufficientPrecision: need {needed} coefficients, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("NotWeightP: component has weight {weight}, p = {p}")]
    NotWeightP { weight: u32, p: u64 },
    #[error("CountViolation: {0}")]
    CountViolation(String),
    #[error("EisensteinComponent: residual representation is reducible ({psi})")]
    EisensteinComponent { psi: String },
    #[error("Precondition: {0}")]
    Precondition(String),
    #[error("FieldTooSmall: reductions of the dihedral form need r = {min_r}")]
    FieldTooSmall { min_r: u32 },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    LocalAlg(#[from] LocalAlgError),
    #[error(transparent)]
    Eis(#[from] EisError),
    #[error(transparent)]
    Dihedral(#[from] DihedralError),
}

fn fmt_series(f: &FieldCtx, s: &[Fq], n: usize) -> Vec<String> {
    s.iter().take(n).map(|&x| f.fmt_elem(x)).collect()
}

/// Rows (in component coordinates) of the elements of span(`sub`) whose
/// prime-to-p coefficients vanish, i.e. the kernel of θ there.
pub fn theta_kernel(comp: &LocalComponent, sub: &Matrix) -> Result<Matrix, WeightOneError> {
    let p = comp.p();
    let needed = sturm_bound(comp.weight + p as u32 + 1, comp.level).bound;
    if comp.prec() < needed {
        return Err(WeightOneError::InsufficientPrecision { needed, available: comp.prec() });
    }
    if sub.rows() == 0 {
        return Ok(sub.clone());
    }
    let forms = sub.mul(&comp.basis.basis);
    let cols: Vec<usize> = (0..comp.prec()).filter(|n| n % p as usize != 0).collect();
    let x = forms.select_cols(&cols).left_kernel();
    Ok(x.mul(sub))
}

#[derive(Debug, Clone)]
pub struct WeightOneSpace {
    /// Rows in component coordinates spanning the θ-kernel.
    pub coords: Matrix,
    /// f with V f = g for each kernel element g, at precision ⌈prec/p⌉.
    pub forms: Vec<QExpansion>,
}

/// Weight-one forms mod p in the component via the θ-kernel in weight p.
pub fn weight_one_space(comp: &LocalComponent, sub: Option<&Matrix>) -> Result<WeightOneSpace, WeightOneError> {
    let p = comp.p();
    if comp.weight as u64 != p {
        return Err(WeightOneError::NotWeightP { weight: comp.weight, p });
    }
    let id = Matrix::identity(comp.ctx(), comp.dim());
    let coords = theta_kernel(comp, sub.unwrap_or(&id))?.echelon().basis;
    let g = coords.mul(&comp.basis.basis);
    let forms = (0..g.rows()).map(|i| QExpansion::new(comp.ctx(), g.row(i).to_vec()).un_v(p as usize)).collect();
    Ok(WeightOneSpace { coords, forms })
}

/// The span of `forms` meets k[[q^p]] only in 0: the forms stay
/// independent after discarding every coefficient a_n with p | n.
pub fn katz_vanishing_holds(forms: &[QExpansion]) -> bool {
    let Some(first) = forms.first() else { return true };
    let p = first.ctx().p() as usize;
    let keep: Vec<usize> = (0..first.prec()).filter(|n| n % p != 0).collect();
    let rows: Vec<Vec<Fq>> = forms.iter().map(|f| keep.iter().map(|&n| f.coeffs()[n]).collect()).collect();
    Matrix::from_rows(first.ctx(), keep.len(), &rows).rank() == forms.len()
}

fn torsion_rows(comp: &LocalComponent, extra: Option<(u64, Fq)>) -> Result<Matrix, WeightOneError> {
    let ev = comp.residual_eigenvalues()?;
    let mut ops: Vec<Matrix> = ev.iter().map(|(l, &a)| comp.ops[l].sub_scalar(a)).collect();
    if let Some((l, a)) = extra {
        ops.push(comp.ops[&l].sub_scalar(a));
    }
    Ok(common_kernel(comp.ctx(), comp.dim(), &ops))
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    /// dim[m̃] for each T_p-eigenvalue on the component.
    pub d_tilde: BTreeMap<String, usize>,
    /// dim[m] for the algebra without T_p.
    pub d_anemic: usize,
    /// Weight-one forms killed by m.
    pub d_w1: usize,
    pub verdict: bool,
}

/// dim[m̃] = 1 for every T_p choice, dim[m] = 1 + dim of weight one [m],
/// and the latter is at most 1.
pub fn count_identity(comp: &LocalComponent) -> Result<CountReport, WeightOneError> {
    let m = torsion_rows(comp, None)?;
    let d_anemic = m.rows();
    let d_w1 = theta_kernel(comp, &m)?.rows();
    let mut d_tilde = BTreeMap::new();
    let p = comp.p();
    if comp.ops.contains_key(&p) {
        for a in comp.eigenvalues(p)? {
            d_tilde.insert(comp.ctx().fmt_elem(a), torsion_rows(comp, Some((p, a)))?.rows());
        }
    }
    let verdict = d_tilde.values().all(|&d| d == 1) && d_anemic == 1 + d_w1 && d_w1 <= 1;
    Ok(CountReport { d_tilde, d_anemic, d_w1, verdict })
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingData {
    pub len_t: usize,
    pub len_t_tilde: usize,
    pub len_j: usize,
    pub len_t_mod_j: usize,
    pub j_is_ideal: bool,
    pub j_is_maximal: bool,
    pub dim_m_j: usize,
    /// Lengths of T/I and T̃/Ĩ, I and Ĩ the annihilators of M[J].
    pub len_t_mod_i: usize,
    pub len_t_tilde_mod_i: usize,
    pub doubled: bool,
    pub dim_ker_theta: usize,
    pub dim_m_mod_ker: usize,
    pub gram: Vec<Vec<String>>,
    pub gram_rank: usize,
    pub perfect: bool,
}

/// J, the module M[J], the length comparison and the a_1-pairing between
/// T/J and M[J]/ker θ.
pub fn doubled_submodule(comp: &LocalComponent) -> Result<DoublingData, WeightOneError> {
    let f = comp.ctx().clone();
    let n = comp.dim();
    let t_gens = comp.t_generators();
    let t = FiniteAlgebra::closure(&f, n, &t_gens)?;
    let mut tt_gens = t_gens.clone();
    if let Some(tp) = comp.tp() {
        tt_gens.push(tp.clone());
    }
    let tt = FiniteAlgebra::closure(&f, n, &tt_gens)?;
    let ann = annihilator_of_quotient(&t, &tt)?;
    let j = &ann.ideal;
    let mj = common_kernel(&f, n, &j.elems);
    let len_t_mod_i = t.restricted_length(&mj);
    let len_t_tilde_mod_i = tt.restricted_length(&mj);
    let ker = theta_kernel(comp, &mj)?;

    // complement of J inside T
    let mut span = MatrixSpan::from_elems(&f, n, j.elems.iter().cloned());
    let comp_basis: Vec<Matrix> = t.basis().iter().filter(|b| span.push((*b).clone())).cloned().collect();
    let a1: Vec<Fq> = (0..n).map(|i| comp.basis.basis.get(i, 1)).collect();
    let mut g = Matrix::zeros(&f, comp_basis.len(), mj.rows());
    for (i, tb) in comp_basis.iter().enumerate() {
        let img = mj.mul(tb);
        for jx in 0..mj.rows() {
            let v = img.row(jx).iter().zip(&a1).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
            g.set(i, jx, v);
        }
    }
    let gram_rank = g.rank();
    let len_t_mod_j = t.length() - j.dim();
    let dim_m_mod_ker = mj.rows() - ker.rows();
    Ok(DoublingData {
        len_t: t.length(),
        len_t_tilde: tt.length(),
        len_j: j.dim(),
        len_t_mod_j,
        j_is_ideal: ann.is_ideal,
        j_is_maximal: ann.maximal,
        dim_m_j: mj.rows(),
        len_t_mod_i,
        len_t_tilde_mod_i,
        doubled: len_t_mod_i > 0 && len_t_tilde_mod_i == 2 * len_t_mod_i,
        dim_ker_theta: ker.rows(),
        dim_m_mod_ker,
        gram: (0..g.rows()).map(|i| g.row(i).iter().map(|&x| f.fmt_elem(x)).collect()).collect(),
        gram_rank,
        perfect: gram_rank == len_t_mod_j && gram_rank == dim_m_mod_ker,
    })
}

/// A pair (ψω^i, φω^j) with ψφ = χ, i + j ≡ k − 1 mod p − 1 and
/// a_ℓ = ψ(ℓ)ℓ^i + φ(ℓ)ℓ^j at every anaemic ℓ of the eigensystem, i.e.
/// a reducible residual representation; ω is the mod-p cyclotomic
/// character.
pub fn eisenstein_congruence(eig: &Eigensystem, chi: &DirichletChar, k: u32) -> Option<String> {
    let f = chi.ctx();
    let pm1 = f.p() as u64 - 1;
    if eig.anemic.is_empty() {
        return None;
    }
    for psi in representable_chars(chi.modulus(), f) {
        let phi = chi.mul(&psi.inverse());
        for i in 0..pm1 {
            let j = (k as u64 + pm1 - 1 - i % pm1) % pm1;
            let hit = eig.anemic.iter().all(|(&l, &a)| {
                let lf = f.from_int(l as i64);
                a == f.add(f.mul(psi.value(l as i64), f.pow(lf, i)), f.mul(phi.value(l as i64), f.pow(lf, j)))
            });
            if hit {
                return Some(format!("{}·ω^{i}", psi.label()));
            }
        }
    }
    None
}

/// The reduction of the dihedral newform for D to be localised at, and
/// the number of characteristic-zero newforms of level |D| sharing it.
pub struct DihedralTarget {
    pub form: DihedralForm,
    pub reduction: QExpansion,
    pub charzero_newforms: usize,
}

pub fn dihedral_target(d: i64, ctx: &FieldCtx, prec: usize) -> Result<DihedralTarget, WeightOneError> {
    let form = weight_one_newform(d, prec)?;
    let h = form.h as u64;
    if let Some(z) = form.integer_coeffs() {
        // rational coefficients: the conjugates coincide
        let reduction = QExpansion::from_ints(ctx, &z);
        return Ok(DihedralTarget { form, reduction, charzero_newforms: 1 });
    }
    let reds = form.reductions(ctx);
    let Some(reduction) = reds.first().cloned() else {
        let min_r = arith::mult_order(ctx.p() as u64, h) as u32;
        return Err(WeightOneError::FieldTooSmall { min_r });
    };
    // the (h−1)/2 conjugate newforms, one per pair ζ ↦ ζ^{±j}
    let charzero_newforms = if ctx.p() as u64 == h {
        ((h - 1) / 2) as usize
    } else {
        let z = ctx.root_of_unity(h).expect("reductions exist");
        let zeta_of_first = (1..h).map(|j| ctx.pow(z, j)).find(|&zz| form.reduce(ctx, zz) == reduction).unwrap();
        (1..=(h - 1) / 2).filter(|&j| form.reduce(ctx, ctx.pow(zeta_of_first, j)) == reduction).count()
    };
    Ok(DihedralTarget { form, reduction, charzero_newforms })
}

/// Anaemic eigenvalues a_ℓ of `target` for primes ℓ ≤ bound, ℓ ∤ pN.
pub fn target_eigenvalues(target: &QExpansion, level: u64, p: u64, bound: u64) -> BTreeMap<u64, Fq> {
    arith::primes_up_to(bound)
        .into_iter()
        .filter(|&l| l != p && !level.is_multiple_of(l))
        .map(|l| (l, target.coeffs()[l as usize]))
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    /// Operators are stored for primes up to max(this, primes of N, p).
    pub ell_bound: u64,
    pub allow_eisenstein: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { ell_bound: 13, allow_eisenstein: false }
    }
}

/// The component of `space` (weight p) at the eigensystem of `target`.
pub fn dihedral_component(
    space: &ModFormSpace,
    target: &QExpansion,
    opts: PipelineOptions,
) -> Result<LocalComponent, WeightOneError> {
    let p = space.ctx().p() as u64;
    let bound = crate::hecke::component_prime_bound(space, opts.ell_bound);
    let needed = bound as usize + 1;
    if target.prec() < needed {
        return Err(WeightOneError::InsufficientPrecision { needed, available: target.prec() });
    }
    let eig = target_eigenvalues(target, space.level, p, bound);
    let mut probe = Eigensystem::new(space.ctx());
    probe.anemic = eig.clone();
    if let Some(psi) = eisenstein_congruence(&probe, &space.chi, space.weight) {
        if !opts.allow_eisenstein {
            return Err(WeightOneError::EisensteinComponent { psi });
        }
    }
    let coarse: Vec<u64> = eig.keys().copied().take(2).collect();
    Ok(localize(space, &eig, &coarse, opts.ell_bound)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct NonliftData {
    pub ell: u64,
    pub candidate: CandidatePrime,
    pub ul_block: UlBlock,
    /// Twice the number of characteristic-zero weight-one newforms at m.
    pub charzero_dim: usize,
    pub lift_surjective: bool,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub level: u64,
    pub p: u64,
    pub weight: u32,
    pub chi: String,
    pub eigensystem: EigensystemJson,
    pub eisenstein: Option<String>,
    pub component_dim: usize,
    pub component_precision: usize,
    pub count: CountReport,
    pub doubling: DoublingData,
    /// Dimension of the weight-one space at m (θ-kernel of the whole
    /// component).
    pub d_w1_local: usize,
    pub weight_one_basis: Vec<Vec<String>>,
    pub katz_vanishing: bool,
    pub nonlift: Option<NonliftData>,
}

/// Every §3 quantity for a weight-p component.
pub fn doubling_report(comp: &LocalComponent) -> Result<DoublingReport, WeightOneError> {
    let f = comp.ctx().clone();
    let count = count_identity(comp)?;
    let doubling = doubled_submodule(comp)?;
    let w1 = weight_one_space(comp, None)?;
    Ok(DoublingReport {
        level: comp.level,
        p: comp.p(),
        weight: comp.weight,
        chi: comp.chi.label(),
        eigensystem: comp.eigensystem.to_json(),
        eisenstein: eisenstein_congruence(&comp.eigensystem, &comp.chi, comp.weight),
        component_dim: comp.dim(),
        component_precision: comp.prec(),
        count,
        doubling,
        d_w1_local: w1.forms.len(),
        weight_one_basis: w1.forms.iter().map(|g| fmt_series(&f, g.coeffs(), REPORT_COEFFS)).collect(),
        katz_vanishing: katz_vanishing_holds(&w1.forms),
        nonlift: None,
    })
}

/// Level-raised comparison at ℓ: the component of M_p(Nℓ, χ_D) at the
/// dihedral eigensystem, its weight-one dimension, the U_ℓ block on the
/// oldform plane, and the verdict against the characteristic-zero count.
pub fn nonlift_report(
    d: i64,
    space: &ModFormSpace,
    ell: u64,
    opts: PipelineOptions,
) -> Result<DoublingReport, WeightOneError> {
    let ctx = space.ctx().clone();
    let p = ctx.p() as u64;
    let n = d.unsigned_abs();
    if space.level != n * ell {
        return Err(WeightOneError::Precondition(format!("space level {} is not {}·{}", space.level, n, ell)));
    }
    if space.weight as u64 != p {
        return Err(WeightOneError::NotWeightP { weight: space.weight, p });
    }
    let poly = splitting_poly(d)?;
    let candidate = check_prime(p, &poly, n, ell);
    if candidate.status != Status::Candidate {
        return Err(WeightOneError::Precondition(format!(
            "ℓ = {ell} fails the sieve (Frobenius at ℓ is not trivial mod {p}, or ℓ ≢ 1 mod p)"
        )));
    }
    let prec = ell as usize * space.sturm.bound;
    let target = dihedral_target(d, &ctx, prec)?;
    let comp = dihedral_component(space, &target.reduction, opts)?;
    let mut report = doubling_report(&comp)?;
    let ul_block = ul_block_check(space, &target.reduction, n, ell)?;
    let charzero_dim = 2 * target.charzero_newforms;
    let d_w1 = report.d_w1_local;
    report.nonlift = Some(NonliftData {
        ell,
        candidate,
        ul_block,
        charzero_dim,
        lift_surjective: d_w1 <= charzero_dim,
        inconclusive: d_w1 == charzero_dim,
    });
    Ok(report)
}

/// M_p(Γ_H(M), χ_D) over `ctx` for a multiple M of |D|.
pub fn dihedral_space(d: i64, level: u64, ctx: &FieldCtx) -> Result<ModFormSpace, WeightOneError> {
    let chi = kronecker_char(d, level, ctx)
        .ok_or_else(|| WeightOneError::Precondition(format!("no Kronecker character for {d} at level {level}")))?;
    Ok(weight_k_basis(level, ctx.p(), &chi, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn level_23(p: u64) -> (ModFormSpace, DihedralTarget, LocalComponent) {
        let f = make_field(p, 1).unwrap();
        let s = dihedral_space(-23, 23, &f).unwrap();
        let t = dihedral_target(-23, &f, 200).unwrap();
        let c = dihedral_component(&s, &t.reduction, PipelineOptions::default()).unwrap();
        (s, t, c)
    }

    #[test]
    fn count_at_23() {
        for p in [5, 7] {
            let (_, t, c) = level_23(p);
            assert_eq!(c.dim(), 2);
            let r = count_identity(&c).unwrap();
            assert_eq!((r.d_anemic, r.d_w1), (2, 1));
            assert!(r.d_tilde.values().all(|&x| x == 1));
            assert!(r.verdict);
            let w = weight_one_space(&c, None).unwrap();
            assert_eq!(w.forms.len(), 1);
            let g = &w.forms[0];
            let a1 = g.coeffs()[1];
            let n = g.prec();
            assert_eq!(g.scale(c.ctx().inv(a1).unwrap()).coeffs(), &t.reduction.coeffs()[..n]);
            assert!(katz_vanishing_holds(&w.forms));
            assert_eq!(t.charzero_newforms, 1);
        }
    }

    #[test]
    fn doubling_at_23() {
        let (_, _, c) = level_23(5);
        let d = doubled_submodule(&c).unwrap();
        assert_eq!((d.len_t, d.len_t_tilde), (1, 2));
        assert!(d.j_is_ideal && d.j_is_maximal);
        assert!(d.doubled);
        assert_eq!(d.dim_m_j, 2);
        let r = doubling_report(&c).unwrap();
        assert_eq!(r.d_w1_local, 1);
        assert!(r.eisenstein.is_none());
    }

    #[test]
    fn eisenstein_refusal_at_47() {
        let f = make_field(5, 1).unwrap();
        let s = dihedral_space(-47, 47, &f).unwrap();
        let t = dihedral_target(-47, &f, 200).unwrap();
        assert_eq!(t.charzero_newforms, 2);
        assert!(matches!(
            dihedral_component(&s, &t.reduction, PipelineOptions::default()),
            Err(WeightOneError::EisensteinComponent { .. })
        ));
        let opts = PipelineOptions { allow_eisenstein: true, ..Default::default() };
        let c = dihedral_component(&s, &t.reduction, opts).unwrap();
        assert!(count_identity(&c).unwrap().verdict);
    }

    #[test]
    fn level_one_weight_twelve() {
        let f = make_field(5, 1).unwrap();
        let chi = DirichletChar::trivial(&crate::characters::UnitGroup::new(1), &f);
        let s = weight_k_basis(1, 12, &chi, None).unwrap();
        // Δ: a_2 = −24 ≡ 1, a_3 = 252 ≡ 2 mod 5
        let delta = QExpansion::from_ints(
            &f,
            &[0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944, -577738, 401856],
        );
        // Δ ≡ θE_10-type mod 5: a_ℓ ≡ ℓ + ℓ², so it is refused by default
        assert!(dihedral_component(&s, &delta, PipelineOptions::default()).is_err());
        let opts = PipelineOptions { allow_eisenstein: true, ..Default::default() };
        let c = dihedral_component(&s, &delta, opts).unwrap();
        assert_eq!(c.dim(), 1);
        let r = count_identity(&c).unwrap();
        assert_eq!((r.d_anemic, r.d_w1), (1, 0));
        assert!(matches!(weight_one_space(&c, None), Err(WeightOneError::NotWeightP { .. })));
    }
}
