//! Command-line front end: argument parsing, field-degree auto-raise,
//! cached basis construction, and JSON reports.

pub mod cache;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::characters::{CharError, DirichletChar, UnitGroup};
use crate::dihedral::{splitting_poly, DihedralError};
use crate::eisbasis::{weight_k_basis, Dimensions, EisError, ModFormSpace};
use crate::ff::{make_field, FfError, FieldCtx};
use crate::hecke::{anemic_decompose, eigenvalues_of, space_operators, EigensystemJson, HeckeError};
use crate::localalg::LocalAlgError;
use crate::primesearch::{sieve, SieveResult};
use crate::weightone::{
    count_identity, dihedral_component, dihedral_target, doubling_report, katz_vanishing_holds, nonlift_report,
    weight_one_space, CountReport, DoublingReport, PipelineOptions, WeightOneError, REPORT_COEFFS,
};
use report::{Provenance, Report, Timings, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
pub const EXIT_VERDICT_NEGATIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "theta-doubler",
    version,
    about = "Katz modular forms mod p: weight-one doubling and non-lifting certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build (or load) a basis of M_k(Γ_H(N), χ) mod p.
    Basis(BasisArgs),
    /// Hecke operator data and the eigensystem decomposition.
    Hecke(HeckeArgs),
    /// Dimension count, doubled submodule and pairing at a dihedral eigensystem.
    Doubling(DihedralArgs),
    /// Weight-one forms mod p at a dihedral eigensystem.
    Weightone(DihedralArgs),
    /// Sieve auxiliary primes and look for a non-liftable weight-one form.
    Nonlift(NonliftArgs),
    /// Sieve auxiliary primes only.
    Primes(PrimesArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Residue characteristic (≥ 5).
    #[arg(long)]
    pub p: u64,
    /// Starting field degree; raised automatically when eigenvalues need more.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Basis cache directory (else $THETA_DOUBLER_CACHE, else ~/.cache/theta-doubler).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub no_cache: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Advisory; every stage currently runs on one thread.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BasisArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub k: u32,
    /// Character label such as `23:11` or `23:11-quadratic`; default trivial.
    #[arg(long, default_value = "trivial")]
    pub chi: String,
    /// Working precision (raised to the Sturm bound).
    #[arg(long)]
    pub prec: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HeckeArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    /// Comma-separated primes.
    #[arg(long, default_value = "2,3", value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Also split the space by T_ℓ for primes ℓ up to this bound.
    #[arg(long)]
    pub decompose: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DihedralArgs {
    #[command(flatten)]
    pub common: Common,
    /// Negative fundamental discriminant of the dihedral form.
    #[arg(long = "D", default_value_t = -23, allow_hyphen_values = true)]
    pub d: i64,
    /// Level, a multiple of |D| (default |D|).
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 13)]
    pub ell_bound: u64,
    /// Run on a component whose residual representation is reducible.
    #[arg(long)]
    pub allow_eisenstein: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NonliftArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "D", default_value_t = -23, allow_hyphen_values = true)]
    pub d: i64,
    /// Candidates to run the full pipeline on; 0 prints the sieve only.
    #[arg(long, default_value_t = 3)]
    pub budget: usize,
    #[arg(long, default_value_t = 5000)]
    pub limit: u64,
    #[arg(long, default_value_t = 13)]
    pub ell_bound: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PrimesArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long = "D", default_value_t = -23, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub limit: u64,
    #[arg(long, default_value_t = 6)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Computation,
}

/// A failure carrying the module-level error text, and the field degree
/// that would resolve it when it is a field-size problem.
#[derive(Debug, Clone)]
pub struct RunError {
    pub kind: ErrorKind,
    pub message: String,
    pub min_r: Option<u32>,
}

impl RunError {
    fn usage(m: impl Into<String>) -> Self {
        RunError { kind: ErrorKind::Usage, message: m.into(), min_r: None }
    }
    fn computation(m: impl ToString) -> Self {
        RunError { kind: ErrorKind::Computation, message: m.to_string(), min_r: None }
    }
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Computation => EXIT_COMPUTATION,
        }
    }
}

impl From<FfError> for RunError {
    fn from(e: FfError) -> Self {
        RunError::usage(e.to_string())
    }
}

impl From<CharError> for RunError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::FieldTooSmall { min_r, .. } => RunError { min_r: Some(min_r), ..RunError::computation(&e) },
            _ => RunError::usage(e.to_string()),
        }
    }
}

impl From<EisError> for RunError {
    fn from(e: EisError) -> Self {
        match e {
            EisError::Char(c) => c.into(),
            EisError::PDividesLevel { .. } | EisError::WeightOneUnsupported | EisError::ParityMismatch(_) => {
                RunError::usage(e.to_string())
            }
            _ => RunError::computation(e),
        }
    }
}

impl From<HeckeError> for RunError {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::FieldTooSmall { min_r, .. } => RunError { min_r: Some(min_r), ..RunError::computation(&e) },
            _ => RunError::computation(e),
        }
    }
}

impl From<LocalAlgError> for RunError {
    fn from(e: LocalAlgError) -> Self {
        match e {
            LocalAlgError::Hecke(h) => h.into(),
            _ => RunError::computation(e),
        }
    }
}

impl From<DihedralError> for RunError {
    fn from(e: DihedralError) -> Self {
        RunError::usage(e.to_string())
    }
}

impl From<WeightOneError> for RunError {
    fn from(e: WeightOneError) -> Self {
        match e {
            WeightOneError::Hecke(h) => h.into(),
            WeightOneError::LocalAlg(l) => l.into(),
            WeightOneError::Eis(x) => x.into(),
            WeightOneError::Dihedral(d) => d.into(),
            WeightOneError::FieldTooSmall { min_r } => RunError { min_r: Some(min_r), ..RunError::computation(&e) },
            WeightOneError::EisensteinComponent { .. }
            | WeightOneError::Precondition(_)
            | WeightOneError::NotWeightP { .. } => RunError::usage(e.to_string()),
            _ => RunError::computation(e),
        }
    }
}

impl From<cache::CacheError> for RunError {
    fn from(e: cache::CacheError) -> Self {
        RunError::computation(e)
    }
}

/// Runs `f` over F_{p^r}, retrying with a larger r when a stage reports
/// that its eigenvalues or characters need one.
fn with_field<T>(
    p: u64,
    r: u32,
    prov: &mut Provenance,
    mut f: impl FnMut(&FieldCtx, &mut Provenance) -> Result<T, RunError>,
) -> Result<T, RunError> {
    let mut r = r;
    loop {
        let ctx = make_field(p, r)?;
        match f(&ctx, prov) {
            Err(e) if e.min_r.is_some_and(|m| m > r) => {
                prov.r_raised_from.get_or_insert(r);
                r = e.min_r.unwrap();
            }
            other => return other,
        }
    }
}

fn obtain_space(
    common: &Common,
    chi: &DirichletChar,
    k: u32,
    prec: Option<usize>,
    prov: &mut Provenance,
) -> Result<ModFormSpace, RunError> {
    let dir = cache::cache_dir(common.cache_dir.as_deref());
    let cacheable = !common.no_cache && prec.is_none();
    if cacheable {
        match cache::load(&dir, chi, k) {
            Ok(Some(s)) => {
                prov.cache_hits.push(cache::file_name(chi.ctx().p(), chi.ctx().r(), chi.modulus(), k, &chi.label()));
                return Ok(s);
            }
            Ok(None) => {}
            // a stale or damaged entry is rebuilt and overwritten
            Err(cache::CacheError::Corrupt(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let space = weight_k_basis(chi.modulus(), k, chi, prec)?;
    if cacheable {
        if let Ok(path) = cache::store(&dir, &space) {
            prov.cache_writes.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    Ok(space)
}

fn validate(p: u64, n: u64) -> Result<(), RunError> {
    make_field(p, 1)?;
    if n == 0 {
        return Err(RunError::usage("N must be positive"));
    }
    if n.is_multiple_of(p) {
        return Err(RunError::usage(format!("p = {p} divides N = {n}")));
    }
    Ok(())
}

fn parse_char(n: u64, ctx: &FieldCtx, label: &str) -> Result<DirichletChar, RunError> {
    Ok(DirichletChar::parse(&UnitGroup::new(n), ctx, label)?)
}

#[derive(Debug, Serialize)]
pub struct BasisResult {
    pub p: u32,
    pub r: u32,
    pub level: u64,
    pub weight: u32,
    pub chi: String,
    pub dim: usize,
    pub formula: Dimensions,
    pub matches_formula: bool,
    pub sturm_bound: usize,
    pub precision: usize,
    pub max_pivot: usize,
}

fn basis_result(s: &ModFormSpace) -> BasisResult {
    BasisResult {
        p: s.ctx().p(),
        r: s.ctx().r(),
        level: s.level,
        weight: s.weight,
        chi: s.chi.label(),
        dim: s.dim(),
        formula: s.formula,
        matches_formula: s.dim() == s.formula.total,
        sturm_bound: s.sturm.bound,
        precision: s.prec(),
        max_pivot: s.max_pivot(),
    }
}

#[derive(Debug, Serialize)]
pub struct OperatorInfo {
    pub ell: u64,
    pub trace: String,
    /// Coefficients of det(x − T), lowest degree first.
    pub charpoly: Vec<String>,
    pub eigenvalues: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct ComponentInfo {
    pub eigensystem: EigensystemJson,
    pub dim: usize,
}

#[derive(Debug, Serialize)]
pub struct HeckeResult {
    pub space: BasisResult,
    pub operators: Vec<OperatorInfo>,
    pub components: Option<Vec<ComponentInfo>>,
}

#[derive(Debug, Serialize)]
pub struct WeightOneResult {
    pub level: u64,
    pub p: u64,
    pub chi: String,
    pub component_dim: usize,
    pub count: CountReport,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
    pub katz_vanishing: bool,
}

#[derive(Debug, Serialize)]
pub struct Attempt {
    pub ell: u64,
    pub d_w1: Option<usize>,
    pub charzero_dim: Option<usize>,
    pub lift_surjective: Option<bool>,
    pub error: Option<String>,
    pub report: Option<DoublingReport>,
}

#[derive(Debug, Serialize)]
pub struct NonliftResult {
    pub sieve: SieveResult,
    pub attempts: Vec<Attempt>,
    /// The first ℓ at which the weight-one space exceeds the
    /// characteristic-zero count.
    pub certified_ell: Option<u64>,
}

/// Outcome of one command: serialized report and whether the verdict was
/// negative.
pub struct Outcome {
    pub json: String,
    pub summary: String,
    pub verdict_negative: bool,
    pub out: Option<PathBuf>,
}

fn finish<T: Serialize>(command: &str, config: &impl Serialize, result: T, prov: Provenance, t: Timings) -> String {
    let rep = Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        config: serde_json::to_value(config).unwrap(),
        result,
        provenance: prov,
        timings: t.stages,
    };
    serde_json::to_string_pretty(&rep).unwrap()
}

fn level_of(d: i64, n: Option<u64>) -> Result<u64, RunError> {
    let dd = d.unsigned_abs();
    let n = n.unwrap_or(dd);
    if !n.is_multiple_of(dd) {
        return Err(RunError::usage(format!("N = {n} is not a multiple of |D| = {dd}")));
    }
    Ok(n)
}

fn dihedral_space_cached(
    common: &Common,
    d: i64,
    level: u64,
    ctx: &FieldCtx,
    prov: &mut Provenance,
) -> Result<ModFormSpace, RunError> {
    let chi = crate::characters::kronecker_char(d, level, ctx)
        .ok_or_else(|| RunError::usage(format!("no Kronecker character for D = {d} at level {level}")))?;
    obtain_space(common, &chi, ctx.p(), None, prov)
}

pub fn cmd_basis(a: &BasisArgs) -> Result<Outcome, RunError> {
    validate(a.common.p, a.n)?;
    let mut prov = Provenance::new();
    let mut t = Timings::default();
    let res = with_field(a.common.p, a.common.r, &mut prov, |ctx, prov| {
        let chi = parse_char(a.n, ctx, &a.chi)?;
        let s = t.time("basis", || obtain_space(&a.common, &chi, a.k, a.prec, prov))?;
        Ok(basis_result(&s))
    })?;
    let summary = format!(
        "dim {} (formula {}) for M_{}({}, {}) mod {}",
        res.dim, res.formula.total, a.k, a.n, res.chi, a.common.p
    );
    Ok(Outcome { json: finish("basis", a, res, prov, t), summary, verdict_negative: false, out: a.common.out.clone() })
}

pub fn cmd_hecke(a: &HeckeArgs) -> Result<Outcome, RunError> {
    let b = &a.basis;
    validate(b.common.p, b.n)?;
    if let Some(&bad) = a.primes.iter().find(|&&l| !crate::arith::is_prime(l)) {
        return Err(RunError::usage(format!("{bad} is not prime")));
    }
    let mut prov = Provenance::new();
    let mut t = Timings::default();
    let res = with_field(b.common.p, b.common.r, &mut prov, |ctx, prov| {
        let chi = parse_char(b.n, ctx, &b.chi)?;
        let s = t.time("basis", || obtain_space(&b.common, &chi, b.k, b.prec, prov))?;
        let ops = t.time("operators", || space_operators(&s, &a.primes))?;
        let mut operators = Vec::new();
        for (&l, m) in &ops {
            let cp = m.charpoly();
            let ev = match eigenvalues_of(m, &format!("T_{l}")) {
                Ok(v) => Some(v.iter().map(|&x| ctx.fmt_elem(x)).collect()),
                Err(HeckeError::FieldTooSmall { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            operators.push(OperatorInfo {
                ell: l,
                trace: ctx.fmt_elem(m.trace()),
                charpoly: cp.coeffs().iter().map(|&c| ctx.fmt_elem(c)).collect(),
                eigenvalues: ev,
            });
        }
        let components = match a.decompose {
            Some(bound) => Some(
                t.time("decompose", || anemic_decompose(&s, bound))?
                    .iter()
                    .map(|c| ComponentInfo { eigensystem: c.eigensystem.to_json(), dim: c.dim() })
                    .collect(),
            ),
            None => None,
        };
        Ok(HeckeResult { space: basis_result(&s), operators, components })
    })?;
    let summary = format!(
        "dim {}; traces {}",
        res.space.dim,
        res.operators.iter().map(|o| format!("T_{}={}", o.ell, o.trace)).collect::<Vec<_>>().join(" ")
    );
    Ok(Outcome { json: finish("hecke", a, res, prov, t), summary, verdict_negative: false, out: b.common.out.clone() })
}

fn dihedral_pipeline(
    a: &DihedralArgs,
    ctx: &FieldCtx,
    prov: &mut Provenance,
    t: &mut Timings,
) -> Result<crate::hecke::LocalComponent, RunError> {
    let level = level_of(a.d, a.n)?;
    let s = t.time("basis", || dihedral_space_cached(&a.common, a.d, level, ctx, prov))?;
    let bound = crate::hecke::component_prime_bound(&s, a.ell_bound);
    let target = dihedral_target(a.d, ctx, bound as usize + 1)?;
    let opts = PipelineOptions { ell_bound: a.ell_bound, allow_eisenstein: a.allow_eisenstein };
    Ok(t.time("localize", || dihedral_component(&s, &target.reduction, opts))?)
}

pub fn cmd_doubling(a: &DihedralArgs) -> Result<Outcome, RunError> {
    validate(a.common.p, level_of(a.d, a.n)?)?;
    let mut prov = Provenance::new();
    let mut t = Timings::default();
    let res = with_field(a.common.p, a.common.r, &mut prov, |ctx, prov| {
        let comp = dihedral_pipeline(a, ctx, prov, &mut t)?;
        Ok(t.time("doubling", || doubling_report(&comp))?)
    })?;
    let summary = format!(
        "component dim {}; dim[m] = {}, weight-one [m] = {}, count {}; doubled {}; pairing perfect {}",
        res.component_dim,
        res.count.d_anemic,
        res.count.d_w1,
        if res.count.verdict { "pass" } else { "FAIL" },
        res.doubling.doubled,
        res.doubling.perfect
    );
    Ok(Outcome {
        json: finish("doubling", a, res, prov, t),
        summary,
        verdict_negative: false,
        out: a.common.out.clone(),
    })
}

pub fn cmd_weightone(a: &DihedralArgs) -> Result<Outcome, RunError> {
    validate(a.common.p, level_of(a.d, a.n)?)?;
    let mut prov = Provenance::new();
    let mut t = Timings::default();
    let res = with_field(a.common.p, a.common.r, &mut prov, |ctx, prov| {
        let comp = dihedral_pipeline(a, ctx, prov, &mut t)?;
        let count = count_identity(&comp)?;
        let w = weight_one_space(&comp, None)?;
        Ok(WeightOneResult {
            level: comp.level,
            p: comp.p(),
            chi: comp.chi.label(),
            component_dim: comp.dim(),
            count,
            dim: w.forms.len(),
            basis: w
                .forms
                .iter()
                .map(|g| g.coeffs().iter().take(REPORT_COEFFS).map(|&x| ctx.fmt_elem(x)).collect())
                .collect(),
            katz_vanishing: katz_vanishing_holds(&w.forms),
        })
    })?;
    let summary = format!("{} weight-one form(s) mod {} at level {}", res.dim, res.p, res.level);
    Ok(Outcome {
        json: finish("weightone", a, res, prov, t),
        summary,
        verdict_negative: false,
        out: a.common.out.clone(),
    })
}

pub fn cmd_nonlift(a: &NonliftArgs) -> Result<Outcome, RunError> {
    let n = a.d.unsigned_abs();
    validate(a.common.p, n)?;
    let poly = splitting_poly(a.d)?;
    let mut prov = Provenance::new();
    let mut t = Timings::default();
    let shown = a.budget.max(3);
    let sv = t.time("sieve", || sieve(a.common.p, &poly, n, a.limit, shown));
    let mut attempts = Vec::new();
    let mut certified = None;
    for c in sv.candidates.iter().take(a.budget) {
        let ell = c.ell;
        let opts = PipelineOptions { ell_bound: a.ell_bound, allow_eisenstein: false };
        let run = with_field(a.common.p, a.common.r, &mut prov, |ctx, prov| {
            let s = t.time(&format!("basis_{ell}"), || dihedral_space_cached(&a.common, a.d, n * ell, ctx, prov))?;
            Ok(t.time(&format!("pipeline_{ell}"), || nonlift_report(a.d, &s, ell, opts))?)
        });
        match run {
            Ok(rep) => {
                let nl = rep.nonlift.as_ref().unwrap();
                let att = Attempt {
                    ell,
                    d_w1: Some(rep.d_w1_local),
                    charzero_dim: Some(nl.charzero_dim),
                    lift_surjective: Some(nl.lift_surjective),
                    error: None,
                    report: None,
                };
                let done = !nl.lift_surjective;
                attempts.push(Attempt { report: Some(rep), ..att });
                if done {
                    certified = Some(ell);
                    break;
                }
            }
            Err(e) if e.kind == ErrorKind::Usage => return Err(e),
            Err(e) => attempts.push(Attempt {
                ell,
                d_w1: None,
                charzero_dim: None,
                lift_surjective: None,
                error: Some(e.message),
                report: None,
            }),
        }
    }
    let summary = match certified {
        Some(l) => {
            let at = attempts.last().unwrap();
            format!(
                "ℓ = {l}: weight-one dim {} > {} = characteristic-zero dim; a form does not lift",
                at.d_w1.unwrap(),
                at.charzero_dim.unwrap()
            )
        }
        None if a.budget == 0 => format!("sieve only: {} candidate(s)", sv.candidates.len()),
        None => format!("no certificate among {} candidate(s)", attempts.len()),
    };
    let negative = a.budget > 0 && certified.is_none();
    let res = NonliftResult { sieve: sv, attempts, certified_ell: certified };
    Ok(Outcome {
        json: finish("nonlift", a, res, prov, t),
        summary,
        verdict_negative: negative,
        out: a.common.out.clone(),
    })
}

pub fn cmd_primes(a: &PrimesArgs) -> Result<Outcome, RunError> {
    let n = level_of(a.d, a.n)?;
    validate(a.p, n)?;
    let poly = splitting_poly(a.d)?;
    let mut t = Timings::default();
    let sv = t.time("sieve", || sieve(a.p, &poly, n, a.limit, a.count));
    let summary =
        format!("candidates: {}", sv.candidates.iter().map(|c| c.ell.to_string()).collect::<Vec<_>>().join(", "));
    Ok(Outcome {
        json: finish("primes", a, sv, Provenance::new(), t),
        summary,
        verdict_negative: false,
        out: a.out.clone(),
    })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome, RunError> {
    match &cli.command {
        Command::Basis(a) => cmd_basis(a),
        Command::Hecke(a) => cmd_hecke(a),
        Command::Doubling(a) => cmd_doubling(a),
        Command::Weightone(a) => cmd_weightone(a),
        Command::Nonlift(a) => cmd_nonlift(a),
        Command::Primes(a) => cmd_primes(a),
    }
}

/// Parses, runs, writes the report and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            match &o.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &o.json) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_COMPUTATION;
                    }
                }
                None => {
                    use std::io::Write;
                    // a closed pipe (e.g. `| head`) is not an error for a report
                    let _ = writeln!(std::io::stdout().lock(), "{}", o.json);
                }
            }
            eprintln!("{}", o.summary);
            if o.verdict_negative {
                EXIT_VERDICT_NEGATIVE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.exit_code()
        }
    }
}
