//! `isospec` command-line front end.
//!
//! Every run is described by a [`RunConfig`]; it is read from an optional JSON
//! file and then overridden by flags. Output files are the interface, stdout
//! only carries a summary table.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use isospec::analytic::{derived_spectrum, laplace_spectrum, Problem, Spectrum};
use isospec::eigen::{bilaplace_eigs, buckling_eigs, laplace_eigs, BiLaplaceMethod, EigenResult, SolveOptions, SolverMode};
use isospec::geometry::{approximate_rational, make_clifford, make_great_sphere, make_product_exact, HypersurfaceSpec, SurfaceKind};
use isospec::mesh::{mesh_circle, mesh_great_sphere2, mesh_torus, SimplicialMesh};
use isospec::operators::{MassMode, OperatorPair};
use isospec::verify::{
    check_choi_wang, check_lemma, check_theorem, check_theorem_numeric, convergence_study, takahashi_residual,
    CheckStatus, ConvergenceRecord, MeshFamily, Quantity, SpectrumInput, VerificationReport, CONTINUUM_TOL,
    IDENTITY_SLACK,
};
use isospec::{rational_to_f64, Rational};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: `{field}`: {reason}")]
    Usage { field: &'static str, reason: String },

    #[error("config file {path}: {source}")]
    Config { path: PathBuf, source: serde_json::Error },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] isospec::Error),
}

impl CliError {
    /// 2 for usage and configuration problems, 3 for runtime failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } | CliError::Config { .. } => 2,
            CliError::Core(isospec::Error::InvalidParameter { .. }) => 2,
            _ => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage(field: &'static str, reason: impl Into<String>) -> CliError {
    CliError::Usage {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubjectConfig {
    GreatSphere { n: usize },
    Clifford { p: usize, q: usize },
    /// Sᵖ(r₁) × S^q(r₂) with r₁² = `r1_sq`, r₂² = 1 − r₁².
    Product { p: usize, q: usize, r1_sq: f64 },
}

impl SubjectConfig {
    pub fn spec(&self) -> CliResult<HypersurfaceSpec> {
        Ok(match *self {
            SubjectConfig::GreatSphere { n } => make_great_sphere(n)?,
            SubjectConfig::Clifford { p, q } => make_clifford(p, q)?,
            SubjectConfig::Product { p, q, r1_sq } => {
                if !(r1_sq > 0.0 && r1_sq < 1.0) {
                    return Err(usage("r1sq", format!("must lie in (0, 1), got {r1_sq}")));
                }
                let exact = approximate_rational(r1_sq, 1_000_000);
                if (rational_to_f64(exact) - r1_sq).abs() > 4.0 * f64::EPSILON * r1_sq {
                    return Err(usage("r1sq", "needs a rational value with denominator at most 10^6"));
                }
                make_product_exact(p, q, exact)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    #[default]
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeshConfig {
    pub icosphere_level: usize,
    pub grid: usize,
    pub segments: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            icosphere_level: 4,
            grid: 64,
            segments: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub count: usize,
    pub tol: f64,
    pub mode: Option<SolverMode>,
    pub shift: f64,
    pub bilaplace: BiLaplaceMethod,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            count: 8,
            tol: 1e-10,
            mode: None,
            shift: 1.0,
            bilaplace: BiLaplaceMethod::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Relative tolerance of numeric checks against continuum targets.
    pub tol: f64,
    /// Relative slack of the lemma on numeric spectra.
    pub slack: f64,
    pub all_minimal: bool,
    pub n_max: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tol: CONTINUUM_TOL,
            slack: IDENTITY_SLACK,
            all_minimal: false,
            n_max: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergeConfig {
    pub levels: usize,
    pub quantity: Quantity,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self {
            levels: 3,
            quantity: Quantity::Lambda1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub subject: Option<SubjectConfig>,
    pub path: PathKind,
    /// Largest Laplace eigenvalue listed by analytic spectra.
    pub cutoff: f64,
    pub mesh: MeshConfig,
    pub solver: SolverConfig,
    pub verify: VerifyConfig,
    pub converge: ConvergeConfig,
    pub out_dir: PathBuf,
    pub write_vectors: bool,
    /// Iterative solves start from a fixed vector. Must stay `true`.
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            subject: None,
            path: PathKind::Analytic,
            cutoff: 20.0,
            mesh: MeshConfig::default(),
            solver: SolverConfig::default(),
            verify: VerifyConfig::default(),
            converge: ConvergeConfig::default(),
            out_dir: PathBuf::from("out"),
            write_vectors: false,
            deterministic: true,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Config {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        if !self.deterministic {
            return Err(usage("deterministic", "randomized solver starts are not supported"));
        }
        if !(self.cutoff >= 0.0) {
            return Err(usage("cutoff", "must be non-negative"));
        }
        if self.solver.count < 2 {
            return Err(usage("count", "need at least 2 eigenpairs to reach the first nonzero one"));
        }
        if !(self.solver.tol > 0.0) {
            return Err(usage("tol", "solver tolerance must be positive"));
        }
        if !(self.solver.shift > 0.0) {
            return Err(usage("shift", "must be positive"));
        }
        if !(self.verify.tol >= 0.0) {
            return Err(usage("tol", "verification tolerance must be non-negative"));
        }
        if !(self.verify.slack >= 0.0) {
            return Err(usage("slack", "must be non-negative"));
        }
        Ok(())
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            count: self.solver.count,
            tol: self.solver.tol,
            mode: self.solver.mode,
            shift: self.solver.shift,
        }
    }

    fn subject(&self) -> CliResult<&SubjectConfig> {
        self.subject
            .as_ref()
            .ok_or_else(|| usage("subject", "give one of --clifford, --great-sphere or --product"))
    }

    fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        fs::create_dir_all(&self.out_dir).map_err(|source| CliError::Io {
            path: self.out_dir.clone(),
            source,
        })?;
        let path = self.out_dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }

    fn write_json(&self, name: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let text = serde_json::to_string_pretty(value).map_err(isospec::Error::from)?;
        self.write(name, &(text + "\n"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "isospec", version, about = "Exact and finite-element spectra of minimal hypersurfaces in spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplace, bi-Laplace and buckling spectra as JSON and CSV.
    Spectrum(SpectrumArgs),
    /// Checks of the first-eigenvalue identities; exit code 1 on any genuine failure.
    Verify(VerifyArgs),
    /// Mesh-refinement convergence study.
    Converge(ConvergeArgs),
    /// Mesh (OFF, JSON) and stiffness/mass matrices (MatrixMarket).
    Export(ExportArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("subject_choice").args(["clifford", "great_sphere", "product"])))]
pub struct SubjectArgs {
    /// Minimal Clifford product Sᵖ(√(p/n)) × S^q(√(q/n)).
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    pub clifford: Option<Vec<usize>>,
    /// Great sphere Sⁿ.
    #[arg(long, value_name = "N")]
    pub great_sphere: Option<usize>,
    /// Product Sᵖ(r₁) × S^q(r₂); needs --r1sq.
    #[arg(long, num_args = 2, value_names = ["P", "Q"], requires = "r1sq")]
    pub product: Option<Vec<usize>>,
    /// Squared radius of the first factor of --product.
    #[arg(long, value_name = "X", requires = "product")]
    pub r1sq: Option<f64>,
}

impl SubjectArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = &self.clifford {
            cfg.subject = Some(SubjectConfig::Clifford { p: v[0], q: v[1] });
        }
        if let Some(n) = self.great_sphere {
            cfg.subject = Some(SubjectConfig::GreatSphere { n });
        }
        if let (Some(v), Some(r1_sq)) = (&self.product, self.r1sq) {
            cfg.subject = Some(SubjectConfig::Product { p: v[0], q: v[1], r1_sq });
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Square,
    Mixed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MassArg {
    Lumped,
    Consistent,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuantityArg {
    Lambda1,
    BilaplaceSquare,
    BilaplaceMixed,
    Gamma1,
    Takahashi,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Torus grid size per circle factor.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Circle mesh segment count.
    #[arg(long, value_name = "N")]
    pub segments: Option<usize>,
    /// Number of eigenpairs per problem.
    #[arg(long, value_name = "K")]
    pub count: Option<usize>,
    /// Eigensolver residual tolerance.
    #[arg(long, value_name = "TOL")]
    pub solver_tol: Option<f64>,
    /// Eigensolver engine; dense up to order 400 by default.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Shift-invert pole is −SHIFT.
    #[arg(long)]
    pub shift: Option<f64>,
    /// Bi-Laplace discretization.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

impl CommonArgs {
    fn load(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.out {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = self.grid {
            cfg.mesh.grid = v;
        }
        if let Some(v) = self.segments {
            cfg.mesh.segments = v;
        }
        if let Some(v) = self.count {
            cfg.solver.count = v;
        }
        if let Some(v) = self.solver_tol {
            cfg.solver.tol = v;
        }
        if let Some(v) = self.mode {
            cfg.solver.mode = Some(match v {
                ModeArg::Dense => SolverMode::Dense,
                ModeArg::Iterative => SolverMode::Iterative,
            });
        }
        if let Some(v) = self.shift {
            cfg.solver.shift = v;
        }
        if let Some(v) = self.method {
            cfg.solver.bilaplace = match v {
                MethodArg::Square => BiLaplaceMethod::OperatorSquare,
                MethodArg::Mixed => BiLaplaceMethod::Mixed,
            };
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("path_choice").args(["analytic", "numeric"])))]
pub struct PathArgs {
    /// Closed-form spectra in exact arithmetic.
    #[arg(long)]
    pub analytic: bool,
    /// Finite-element spectra.
    #[arg(long)]
    pub numeric: bool,
    /// Largest Laplace eigenvalue listed by the analytic path.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Icosphere subdivision level.
    #[arg(long, value_name = "L")]
    pub levels: Option<usize>,
}

impl PathArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if self.analytic {
            cfg.path = PathKind::Analytic;
        }
        if self.numeric {
            cfg.path = PathKind::Numeric;
        }
        if let Some(v) = self.cutoff {
            cfg.cutoff = v;
        }
        if let Some(v) = self.levels {
            cfg.mesh.icosphere_level = v;
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Also write Laplace eigenvectors (little-endian f64, column-major).
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Relative tolerance of numeric checks against n, n².
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative slack of the lemma on numeric spectra.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Every minimal catalog hypersurface with n ≤ --n-max (analytic only).
    #[arg(long, conflicts_with = "subject_choice")]
    pub all_minimal: bool,
    /// Largest dimension swept by --all-minimal.
    #[arg(long, value_name = "N")]
    pub n_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of refinement levels (at least 3).
    #[arg(long, value_name = "K")]
    pub levels: Option<usize>,
    /// Icosphere level of the coarsest mesh.
    #[arg(long, value_name = "L")]
    pub base_level: Option<usize>,
    #[arg(long, value_enum)]
    pub quantity: Option<QuantityArg>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub subject: SubjectArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Icosphere subdivision level.
    #[arg(long, value_name = "L")]
    pub levels: Option<usize>,
    #[arg(long, value_enum, default_value = "lumped")]
    pub mass: MassArg,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Spectrum(args) => {
            let mut cfg = args.common.load()?;
            args.subject.apply(&mut cfg);
            args.path.apply(&mut cfg);
            cfg.write_vectors |= args.vectors;
            cmd_spectrum(&cfg)
        }
        Command::Verify(args) => {
            let mut cfg = args.common.load()?;
            args.subject.apply(&mut cfg);
            args.path.apply(&mut cfg);
            if let Some(v) = args.tol {
                cfg.verify.tol = v;
            }
            if let Some(v) = args.slack {
                cfg.verify.slack = v;
            }
            cfg.verify.all_minimal |= args.all_minimal;
            if let Some(v) = args.n_max {
                cfg.verify.n_max = v;
            }
            cmd_verify(&cfg)
        }
        Command::Converge(args) => {
            let mut cfg = args.common.load()?;
            args.subject.apply(&mut cfg);
            cfg.path = PathKind::Numeric;
            if let Some(v) = args.levels {
                cfg.converge.levels = v;
            }
            if let Some(v) = args.base_level {
                cfg.mesh.icosphere_level = v;
            }
            if let Some(q) = args.quantity {
                cfg.converge.quantity = match q {
                    QuantityArg::Lambda1 => Quantity::Lambda1,
                    QuantityArg::BilaplaceSquare => Quantity::BiLaplaceSquare,
                    QuantityArg::BilaplaceMixed => Quantity::BiLaplaceMixed,
                    QuantityArg::Gamma1 => Quantity::Gamma1,
                    QuantityArg::Takahashi => Quantity::Takahashi,
                };
            }
            cmd_converge(&cfg)
        }
        Command::Export(args) => {
            let mut cfg = args.common.load()?;
            args.subject.apply(&mut cfg);
            cfg.path = PathKind::Numeric;
            if let Some(v) = args.levels {
                cfg.mesh.icosphere_level = v;
            }
            let mass = match args.mass {
                MassArg::Lumped => MassMode::Lumped,
                MassArg::Consistent => MassMode::Consistent,
            };
            cmd_export(&cfg, mass)
        }
    }
}

/// Mesh of a numeric subject: polygon for S¹, icosphere for S², torus for
/// products of two circles.
pub fn build_mesh(spec: &HypersurfaceSpec, mesh: &MeshConfig) -> CliResult<SimplicialMesh> {
    let m = match (spec.kind(), spec.n()) {
        (SurfaceKind::GreatSphere, 1) => mesh_circle(mesh.segments)?,
        (SurfaceKind::GreatSphere, 2) => mesh_great_sphere2(mesh.icosphere_level)?,
        (SurfaceKind::ProductOfSpheres, 2) => mesh_torus(spec, mesh.grid)?,
        (_, n) => return Err(isospec::Error::UnsupportedDimension(n).into()),
    };
    Ok(m)
}

fn mesh_family(subject: &SubjectConfig, mesh: &MeshConfig) -> CliResult<MeshFamily> {
    match *subject {
        SubjectConfig::GreatSphere { n: 1 } => Ok(MeshFamily::Circle {
            segments: mesh.segments,
        }),
        SubjectConfig::GreatSphere { n: 2 } => Ok(MeshFamily::Icosphere {
            level: mesh.icosphere_level,
        }),
        SubjectConfig::Clifford { p: 1, q: 1 } => Ok(MeshFamily::CliffordTorus { grid: mesh.grid }),
        SubjectConfig::Product { p: 1, q: 1, r1_sq } => Ok(MeshFamily::ProductTorus { grid: mesh.grid, r1_sq }),
        ref other => Err(isospec::Error::UnsupportedDimension(other.spec()?.n()).into()),
    }
}

/// Numeric spectra of all three problems on one discretization: consistent
/// mass for the mixed bi-Laplace method, lumped mass for operator-square.
pub struct NumericSpectra {
    pub mesh: SimplicialMesh,
    pub laplace: EigenResult,
    pub bilaplace: EigenResult,
    pub buckling: EigenResult,
    pub takahashi: f64,
}

pub fn numeric_spectra(spec: &HypersurfaceSpec, cfg: &RunConfig) -> CliResult<NumericSpectra> {
    let mesh = build_mesh(spec, &cfg.mesh)?;
    let opts = cfg.solve_options();
    let method = cfg.solver.bilaplace;
    let mass_mode = match method {
        BiLaplaceMethod::OperatorSquare => MassMode::Lumped,
        BiLaplaceMethod::Mixed => MassMode::Consistent,
    };
    let ops = OperatorPair::new(&mesh, mass_mode)?;
    let laplace = laplace_eigs(&ops, &opts)?;
    let bilaplace = bilaplace_eigs(&ops, &opts, method)?;
    let buckling = buckling_eigs(&ops, &opts)?;
    let takahashi = takahashi_residual(&ops, spec.n());
    Ok(NumericSpectra {
        laplace,
        bilaplace,
        buckling,
        takahashi,
        mesh,
    })
}

fn analytic_spectra(spec: &HypersurfaceSpec, cutoff: f64) -> CliResult<[Spectrum; 3]> {
    let lap = laplace_spectrum(spec, cutoff)?;
    let bi = derived_spectrum(&lap, Problem::BiLaplace)?;
    let buck = derived_spectrum(&lap, Problem::Buckling)?;
    Ok([lap, bi, buck])
}

fn file_stem(problem: Problem) -> &'static str {
    match problem {
        Problem::Laplace => "laplace",
        Problem::BiLaplace => "bilaplace",
        Problem::Buckling => "buckling",
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> CliResult<u8> {
    cfg.validate()?;
    let spec = cfg.subject()?.spec()?;
    println!("{:<10} {:>22} {:>8}", "problem", "first nonzero", "count");
    match cfg.path {
        PathKind::Analytic => {
            for s in analytic_spectra(&spec, cfg.cutoff)? {
                let first = s.first_nonzero();
                let doc = json!({
                    "subject": spec,
                    "label": spec.label(),
                    "path": "analytic",
                    "first_nonzero": first.map(rational_to_f64),
                    "first_nonzero_exact": first.map(|r| r.to_string()),
                    "spectrum": s,
                });
                let stem = file_stem(s.problem);
                cfg.write_json(&format!("{stem}.json"), &doc)?;
                cfg.write(&format!("{stem}.csv"), &s.to_csv())?;
                println!(
                    "{:<10} {:>22} {:>8}",
                    s.problem.name(),
                    first.map_or("-".to_string(), |r| r.to_string()),
                    s.total_multiplicity()
                );
            }
        }
        PathKind::Numeric => {
            let ns = numeric_spectra(&spec, cfg)?;
            for r in [&ns.laplace, &ns.bilaplace, &ns.buckling] {
                let stem = file_stem(r.problem);
                let vectors = if cfg.write_vectors && r.problem == Problem::Laplace {
                    let name = format!("{stem}_vectors.bin");
                    r.write_vectors(&cfg.out_dir.join(&name))?;
                    Some(name)
                } else {
                    None
                };
                let doc = json!({
                    "subject": spec,
                    "label": spec.label(),
                    "path": "numeric",
                    "mesh": ns.mesh.descriptor,
                    "first_nonzero": r.value(1),
                    "result": r.to_json(vectors.as_deref()),
                });
                cfg.write_json(&format!("{stem}.json"), &doc)?;
                cfg.write(&format!("{stem}.csv"), &r.to_csv())?;
                println!("{:<10} {:>22.12} {:>8}", r.problem.name(), r.value(1), r.pairs.len());
            }
        }
    }
    cfg.write_json("config.json", cfg)?;
    Ok(0)
}

/// Every minimal catalog hypersurface of dimension 1..=n_max: great spheres
/// and Clifford products with all ordered (p, q), p + q = n.
pub fn minimal_catalog(n_max: usize) -> CliResult<Vec<HypersurfaceSpec>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(make_great_sphere(n)?);
        for p in 1..n {
            out.push(make_clifford(p, n - p)?);
        }
    }
    Ok(out)
}

fn analytic_report(spec: &HypersurfaceSpec, cutoff: f64) -> CliResult<VerificationReport> {
    let mut checks = check_theorem(spec)?;
    let lambda1 = checks[0].measured;
    // The lemma needs at least one nonzero eigenvalue below the cutoff.
    let [lap, bi, buck] = analytic_spectra(spec, cutoff.max(lambda1))?;
    checks.extend(check_lemma(
        SpectrumInput::Exact(&lap),
        SpectrumInput::Exact(&bi),
        SpectrumInput::Exact(&buck),
        0.0,
    )?);
    let first = |s: &Spectrum| s.first_nonzero().map_or(f64::NAN, rational_to_f64);
    checks.extend(choi_wang(spec, first(&bi), first(&buck), 0.0));
    Ok(VerificationReport::new(spec, "analytic", checks))
}

/// Choi–Wang presupposes minimality; failures off it are expected.
fn choi_wang(spec: &HypersurfaceSpec, bilap1: f64, buck1: f64, slack: f64) -> Vec<isospec::verify::Check> {
    let mut checks = check_choi_wang(bilap1, buck1, spec.n(), slack);
    if !spec.is_minimal() {
        for c in &mut checks {
            if c.status == CheckStatus::Fail {
                c.status = CheckStatus::ExpectedFail;
            }
        }
    }
    checks
}

fn numeric_report(spec: &HypersurfaceSpec, cfg: &RunConfig) -> CliResult<VerificationReport> {
    let ns = numeric_spectra(spec, cfg)?;
    let (l1, b1, g1) = (ns.laplace.value(1), ns.bilaplace.value(1), ns.buckling.value(1));
    let mut checks = check_theorem_numeric(spec, l1, b1, g1, cfg.verify.tol);
    checks.extend(check_lemma(
        SpectrumInput::Numeric(&ns.laplace),
        SpectrumInput::Numeric(&ns.bilaplace),
        SpectrumInput::Numeric(&ns.buckling),
        cfg.verify.slack,
    )?);
    checks.extend(choi_wang(spec, b1, g1, cfg.verify.slack));
    let mut report = VerificationReport::new(spec, &ns.mesh.descriptor, checks);
    report.takahashi_residual = Some(ns.takahashi);
    Ok(report)
}

pub fn cmd_verify(cfg: &RunConfig) -> CliResult<u8> {
    cfg.validate()?;
    let subjects = if cfg.verify.all_minimal {
        if cfg.path == PathKind::Numeric {
            return Err(usage("all_minimal", "the catalog sweep runs on the analytic path only"));
        }
        minimal_catalog(cfg.verify.n_max)?
    } else {
        vec![cfg.subject()?.spec()?]
    };
    let reports = subjects
        .iter()
        .map(|spec| match cfg.path {
            PathKind::Analytic => analytic_report(spec, cfg.cutoff),
            PathKind::Numeric => numeric_report(spec, cfg),
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut csv = String::from("subject,mesh,check,measured,expected,tolerance,pass,status\n");
    println!("{:<42} {:<16} {:>5} {:>5} {:>9}", "subject", "mesh", "pass", "fail", "expected");
    for r in &reports {
        let label = r.subject.spec.label();
        for line in r.to_csv().lines().skip(1) {
            csv.push_str(&format!("{label},{},{line}\n", r.subject.mesh));
        }
        let count = |s: CheckStatus| r.checks.iter().filter(|c| c.status == s).count();
        println!(
            "{:<42} {:<16} {:>5} {:>5} {:>9}",
            label,
            r.subject.mesh,
            count(CheckStatus::Pass),
            count(CheckStatus::Fail),
            count(CheckStatus::ExpectedFail)
        );
        if let Some(t) = r.takahashi_residual {
            println!("  takahashi residual {t:.6e}");
        }
    }
    cfg.write_json("report.json", &reports)?;
    cfg.write("report.csv", &csv)?;
    cfg.write_json("config.json", cfg)?;
    let failed = reports.iter().any(VerificationReport::has_failures);
    println!("{}", if failed { "FAIL" } else { "OK" });
    Ok(u8::from(failed))
}

pub fn cmd_converge(cfg: &RunConfig) -> CliResult<u8> {
    cfg.validate()?;
    if cfg.converge.levels < 3 {
        return Err(usage("levels", "a convergence study needs at least 3 levels"));
    }
    let family = mesh_family(cfg.subject()?, &cfg.mesh)?;
    let record = convergence_study(family, cfg.converge.levels, cfg.converge.quantity, &cfg.solve_options())?;
    cfg.write_json("convergence.json", &record)?;
    cfg.write("convergence.csv", &convergence_csv(&record))?;
    cfg.write_json("config.json", cfg)?;
    println!("{:>6} {:>12} {:>24} {:>8}", "level", "h", "value", "rate");
    for i in 0..record.values.len() {
        let rate = rate_for_level(&record, i).map_or(String::new(), |r| format!("{r:.4}"));
        println!("{:>6} {:>12.5e} {:>24.15e} {:>8}", record.levels[i], record.h[i], record.values[i], rate);
    }
    println!(
        "estimated rate {:.4}, extrapolated {:.12e}, {}",
        record.estimated_rate,
        record.extrapolated,
        if record.reliable { "reliable" } else { "UNRELIABLE" }
    );
    Ok(0)
}

/// The rate printed on the row of level `i` (rates end at the finest level).
fn rate_for_level(record: &ConvergenceRecord, i: usize) -> Option<f64> {
    let offset = record.values.len() - record.rates.len();
    i.checked_sub(offset).map(|k| record.rates[k])
}

fn convergence_csv(record: &ConvergenceRecord) -> String {
    let mut out = String::from("level,resolution,h,value,rate\n");
    for i in 0..record.values.len() {
        let rate = rate_for_level(record, i).map_or(String::new(), |r| r.to_string());
        out.push_str(&format!("{i},{},{},{},{rate}\n", record.levels[i], record.h[i], record.values[i]));
    }
    out
}

pub fn cmd_export(cfg: &RunConfig, mass: MassMode) -> CliResult<u8> {
    cfg.validate()?;
    let spec = cfg.subject()?.spec()?;
    let mesh = build_mesh(&spec, &cfg.mesh)?;
    let ops = OperatorPair::new(&mesh, mass)?;
    cfg.write("mesh.off", &mesh.to_off())?;
    cfg.write_json("mesh.json", &mesh)?;
    cfg.write("stiffness.mtx", &ops.stiffness.to_matrix_market())?;
    cfg.write("mass.mtx", &ops.mass.to_matrix_market())?;
    cfg.write_json("config.json", cfg)?;
    println!(
        "{}: {} vertices, {} simplices, stiffness nnz {}",
        mesh.descriptor,
        mesh.num_vertices(),
        mesh.num_simplices(),
        ops.stiffness.nnz()
    );
    Ok(0)
}

/// Exact λ₁ of a subject as a rational, for summaries and tests.
pub fn analytic_lambda1(spec: &HypersurfaceSpec) -> CliResult<Rational> {
    let checks = check_theorem(spec)?;
    let (measured, _) = checks[0].exact.clone().unwrap_or_default();
    measured
        .parse::<Rational>()
        .map_err(|_| usage("subject", "could not read back the exact first eigenvalue"))
}
