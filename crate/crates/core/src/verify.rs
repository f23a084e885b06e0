//! Checks of the first-eigenvalue identities, the comparison lemma and the
//! Choi–Wang lower bounds, plus mesh-refinement convergence studies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{Problem, Spectrum};
use crate::eigen::{bilaplace_eigs, buckling_eigs, laplace_eigs, BiLaplaceMethod, EigenResult, SolveOptions};
use crate::error::{invalid, Error, Result};
use crate::geometry::{make_product, HypersurfaceSpec};
use crate::mesh::{mesh_circle, mesh_clifford_torus, mesh_great_sphere2, mesh_stats, mesh_torus, SimplicialMesh};
use crate::operators::{coordinate_vectors, MassMode, OperatorPair};
use crate::{rational_to_f64, Rational};

/// Default relative slack for algebraic identities on numeric spectra.
pub const IDENTITY_SLACK: f64 = 1e-6;
/// Default relative tolerance for continuum targets on numeric spectra.
pub const CONTINUUM_TOL: f64 = 0.01;
/// Order assumed by Richardson extrapolation.
pub const ASSUMED_ORDER: f64 = 2.0;
/// Allowed gap between the fitted and the assumed order.
pub const RATE_FLAG: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// |measured − expected| ≤ tolerance
    Equal,
    /// measured ≥ expected − tolerance
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Failed on a subject outside the minimality hypothesis.
    ExpectedFail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub claim_ref: String,
    pub relation: Relation,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub status: CheckStatus,
    /// Exact (measured, expected) rationals for analytic checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<(String, String)>,
}

impl Check {
    pub fn numeric(
        name: &str,
        claim_ref: &str,
        relation: Relation,
        measured: f64,
        expected: f64,
        tolerance: f64,
        hypothesis_holds: bool,
    ) -> Check {
        let mut c = Check {
            name: name.to_string(),
            claim_ref: claim_ref.to_string(),
            relation,
            measured,
            expected,
            tolerance,
            pass: false,
            status: CheckStatus::Fail,
            exact: None,
        };
        c.pass = c.recompute();
        c.status = match (c.pass, hypothesis_holds) {
            (true, _) => CheckStatus::Pass,
            (false, true) => CheckStatus::Fail,
            (false, false) => CheckStatus::ExpectedFail,
        };
        c
    }

    /// Re-derives `pass` from (measured, expected, tolerance, relation).
    pub fn recompute(&self) -> bool {
        match self.relation {
            Relation::Equal => (self.measured - self.expected).abs() <= self.tolerance,
            Relation::AtLeast => self.measured >= self.expected - self.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subject {
    pub spec: HypersurfaceSpec,
    /// Mesh descriptor, or "analytic".
    pub mesh: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: Subject,
    pub checks: Vec<Check>,
    pub convergence: Option<ConvergenceRecord>,
    /// Numeric subjects only; informational, not a check.
    #[serde(default)]
    pub takahashi_residual: Option<f64>,
    pub hypothesis_violated: bool,
}

impl VerificationReport {
    pub fn new(spec: &HypersurfaceSpec, mesh: &str, checks: Vec<Check>) -> Self {
        Self {
            subject: Subject {
                spec: spec.clone(),
                mesh: mesh.to_string(),
            },
            checks,
            convergence: None,
            takahashi_residual: None,
            hypothesis_violated: !spec.is_minimal(),
        }
    }

    /// True when some check failed on a subject satisfying the hypothesis.
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    /// Every stored `pass` agrees with its recomputation.
    pub fn is_self_consistent(&self) -> bool {
        self.checks.iter().all(|c| c.pass == c.recompute())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `check,measured,expected,tolerance,pass,status`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,measured,expected,tolerance,pass,status\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{:?}\n",
                csv_field(&c.name),
                c.measured,
                c.expected,
                c.tolerance,
                c.pass,
                c.status
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One of the three spectra fed to [`check_lemma`].
#[derive(Debug, Clone, Copy)]
pub enum SpectrumInput<'a> {
    Exact(&'a Spectrum),
    Numeric(&'a EigenResult),
}

impl SpectrumInput<'_> {
    fn problem(&self) -> Problem {
        match self {
            SpectrumInput::Exact(s) => s.problem,
            SpectrumInput::Numeric(r) => r.problem,
        }
    }

    fn exact_values(&self, len: usize) -> Option<Vec<Rational>> {
        match self {
            SpectrumInput::Exact(s) => Some(s.expanded(len)),
            SpectrumInput::Numeric(_) => None,
        }
    }

    fn values(&self, len: usize) -> Vec<f64> {
        match self {
            SpectrumInput::Exact(s) => s.expanded(len).into_iter().map(rational_to_f64).collect(),
            SpectrumInput::Numeric(r) => r.values().into_iter().take(len).collect(),
        }
    }

    fn len(&self) -> usize {
        match self {
            SpectrumInput::Exact(s) => usize::try_from(s.total_multiplicity()).unwrap_or(usize::MAX),
            SpectrumInput::Numeric(r) => r.pairs.len(),
        }
    }
}

fn expect_problem(input: &SpectrumInput<'_>, expected: Problem) -> Result<()> {
    if input.problem() == expected {
        Ok(())
    } else {
        Err(Error::WrongProblem {
            expected: expected.name(),
            found: input.problem().name(),
        })
    }
}

/// Λ_k ≥ λ_k² and Γ_k ≥ λ_k for every index k ≥ 1 present in all inputs.
/// Index 0 (the constants) is skipped. With three exact inputs the comparison
/// is rational and `slack` is not used.
pub fn check_lemma(
    laplace: SpectrumInput<'_>,
    bilap: SpectrumInput<'_>,
    buck: SpectrumInput<'_>,
    slack: f64,
) -> Result<Vec<Check>> {
    expect_problem(&laplace, Problem::Laplace)?;
    expect_problem(&bilap, Problem::BiLaplace)?;
    expect_problem(&buck, Problem::Buckling)?;
    if !(slack >= 0.0) {
        return Err(invalid("slack", "must be non-negative"));
    }
    let len = laplace.len().min(bilap.len()).min(buck.len());
    if len < 2 {
        return Err(Error::Mismatch(format!("lemma needs at least two common indices, got {len}")));
    }
    let lam = laplace.values(len);
    let bl = bilap.values(len);
    let bk = buck.values(len);
    let exact = match (laplace.exact_values(len), bilap.exact_values(len), buck.exact_values(len)) {
        (Some(a), Some(b), Some(c)) => Some((a, b, c)),
        _ => None,
    };
    let mut checks = Vec::with_capacity(2 * (len - 1));
    for k in 1..len {
        let (bi_check, buck_check) = match &exact {
            Some((a, b, c)) => (
                exact_at_least(format!("Lambda_{k} >= lambda_{k}^2"), b[k], a[k] * a[k]),
                exact_at_least(format!("Gamma_{k} >= lambda_{k}"), c[k], a[k]),
            ),
            None => {
                let sq = lam[k] * lam[k];
                (
                    Check::numeric(
                        &format!("Lambda_{k} >= lambda_{k}^2"),
                        "bi-Laplace eigenvalues dominate squared Laplace eigenvalues",
                        Relation::AtLeast,
                        bl[k],
                        sq,
                        slack * sq.abs(),
                        true,
                    ),
                    Check::numeric(
                        &format!("Gamma_{k} >= lambda_{k}"),
                        "buckling eigenvalues dominate Laplace eigenvalues",
                        Relation::AtLeast,
                        bk[k],
                        lam[k],
                        slack * lam[k].abs(),
                        true,
                    ),
                )
            }
        };
        checks.push(bi_check);
        checks.push(buck_check);
    }
    Ok(checks)
}

fn exact_at_least(name: String, measured: Rational, expected: Rational) -> Check {
    let pass = measured >= expected;
    Check {
        name,
        claim_ref: "comparison of the three spectra".to_string(),
        relation: Relation::AtLeast,
        measured: rational_to_f64(measured),
        expected: rational_to_f64(expected),
        tolerance: 0.0,
        pass,
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        exact: Some((measured.to_string(), expected.to_string())),
    }
}

/// Exact λ₁ = n, Λ₁ = n², Γ₁ = n on the closed-form spectra.
pub fn check_theorem(spec: &HypersurfaceSpec) -> Result<Vec<Check>> {
    crate::analytic::verify_theorem(spec)
}

/// The same identities on discrete first eigenvalues, with relative tolerance
/// `rel_tol` against the continuum targets.
pub fn check_theorem_numeric(
    spec: &HypersurfaceSpec,
    lambda1: f64,
    bilap1: f64,
    buck1: f64,
    rel_tol: f64,
) -> Vec<Check> {
    let n = spec.n() as f64;
    let minimal = spec.is_minimal();
    vec![
        Check::numeric(
            "lambda_1 = n",
            "first Laplace eigenvalue of a minimal isoparametric hypersurface",
            Relation::Equal,
            lambda1,
            n,
            rel_tol * n,
            minimal,
        ),
        Check::numeric(
            "Lambda_1 = n^2",
            "first clamped bi-Laplace eigenvalue",
            Relation::Equal,
            bilap1,
            n * n,
            rel_tol * n * n,
            minimal,
        ),
        Check::numeric("Gamma_1 = n", "first buckling eigenvalue", Relation::Equal, buck1, n, rel_tol * n, minimal),
    ]
}

/// Λ₁ ≥ n²/4 and Γ₁ ≥ n/2, each relaxed by the relative `slack`.
pub fn check_choi_wang(bilap1: f64, buck1: f64, n: usize, slack: f64) -> Vec<Check> {
    let n = n as f64;
    let lb = n * n / 4.0;
    let gb = n / 2.0;
    vec![
        Check::numeric(
            "Lambda_1 >= n^2/4",
            "Choi-Wang lower bound for the clamped plate",
            Relation::AtLeast,
            bilap1,
            lb,
            slack * lb,
            true,
        ),
        Check::numeric(
            "Gamma_1 >= n/2",
            "Choi-Wang lower bound for buckling",
            Relation::AtLeast,
            buck1,
            gb,
            slack * gb,
            true,
        ),
    ]
}

/// max_i ‖K xᵢ − n M xᵢ‖_* / ‖n M xᵢ‖_* over the ambient coordinate functions
/// xᵢ, with ‖v‖_* = √(vᵀ M_L⁻¹ v). Coordinates vanishing on the mesh are
/// skipped.
pub fn takahashi_residual(ops: &OperatorPair<'_>, n: usize) -> f64 {
    let ml = ops.lumped_mass();
    let dual_norm = |v: &[f64]| v.iter().zip(&ml).map(|(x, m)| x * x / m).sum::<f64>().sqrt();
    let nf = n as f64;
    let mut worst: f64 = 0.0;
    for x in coordinate_vectors(ops.mesh) {
        if x.iter().all(|&v| v == 0.0) {
            continue;
        }
        let kx = ops.stiffness.apply(&x);
        let mx = ops.mass.apply(&x);
        let r: Vec<f64> = kx.iter().zip(&mx).map(|(k, m)| k - nf * m).collect();
        let nmx: Vec<f64> = mx.iter().map(|m| nf * m).collect();
        worst = worst.max(dual_norm(&r) / dual_norm(&nmx));
    }
    worst
}

/// Refinable mesh families; level i has resolution `base·2ⁱ` (or `base + i`
/// icosphere subdivisions), so h halves from one level to the next.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeshFamily {
    Circle { segments: usize },
    CliffordTorus { grid: usize },
    /// S¹(r₁) × S¹(r₂) with r₁² = `r1_sq`.
    ProductTorus { grid: usize, r1_sq: f64 },
    Icosphere { level: usize },
}

impl MeshFamily {
    pub fn resolution(&self, i: usize) -> usize {
        match *self {
            MeshFamily::Circle { segments } => segments << i,
            MeshFamily::CliffordTorus { grid } | MeshFamily::ProductTorus { grid, .. } => grid << i,
            MeshFamily::Icosphere { level } => level + i,
        }
    }

    pub fn mesh(&self, i: usize) -> Result<SimplicialMesh> {
        let r = self.resolution(i);
        match *self {
            MeshFamily::Circle { .. } => mesh_circle(r),
            MeshFamily::CliffordTorus { .. } => mesh_clifford_torus(r),
            MeshFamily::ProductTorus { r1_sq, .. } => {
                if !(r1_sq > 0.0 && r1_sq < 1.0) {
                    return Err(invalid("r1_sq", "must lie in (0, 1)"));
                }
                let spec = make_product(1, 1, r1_sq.sqrt(), (1.0 - r1_sq).sqrt())?;
                mesh_torus(&spec, r)
            }
            MeshFamily::Icosphere { .. } => mesh_great_sphere2(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// First nonzero Laplace eigenvalue, consistent mass.
    Lambda1,
    /// Λ₁ from the operator-square discretization (lumped mass).
    BiLaplaceSquare,
    /// Λ₁ from the mixed discretization (consistent mass).
    BiLaplaceMixed,
    /// Γ₁, lumped mass.
    Gamma1,
    /// [`takahashi_residual`] with consistent mass.
    Takahashi,
}

impl Quantity {
    /// Limit known by construction, used for rates instead of differences.
    pub fn known_limit(self) -> Option<f64> {
        match self {
            Quantity::Takahashi => Some(0.0),
            _ => None,
        }
    }

    fn evaluate(self, mesh: &SimplicialMesh, opts: &SolveOptions) -> Result<f64> {
        let n = mesh.dim;
        let mode = match self {
            Quantity::BiLaplaceSquare | Quantity::Gamma1 => MassMode::Lumped,
            _ => MassMode::Consistent,
        };
        let ops = OperatorPair::new(mesh, mode)?;
        let opts = SolveOptions {
            count: opts.count.min(ops.order()),
            ..*opts
        };
        let first_nonzero = |r: EigenResult| r.value(1);
        Ok(match self {
            Quantity::Lambda1 => first_nonzero(laplace_eigs(&ops, &opts)?),
            Quantity::BiLaplaceSquare => first_nonzero(bilaplace_eigs(&ops, &opts, BiLaplaceMethod::OperatorSquare)?),
            Quantity::BiLaplaceMixed => first_nonzero(bilaplace_eigs(&ops, &opts, BiLaplaceMethod::Mixed)?),
            Quantity::Gamma1 => first_nonzero(buckling_eigs(&ops, &opts)?),
            Quantity::Takahashi => takahashi_residual(&ops, n),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub family: MeshFamily,
    pub quantity: Quantity,
    /// Resolution parameter per level.
    pub levels: Vec<usize>,
    /// Longest edge per level.
    pub h: Vec<f64>,
    pub values: Vec<f64>,
    /// Observed orders from each consecutive triple of levels (or pair, when
    /// the limit is known).
    pub rates: Vec<f64>,
    pub estimated_rate: f64,
    /// Order-2 Richardson extrapolation of the two finest levels.
    pub extrapolated: f64,
    /// Error magnitudes decrease and the fitted order is within
    /// `RATE_FLAG` of `ASSUMED_ORDER`.
    pub reliable: bool,
    /// Values vary monotonically across levels (within 1e-12).
    pub monotone: bool,
}

/// Evaluates `quantity` on `levels` successive refinements, one task per
/// level.
pub fn convergence_study(
    family: MeshFamily,
    levels: usize,
    quantity: Quantity,
    opts: &SolveOptions,
) -> Result<ConvergenceRecord> {
    if levels < 3 {
        return Err(invalid("levels", "a convergence study needs at least 3 levels"));
    }
    let per_level: Vec<(usize, f64, f64)> = (0..levels)
        .into_par_iter()
        .map(|i| {
            let mesh = family.mesh(i)?;
            let h = mesh_stats(&mesh).h_max;
            Ok((family.resolution(i), h, quantity.evaluate(&mesh, opts)?))
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = per_level.iter().map(|x| x.2).collect();
    let ratio = 2f64.powf(ASSUMED_ORDER);
    let last = values[levels - 1];
    let extrapolated = last + (last - values[levels - 2]) / (ratio - 1.0);

    let errors: Vec<f64> = match quantity.known_limit() {
        Some(limit) => values.iter().map(|v| v - limit).collect(),
        None => values.windows(2).map(|w| w[1] - w[0]).collect(),
    };
    let rates: Vec<f64> = errors.windows(2).map(|e| (e[0] / e[1]).abs().log2()).collect();
    let estimated_rate = *rates.last().unwrap_or(&f64::NAN);
    let decreasing = errors.windows(2).all(|e| e[1].abs() < e[0].abs() && e[0] * e[1] >= 0.0);
    let reliable = decreasing && estimated_rate.is_finite() && (estimated_rate - ASSUMED_ORDER).abs() <= RATE_FLAG;
    let steps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone = steps.iter().all(|d| *d <= 1e-12) || steps.iter().all(|d| *d >= -1e-12);
    Ok(ConvergenceRecord {
        family,
        quantity,
        levels: per_level.iter().map(|x| x.0).collect(),
        h: per_level.iter().map(|x| x.1).collect(),
        values,
        rates,
        estimated_rate,
        extrapolated,
        reliable,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{derived_spectrum, laplace_spectrum};
    use crate::eigen::SolverMode;
    use crate::geometry::{make_clifford, make_great_sphere, make_product_exact};
    use proptest::prelude::*;

    fn analytic_triple(spec: &HypersurfaceSpec, cutoff: f64) -> (Spectrum, Spectrum, Spectrum) {
        let l = laplace_spectrum(spec, cutoff).unwrap();
        let b = derived_spectrum(&l, Problem::BiLaplace).unwrap();
        let g = derived_spectrum(&l, Problem::Buckling).unwrap();
        (l, b, g)
    }

    #[test]
    fn lemma_holds_with_equality_on_clifford_2_3() {
        let (l, b, g) = analytic_triple(&make_clifford(2, 3).unwrap(), 30.0);
        let checks =
            check_lemma(SpectrumInput::Exact(&l), SpectrumInput::Exact(&b), SpectrumInput::Exact(&g), 0.0).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.pass, "{c:?}");
            let (m, e) = c.exact.clone().unwrap();
            assert_eq!(m, e, "{}", c.name);
        }
    }

    #[test]
    fn lemma_flags_corrupted_bilaplace() {
        let mesh = mesh_clifford_torus(8).unwrap();
        let ops = OperatorPair::new(&mesh, MassMode::Lumped).unwrap();
        let opts = SolveOptions::new(6, 1e-11);
        let l = laplace_eigs(&ops, &opts).unwrap();
        let mut b = bilaplace_eigs(&ops, &opts, BiLaplaceMethod::OperatorSquare).unwrap();
        let g = buckling_eigs(&ops, &opts).unwrap();
        let ok = check_lemma(SpectrumInput::Numeric(&l), SpectrumInput::Numeric(&b), SpectrumInput::Numeric(&g), 1e-6)
            .unwrap();
        assert!(ok.iter().all(|c| c.pass));
        b.pairs[1].value = l.value(1).powi(2) / 2.0;
        let bad = check_lemma(SpectrumInput::Numeric(&l), SpectrumInput::Numeric(&b), SpectrumInput::Numeric(&g), 1e-6)
            .unwrap();
        assert_eq!(bad.iter().filter(|c| !c.pass).count(), 1);
        assert_eq!(bad[0].status, CheckStatus::Fail);
    }

    #[test]
    fn lemma_rejects_swapped_inputs() {
        let (l, b, g) = analytic_triple(&make_great_sphere(2).unwrap(), 10.0);
        let err = check_lemma(SpectrumInput::Exact(&b), SpectrumInput::Exact(&l), SpectrumInput::Exact(&g), 0.0);
        assert!(matches!(err, Err(Error::WrongProblem { .. })));
    }

    #[test]
    fn theorem_on_great_sphere_5() {
        let checks = check_theorem(&make_great_sphere(5).unwrap()).unwrap();
        let measured: Vec<f64> = checks.iter().map(|c| c.measured).collect();
        assert_eq!(measured, vec![5.0, 25.0, 5.0]);
        assert!(checks.iter().all(|c| c.status == CheckStatus::Pass));
    }

    #[test]
    fn non_minimal_product_is_an_expected_failure() {
        let spec = make_product_exact(1, 1, Rational::new(3, 10)).unwrap();
        let report = VerificationReport::new(&spec, "analytic", check_theorem(&spec).unwrap());
        assert!(report.hypothesis_violated);
        assert!(!report.has_failures());
        assert_eq!(report.checks[0].status, CheckStatus::ExpectedFail);
        assert_eq!(report.checks[0].exact.as_ref().unwrap().0, "10/7");
    }

    #[test]
    fn numeric_theorem_tolerance() {
        let spec = make_clifford(1, 1).unwrap();
        let checks = check_theorem_numeric(&spec, 2.01, 4.0, 1.99, 0.01);
        assert!(checks.iter().all(|c| c.pass));
        let checks = check_theorem_numeric(&spec, 2.05, 4.0, 2.0, 0.01);
        assert_eq!(checks[0].status, CheckStatus::Fail);
    }

    #[test]
    fn choi_wang_examples() {
        assert!(check_choi_wang(4.0, 2.0, 2, 0.0).iter().all(|c| c.pass));
        let c = check_choi_wang(0.9, 2.0, 2, 0.0);
        assert!(!c[0].pass && c[1].pass);
        assert!(check_choi_wang(1.0, 1.0, 1, 0.0).iter().all(|c| c.pass));
    }

    #[test]
    fn takahashi_on_fine_circle() {
        // Consistent mass on the regular N-gon: x = cos θ gives K x = ℓ x and
        // M x = ℓ(1 − (1 − cos ω)/3) x with ω = 2π/N.
        let mesh = mesh_circle(256).unwrap();
        let ops = OperatorPair::new(&mesh, MassMode::Consistent).unwrap();
        let r = takahashi_residual(&ops, 1);
        let omega = 2.0 * std::f64::consts::PI / 256.0;
        let c = 1.0 - (1.0 - omega.cos()) / 3.0;
        assert!((r - (1.0 / c - 1.0)).abs() < 1e-12, "{r}");
        assert!(r < 1e-3);
        let lumped = OperatorPair::new(&mesh, MassMode::Lumped).unwrap();
        assert!(takahashi_residual(&lumped, 1) < 1e-12);
    }

    #[test]
    fn takahashi_fails_off_minimality() {
        let family = MeshFamily::ProductTorus { grid: 16, r1_sq: 0.3 };
        let mesh = family.mesh(0).unwrap();
        let ops = OperatorPair::new(&mesh, MassMode::Lumped).unwrap();
        assert!(takahashi_residual(&ops, 2) > 0.1);
    }

    #[test]
    fn circle_lambda1_study_has_rate_two() {
        let rec = convergence_study(
            MeshFamily::Circle { segments: 16 },
            4,
            Quantity::Lambda1,
            &SolveOptions::new(3, 1e-12).with_mode(SolverMode::Dense),
        )
        .unwrap();
        assert_eq!(rec.levels, vec![16, 32, 64, 128]);
        assert!((rec.estimated_rate - 2.0).abs() < 0.05, "{rec:?}");
        assert!(rec.reliable && rec.monotone);
        assert!((rec.extrapolated - 1.0).abs() < 1e-5, "{rec:?}");
    }

    #[test]
    fn study_needs_three_levels() {
        let e = convergence_study(MeshFamily::Circle { segments: 8 }, 2, Quantity::Lambda1, &SolveOptions::new(3, 1e-10));
        assert!(e.is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let spec = make_clifford(1, 1).unwrap();
        let report = VerificationReport::new(&spec, "analytic", check_theorem(&spec).unwrap());
        let back = VerificationReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        assert!(report.to_csv().starts_with("check,measured,expected,tolerance,pass"));
    }

    proptest! {
        #[test]
        fn stored_pass_is_recomputable(
            measured in -10.0f64..10.0,
            expected in -10.0f64..10.0,
            tol in 0.0f64..2.0,
            at_least in any::<bool>(),
            minimal in any::<bool>(),
        ) {
            let rel = if at_least { Relation::AtLeast } else { Relation::Equal };
            let c = Check::numeric("x", "y", rel, measured, expected, tol, minimal);
            prop_assert_eq!(c.pass, c.recompute());
            prop_assert_eq!(c.status == CheckStatus::Pass, c.pass);
            let back: Check = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
            prop_assert_eq!(back.pass, back.recompute());
        }
    }
}
