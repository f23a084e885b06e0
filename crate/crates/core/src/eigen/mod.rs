//! Discrete Laplace, bi-Laplace and buckling eigenproblems as generalized
//! symmetric pencils A v = μ B v built from an [`OperatorPair`].
//!
//! | problem                 | A          | B   | notes                              |
//! |-------------------------|------------|-----|------------------------------------|
//! | Laplace                 | K          | M   |                                    |
//! | bi-Laplace, op. square  | K M_L⁻¹ K  | M_L | lumped mass                        |
//! | bi-Laplace, mixed       | K M_C⁻¹ K  | M_C | consistent mass, never formed      |
//! | buckling                | K M_L⁻¹ K  | K   | constants deflated                 |

pub mod dense;
mod krylov;
pub mod linop;
pub mod skyline;

use std::io::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use linop::{Deflation, LinearOperator};
pub use skyline::SkylineCholesky;

use crate::analytic::Problem;
use crate::error::{invalid, Error, Result};
use crate::operators::{assemble_mass, MassMode, OperatorPair};
use crate::sparse::SparseSymMatrix;

use krylov::{backward_error, block_krylov, KrylovSettings};
use linop::dot;
use skyline::ShiftInvert;

pub use krylov::MAX_RESTARTS;

pub const ITERATIVE_CAP: usize = 300_000;
/// Orders up to this use the dense engine when no mode is requested.
pub const AUTO_DENSE_ORDER: usize = 400;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Relative gap under which discrete eigenvalues form one cluster.
pub const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverMode {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BiLaplaceMethod {
    OperatorSquare,
    Mixed,
}

/// A symmetric pencil with an optional null vector z. The iterative path
/// works on the W-orthogonal complement of z; the dense path removes z by a
/// Householder reflection and so needs A z = B z = 0.
pub struct Pencil<'a> {
    pub a: &'a dyn LinearOperator,
    pub b: &'a dyn LinearOperator,
    pub deflation: Option<&'a Deflation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub count: usize,
    pub tol: f64,
    /// `None` picks dense for small orders.
    pub mode: Option<SolverMode>,
    /// The shift-invert pole is σ = −shift; A + shift·B must be positive definite.
    pub shift: f64,
}

impl SolveOptions {
    pub fn new(count: usize, tol: f64) -> Self {
        Self {
            count,
            tol,
            mode: None,
            shift: 1.0,
        }
    }

    pub fn with_mode(mut self, mode: SolverMode) -> Self {
        self.mode = Some(mode);
        self
    }

    fn resolve_mode(&self, order: usize) -> SolverMode {
        self.mode.unwrap_or(if order <= AUTO_DENSE_ORDER {
            SolverMode::Dense
        } else {
            SolverMode::Iterative
        })
    }

    fn validate(&self, order: usize) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(invalid("tol", "must be positive"));
        }
        if !(self.shift > 0.0) {
            return Err(invalid("shift", "must be positive"));
        }
        if self.count > order {
            return Err(Error::CountExceedsOrder {
                count: self.count,
                order,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Residual-certified eigenpairs of a pencil, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub pairs: Vec<EigenPair>,
    /// Normwise backward errors ‖Av − μBv‖ / ((‖A‖ + |μ|‖B‖)‖v‖).
    pub residuals: Vec<f64>,
    pub method: SolverMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub problem: Problem,
    pub pairs: Vec<EigenPair>,
    pub residuals: Vec<f64>,
    pub method: SolverMode,
    pub sub_method: Option<BiLaplaceMethod>,
}

impl EigenResult {
    fn from_solution(problem: Problem, sub_method: Option<BiLaplaceMethod>, s: Solution) -> Self {
        Self {
            problem,
            pairs: s.pairs,
            residuals: s.residuals,
            method: s.method,
            sub_method,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn value(&self, k: usize) -> f64 {
        self.pairs[k].value
    }

    /// Groups consecutive values within `CLUSTER_TOL·(1 + |value|)` into
    /// (mean value, multiplicity).
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        cluster_values(&self.values(), CLUSTER_TOL)
    }

    pub fn to_json(&self, vectors_file: Option<&str>) -> serde_json::Value {
        serde_json::json!({
            "problem": self.problem,
            "method": self.method,
            "sub_method": self.sub_method,
            "values": self.values(),
            "residuals": self.residuals,
            "order": self.pairs.first().map_or(0, |p| p.vector.len()),
            "count": self.pairs.len(),
            "vectors_file": vectors_file,
        })
    }

    /// CSV of clustered values: `value,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,multiplicity\n");
        for (v, m) in self.clusters() {
            out.push_str(&format!("{v},{m}\n"));
        }
        out
    }

    /// Raw little-endian f64 column file, order × count, column-major.
    pub fn write_vectors(&self, path: &Path) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        for p in &self.pairs {
            for x in &p.vector {
                file.write_all(&x.to_le_bytes())?;
            }
        }
        file.flush()?;
        Ok(())
    }
}

pub fn cluster_values(values: &[f64], rel_tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((sum, count, last)) if (v - *last).abs() <= rel_tol * (1.0 + v.abs()) => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(s, c, _)| (s / c as f64, c)).collect()
}

fn certify(pencil: &Pencil<'_>, raw: Vec<(f64, Vec<f64>)>) -> (Vec<EigenPair>, Vec<f64>) {
    let a_norm = pencil.a.norm_estimate();
    let b_norm = pencil.b.norm_estimate();
    let mut pairs = Vec::with_capacity(raw.len());
    let mut residuals = Vec::with_capacity(raw.len());
    for (value, vector) in raw {
        residuals.push(pair_residual(pencil, value, &vector, a_norm, b_norm));
        pairs.push(EigenPair { value, vector });
    }
    (pairs, residuals)
}

fn pair_residual(pencil: &Pencil<'_>, value: f64, v: &[f64], a_norm: f64, b_norm: f64) -> f64 {
    let av = pencil.a.apply(v);
    let bv = pencil.b.apply(v);
    let r: Vec<f64> = av.iter().zip(&bv).map(|(a, b)| a - value * b).collect();
    backward_error(&r, value, v, a_norm, b_norm)
}

/// Solves a pencil with a caller-supplied inverse operator for the iterative
/// path. `inverse` must apply (A − σB)⁻¹ with σ ≤ 0 on the deflated complement.
pub fn solve_pencil(
    pencil: &Pencil<'_>,
    inverse: Option<&dyn LinearOperator>,
    count: usize,
    tol: f64,
    mode: SolverMode,
) -> Result<Solution> {
    match mode {
        SolverMode::Dense => {
            let raw = dense::solve_dense(pencil, count)?;
            let (pairs, residuals) = certify(pencil, raw);
            Ok(Solution {
                pairs,
                residuals,
                method: mode,
            })
        }
        SolverMode::Iterative => {
            let n = pencil.a.order();
            if n > ITERATIVE_CAP {
                return Err(Error::OrderOverCap {
                    order: n,
                    cap: ITERATIVE_CAP,
                    mode: "iterative",
                });
            }
            let inverse = inverse.ok_or_else(|| invalid("inverse", "iterative mode needs an inverse operator"))?;
            let found = block_krylov(pencil, inverse, &KrylovSettings { count, tol })?;
            let (pairs, residuals) = found
                .into_iter()
                .map(|(value, vector, res)| (EigenPair { value, vector }, res))
                .unzip();
            Ok(Solution {
                pairs,
                residuals,
                method: mode,
            })
        }
    }
}

/// Smallest `count` eigenpairs of the sparse pencil (A, B). In iterative mode
/// A + shift·B is factored once (pinned when a deflation vector is given).
pub fn solve_gen_sym(
    a: &SparseSymMatrix,
    b: &SparseSymMatrix,
    deflation: Option<&Deflation>,
    opts: &SolveOptions,
) -> Result<Solution> {
    let order = a.order();
    if b.order() != order {
        return Err(Error::Mismatch(format!("pencil orders differ: {} vs {}", order, b.order())));
    }
    let available = order - usize::from(deflation.is_some());
    opts.validate(available)?;
    let pencil = Pencil { a, b, deflation };
    match opts.resolve_mode(order) {
        SolverMode::Dense => solve_pencil(&pencil, None, opts.count, opts.tol, SolverMode::Dense),
        SolverMode::Iterative => {
            let shifted = a.add_scaled(opts.shift, b);
            let factor = SkylineCholesky::factor(&shifted, deflation.map(Deflation::pivot_index))?;
            let inverse = ShiftInvert { factor, deflation };
            solve_pencil(&pencil, Some(&inverse), opts.count, opts.tol, SolverMode::Iterative)
        }
    }
}

/// Smallest eigenpairs of K v = λ M v; the first is (0, constant).
pub fn laplace_eigs(ops: &OperatorPair<'_>, opts: &SolveOptions) -> Result<EigenResult> {
    let s = solve_gen_sym(&ops.stiffness, &ops.mass, None, opts)?;
    Ok(EigenResult::from_solution(Problem::Laplace, None, s))
}

/// Prepends the bookkeeping (0, constant) pair to a deflated solution. The
/// constant is normalized in `norm_matrix`.
fn prepend_constant(pencil: &Pencil<'_>, norm_matrix: &SparseSymMatrix, mut s: Solution) -> Solution {
    let n = norm_matrix.order();
    let ones = vec![1.0; n];
    let scale = dot(&ones, &norm_matrix.apply(&ones)).sqrt();
    let constant = vec![1.0 / scale; n];
    let res = pair_residual(pencil, 0.0, &constant, pencil.a.norm_estimate(), pencil.b.norm_estimate());
    s.pairs.insert(
        0,
        EigenPair {
            value: 0.0,
            vector: constant,
        },
    );
    s.residuals.insert(0, res);
    s
}

/// x ↦ K M⁻¹ K x with M applied through its Cholesky factor.
struct MixedOperator<'a> {
    stiffness: &'a SparseSymMatrix,
    mass: SkylineCholesky,
}

impl LinearOperator for MixedOperator<'_> {
    fn order(&self) -> usize {
        self.stiffness.order()
    }

    fn apply_to(&self, x: &[f64], y: &mut [f64]) {
        let t = self.stiffness.apply(x);
        let u = self.mass.solve(&t);
        self.stiffness.mul_vec(&u, y);
    }
}

/// (K M⁻¹ K)⁺ = K⁺ M K⁺ on the M-orthogonal complement of constants.
struct MixedInverse<'a> {
    pinned_stiffness: SkylineCholesky,
    mass: &'a SparseSymMatrix,
    deflation: &'a Deflation,
}

impl LinearOperator for MixedInverse<'_> {
    fn order(&self) -> usize {
        self.mass.order()
    }

    fn apply_to(&self, x: &[f64], y: &mut [f64]) {
        let mut first = self.pinned_stiffness.solve(x);
        self.deflation.project(&mut first);
        let t = self.mass.apply(&first);
        let mut second = self.pinned_stiffness.solve(&t);
        self.deflation.project(&mut second);
        y.copy_from_slice(&second);
    }
}

struct DenseOperator(DMatrix<f64>);

impl LinearOperator for DenseOperator {
    fn order(&self) -> usize {
        self.0.nrows()
    }

    fn apply_to(&self, x: &[f64], y: &mut [f64]) {
        let v = &self.0 * nalgebra::DVector::from_column_slice(x);
        y.copy_from_slice(v.as_slice());
    }

    fn to_dense(&self) -> DMatrix<f64> {
        self.0.clone()
    }
}

/// Clamped bi-Laplace eigenpairs Δ²u = Λu.
///
/// `OperatorSquare` solves (K M_L⁻¹ K) v = Λ M_L v; its eigenvectors are the
/// lumped Laplace eigenvectors and Λ_k = λ_k². `Mixed` solves the w = Δu
/// first-order system whose Schur complement is (K M_C⁻¹ K) v = Λ M_C v with
/// the consistent mass.
pub fn bilaplace_eigs(
    ops: &OperatorPair<'_>,
    opts: &SolveOptions,
    method: BiLaplaceMethod,
) -> Result<EigenResult> {
    let k = &ops.stiffness;
    match method {
        BiLaplaceMethod::OperatorSquare => {
            if ops.mass_mode != MassMode::Lumped {
                return Err(invalid(
                    "mass_mode",
                    "operator-square bi-Laplacian needs lumped mass (M⁻¹ must stay diagonal)",
                ));
            }
            let a = k.triple_product_diag_inv(&ops.mass.diagonal());
            let s = solve_gen_sym(&a, &ops.mass, None, opts)?;
            Ok(EigenResult::from_solution(Problem::BiLaplace, Some(method), s))
        }
        BiLaplaceMethod::Mixed => {
            let consistent;
            let mass = if ops.mass_mode == MassMode::Consistent {
                &ops.mass
            } else {
                consistent = assemble_mass(ops.mesh, MassMode::Consistent);
                &consistent
            };
            let s = solve_mixed(k, mass, MixedRhs::Mass, opts)?;
            Ok(EigenResult::from_solution(Problem::BiLaplace, Some(method), s))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MixedRhs {
    Mass,
    Stiffness,
}

/// (K M⁻¹ K) v = μ B v with B = M or B = K and M consistent.
///
/// Iterative: σ = 0 with the inverse K⁺ M K⁺ on the M-orthogonal complement
/// of constants, then a bookkeeping (0, constant) pair is prepended. Dense:
/// K M⁻¹ K is formed through a dense Cholesky factor of M; constants are
/// deflated only for B = K, the one case where they span the kernel of both
/// sides.
fn solve_mixed(k: &SparseSymMatrix, mass: &SparseSymMatrix, rhs: MixedRhs, opts: &SolveOptions) -> Result<Solution> {
    if opts.count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    opts.validate(k.order())?;
    let b = match rhs {
        MixedRhs::Mass => mass,
        MixedRhs::Stiffness => k,
    };
    let deflation = Deflation::constants(mass);
    let wanted = opts.count - 1;
    match opts.resolve_mode(k.order()) {
        SolverMode::Dense => {
            let chol = nalgebra::Cholesky::new(mass.to_dense())
                .ok_or(Error::NotPositiveDefinite { pivot: 0, value: f64::NAN })?;
            let kd = k.to_dense();
            let a = DenseOperator(&kd * chol.solve(&kd));
            if rhs == MixedRhs::Mass {
                let pencil = Pencil { a: &a, b, deflation: None };
                solve_pencil(&pencil, None, opts.count, opts.tol, SolverMode::Dense)
            } else {
                let pencil = Pencil {
                    a: &a,
                    b,
                    deflation: Some(&deflation),
                };
                let s = solve_pencil(&pencil, None, wanted, opts.tol, SolverMode::Dense)?;
                Ok(prepend_constant(&pencil, mass, s))
            }
        }
        SolverMode::Iterative => {
            let a = MixedOperator {
                stiffness: k,
                mass: SkylineCholesky::factor(mass, None)?,
            };
            let inverse = MixedInverse {
                pinned_stiffness: SkylineCholesky::factor(k, Some(deflation.pivot_index()))?,
                mass,
                deflation: &deflation,
            };
            let pencil = Pencil {
                a: &a,
                b,
                deflation: Some(&deflation),
            };
            let s = solve_pencil(&pencil, Some(&inverse), wanted, opts.tol, SolverMode::Iterative)?;
            Ok(prepend_constant(&pencil, mass, s))
        }
    }
}

/// Buckling eigenpairs Δ²u = ΓΔu, discretized as (K M⁻¹ K) v = Γ K v on the
/// M-orthogonal complement of constants. With lumped mass K M⁻¹ K is
/// assembled; with consistent mass it is applied through factors as in the
/// mixed bi-Laplace method. A bookkeeping (0, constant) pair is prepended, so
/// index k ≥ 1 holds the k-th nonzero value.
pub fn buckling_eigs(ops: &OperatorPair<'_>, opts: &SolveOptions) -> Result<EigenResult> {
    let k = &ops.stiffness;
    if ops.mass_mode == MassMode::Consistent {
        let s = solve_mixed(k, &ops.mass, MixedRhs::Stiffness, opts)?;
        return Ok(EigenResult::from_solution(Problem::Buckling, None, s));
    }
    if opts.count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    let a = k.triple_product_diag_inv(&ops.mass.diagonal());
    let deflation = Deflation::constants(&ops.mass);
    let inner = SolveOptions {
        count: opts.count - 1,
        ..*opts
    };
    let s = solve_gen_sym(&a, k, Some(&deflation), &inner)?;
    let pencil = Pencil {
        a: &a,
        b: k,
        deflation: Some(&deflation),
    };
    let s = prepend_constant(&pencil, &ops.mass, s);
    Ok(EigenResult::from_solution(Problem::Buckling, None, s))
}

/// Rayleigh quotient xᵀAx / xᵀBx.
pub fn rayleigh_quotient(a: &dyn LinearOperator, b: &dyn LinearOperator, x: &[f64]) -> f64 {
    dot(x, &a.apply(x)) / dot(x, &b.apply(x))
}
