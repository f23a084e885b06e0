use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("radii do not lie on the unit sphere: r1^2 + r2^2 = {sum}")]
    RadiiNotOnSphere { sum: f64 },

    #[error("chart arity mismatch: {0}")]
    ChartArity(String),

    #[error("unsupported dimension {0}: meshes and operators support n = 1 or n = 2")]
    UnsupportedDimension(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate simplex {index}: measure {measure:e} below threshold {threshold:e}")]
    DegenerateSimplex {
        index: usize,
        measure: f64,
        threshold: f64,
    },

    #[error("spectrum of kind {found} given where {expected} was required")]
    WrongProblem {
        expected: &'static str,
        found: &'static str,
    },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("requested {count} eigenpairs but the problem has order {order}")]
    CountExceedsOrder { count: usize, order: usize },

    #[error("order {order} exceeds the {mode} solver cap of {cap}")]
    OrderOverCap {
        order: usize,
        cap: usize,
        mode: &'static str,
    },

    #[error("eigensolver did not converge after {restarts} restarts (worst residual {worst_residual:e})")]
    NoConvergence {
        restarts: usize,
        worst_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("{0}")]
    Mismatch(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
