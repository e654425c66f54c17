use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponents a={a}, b={b}: {reason}")]
    InvalidFamily { a: u32, b: u32, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("eigenvalue bracket failure for level {level}: {detail}")]
    Bracket { level: usize, detail: String },

    #[error("no convergence after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },

    #[error("solution not decayed at x_max={x_max}: tail ratio {ratio:e}")]
    NotDecayed { x_max: f64, ratio: f64 },

    #[error("reference norm {norm:e} is below threshold")]
    NormTooSmall { norm: f64 },

    #[error("chain term {order}: boundary mismatch {mismatch:e} exceeds tolerance {tolerance:e} (E_n inconsistent)")]
    BoundaryMismatch { order: usize, mismatch: f64, tolerance: f64 },

    #[error("constraints={constraints} unknowns={unknowns}")]
    ConstraintCount { constraints: usize, unknowns: usize },

    #[error("duplicate constraint: {0}")]
    DuplicateConstraint(String),

    #[error("missing series data: {0}")]
    MissingSeries(String),

    #[error("singular system at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("denominator has positive roots {roots:?}")]
    Defective { roots: Vec<f64> },

    #[error("every mu candidate is defective: {0}")]
    AllDefective(String),

    #[error("pole of the approximant at lambda={lambda}")]
    Pole { lambda: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
