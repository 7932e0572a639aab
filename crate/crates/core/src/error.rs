use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires even degree, got d = {0}")]
    OddDegree(u32),

    #[error("operation requires {what}, got q = {q}")]
    Divisibility { q: u32, what: String },

    #[error("capacity exceeded: {what} needs {needed}, cap is {cap}")]
    Capacity {
        what: String,
        needed: u128,
        cap: u128,
    },

    #[error("polynomial is not multilinear (exponent {0} > 1 present)")]
    NotMultilinear(u32),

    #[error("polynomial has a negative coefficient ({0})")]
    NegativeCoefficient(f64),

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NonSymmetric(f64),

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("candidate set is empty")]
    EmptyCandidateSet,

    #[error("integer overflow in {0}")]
    Overflow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
