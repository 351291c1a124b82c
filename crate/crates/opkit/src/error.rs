use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid probability vector: {0}")]
    Simplex(String),
    #[error("invalid density matrix: {0}")]
    Density(String),
    #[error("invalid measurement: {0}")]
    Measurement(String),
    #[error("invalid channel: {0}")]
    Channel(String),
    #[error("eigensolver did not converge within the sweep cap")]
    NoConvergence,
    #[error("factorization failure: {0}")]
    Factorization(String),
    #[error("invalid entropy family: {0}")]
    Family(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid table: {0}")]
    Table(String),
    #[error("degenerate structure: {0}")]
    Degenerate(String),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
