use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("dimension {dim} out of range (allowed {lo}..={hi})")]
    DimensionOutOfRange { dim: i64, lo: i64, hi: i64 },

    #[error("simplex {0} is not in the complex")]
    NotInComplex(String),

    #[error("operation requires the {expected} model")]
    ModelMismatch { expected: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("size envelope exceeded: {0}")]
    EnvelopeExceeded(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
