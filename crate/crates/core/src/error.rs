use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value {value} is not on the dyadic grid with exponent {c}")]
    OffGrid { value: f64, c: u32 },

    #[error("budget too large for enumeration: count bound {bound} exceeds limit {limit}")]
    BudgetTooLarge { bound: String, limit: u64 },

    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("epsilon {eps} outside the admissible range (0, {eps0})")]
    EpsilonOutOfRange { eps: f64, eps0: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
