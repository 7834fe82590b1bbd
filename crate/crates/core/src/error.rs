use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed space: {0}")]
    Structural(String),
    #[error("points {0} and {1} are not causally related")]
    NotRelated(String, String),
    #[error("causal relation has a 2-cycle between {0} and {1}")]
    NonCausal(usize, usize),
    #[error("space too large for exhaustive search: {n} points (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("unrealizable side lengths: {0}")]
    Unrealizable(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parameter {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("not supported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
