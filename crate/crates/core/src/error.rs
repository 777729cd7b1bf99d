use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: u64, msg: String },

    #[error("duplicate frequency {0}")]
    DuplicateFrequency(f64),

    #[error("non-positive frequency {0}")]
    NonPositiveFrequency(f64),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("aliasing guard: step {step} with max frequency {lambda_max} exceeds {limit}")]
    Aliasing { step: f64, lambda_max: f64, limit: f64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("outside the domain of the {method} method: {msg}")]
    OutOfDomain { method: &'static str, msg: String },

    #[error("unknown strategy `{name}` (available: {available})")]
    UnknownStrategy { name: String, available: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}
