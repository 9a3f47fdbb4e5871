use thiserror::Error;

/// Errors produced by model validation, data handling and simulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "stick-breaking did not reach the truncation tolerance within {max_sticks} sticks (residual {residual:e})"
    )]
    TruncationCap { max_sticks: usize, residual: f64 },

    #[error("{path}:{line}: {message}")]
    Data { path: String, line: u64, message: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
