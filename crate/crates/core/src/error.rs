use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined domain: {0}")]
    UndefinedDomain(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("degenerate dimension: {0}")]
    DegenerateDimension(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used for error rows in sweep records.
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::UndefinedDomain(_) => "undefined-domain",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::ResourceLimit(_) => "resource-limit",
            Error::ConvergenceFailure { .. } => "convergence-failure",
            Error::DegenerateDimension(_) => "degenerate-dimension",
            Error::EmptyInput(_) => "empty-input",
            Error::UnsupportedTarget(_) => "unsupported-target",
            Error::NoSolution(_) => "no-solution",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
