//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Vector or matrix shapes do not compose.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Invalid configuration value (bad sigma, missing projection, unknown key, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Numerical failure: non-finite state, blow-up, failed factorization.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Spike train with zero recorded time steps.
    #[error("empty trace: {0}")]
    EmptyTrace(String),

    /// Metric undefined for the given inputs (e.g. zero-norm reference).
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed dataset, model, or CSV artifact on disk.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
