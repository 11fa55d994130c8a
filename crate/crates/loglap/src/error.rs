//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by special functions, field evaluation, quadrature, and
/// operator application.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation was requested at (or across) a singular point of a field.
    #[error("singular point: {0}")]
    Singular(String),

    /// A quadrature could not meet its error budget; carries the bound that
    /// was actually achieved so callers can degrade gracefully.
    #[error("accuracy failure: achieved {achieved:.3e}, requested {requested:.3e}")]
    Accuracy { achieved: f64, requested: f64 },

    /// Configuration or report I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed configuration file or report document.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
