use thiserror::Error;

/// Errors raised by the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A size or order parameter is outside the supported range.
    #[error("configuration error: {0}")]
    Config(String),
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data failed a structural check (e.g. a non-Hermitian matrix).
    #[error("validation error: {0}")]
    Validation(String),
    /// An iterative method ran out of budget; carries its best estimate.
    #[error("accuracy error: {message} (best estimate {best:e}, error estimate {error_estimate:e})")]
    Accuracy {
        message: String,
        best: f64,
        error_estimate: f64,
    },
    /// The linear value is not representable; the log-scale value is attached.
    #[error("overflow: {message} (log value {log_value})")]
    Overflow { message: String, log_value: f64 },
    /// The route cannot deliver binary64 accuracy at this size.
    #[error("precision unsupported: {0}")]
    PrecisionUnsupported(String),
    /// Input file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
