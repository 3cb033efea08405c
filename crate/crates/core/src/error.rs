use thiserror::Error;

/// Errors reported by the library. Out-of-range element access is a
/// programming error and panics instead.
#[derive(Debug, Error)]
pub enum BmfError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested exact search is larger than the configured limit.
    #[error("problem too large for exact search: {0}")]
    Capability(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("undefined: {0}")]
    Undefined(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, BmfError>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(BmfError::Dimension(msg.into()))
}

pub(crate) fn param_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(BmfError::InvalidParameter(msg.into()))
}
