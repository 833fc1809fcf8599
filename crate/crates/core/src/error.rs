use thiserror::Error;

/// Errors raised by parameter validation, the estimators and the job runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or run parameter violates its constraint.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// A weight was requested on functionals that cannot come from a genuine path.
    #[error("degenerate path functionals: {0}")]
    Domain(String),

    /// An oracle was asked for a configuration it cannot price.
    #[error("unsupported oracle: {0}")]
    UnsupportedOracle(String),

    /// Two accumulators covering overlapping or non-adjacent path ranges were merged.
    #[error("cannot merge accumulators over ranges {left:?} and {right:?}")]
    RangeMismatch {
        left: (u64, u64),
        right: (u64, u64),
    },

    #[error("invalid job: {0}")]
    Job(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
