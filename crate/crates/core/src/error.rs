use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An input violated a documented precondition (non-Hermitian input, zero test vector, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The evaluation point or coordinate lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric range exceeded: {0}")]
    NumericRange(String),

    /// A matrix that must be inverted is singular or too badly conditioned.
    #[error("singular matrix ({context}): condition estimate {condition:e}")]
    Singular { context: String, condition: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// Configuration document rejected; `key` is the JSON path of the offending field.
    #[error("parse error at `{key}`: {message}")]
    Parse { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn parse(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            key: key.into(),
            message: message.into(),
        }
    }
}
