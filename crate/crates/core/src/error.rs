use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("dimension mismatch: expected {expected} species, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("reaction {reaction} is not applicable")]
    NotApplicable { reaction: usize },

    #[error("decider precondition violated: {0}")]
    Dispatch(String),

    #[error("rules do not share a single (k,k-1) size: {0}")]
    MixedK(String),

    #[error("invalid inhibitor ordering: {0}")]
    InvalidOrdering(String),

    #[error("assignment is not a perfect b-matching")]
    ImperfectMatching,

    #[error("certificates are not supported here: {0}")]
    UnsupportedCertificate(String),

    #[error("step {position} of the sequence is not applicable")]
    Inapplicable { position: usize },

    #[error("missing or insufficient bound: {0}")]
    MissingBound(String),

    #[error("invalid source problem: {0}")]
    InvalidSource(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
