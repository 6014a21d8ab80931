use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Instances above the configured vertex limit are refused outright
    /// rather than accepted and left to crawl.
    #[error("instance too large: {n} vertices exceeds the limit of {limit}")]
    InstanceTooLarge { n: usize, limit: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    /// The degree hypothesis promised a perfect matching and none exists
    /// at this scale.
    #[error("no perfect matching: {0}")]
    NoPerfectMatching(String),

    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for an [`Error::InvalidArgument`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
