use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation.
    #[error("invalid input: {0}")]
    Domain(String),

    /// A well-formed request this library deliberately does not handle.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    /// Matrix dimension or problem size above the configured cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A numerical or combinatorial check did not hold.
    #[error("verification failed: {0}")]
    Verification(String),

    /// Two exact computations disagree; indicates a bug rather than bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("eigensolver failed: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
