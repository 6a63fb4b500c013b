//! Shared error type for the laboratory.

/// Errors raised by the library.
///
/// Unbounded *dual values* are not errors (see [`crate::admm::DualEval`]);
/// `Unbounded` here means a subproblem that was required to attain its
/// minimum did not.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unbounded below: {0}")]
    Unbounded(String),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),

    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
