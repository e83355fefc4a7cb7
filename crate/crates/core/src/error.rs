use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, unknown label, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Input is well formed but outside what an operation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The completion space exceeds the enumeration guard.
    #[error("instance has {count} completions, above the limit of {limit}; pass the force flag to search anyway")]
    TooManyCompletions { count: String, limit: u64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A cross-check between independent methods failed.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("time limit exceeded")]
    Timeout,
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
