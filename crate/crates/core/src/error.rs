use thiserror::Error;

/// Errors raised by the factorization pipeline and its data structures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument {arg} out of range 1..={max}")]
    Range { arg: usize, max: usize },

    #[error("{0} is not defined for this node")]
    Domain(String),

    #[error("workspace state error: expected {expected}, found {found}")]
    State { expected: String, found: String },

    #[error("inconsistent suffix structures: {0}")]
    Construction(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("malformed stream: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn range(arg: usize, max: usize) -> Error {
    Error::Range { arg, max }
}

pub(crate) fn state(expected: impl ToString, found: impl ToString) -> Error {
    Error::State {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
