use thiserror::Error;

/// Errors raised by the lattice, tracker, oracle and estimator layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An exact computation was refused rather than approximated.
    #[error("budget exceeded for {what}: requires {required}, budget is {budget}")]
    Budget {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("kernel failed at replicate {replicate}: {msg}")]
    Kernel { replicate: u64, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
