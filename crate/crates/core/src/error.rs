//! Error type shared by every module.

use thiserror::Error;

/// Broad category of a failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input or a failed structural audit.
    Invalid,
    /// Input is well formed but a mathematical precondition does not hold.
    Precondition,
    /// Random search for a generic object ran out of attempts.
    Genericity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no generic choice found after {attempts} attempts: {what}")]
    GenericityExhausted { attempts: usize, what: String },

    #[error("integer overflow in exact kernel")]
    Overflow,

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_)
            | Error::Invalid(_)
            | Error::DimensionMismatch { .. }
            | Error::Unknown { .. }
            | Error::Json(_) => ErrorClass::Invalid,
            Error::Precondition(_) | Error::Overflow => ErrorClass::Precondition,
            Error::GenericityExhausted { .. } => ErrorClass::Genericity,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
