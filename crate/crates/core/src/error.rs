use thiserror::Error;

use crate::field::FieldSpec;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    SpecMismatch { left: FieldSpec, right: FieldSpec },

    #[error("division by zero")]
    DivisionByZero,

    #[error("infinite field {0}: enumeration is only defined over finite fields")]
    InfiniteField(FieldSpec),

    #[error("resource cap exceeded: field order {q} is above the enumeration cap {cap}")]
    CapExceeded { q: u64, cap: u64 },

    #[error("singular matrix")]
    Singular,

    #[error("characteristic mismatch: {family} is not defined over {field}")]
    CharMismatch { family: String, field: FieldSpec },

    #[error("arity mismatch for {family}: expected {expected} parameters, got {got}")]
    Arity {
        family: String,
        expected: usize,
        got: usize,
    },

    #[error("sampling budget exceeded: {tuples} parameter tuples, budget {budget}")]
    SamplingBudget { tuples: u128, budget: u64 },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
