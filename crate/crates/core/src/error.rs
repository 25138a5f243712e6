use thiserror::Error;

/// Errors raised by the library. Every variant is a domain or parameter
/// error; arithmetic itself is exact and cannot fail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("value must be positive")]
    NonPositive,

    #[error("value must be at least 1, got {0}")]
    BelowOne(String),

    #[error("{0} is outside the domain [{1}, {2}]")]
    OutOfDomain(String, String, String),

    #[error("malformed number {0:?}")]
    Parse(String),

    #[error("digit {digit} not in 1..={max}")]
    InvalidDigit { digit: u64, max: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expansion has no terms")]
    EmptyExpansion,

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expansion has {have} terms, need more than {need}")]
    TooFewTerms { have: usize, need: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
