use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("division by zero in the field")]
    DivisionByZero,

    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(u64),

    #[error("insufficient shares: need {needed}, got {got}")]
    InsufficientShares { needed: usize, got: usize },

    #[error("share at x = {x} does not lie on the reconstructed polynomial")]
    Inconsistent { x: u64 },

    #[error("hidden channel too small: {required} bytes required, {available} available")]
    Capacity { required: usize, available: usize },

    #[error("unsupported modulus {0}: chunking needs p > 2^56")]
    UnsupportedModulus(u64),

    #[error("embedded digest does not match the reconstructed message")]
    DigestMismatch,

    #[error("corrupted data: {0}")]
    Corrupted(String),

    #[error(transparent)]
    Parse(#[from] crate::codec::ParseError),
}
