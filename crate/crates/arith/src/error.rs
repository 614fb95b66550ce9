use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("poseidon arity {0} out of range 1..=16")]
    InvalidArity(usize),
    #[error("byte string does not encode a canonical field element")]
    NonCanonicalBytes,
    #[error("invalid hex encoding: {0}")]
    InvalidHex(String),
    #[error("point is not on the curve")]
    InvalidKey,
    #[error("scalar exceeds the subgroup order")]
    ScalarOutOfRange,
}
