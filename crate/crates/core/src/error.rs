use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("short string exceeds 31 bytes (got {0})")]
    ShortStringTooLong(usize),
    #[error("short strings must be single-byte characters")]
    NonAsciiShortString,
    #[error("float is not finite")]
    NonFiniteFloat,
    #[error("value out of encodable range")]
    OutOfRange,
    #[error("attribute {position} does not match schema kind {expected}")]
    SchemaMismatch { position: usize, expected: String },
    #[error("schema positions must be unique and below the content width")]
    InvalidSchema,
    #[error("leaf count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("index {index} out of range for {len} leaves")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("revocation id {id} exceeds registry capacity {capacity}")]
    CapacityExceeded { id: u64, capacity: u64 },
    #[error("content width must be a power of two between 8 and 32")]
    InvalidContentWidth,
    #[error("expected {expected} attributes, got {got}")]
    AttributeCount { expected: usize, got: usize },
    #[error("timestamp predates the UNIX epoch")]
    NegativeTimestamp,
    #[error(transparent)]
    Arith(#[from] zkcred_arith::ArithError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
