use thiserror::Error;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("unknown backend {0}")]
    UnknownBackend(String),
    #[error("key is bound to a different circuit (digest mismatch)")]
    DigestMismatch,
    #[error("witness does not satisfy the constraint system: {0}")]
    UnsatisfiedWitness(String),
    #[error("backend {expected} cannot handle material from {got}")]
    BackendMismatch { expected: String, got: String },
    #[error("proving failed: {0}")]
    Proving(String),
    #[error("serialization failed: {0}")]
    Serialization(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
