use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("no stored credential matches the request (code NO_MATCH)")]
    NoMatchingCredential,
    #[error("credential is revoked (code REVOKED)")]
    Revoked,
    #[error("credential is expired (code EXPIRED)")]
    Expired,
    #[error("local registry state is stale (code STALE_REGISTRY)")]
    StaleRegistry,
    #[error("no proving key cached for circuit digest {0} (code NO_PROVING_KEY)")]
    MissingProvingKey(String),
    #[error("request demands a chain of depth {expected}, wallet holds {got}")]
    ChainDepth { expected: usize, got: usize },
    #[error("linked attributes differ; refusing to prove (code LINK_MISMATCH)")]
    LinkMismatch,
    #[error("designated-verifier keys missing from the request")]
    MissingVerifierKeys,
    #[error("ciphertext rejected: {0}")]
    Decryption(String),
    #[error("carryover binding keys do not match")]
    CarryoverMismatch,
    #[error(transparent)]
    Circuit(#[from] zkcred_circuits::CircuitError),
    #[error(transparent)]
    Backend(#[from] zkcred_backend::BackendError),
    #[error(transparent)]
    Core(#[from] zkcred_core::CoreError),
    #[error(transparent)]
    Registry(#[from] zkcred_registry::RegistryError),
    #[error(transparent)]
    Arith(#[from] zkcred_arith::ArithError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl ProtocolError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ProtocolError::NoMatchingCredential => "NO_MATCH",
            ProtocolError::Revoked => "REVOKED",
            ProtocolError::Expired => "EXPIRED",
            ProtocolError::StaleRegistry => "STALE_REGISTRY",
            ProtocolError::MissingProvingKey(_) => "NO_PROVING_KEY",
            ProtocolError::ChainDepth { .. } => "CHAIN_DEPTH",
            ProtocolError::LinkMismatch => "LINK_MISMATCH",
            ProtocolError::MissingVerifierKeys => "MISSING_VERIFIER_KEYS",
            ProtocolError::Decryption(_) => "DECRYPTION",
            ProtocolError::CarryoverMismatch => "CARRYOVER_MISMATCH",
            ProtocolError::Circuit(_) => "CIRCUIT",
            ProtocolError::Backend(_) => "BACKEND",
            ProtocolError::Core(_) => "CORE",
            ProtocolError::Registry(_) => "REGISTRY",
            ProtocolError::Arith(_) => "ARITH",
            ProtocolError::Json(_) => "JSON",
        }
    }
}
