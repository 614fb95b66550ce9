use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("registry depth {0} out of range 1..=24")]
    DepthOutOfRange(u32),
    #[error("revocation id {id} exceeds capacity {capacity}")]
    IdOutOfRange { id: u64, capacity: u64 },
    #[error("credential {0} is revoked; no non-revocation witness exists")]
    Revoked(u64),
    #[error("delta version {got} does not extend local version {local}")]
    VersionGap { local: u64, got: u64 },
    #[error("leaf {leaf} lies outside the synchronized subtree")]
    LeafOutsideSubtree { leaf: u64 },
    #[error("missing upper node {index} for hybrid witness")]
    MissingUpperNode { index: u64 },
    #[error("unknown registry {0}")]
    UnknownRegistry(String),
    #[error("status update signature rejected")]
    BadAuthorization,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("transport: {0}")]
    Transport(String),
    #[error(transparent)]
    Arith(#[from] zkcred_arith::ArithError),
}
