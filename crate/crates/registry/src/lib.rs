//! Revocation registry: one status bit per credential, 252 bits packed
//! into each leaf of a depth-n Poseidon Merkle tree, so a depth-n registry
//! covers 2^n * 252 credentials. Mutations are versioned and logged as
//! deltas; clients replay deltas instead of refetching the tree, or hold
//! only a bottom subtree plus the upper node levels (hybrid sync).

pub mod bitmap;
pub mod client;
pub mod delta;
pub mod hybrid;
pub mod service;
pub mod store;

mod error;

pub use bitmap::{capacity, locate, NonRevocationWitness, RevocationRegistry, Status, BITS_PER_LEAF};
pub use client::{ClientRegistryState, RegistryClient};
pub use delta::{StatusChange, StatusDelta};
pub use error::RegistryError;
pub use hybrid::{hybrid_sync_plan, HybridSyncPlan, SubtreeState};
pub use service::{registry_service, ServiceState};
pub use store::RegistryStore;
