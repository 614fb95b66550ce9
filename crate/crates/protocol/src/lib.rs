//! The verifiable-presentation protocol: proof requests, wallet-side
//! presentation creation, verifier-side checking, credential chaining,
//! cross-credential linking, designated-verifier envelopes and
//! issuer-privacy binding carryover.

pub mod carryover;
pub mod dv;
pub mod presentation;
pub mod request;
pub mod wallet;

mod error;

pub use carryover::{issue_with_carryover, CarryoverBundle};
pub use dv::{DvEnvelope, EncryptionKeyPair};
pub use error::ProtocolError;
pub use presentation::{
    create_presentation, verify_presentation, CheckResult, VerifiablePresentation,
    VerificationReport, VerifierConfig,
};
pub use request::{
    CredentialRequest, DesignatedVerifierKeys, ProofRequest, RegistryPolicy, RequestPredicate,
};
pub use wallet::{StoredCredential, Wallet};
