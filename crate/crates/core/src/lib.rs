//! Credential data model: typed attribute encoding into field-element
//! leaves, schema and registry-descriptor hashing, Merkle construction
//! over the fixed 8+8 leaf layout, and issuance.

pub mod credential;
pub mod encoding;
pub mod merkle;
pub mod schema;

mod error;

pub use credential::{
    meta_layout, Credential, CredentialDocument, MetaInputs, META_BINDING_X, META_BINDING_Y,
    META_DELEGATABLE, META_EXPIRATION, META_REGISTRY_REF, META_RESERVED, META_REVOCATION_ID,
    META_SCHEMA_HASH,
};
pub use encoding::{encode, encode_long_string, verify_raw_attachment, AttributeValue, EncodedLeaf};
pub use error::CoreError;
pub use merkle::{merkle_prove, merkle_root, merkle_verify, MerklePath};
pub use schema::{
    canonical_json_bytes, registry_ref_hash, AttributeKind, RegistryDescriptor, Schema,
    SchemaAttribute,
};
