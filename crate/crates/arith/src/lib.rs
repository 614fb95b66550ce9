//! Native cryptographic primitives shared by issuance, the revocation
//! registry and the circuit gadget library: the 254-bit scalar field,
//! the Baby Jubjub embedded curve, the Poseidon permutation and the
//! EdDSA-Poseidon signature scheme.
//!
//! Everything in this crate is pure and immutable after construction, so
//! values can be shared freely across threads.

mod blake512;
mod curve;
mod eddsa;
mod error;
mod field;
pub mod poseidon;

pub use blake512::blake512;
pub use curve::{CurvePoint, BASE8, CURVE_ORDER, GENERATOR, SUBGROUP_ORDER};
pub use eddsa::{eddsa_keygen, eddsa_sign, eddsa_verify, Signature, SigningKeyPair};
pub use error::ArithError;
pub use field::FieldElement;
pub use poseidon::poseidon_hash;
