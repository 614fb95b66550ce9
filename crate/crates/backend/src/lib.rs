//! Proof backends behind one interface. The sound backend is pairing
//! based with a circuit-specific single-party setup (the setup secrets
//! must be destroyed by the operator; no ceremony is provided). The dev
//! backend re-evaluates the constraint system and emits a consistency
//! token: not sound against adversaries and not zero-knowledge, it
//! exists so protocol logic can be differential-tested cheaply.

mod dev;
mod error;
mod groth16;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use zkcred_arith::FieldElement;
use zkcred_circuits::ConstraintSystem;

pub use dev::DevBackend;
pub use error::BackendError;
pub use groth16::Groth16Backend;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProvingKey {
    pub backend: String,
    pub circuit_digest: FieldElement,
    #[serde(with = "base64_bytes")]
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationKey {
    pub backend: String,
    pub circuit_digest: FieldElement,
    #[serde(with = "base64_bytes")]
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Proof {
    pub backend: String,
    #[serde(with = "base64_bytes")]
    pub bytes: Vec<u8>,
    pub public_inputs: Vec<FieldElement>,
}

pub trait ProofBackend: Send + Sync {
    fn id(&self) -> &'static str;

    /// Circuit-specific setup; keys are bound to the circuit digest.
    fn setup(
        &self,
        cs: &ConstraintSystem,
        seed: [u8; 32],
    ) -> Result<(ProvingKey, VerificationKey), BackendError>;

    /// Refuses to prove on an unsatisfied witness or a digest mismatch.
    fn prove(
        &self,
        pk: &ProvingKey,
        cs: &ConstraintSystem,
        publics: &[FieldElement],
        privates: &[FieldElement],
    ) -> Result<Proof, BackendError>;

    /// Malformed proof bytes verify as false, not as an error.
    fn verify(
        &self,
        vk: &VerificationKey,
        proof: &Proof,
        publics: &[FieldElement],
    ) -> Result<bool, BackendError>;
}

pub fn backend_by_id(id: &str) -> Result<Box<dyn ProofBackend>, BackendError> {
    match id {
        "groth16" => Ok(Box::new(Groth16Backend)),
        "dev" => Ok(Box::new(DevBackend)),
        other => Err(BackendError::UnknownBackend(other.to_string())),
    }
}

/// Sidecar manifest written beside key material.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KeyManifest {
    pub backend: String,
    #[serde(rename = "circuitDigest")]
    pub circuit_digest: FieldElement,
    #[serde(rename = "createdAt")]
    pub created_at: String,
}

/// {name}.pk, {name}.vk and {name}.manifest.json under `dir`.
pub fn save_keys(
    dir: &Path,
    name: &str,
    pk: &ProvingKey,
    vk: &VerificationKey,
) -> Result<(), BackendError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(format!("{name}.pk")), &pk.bytes)?;
    fs::write(dir.join(format!("{name}.vk")), &vk.bytes)?;
    let manifest = KeyManifest {
        backend: pk.backend.clone(),
        circuit_digest: pk.circuit_digest,
        created_at: chrono::Utc::now().to_rfc3339(),
    };
    fs::write(
        dir.join(format!("{name}.manifest.json")),
        serde_json::to_vec_pretty(&manifest)?,
    )?;
    Ok(())
}

pub fn load_keys(dir: &Path, name: &str) -> Result<(ProvingKey, VerificationKey), BackendError> {
    let manifest: KeyManifest =
        serde_json::from_slice(&fs::read(dir.join(format!("{name}.manifest.json")))?)?;
    let pk_bytes = fs::read(dir.join(format!("{name}.pk")))?;
    let vk_bytes = fs::read(dir.join(format!("{name}.vk")))?;
    Ok((
        ProvingKey {
            backend: manifest.backend.clone(),
            circuit_digest: manifest.circuit_digest,
            bytes: pk_bytes,
        },
        VerificationKey {
            backend: manifest.backend,
            circuit_digest: manifest.circuit_digest,
            bytes: vk_bytes,
        },
    ))
}

mod base64_bytes {
    use base64::Engine;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&base64::engine::general_purpose::STANDARD.encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        base64::engine::general_purpose::STANDARD
            .decode(s)
            .map_err(serde::de::Error::custom)
    }
}
