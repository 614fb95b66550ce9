//! Transparent development backend: re-evaluates the constraint system
//! and emits token = H(circuit digest, folded public inputs). Anyone can
//! forge a token, and nothing is hidden; it exists purely as a fast
//! differential-testing double for the sound backend and must agree with
//! it on every accept/reject decision.

use zkcred_arith::{poseidon_hash, FieldElement};
use zkcred_circuits::ConstraintSystem;

use crate::{BackendError, Proof, ProofBackend, ProvingKey, VerificationKey};

pub struct DevBackend;

fn token(digest: FieldElement, publics: &[FieldElement]) -> FieldElement {
    let mut acc = digest;
    for v in publics {
        acc = poseidon_hash(&[acc, *v]).expect("arity 2");
    }
    acc
}

impl ProofBackend for DevBackend {
    fn id(&self) -> &'static str {
        "dev"
    }

    fn setup(
        &self,
        cs: &ConstraintSystem,
        _seed: [u8; 32],
    ) -> Result<(ProvingKey, VerificationKey), BackendError> {
        let digest = cs.digest();
        Ok((
            ProvingKey {
                backend: self.id().into(),
                circuit_digest: digest,
                bytes: Vec::new(),
            },
            VerificationKey {
                backend: self.id().into(),
                circuit_digest: digest,
                bytes: Vec::new(),
            },
        ))
    }

    fn prove(
        &self,
        pk: &ProvingKey,
        cs: &ConstraintSystem,
        publics: &[FieldElement],
        privates: &[FieldElement],
    ) -> Result<Proof, BackendError> {
        if pk.backend != self.id() {
            return Err(BackendError::BackendMismatch {
                expected: self.id().into(),
                got: pk.backend.clone(),
            });
        }
        if pk.circuit_digest != cs.digest() {
            return Err(BackendError::DigestMismatch);
        }
        cs.evaluate(publics, privates)
            .map_err(|e| BackendError::UnsatisfiedWitness(e.to_string()))?;
        let t = token(pk.circuit_digest, publics);
        Ok(Proof {
            backend: self.id().into(),
            bytes: t.to_bytes_le().to_vec(),
            public_inputs: publics.to_vec(),
        })
    }

    fn verify(
        &self,
        vk: &VerificationKey,
        proof: &Proof,
        publics: &[FieldElement],
    ) -> Result<bool, BackendError> {
        if vk.backend != self.id() || proof.backend != self.id() {
            return Ok(false);
        }
        if proof.bytes.len() != 32 {
            return Ok(false);
        }
        Ok(proof.bytes == token(vk.circuit_digest, publics).to_bytes_le())
    }
}
