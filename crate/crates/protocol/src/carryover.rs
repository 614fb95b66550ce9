//! Binding carryover: the holder proves to a prospective issuer that the
//! binding key behind a prior presentation also sits under the metadata
//! sub-root of the credential being drafted, without revealing the key.
//! The issuer embeds that sub-root when it signs.

use serde::{Deserialize, Serialize};

use zkcred_arith::{poseidon_hash, CurvePoint, FieldElement, Signature, SigningKeyPair};
use zkcred_backend::{Proof, ProofBackend, ProvingKey, VerificationKey};
use zkcred_circuits::gadgets::poseidon::{poseidon, poseidon2};
use zkcred_circuits::{ConstraintSystem, Lc};
use zkcred_core::{meta_root_with_binding_node, MetaInputs, Schema};

use crate::ProtocolError;

/// What the holder hands the issuer: the commitment the prior
/// presentation output, the draft's binding sub-root, and a proof the
/// same key sits behind both. Neither coordinate of the key appears.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarryoverBundle {
    pub challenge: FieldElement,
    /// H(binding.x, binding.y, challenge) as output by the prior VP.
    pub prior_commitment: FieldElement,
    /// H(binding.x, binding.y): the metadata node covering leaves 2 and 3.
    pub sub_root: FieldElement,
    pub backend: String,
    #[serde(rename = "circuitDigest")]
    pub circuit_digest: FieldElement,
    pub proof: Proof,
}

/// publics: [challenge, prior_commitment, sub_root]; privates: [bx, by].
pub fn carryover_circuit() -> ConstraintSystem {
    let mut cs = ConstraintSystem::new();
    let challenge = cs.alloc_public();
    let prior = cs.alloc_public();
    let sub_root = cs.alloc_public();
    let bx = cs.alloc_private();
    let by = cs.alloc_private();
    let commit = poseidon(&mut cs, &[bx.clone(), by.clone(), challenge]);
    cs.assert_equal(&commit, &prior);
    let node = poseidon2(&mut cs, &bx, &by);
    cs.assert_equal(&node, &sub_root);
    let _ = Lc::one();
    cs
}

pub fn create_carryover(
    binding: &SigningKeyPair,
    challenge: FieldElement,
    backend: &dyn ProofBackend,
    pk: &ProvingKey,
) -> Result<CarryoverBundle, ProtocolError> {
    let cs = carryover_circuit();
    let bx = binding.public.x;
    let by = binding.public.y;
    let prior = poseidon_hash(&[bx, by, challenge])?;
    let sub_root = poseidon_hash(&[bx, by])?;
    let publics = vec![challenge, prior, sub_root];
    let proof = backend.prove(pk, &cs, &publics, &[bx, by])?;
    Ok(CarryoverBundle {
        challenge,
        prior_commitment: prior,
        sub_root,
        backend: backend.id().to_string(),
        circuit_digest: cs.digest(),
        proof,
    })
}

/// Issuer-side check: the bundle proves knowledge of one key behind the
/// prior commitment and the draft sub-root, bound to the session
/// challenge. `prior_commitment_from_vp` is the output the issuer saw in
/// the holder's earlier presentation.
pub fn verify_carryover(
    bundle: &CarryoverBundle,
    prior_commitment_from_vp: FieldElement,
    session_challenge: FieldElement,
    backend: &dyn ProofBackend,
    vk: &VerificationKey,
) -> Result<bool, ProtocolError> {
    if bundle.prior_commitment != prior_commitment_from_vp
        || bundle.challenge != session_challenge
    {
        return Ok(false);
    }
    let cs = carryover_circuit();
    if bundle.circuit_digest != cs.digest() {
        return Ok(false);
    }
    let publics = vec![
        bundle.challenge,
        bundle.prior_commitment,
        bundle.sub_root,
    ];
    if bundle.proof.public_inputs != publics {
        return Ok(false);
    }
    Ok(backend.verify(vk, &bundle.proof, &publics)?)
}

/// Issuer half of a carryover issuance: everything except the binding
/// leaves, which enter through the sub-root. Returns the signed root and
/// the pieces the holder needs to assemble the credential.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarryoverIssuance {
    pub meta_root: FieldElement,
    pub content: Vec<FieldElement>,
    pub root: FieldElement,
    pub signature: Signature,
    #[serde(rename = "issuerPk")]
    pub issuer_pk: CurvePoint,
}

#[allow(clippy::too_many_arguments)]
pub fn issue_with_carryover(
    issuer: &SigningKeyPair,
    schema: &Schema,
    draft: &MetaInputs,
    content: Vec<FieldElement>,
    bundle: &CarryoverBundle,
    prior_commitment_from_vp: FieldElement,
    session_challenge: FieldElement,
    backend: &dyn ProofBackend,
    vk: &VerificationKey,
) -> Result<CarryoverIssuance, ProtocolError> {
    if !verify_carryover(
        bundle,
        prior_commitment_from_vp,
        session_challenge,
        backend,
        vk,
    )? {
        return Err(ProtocolError::CarryoverMismatch);
    }
    let schema_hash = schema.schema_hash()?;
    // the draft's binding fields are ignored; the sub-root stands in
    let meta_root = meta_root_with_binding_node(draft, schema_hash, bundle.sub_root);
    let content_root = zkcred_core::merkle_root(&content)?;
    let root = poseidon_hash(&[meta_root, content_root])?;
    let signature = zkcred_arith::eddsa_sign(issuer, root);
    Ok(CarryoverIssuance {
        meta_root,
        content,
        root,
        signature,
        issuer_pk: issuer.public,
    })
}
