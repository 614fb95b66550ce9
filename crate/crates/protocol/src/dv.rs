//! Designated-verifier envelopes: the serialized presentation travels
//! encrypted under the verifier's encryption key (ephemeral
//! Diffie-Hellman over the embedded curve, key derivation through
//! SHA-256, ChaCha20-Poly1305 for the payload). Only the key holder can
//! read it, and the OR branch inside the circuit makes what they read
//! repudiable.

use base64::Engine;
use chacha20poly1305::aead::{Aead, KeyInit};
use chacha20poly1305::{ChaCha20Poly1305, Key, Nonce};
use num_bigint::BigUint;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use zkcred_arith::{CurvePoint, FieldElement, BASE8, SUBGROUP_ORDER};

use crate::presentation::VerifiablePresentation;
use crate::ProtocolError;

#[derive(Clone, Debug)]
pub struct EncryptionKeyPair {
    secret: BigUint,
    pub public: CurvePoint,
}

impl EncryptionKeyPair {
    pub fn from_seed(seed: [u8; 32]) -> Self {
        let expanded = zkcred_arith::blake512(&seed);
        let secret = BigUint::from_bytes_le(&expanded) % &*SUBGROUP_ORDER;
        let public = BASE8.mul_scalar(&secret);
        EncryptionKeyPair { secret, public }
    }

    pub fn generate<R: RngCore>(rng: &mut R) -> Self {
        let mut seed = [0u8; 32];
        rng.fill_bytes(&mut seed);
        Self::from_seed(seed)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DvEnvelope {
    #[serde(rename = "ephemeralPk")]
    pub ephemeral_pk: CurvePoint,
    pub nonce: String,
    pub ciphertext: String,
}

fn derive_key(shared: &CurvePoint) -> Key {
    let mut h = Sha256::new();
    h.update(b"designated-verifier-envelope-v1");
    h.update(shared.x.to_bytes_le());
    h.update(shared.y.to_bytes_le());
    let out = h.finalize();
    *Key::from_slice(&out)
}

pub fn encrypt_presentation<R: RngCore>(
    vp: &VerifiablePresentation,
    verifier_encryption_pk: &CurvePoint,
    rng: &mut R,
) -> Result<DvEnvelope, ProtocolError> {
    let mut seed = [0u8; 32];
    rng.fill_bytes(&mut seed);
    let eph = EncryptionKeyPair::from_seed(seed);
    let shared = verifier_encryption_pk.mul_scalar(&eph.secret);
    let cipher = ChaCha20Poly1305::new(&derive_key(&shared));
    let mut nonce_bytes = [0u8; 12];
    rng.fill_bytes(&mut nonce_bytes);
    let nonce = Nonce::from_slice(&nonce_bytes);
    let plaintext = serde_json::to_vec(vp)?;
    let ciphertext = cipher
        .encrypt(nonce, plaintext.as_slice())
        .map_err(|e| ProtocolError::Decryption(e.to_string()))?;
    let b64 = base64::engine::general_purpose::STANDARD;
    Ok(DvEnvelope {
        ephemeral_pk: eph.public,
        nonce: b64.encode(nonce_bytes),
        ciphertext: b64.encode(ciphertext),
    })
}

pub fn decrypt_presentation(
    envelope: &DvEnvelope,
    keys: &EncryptionKeyPair,
) -> Result<VerifiablePresentation, ProtocolError> {
    let shared = envelope.ephemeral_pk.mul_scalar(&keys.secret);
    let cipher = ChaCha20Poly1305::new(&derive_key(&shared));
    let b64 = base64::engine::general_purpose::STANDARD;
    let nonce_bytes = b64
        .decode(&envelope.nonce)
        .map_err(|e| ProtocolError::Decryption(e.to_string()))?;
    if nonce_bytes.len() != 12 {
        return Err(ProtocolError::Decryption("bad nonce length".into()));
    }
    let ciphertext = b64
        .decode(&envelope.ciphertext)
        .map_err(|e| ProtocolError::Decryption(e.to_string()))?;
    let plaintext = cipher
        .decrypt(Nonce::from_slice(&nonce_bytes), ciphertext.as_slice())
        .map_err(|_| ProtocolError::Decryption("authentication failed".into()))?;
    Ok(serde_json::from_slice(&plaintext)?)
}

/// A forged presentation produced by someone who knows the verifier's
/// signing key: every credential check collapses to the repudiation
/// branch. Exists to demonstrate (and test) repudiability.
pub fn forge_presentation_with_verifier_key(
    request: &crate::ProofRequest,
    verifier_signing: &zkcred_arith::SigningKeyPair,
    backend: &dyn zkcred_backend::ProofBackend,
    proving_key: &zkcred_backend::ProvingKey,
) -> Result<VerifiablePresentation, ProtocolError> {
    use zkcred_circuits::{assemble_vp_circuit, witness, CredentialEvidence, VpInputs};

    let spec = request.to_scenario_spec()?;
    let circuit = assemble_vp_circuit(&spec)?;
    // garbage-but-well-formed evidence: random field elements, on-curve
    // signature points from throwaway keys
    let mut rng = rand::thread_rng();
    let throwaway = zkcred_arith::eddsa_keygen(rand::Rng::gen(&mut rng));
    let junk_sig = zkcred_arith::eddsa_sign(&throwaway, FieldElement::ZERO);
    let junk_sig_tuple = CredentialEvidence::sig_tuple(&junk_sig);
    let mut credentials = Vec::new();
    for (i, slot) in spec.credentials.iter().enumerate() {
        let needs_binding = !spec.chained || i == 0;
        // structural rows (bit decompositions, point arithmetic) must stay
        // satisfiable, so numeric leaves are small and curve points valid;
        // the validity checks themselves are soft and collapse to b = 1
        let mut meta: Vec<FieldElement> = (0..8)
            .map(|_| FieldElement::from_u64(rand::Rng::gen::<u32>(&mut rng) as u64))
            .collect();
        meta[2] = throwaway.public.x;
        meta[3] = throwaway.public.y;
        meta[5] = FieldElement::from_u64(request.timestamp + 1);
        credentials.push(CredentialEvidence {
            meta,
            content: (0..slot.content_width)
                .map(|_| FieldElement::from_u64(rand::Rng::gen::<u16>(&mut rng) as u64))
                .collect(),
            issuer_pk: (throwaway.public.x, throwaway.public.y),
            issuer_sig: junk_sig_tuple,
            holder_sig: needs_binding.then_some(junk_sig_tuple),
            registry_leaf: FieldElement::from_u64(rand::Rng::gen::<u64>(&mut rng)),
            registry_siblings: (0..slot.registry_depth as usize)
                .map(|_| FieldElement::random(&mut rng))
                .collect(),
            registry_root: FieldElement::random(&mut rng),
        });
    }
    // predicate publics claimed as requested
    let mut predicates = witness::PredicatePublicValues::default();
    let polys = request.polygon_public_vertices();
    let mut poly_i = 0;
    for p in &request.predicates {
        match p {
            crate::RequestPredicate::RangeLt { bound, .. } => {
                predicates.range_bounds.push(*bound);
                predicates.range_results.push(FieldElement::ONE);
            }
            crate::RequestPredicate::PolygonInbound { expect_inside, .. } => {
                predicates.polygon_vertices.push(polys[poly_i].clone());
                predicates
                    .polygon_results
                    .push(FieldElement::from_u64(u64::from(*expect_inside)));
                poly_i += 1;
            }
            crate::RequestPredicate::LinkEquality { .. } => {}
        }
    }

    // the real verifier signature makes b = 1
    let dv = request
        .designated_verifier
        .as_ref()
        .ok_or(ProtocolError::MissingVerifierKeys)?;
    assert_eq!(
        dv.signing_pk, verifier_signing.public,
        "forgery requires the verifier's own signing key"
    );
    let sig = zkcred_arith::eddsa_sign(verifier_signing, request.challenge);

    let inputs = VpInputs {
        challenge: request.challenge,
        timestamp: request.timestamp,
        credentials,
        predicates,
        verifier_pk: Some((dv.signing_pk.x, dv.signing_pk.y)),
        verifier_sig: Some(CredentialEvidence::sig_tuple(&sig)),
    };
    let publics = witness::fill_public_inputs(&spec, &circuit.layout, &inputs)?;
    let privates = witness::fill_private_inputs(&spec, &circuit.layout, &inputs)?;
    let proof = backend.prove(proving_key, &circuit.cs, &publics.values, &privates)?;
    Ok(VerifiablePresentation {
        request_id: request.request_id.clone(),
        backend: backend.id().to_string(),
        circuit_digest: circuit.cs.digest(),
        proof,
        revealed: Vec::new(),
    })
}
