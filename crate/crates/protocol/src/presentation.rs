//! Presentation creation and verification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use zkcred_arith::FieldElement;
use zkcred_backend::{Proof, ProofBackend, VerificationKey};
use zkcred_circuits::scenario::PublicSlot;
use zkcred_circuits::{
    assemble_vp_circuit, witness, CredentialEvidence, PredicateSpec, ScenarioSpec, VpInputs,
};
use zkcred_core::{verify_raw_attachment, AttributeValue};

use crate::request::{ProofRequest, RequestPredicate};
use crate::wallet::Wallet;
use crate::ProtocolError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RevealedAttribute {
    pub credential: usize,
    pub position: usize,
    pub value: FieldElement,
    /// Raw value for leaves that need re-encoding (long strings).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<AttributeValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifiablePresentation {
    #[serde(rename = "requestId")]
    pub request_id: String,
    pub backend: String,
    #[serde(rename = "circuitDigest")]
    pub circuit_digest: FieldElement,
    pub proof: Proof,
    pub revealed: Vec<RevealedAttribute>,
}

/// Convert a (possibly field-negated) scaled coordinate leaf back to a
/// signed integer for native predicate evaluation.
fn leaf_to_signed(v: FieldElement) -> i128 {
    let b = v.to_biguint();
    let p = FieldElement::modulus();
    if &b > &(&p >> 1) {
        -(i128::try_from(p - b).unwrap_or(i128::MAX))
    } else {
        i128::try_from(b).unwrap_or(i128::MAX)
    }
}

fn predicate_public_values(
    request: &ProofRequest,
    spec: &ScenarioSpec,
    credentials: &[CredentialEvidence],
) -> Result<witness::PredicatePublicValues, ProtocolError> {
    let mut out = witness::PredicatePublicValues::default();
    let polygons = request.polygon_public_vertices();
    let mut poly_i = 0;
    for p in &request.predicates {
        match p {
            RequestPredicate::RangeLt {
                credential,
                position,
                bound,
            } => {
                let attr = credentials[*credential].content[*position];
                let lt = attr.to_biguint() < bound.to_biguint();
                out.range_bounds.push(*bound);
                out.range_results
                    .push(FieldElement::from_u64(u64::from(lt)));
            }
            RequestPredicate::PolygonInbound {
                credential,
                x_position,
                y_position,
                vertices,
                ..
            } => {
                let x = leaf_to_signed(credentials[*credential].content[*x_position]) as i64;
                let y = leaf_to_signed(credentials[*credential].content[*y_position]) as i64;
                let ring: Vec<(i64, i64)> = vertices
                    .iter()
                    .map(|&(a, b)| ((a * 1e7).round() as i64, (b * 1e7).round() as i64))
                    .collect();
                let inside =
                    zkcred_circuits::gadgets::polygon::polygon_inbound_native(x, y, &ring);
                out.polygon_vertices.push(polygons[poly_i].clone());
                out.polygon_results
                    .push(FieldElement::from_u64(u64::from(inside)));
                poly_i += 1;
            }
            RequestPredicate::LinkEquality {
                credential_a,
                position_a,
                credential_b,
                position_b,
            } => {
                // a holder-side refusal: unequal attributes would make the
                // system unsatisfiable, so fail without leaking anything
                if credentials[*credential_a].content[*position_a]
                    != credentials[*credential_b].content[*position_b]
                {
                    return Err(ProtocolError::LinkMismatch);
                }
            }
        }
    }
    let _ = spec;
    Ok(out)
}

/// Create a presentation for a request. Covers single credentials,
/// chains (request.chain_depth) and multi-credential link requests.
pub fn create_presentation(
    wallet: &Wallet,
    request: &ProofRequest,
    backend: &dyn ProofBackend,
) -> Result<VerifiablePresentation, ProtocolError> {
    let spec = request.to_scenario_spec()?;
    let binding_msg = spec.binding_message(request.challenge, request.timestamp);

    // locate credentials
    let mut chosen: Vec<usize> = Vec::new();
    if request.chain_depth.is_some() {
        let leaf_req = &request.requested[0];
        let leaf = wallet.find_matching(
            leaf_req.schema_hash,
            leaf_req.registry.registry_ref,
            &[],
            request.timestamp,
        )?;
        chosen.push(leaf);
        // walk up: the parent holds the current issuer key as binding key
        for _ in 1..spec.credentials.len() {
            let current = &wallet.credentials[*chosen.last().unwrap()].credential;
            let parent = wallet
                .credentials
                .iter()
                .position(|s| {
                    s.credential.meta[zkcred_core::META_BINDING_X] == current.issuer_pk.x
                        && s.credential.meta[zkcred_core::META_BINDING_Y] == current.issuer_pk.y
                })
                .ok_or(ProtocolError::ChainDepth {
                    expected: spec.credentials.len(),
                    got: chosen.len(),
                })?;
            chosen.push(parent);
        }
        // the top of the chain must be signed by a trusted issuer
        let top = &wallet.credentials[*chosen.last().unwrap()].credential;
        if !request.trusted_issuers.is_empty()
            && !request.trusted_issuers.contains(&top.issuer_pk)
        {
            return Err(ProtocolError::NoMatchingCredential);
        }
    } else {
        for req in &request.requested {
            chosen.push(wallet.find_matching(
                req.schema_hash,
                req.registry.registry_ref,
                &request.trusted_issuers,
                request.timestamp,
            )?);
        }
    }

    // evidence: leaf (or all unchained credentials) signs the challenge
    let mut credentials = Vec::new();
    for (slot_idx, &cred_idx) in chosen.iter().enumerate() {
        let needs_binding = !spec.chained || slot_idx == 0;
        let msg = needs_binding.then_some(binding_msg);
        credentials.push(wallet.evidence(cred_idx, msg)?);
    }

    let predicates = predicate_public_values(request, &spec, &credentials)?;

    let mut inputs = VpInputs {
        challenge: request.challenge,
        timestamp: request.timestamp,
        credentials,
        predicates,
        verifier_pk: None,
        verifier_sig: None,
    };
    if let Some(dv) = &request.designated_verifier {
        inputs.verifier_pk = Some((dv.signing_pk.x, dv.signing_pk.y));
        // honest holders fill the repudiation branch with a well-formed
        // signature under a throwaway key; it evaluates to invalid
        let throwaway = zkcred_arith::eddsa_keygen(rand::random());
        let sig = zkcred_arith::eddsa_sign(&throwaway, request.challenge);
        inputs.verifier_sig = Some(CredentialEvidence::sig_tuple(&sig));
    }

    let circuit = assemble_vp_circuit(&spec)?;
    let digest = circuit.cs.digest();
    let publics = witness::fill_public_inputs(&spec, &circuit.layout, &inputs)?;
    let privates = witness::fill_private_inputs(&spec, &circuit.layout, &inputs)?;
    let pk = wallet.proving_key(&digest)?;
    let proof = backend.prove(pk, &circuit.cs, &publics.values, &privates)?;

    // revealed attributes plus raw attachments for long-string leaves
    let mut revealed = Vec::new();
    for (slot_idx, &cred_idx) in chosen.iter().enumerate() {
        let stored = &wallet.credentials[cred_idx];
        for &pos in &spec.credentials[slot_idx].revealed_positions {
            revealed.push(RevealedAttribute {
                credential: slot_idx,
                position: pos,
                value: stored.credential.content[pos],
                raw: stored.credential.raw_attributes.get(&pos).cloned(),
            });
        }
    }

    Ok(VerifiablePresentation {
        request_id: request.request_id.clone(),
        backend: backend.id().to_string(),
        circuit_digest: digest,
        proof,
        revealed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcceptedRegistry {
    pub root: FieldElement,
    pub version: u64,
    /// When the verifier last confirmed this root, UNIX seconds.
    pub fetched_at: u64,
}

/// Local verifier policy: accepted registry roots, verification keys by
/// circuit digest, and the clock.
#[derive(Default)]
pub struct VerifierConfig {
    /// Registry ref (hex) to the root the verifier currently accepts.
    pub registries: BTreeMap<String, AcceptedRegistry>,
    pub verification_keys: BTreeMap<String, VerificationKey>,
    pub now: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Verify a presentation against the request it answers. Failures land
/// in the report, never as errors.
pub fn verify_presentation(
    request: &ProofRequest,
    vp: &VerifiablePresentation,
    backend: &dyn ProofBackend,
    config: &VerifierConfig,
) -> VerificationReport {
    let mut report = VerificationReport { checks: Vec::new() };

    let spec = match request.to_scenario_spec() {
        Ok(s) => s,
        Err(e) => {
            report.push("request", false, format!("unusable request: {e}"));
            return report;
        }
    };
    let circuit = match assemble_vp_circuit(&spec) {
        Ok(c) => c,
        Err(e) => {
            report.push("request", false, format!("circuit assembly failed: {e}"));
            return report;
        }
    };
    let digest = circuit.cs.digest();
    report.push(
        "circuit-digest",
        digest == vp.circuit_digest,
        format!("expected {}", digest.to_hex()),
    );

    // proof validity under the key pinned for this digest
    match config.verification_keys.get(&digest.to_hex()) {
        Some(vk) => {
            let ok = backend
                .verify(vk, &vp.proof, &vp.proof.public_inputs)
                .unwrap_or(false);
            report.push("proof", ok, "backend verification");
        }
        None => report.push("proof", false, "no verification key for this circuit"),
    }

    let publics = &vp.proof.public_inputs;
    if publics.len() != circuit.layout.publics.len() {
        report.push(
            "public-inputs",
            false,
            format!(
                "expected {} public inputs, got {}",
                circuit.layout.publics.len(),
                publics.len()
            ),
        );
        return report;
    }

    let value_of = |slot: &PublicSlot| -> Option<FieldElement> {
        circuit
            .layout
            .publics
            .iter()
            .position(|s| s == slot)
            .map(|i| publics[i])
    };

    report.push(
        "challenge",
        value_of(&PublicSlot::Challenge) == Some(request.challenge),
        "presentation echoes the request challenge",
    );
    report.push(
        "timestamp",
        value_of(&PublicSlot::Timestamp) == Some(FieldElement::from_u64(request.timestamp)),
        "presentation echoes the request timestamp",
    );

    // per-credential document checks
    let n_creds = spec.credentials.len();
    for c in 0..n_creds {
        let req = if request.chain_depth.is_some() {
            &request.requested[0]
        } else {
            &request.requested[c]
        };
        if request.chain_depth.is_none() || c == 0 {
            report.push(
                format!("schema[{c}]"),
                value_of(&PublicSlot::SchemaHash(c)) == Some(req.schema_hash),
                "schema hash matches the request",
            );
            report.push(
                format!("registry-ref[{c}]"),
                value_of(&PublicSlot::RegistryRef(c)) == Some(req.registry.registry_ref),
                "registry reference matches the request",
            );
        }
        let root_slot = value_of(&PublicSlot::RegistryRoot(c));
        let ref_slot = value_of(&PublicSlot::RegistryRef(c));
        let recognized = ref_slot
            .and_then(|r| config.registries.get(&r.to_hex()))
            .map(|acc| {
                let fresh = config.now.saturating_sub(acc.fetched_at)
                    <= req.registry.max_age_seconds
                    && acc.version >= req.registry.min_version;
                (Some(acc.root) == root_slot, fresh)
            });
        match recognized {
            Some((matches, fresh)) => {
                report.push(
                    format!("registry-root[{c}]"),
                    matches,
                    "root recognized by verifier policy",
                );
                report.push(
                    format!("registry-freshness[{c}]"),
                    fresh,
                    "root within the accepted age and version",
                );
            }
            None => report.push(
                format!("registry-root[{c}]"),
                false,
                "registry not in verifier policy",
            ),
        }
    }

    // issuer keys: top of chain only when chained
    let issuer_indices: Vec<usize> = if spec.chained {
        vec![n_creds - 1]
    } else {
        (0..n_creds).collect()
    };
    for c in issuer_indices {
        let x = value_of(&PublicSlot::IssuerPkX(c));
        let y = value_of(&PublicSlot::IssuerPkY(c));
        let trusted = match (x, y) {
            (Some(x), Some(y)) => request
                .trusted_issuers
                .iter()
                .any(|pk| pk.x == x && pk.y == y),
            _ => false,
        };
        report.push(
            format!("issuer-trusted[{c}]"),
            trusted,
            "issuer key in the trusted set",
        );
    }

    // revealed values match the public wires; raw attachments re-encode
    for r in &vp.revealed {
        let slot_idx = spec.credentials[r.credential]
            .revealed_positions
            .iter()
            .position(|&p| p == r.position);
        let ok = slot_idx
            .and_then(|i| {
                value_of(&PublicSlot::RevealValue {
                    credential: r.credential,
                    index: i,
                })
            })
            .map(|v| v == r.value)
            .unwrap_or(false);
        report.push(
            format!("revealed[{}][{}]", r.credential, r.position),
            ok,
            "revealed value equals the proof's public input",
        );
        if let Some(raw) = &r.raw {
            report.push(
                format!("raw-attachment[{}][{}]", r.credential, r.position),
                verify_raw_attachment(raw, r.value),
                "raw attribute re-encodes to its leaf",
            );
        }
    }

    // predicate outputs
    let mut range_i = 0usize;
    let mut poly_i = 0usize;
    for (p, pred) in spec.predicates.iter().enumerate() {
        match pred {
            PredicateSpec::RangeLt { .. } => {
                let bound_ok = match &request.predicates[p] {
                    RequestPredicate::RangeLt { bound, .. } => {
                        value_of(&PublicSlot::RangeBound(p)) == Some(*bound)
                    }
                    _ => false,
                };
                let result_ok =
                    value_of(&PublicSlot::RangeResult(p)) == Some(FieldElement::ONE);
                report.push(
                    format!("predicate-range[{range_i}]"),
                    bound_ok && result_ok,
                    "range predicate holds against the requested bound",
                );
                range_i += 1;
            }
            PredicateSpec::PolygonInbound { vertex_count, .. } => {
                let expected = request.polygon_public_vertices();
                let mut vertices_ok = true;
                for v in 0..*vertex_count {
                    let x = value_of(&PublicSlot::PolygonVertexX {
                        predicate: p,
                        vertex: v,
                    });
                    let y = value_of(&PublicSlot::PolygonVertexY {
                        predicate: p,
                        vertex: v,
                    });
                    if x != Some(expected[poly_i][v].0) || y != Some(expected[poly_i][v].1) {
                        vertices_ok = false;
                    }
                }
                let want_inside = match &request.predicates[p] {
                    RequestPredicate::PolygonInbound { expect_inside, .. } => *expect_inside,
                    _ => true,
                };
                let result_ok = value_of(&PublicSlot::PolygonResult(p))
                    == Some(FieldElement::from_u64(u64::from(want_inside)));
                report.push(
                    format!("predicate-polygon[{poly_i}]"),
                    vertices_ok && result_ok,
                    "polygon predicate evaluated over the requested region",
                );
                poly_i += 1;
            }
            PredicateSpec::LinkEquality { .. } => {
                // satisfiability of the proof carries the evidence
            }
        }
    }

    report
}
