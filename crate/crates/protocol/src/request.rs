//! Proof requests: what the verifier asks for, carrying everything the
//! wallet needs to assemble the exact circuit the verifier will accept.

use serde::{Deserialize, Serialize};

use zkcred_arith::{CurvePoint, FieldElement};
use zkcred_circuits::{CredentialSlot, PredicateSpec, ScenarioSpec};

use crate::ProtocolError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegistryPolicy {
    /// Registry descriptor hash the credential must reference.
    pub registry_ref: FieldElement,
    /// Registry depth; part of the circuit shape.
    pub depth: u32,
    /// Minimum registry version the verifier will accept.
    #[serde(default)]
    pub min_version: u64,
    /// Maximum root age in seconds the verifier will accept.
    #[serde(default = "default_max_age")]
    pub max_age_seconds: u64,
}

fn default_max_age() -> u64 {
    86_400
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CredentialRequest {
    pub schema_hash: FieldElement,
    #[serde(default)]
    pub reveal_positions: Vec<usize>,
    #[serde(default)]
    pub content_width: Option<usize>,
    pub registry: RegistryPolicy,
}

/// Declarative predicate descriptors; the wallet assembles gadgets from
/// them, so a request fully determines the circuit digest.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RequestPredicate {
    RangeLt {
        credential: usize,
        position: usize,
        /// Public bound the attribute must stay below.
        bound: FieldElement,
    },
    PolygonInbound {
        credential: usize,
        x_position: usize,
        y_position: usize,
        /// Decimal-degree vertices; scaled and offset like coordinates.
        vertices: Vec<(f64, f64)>,
        /// Required result (1 = inside).
        expect_inside: bool,
    },
    LinkEquality {
        credential_a: usize,
        position_a: usize,
        credential_b: usize,
        position_b: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignatedVerifierKeys {
    /// Key the presentation ciphertext is encrypted under.
    pub encryption_pk: CurvePoint,
    /// Key whose signature forms the repudiation branch of the circuit.
    pub signing_pk: CurvePoint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofRequest {
    pub request_id: String,
    /// Fresh verifier randomness; a presentation binds to it.
    pub challenge: FieldElement,
    /// Verifier-chosen timestamp, echoed as a public input.
    pub timestamp: u64,
    pub requested: Vec<CredentialRequest>,
    #[serde(default)]
    pub predicates: Vec<RequestPredicate>,
    pub trusted_issuers: Vec<CurvePoint>,
    /// Expected chain depth; requested[0] describes the leaf credential
    /// and chained ancestors reuse its registry policy.
    #[serde(default)]
    pub chain_depth: Option<usize>,
    #[serde(default)]
    pub designated_verifier: Option<DesignatedVerifierKeys>,
    /// Ask the leaf presentation to output H(binding pk, challenge) for
    /// issuer-side binding carryover.
    #[serde(default)]
    pub binding_commitment: bool,
    pub backend: String,
}

impl ProofRequest {
    /// The circuit this request describes.
    pub fn to_scenario_spec(&self) -> Result<ScenarioSpec, ProtocolError> {
        let mut credentials = Vec::new();
        let chained = self.chain_depth.is_some();
        if let Some(depth) = self.chain_depth {
            if depth < 2 {
                return Err(ProtocolError::Circuit(
                    zkcred_circuits::CircuitError::InvalidSpec(
                        "chain depth must be at least 2".into(),
                    ),
                ));
            }
            let leaf = self.requested.first().ok_or_else(|| {
                ProtocolError::Circuit(zkcred_circuits::CircuitError::InvalidSpec(
                    "chain request needs a leaf credential".into(),
                ))
            })?;
            for i in 0..depth {
                let mut slot = CredentialSlot::new(
                    leaf.registry.depth,
                    if i == 0 {
                        leaf.reveal_positions.clone()
                    } else {
                        Vec::new()
                    },
                );
                if let Some(w) = leaf.content_width {
                    slot.content_width = w;
                }
                credentials.push(slot);
            }
        } else {
            for req in &self.requested {
                let mut slot = CredentialSlot::new(req.registry.depth, req.reveal_positions.clone());
                if let Some(w) = req.content_width {
                    slot.content_width = w;
                }
                credentials.push(slot);
            }
        }
        let mut predicates = Vec::new();
        for p in &self.predicates {
            let spec = match p {
                RequestPredicate::RangeLt {
                    credential,
                    position,
                    ..
                } => PredicateSpec::RangeLt {
                    credential: *credential,
                    position: *position,
                },
                RequestPredicate::PolygonInbound {
                    credential,
                    x_position,
                    y_position,
                    vertices,
                    ..
                } => PredicateSpec::PolygonInbound {
                    credential: *credential,
                    x_position: *x_position,
                    y_position: *y_position,
                    vertex_count: vertices.len(),
                },
                RequestPredicate::LinkEquality {
                    credential_a,
                    position_a,
                    credential_b,
                    position_b,
                } => PredicateSpec::LinkEquality {
                    credential_a: *credential_a,
                    position_a: *position_a,
                    credential_b: *credential_b,
                    position_b: *position_b,
                },
            };
            predicates.push(spec);
        }
        // predicate attributes that are not revealed must be bound hidden
        for p in &predicates {
            let mut bind = |c: usize, pos: usize| {
                let slot = &mut credentials[c];
                if !slot.revealed_positions.contains(&pos) && !slot.hidden_positions.contains(&pos)
                {
                    slot.hidden_positions.push(pos);
                }
            };
            match p {
                PredicateSpec::RangeLt {
                    credential,
                    position,
                } => bind(*credential, *position),
                PredicateSpec::PolygonInbound {
                    credential,
                    x_position,
                    y_position,
                    ..
                } => {
                    bind(*credential, *x_position);
                    bind(*credential, *y_position);
                }
                PredicateSpec::LinkEquality {
                    credential_a,
                    position_a,
                    credential_b,
                    position_b,
                } => {
                    bind(*credential_a, *position_a);
                    bind(*credential_b, *position_b);
                }
            }
        }
        Ok(ScenarioSpec {
            credentials,
            chained,
            predicates,
            designated_verifier: self.designated_verifier.is_some(),
            binding_commitment_output: self.binding_commitment,
        })
    }

    /// Offset-shifted polygon vertices per polygon predicate, in
    /// predicate order.
    pub fn polygon_public_vertices(&self) -> Vec<Vec<(FieldElement, FieldElement)>> {
        use zkcred_circuits::gadgets::polygon::coordinate_offset;
        let off = coordinate_offset();
        self.predicates
            .iter()
            .filter_map(|p| match p {
                RequestPredicate::PolygonInbound { vertices, .. } => Some(
                    vertices
                        .iter()
                        .map(|&(x, y)| {
                            let sx = (x * 1e7).round() as i128;
                            let sy = (y * 1e7).round() as i128;
                            (
                                FieldElement::from_i128(sx) + off,
                                FieldElement::from_i128(sy) + off,
                            )
                        })
                        .collect(),
                ),
                _ => None,
            })
            .collect()
    }
}
