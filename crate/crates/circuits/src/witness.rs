//! Maps protocol-level evidence (credentials, registry witnesses,
//! signatures, request data) onto the wire order the assembler declared.

use serde::{Deserialize, Serialize};

use zkcred_arith::{FieldElement, Signature};

use crate::scenario::{PrivateSlot, PublicSlot, ScenarioSpec, VpLayout};
use crate::CircuitError;

/// Everything the holder knows about one credential in a presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CredentialEvidence {
    pub meta: Vec<FieldElement>,
    /// All content leaves, in position order.
    pub content: Vec<FieldElement>,
    pub issuer_pk: (FieldElement, FieldElement),
    pub issuer_sig: (FieldElement, FieldElement, FieldElement),
    /// Holder-binding signature over the binding message, where required.
    pub holder_sig: Option<(FieldElement, FieldElement, FieldElement)>,
    pub registry_leaf: FieldElement,
    pub registry_siblings: Vec<FieldElement>,
    pub registry_root: FieldElement,
}

impl CredentialEvidence {
    pub fn sig_tuple(sig: &Signature) -> (FieldElement, FieldElement, FieldElement) {
        (sig.r.x, sig.r.y, sig.s)
    }

    fn content_sibling(&self, position: usize, level: usize) -> FieldElement {
        // sibling subtree root over the block next to the path at `level`
        let width = 1usize << level;
        let base = ((position >> level) ^ 1) << level;
        let mut nodes: Vec<FieldElement> = self.content[base..base + width].to_vec();
        while nodes.len() > 1 {
            nodes = nodes
                .chunks(2)
                .map(|p| zkcred_arith::poseidon::hash2(p[0], p[1]))
                .collect();
        }
        nodes[0]
    }

    fn content_root(&self) -> FieldElement {
        let mut nodes = self.content.clone();
        while nodes.len() > 1 {
            nodes = nodes
                .chunks(2)
                .map(|p| zkcred_arith::poseidon::hash2(p[0], p[1]))
                .collect();
        }
        nodes[0]
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PredicatePublicValues {
    /// Bound per RangeLt predicate, in predicate order.
    pub range_bounds: Vec<FieldElement>,
    pub range_results: Vec<FieldElement>,
    /// Offset-shifted vertex list per polygon predicate.
    pub polygon_vertices: Vec<Vec<(FieldElement, FieldElement)>>,
    pub polygon_results: Vec<FieldElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VpInputs {
    pub challenge: FieldElement,
    pub timestamp: u64,
    pub credentials: Vec<CredentialEvidence>,
    pub predicates: PredicatePublicValues,
    /// Verifier signing key for designated-verifier presentations, plus
    /// the signature witness branch (honest holders supply a well-formed
    /// signature under a throwaway key, which evaluates to invalid).
    pub verifier_pk: Option<(FieldElement, FieldElement)>,
    pub verifier_sig: Option<(FieldElement, FieldElement, FieldElement)>,
}

/// The ordered public-input vector plus a labeled view of it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VpPublicInputs {
    pub values: Vec<FieldElement>,
}

pub fn fill_public_inputs(
    spec: &ScenarioSpec,
    layout: &VpLayout,
    inputs: &VpInputs,
) -> Result<VpPublicInputs, CircuitError> {
    let mut values = Vec::with_capacity(layout.publics.len());
    for slot in &layout.publics {
        let v = match slot {
            PublicSlot::Challenge => inputs.challenge,
            PublicSlot::Timestamp => FieldElement::from_u64(inputs.timestamp),
            PublicSlot::SchemaHash(c) => inputs.credentials[*c].meta[1],
            PublicSlot::RegistryRef(c) => inputs.credentials[*c].meta[4],
            PublicSlot::RegistryRoot(c) => inputs.credentials[*c].registry_root,
            PublicSlot::IssuerPkX(c) => inputs.credentials[*c].issuer_pk.0,
            PublicSlot::IssuerPkY(c) => inputs.credentials[*c].issuer_pk.1,
            PublicSlot::RevealPosition { credential, index } => {
                let pos = spec.credentials[*credential].revealed_positions[*index];
                FieldElement::from_u64(pos as u64)
            }
            PublicSlot::RevealValue { credential, index } => {
                let pos = spec.credentials[*credential].revealed_positions[*index];
                inputs.credentials[*credential].content[pos]
            }
            PublicSlot::RangeBound(p) => {
                let i = range_index(spec, *p);
                inputs.predicates.range_bounds[i]
            }
            PublicSlot::RangeResult(p) => {
                let i = range_index(spec, *p);
                inputs.predicates.range_results[i]
            }
            PublicSlot::PolygonVertexX { predicate, vertex } => {
                let i = polygon_index(spec, *predicate);
                inputs.predicates.polygon_vertices[i][*vertex].0
            }
            PublicSlot::PolygonVertexY { predicate, vertex } => {
                let i = polygon_index(spec, *predicate);
                inputs.predicates.polygon_vertices[i][*vertex].1
            }
            PublicSlot::PolygonResult(p) => {
                let i = polygon_index(spec, *p);
                inputs.predicates.polygon_results[i]
            }
            PublicSlot::BindingCommitment => {
                let c0 = &inputs.credentials[0];
                zkcred_arith::poseidon_hash(&[c0.meta[2], c0.meta[3], inputs.challenge])
                    .expect("arity 3")
            }
            PublicSlot::VerifierPkX => {
                inputs
                    .verifier_pk
                    .ok_or_else(|| CircuitError::InvalidSpec("missing verifier key".into()))?
                    .0
            }
            PublicSlot::VerifierPkY => {
                inputs
                    .verifier_pk
                    .ok_or_else(|| CircuitError::InvalidSpec("missing verifier key".into()))?
                    .1
            }
        };
        values.push(v);
    }
    Ok(VpPublicInputs { values })
}

fn range_index(spec: &ScenarioSpec, predicate: usize) -> usize {
    spec.predicates[..predicate]
        .iter()
        .filter(|p| matches!(p, crate::scenario::PredicateSpec::RangeLt { .. }))
        .count()
}

fn polygon_index(spec: &ScenarioSpec, predicate: usize) -> usize {
    spec.predicates[..predicate]
        .iter()
        .filter(|p| matches!(p, crate::scenario::PredicateSpec::PolygonInbound { .. }))
        .count()
}

pub fn fill_private_inputs(
    spec: &ScenarioSpec,
    layout: &VpLayout,
    inputs: &VpInputs,
) -> Result<Vec<FieldElement>, CircuitError> {
    let mut values = Vec::with_capacity(layout.privates.len());
    for slot in &layout.privates {
        let v = match slot {
            PrivateSlot::Meta { credential, leaf } => inputs.credentials[*credential].meta[*leaf],
            PrivateSlot::IssuerPkX(c) => inputs.credentials[*c].issuer_pk.0,
            PrivateSlot::IssuerPkY(c) => inputs.credentials[*c].issuer_pk.1,
            PrivateSlot::IssuerSigRx(c) => inputs.credentials[*c].issuer_sig.0,
            PrivateSlot::IssuerSigRy(c) => inputs.credentials[*c].issuer_sig.1,
            PrivateSlot::IssuerSigS(c) => inputs.credentials[*c].issuer_sig.2,
            PrivateSlot::HolderSigRx(c) => holder_sig(inputs, *c)?.0,
            PrivateSlot::HolderSigRy(c) => holder_sig(inputs, *c)?.1,
            PrivateSlot::HolderSigS(c) => holder_sig(inputs, *c)?.2,
            PrivateSlot::RegistryLeaf(c) => inputs.credentials[*c].registry_leaf,
            PrivateSlot::RegistrySibling { credential, level } => {
                inputs.credentials[*credential].registry_siblings[*level]
            }
            PrivateSlot::ContentSibling {
                credential,
                reveal,
                level,
            } => {
                let pos = spec.credentials[*credential].revealed_positions[*reveal];
                inputs.credentials[*credential].content_sibling(pos, *level)
            }
            PrivateSlot::HiddenLeaf { credential, index } => {
                let pos = spec.credentials[*credential].hidden_positions[*index];
                inputs.credentials[*credential].content[pos]
            }
            PrivateSlot::HiddenSibling {
                credential,
                index,
                level,
            } => {
                let pos = spec.credentials[*credential].hidden_positions[*index];
                inputs.credentials[*credential].content_sibling(pos, *level)
            }
            PrivateSlot::ContentRoot(c) => inputs.credentials[*c].content_root(),
            PrivateSlot::VerifierSigRx => verifier_sig(inputs)?.0,
            PrivateSlot::VerifierSigRy => verifier_sig(inputs)?.1,
            PrivateSlot::VerifierSigS => verifier_sig(inputs)?.2,
        };
        values.push(v);
    }
    Ok(values)
}

fn holder_sig(
    inputs: &VpInputs,
    c: usize,
) -> Result<(FieldElement, FieldElement, FieldElement), CircuitError> {
    inputs.credentials[c]
        .holder_sig
        .ok_or_else(|| CircuitError::InvalidSpec(format!("credential {c} lacks a binding signature")))
}

fn verifier_sig(
    inputs: &VpInputs,
) -> Result<(FieldElement, FieldElement, FieldElement), CircuitError> {
    inputs
        .verifier_sig
        .ok_or_else(|| CircuitError::InvalidSpec("missing verifier signature branch".into()))
}
