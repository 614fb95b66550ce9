//! The credential: eight metadata leaves in fixed order, a power-of-two
//! block of content leaves, the combined Merkle root and the issuer's
//! signature over it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use zkcred_arith::{
    eddsa_sign, eddsa_verify, poseidon_hash, CurvePoint, FieldElement, Signature, SigningKeyPair,
};

use crate::encoding::{empty_slot_leaf, encode, AttributeValue};
use crate::merkle::merkle_root;
use crate::schema::{AttributeKind, Schema};
use crate::CoreError;

pub const META_REVOCATION_ID: usize = 0;
pub const META_SCHEMA_HASH: usize = 1;
pub const META_BINDING_X: usize = 2;
pub const META_BINDING_Y: usize = 3;
pub const META_REGISTRY_REF: usize = 4;
pub const META_EXPIRATION: usize = 5;
pub const META_DELEGATABLE: usize = 6;
/// Leaf 7 is reserved and pinned to zero.
pub const META_RESERVED: usize = 7;

#[derive(Clone, Debug)]
pub struct MetaInputs {
    pub revocation_id: u64,
    pub registry_ref: FieldElement,
    pub binding_pk: CurvePoint,
    pub expiration_ts: u64,
    pub delegatable: bool,
}

/// Metadata leaves in their fixed order.
pub fn meta_layout(inputs: &MetaInputs, schema_hash: FieldElement) -> [FieldElement; 8] {
    [
        FieldElement::from_u64(inputs.revocation_id),
        schema_hash,
        inputs.binding_pk.x,
        inputs.binding_pk.y,
        inputs.registry_ref,
        FieldElement::from_u64(inputs.expiration_ts),
        if inputs.delegatable {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        },
        FieldElement::ZERO,
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Credential {
    pub meta: [FieldElement; 8],
    pub content: Vec<FieldElement>,
    pub root: FieldElement,
    pub signature: Signature,
    pub issuer_pk: CurvePoint,
    /// Raw values for long-string leaves, by content position.
    pub raw_attributes: BTreeMap<usize, AttributeValue>,
}

impl Credential {
    pub fn meta_root(&self) -> FieldElement {
        merkle_root(&self.meta).expect("8 leaves")
    }

    pub fn content_root(&self) -> FieldElement {
        merkle_root(&self.content).expect("power-of-two content")
    }

    pub fn recompute_root(&self) -> FieldElement {
        poseidon_hash(&[self.meta_root(), self.content_root()]).expect("arity 2")
    }

    /// Recomputes both subtrees and checks the issuer signature.
    pub fn verify(&self) -> Result<bool, CoreError> {
        if self.recompute_root() != self.root {
            return Ok(false);
        }
        Ok(eddsa_verify(&self.issuer_pk, self.root, &self.signature)?)
    }

    pub fn revocation_id(&self) -> Option<u64> {
        let b = self.meta[META_REVOCATION_ID].to_biguint();
        u64::try_from(b).ok()
    }

    pub fn binding_pk(&self) -> CurvePoint {
        CurvePoint::new(self.meta[META_BINDING_X], self.meta[META_BINDING_Y])
    }

    pub fn expiration_ts(&self) -> Option<u64> {
        u64::try_from(self.meta[META_EXPIRATION].to_biguint()).ok()
    }
}

fn kind_matches(value: &AttributeValue, kind: AttributeKind) -> bool {
    matches!(
        (value, kind),
        (AttributeValue::ShortString(_), AttributeKind::ShortString)
            | (AttributeValue::LongString(_), AttributeKind::LongString)
            | (AttributeValue::Integer(_), AttributeKind::Integer)
            | (AttributeValue::Float(_), AttributeKind::Float)
            | (AttributeValue::Boolean(_), AttributeKind::Boolean)
            | (AttributeValue::Date(_), AttributeKind::Date)
            | (AttributeValue::Coordinate(_), AttributeKind::Coordinate)
    )
}

/// Encode attributes into content leaves; unused slots get the empty
/// long-string marker.
pub fn content_leaves(
    schema: &Schema,
    attributes: &BTreeMap<u8, AttributeValue>,
    width: usize,
) -> Result<(Vec<FieldElement>, BTreeMap<usize, AttributeValue>), CoreError> {
    if !width.is_power_of_two() || !(8..=32).contains(&width) {
        return Err(CoreError::InvalidContentWidth);
    }
    schema.validate(width)?;
    let filler = empty_slot_leaf();
    let mut leaves = vec![filler; width];
    let mut raw = BTreeMap::new();
    for (&position, value) in attributes {
        let p = position as usize;
        let kind = schema.kind_at(p).ok_or(CoreError::SchemaMismatch {
            position: p,
            expected: "no attribute at this position".into(),
        })?;
        if !kind_matches(value, kind) {
            return Err(CoreError::SchemaMismatch {
                position: p,
                expected: format!("{kind:?}"),
            });
        }
        let encoded = encode(value)?;
        leaves[p] = encoded.leaf;
        if encoded.needs_raw_attachment {
            raw.insert(p, value.clone());
        }
    }
    Ok((leaves, raw))
}

/// Issue a credential: build both subtrees, combine, sign the root.
pub fn issue(
    issuer: &SigningKeyPair,
    schema: &Schema,
    meta: &MetaInputs,
    attributes: &BTreeMap<u8, AttributeValue>,
    registry_capacity: u64,
    content_width: usize,
) -> Result<Credential, CoreError> {
    if meta.revocation_id >= registry_capacity {
        return Err(CoreError::CapacityExceeded {
            id: meta.revocation_id,
            capacity: registry_capacity,
        });
    }
    let schema_hash = schema.schema_hash()?;
    let meta_leaves = meta_layout(meta, schema_hash);
    let (content, raw_attributes) = content_leaves(schema, attributes, content_width)?;
    let meta_root = merkle_root(&meta_leaves)?;
    let content_root = merkle_root(&content)?;
    let root = poseidon_hash(&[meta_root, content_root])?;
    let signature = eddsa_sign(issuer, root);
    Ok(Credential {
        meta: meta_leaves,
        content,
        root,
        signature,
        issuer_pk: issuer.public,
        raw_attributes,
    })
}

/// Issuer-side root construction when the binding key is hidden behind its
/// subtree node (binding carryover): leaves 2 and 3 are replaced by the
/// node H(binding.x, binding.y) supplied by the holder.
pub fn meta_root_with_binding_node(
    meta_except_binding: &MetaInputs,
    schema_hash: FieldElement,
    binding_node: FieldElement,
) -> FieldElement {
    let l = meta_layout(meta_except_binding, schema_hash);
    let h01 = poseidon_hash(&[l[0], l[1]]).unwrap();
    let h0123 = poseidon_hash(&[h01, binding_node]).unwrap();
    let h45 = poseidon_hash(&[l[4], l[5]]).unwrap();
    let h67 = poseidon_hash(&[l[6], l[7]]).unwrap();
    let h4567 = poseidon_hash(&[h45, h67]).unwrap();
    poseidon_hash(&[h0123, h4567]).unwrap()
}

/// Wire form of a credential.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CredentialDocument {
    pub meta: Vec<FieldElement>,
    pub content: Vec<FieldElement>,
    pub signature: Signature,
    #[serde(rename = "issuerPk")]
    pub issuer_pk: CurvePoint,
    /// Inline schema document or a hash-pointed URL.
    pub schema: SchemaRef,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub raw_attributes: BTreeMap<String, AttributeValue>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemaRef {
    Inline(Schema),
    Url(String),
}

impl CredentialDocument {
    pub fn from_credential(c: &Credential, schema: SchemaRef) -> Self {
        CredentialDocument {
            meta: c.meta.to_vec(),
            content: c.content.clone(),
            signature: c.signature,
            issuer_pk: c.issuer_pk,
            schema,
            raw_attributes: c
                .raw_attributes
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn into_credential(self) -> Result<Credential, CoreError> {
        if self.meta.len() != 8 {
            return Err(CoreError::AttributeCount {
                expected: 8,
                got: self.meta.len(),
            });
        }
        if !self.content.len().is_power_of_two() || !(8..=32).contains(&self.content.len()) {
            return Err(CoreError::InvalidContentWidth);
        }
        let mut meta = [FieldElement::ZERO; 8];
        meta.copy_from_slice(&self.meta);
        let meta_root = merkle_root(&meta)?;
        let content_root = merkle_root(&self.content)?;
        let root = poseidon_hash(&[meta_root, content_root])?;
        let mut raw_attributes = BTreeMap::new();
        for (k, v) in self.raw_attributes {
            let p: usize = k.parse().map_err(|_| CoreError::InvalidSchema)?;
            raw_attributes.insert(p, v);
        }
        Ok(Credential {
            meta,
            content: self.content,
            root,
            signature: self.signature,
            issuer_pk: self.issuer_pk,
            raw_attributes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::SchemaAttribute;
    use zkcred_arith::eddsa_keygen;

    fn demo_schema() -> Schema {
        Schema {
            name: "id-card".into(),
            attributes: vec![
                SchemaAttribute {
                    position: 0,
                    label: "name".into(),
                    kind: AttributeKind::ShortString,
                    encoding_note: None,
                },
                SchemaAttribute {
                    position: 1,
                    label: "birthdate".into(),
                    kind: AttributeKind::Date,
                    encoding_note: None,
                },
                SchemaAttribute {
                    position: 2,
                    label: "bio".into(),
                    kind: AttributeKind::LongString,
                    encoding_note: None,
                },
            ],
        }
    }

    fn demo_attrs() -> BTreeMap<u8, AttributeValue> {
        let mut m = BTreeMap::new();
        m.insert(0, AttributeValue::ShortString("Alice".into()));
        m.insert(1, AttributeValue::Date(915148800));
        m.insert(
            2,
            AttributeValue::LongString("a biography longer than thirty-one bytes".into()),
        );
        m
    }

    fn demo_issue() -> Credential {
        let issuer = eddsa_keygen([3u8; 32]);
        let holder = eddsa_keygen([4u8; 32]);
        let meta = MetaInputs {
            revocation_id: 7,
            registry_ref: FieldElement::from_u64(11),
            binding_pk: holder.public,
            expiration_ts: 2_000_000_000,
            delegatable: false,
        };
        issue(&issuer, &demo_schema(), &meta, &demo_attrs(), 1 << 20, 8).unwrap()
    }

    #[test]
    fn issue_then_verify() {
        let c = demo_issue();
        assert!(c.verify().unwrap());
        assert_eq!(c.content.len(), 8);
        assert_eq!(c.raw_attributes.len(), 1);
    }

    #[test]
    fn meta_leaf_order() {
        let c = demo_issue();
        assert_eq!(c.meta[META_REVOCATION_ID], FieldElement::from_u64(7));
        assert_eq!(
            c.meta[META_EXPIRATION],
            FieldElement::from_u64(2_000_000_000)
        );
        assert_eq!(c.meta[META_SCHEMA_HASH], demo_schema().schema_hash().unwrap());
        assert_eq!(c.meta[META_RESERVED], FieldElement::ZERO);
    }

    #[test]
    fn tampered_content_detected() {
        let mut c = demo_issue();
        c.content[3] += FieldElement::ONE;
        assert!(!c.verify().unwrap());
    }

    #[test]
    fn capacity_enforced() {
        let issuer = eddsa_keygen([3u8; 32]);
        let holder = eddsa_keygen([4u8; 32]);
        let meta = MetaInputs {
            revocation_id: 100,
            registry_ref: FieldElement::ZERO,
            binding_pk: holder.public,
            expiration_ts: 0,
            delegatable: false,
        };
        assert!(matches!(
            issue(&issuer, &demo_schema(), &meta, &demo_attrs(), 100, 8),
            Err(CoreError::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn schema_kind_mismatch_rejected() {
        let issuer = eddsa_keygen([3u8; 32]);
        let holder = eddsa_keygen([4u8; 32]);
        let meta = MetaInputs {
            revocation_id: 0,
            registry_ref: FieldElement::ZERO,
            binding_pk: holder.public,
            expiration_ts: 0,
            delegatable: false,
        };
        let mut attrs = demo_attrs();
        attrs.insert(1, AttributeValue::Boolean(true));
        assert!(matches!(
            issue(&issuer, &demo_schema(), &meta, &attrs, 1000, 8),
            Err(CoreError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn binding_node_root_matches_direct_root() {
        let c = demo_issue();
        let holder = eddsa_keygen([4u8; 32]);
        let meta = MetaInputs {
            revocation_id: 7,
            registry_ref: FieldElement::from_u64(11),
            binding_pk: holder.public,
            expiration_ts: 2_000_000_000,
            delegatable: false,
        };
        let node = poseidon_hash(&[holder.public.x, holder.public.y]).unwrap();
        let via_node = meta_root_with_binding_node(
            &meta,
            demo_schema().schema_hash().unwrap(),
            node,
        );
        assert_eq!(via_node, c.meta_root());
    }

    #[test]
    fn document_round_trip() {
        let c = demo_issue();
        let doc = CredentialDocument::from_credential(&c, SchemaRef::Inline(demo_schema()));
        let json = serde_json::to_string(&doc).unwrap();
        let back: CredentialDocument = serde_json::from_str(&json).unwrap();
        let c2 = back.into_credential().unwrap();
        assert_eq!(c2.root, c.root);
        assert!(c2.verify().unwrap());
    }
}
