//! Schemas name the kind and position of each attribute; registry
//! descriptors document a revocation registry's policies. Both hash into
//! credentials through the same canonical-serialize-then-compress rule.

use serde::{Deserialize, Serialize};

use zkcred_arith::FieldElement;

use crate::encoding::encode_long_string;
use crate::CoreError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttributeKind {
    ShortString,
    LongString,
    Integer,
    Float,
    Boolean,
    Date,
    Coordinate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemaAttribute {
    pub position: u8,
    pub label: String,
    pub kind: AttributeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding_note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub name: String,
    pub attributes: Vec<SchemaAttribute>,
}

/// Canonical JSON: object keys sorted, no insignificant whitespace, UTF-8.
/// serde_json's Value object is a sorted map, so a Value round-trip
/// normalizes key order before compact serialization.
pub fn canonical_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CoreError> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_vec(&v)?)
}

impl Schema {
    pub fn validate(&self, content_width: usize) -> Result<(), CoreError> {
        let mut seen = [false; 32];
        for attr in &self.attributes {
            let p = attr.position as usize;
            if p >= content_width || seen[p] {
                return Err(CoreError::InvalidSchema);
            }
            seen[p] = true;
        }
        Ok(())
    }

    pub fn canonical_bytes(&self) -> Result<Vec<u8>, CoreError> {
        canonical_json_bytes(self)
    }

    pub fn schema_hash(&self) -> Result<FieldElement, CoreError> {
        Ok(encode_long_string(&self.canonical_bytes()?))
    }

    pub fn kind_at(&self, position: usize) -> Option<AttributeKind> {
        self.attributes
            .iter()
            .find(|a| a.position as usize == position)
            .map(|a| a.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryDescriptor {
    pub name: String,
    pub issuer: String,
    pub depth: u32,
    #[serde(default)]
    pub allow_unrevoke: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub update_interval_seconds: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
}

/// Hash of a registry description document.
pub fn registry_ref_hash(descriptor: &RegistryDescriptor) -> Result<FieldElement, CoreError> {
    Ok(encode_long_string(&canonical_json_bytes(descriptor)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> RegistryDescriptor {
        RegistryDescriptor {
            name: "demo".into(),
            issuer: "did:example:issuer".into(),
            depth: 13,
            allow_unrevoke: true,
            update_interval_seconds: Some(3600),
            policy: None,
        }
    }

    #[test]
    fn identical_documents_identical_refs() {
        assert_eq!(
            registry_ref_hash(&demo()).unwrap(),
            registry_ref_hash(&demo()).unwrap()
        );
    }

    #[test]
    fn one_field_changes_ref() {
        let mut other = demo();
        other.allow_unrevoke = false;
        assert_ne!(
            registry_ref_hash(&demo()).unwrap(),
            registry_ref_hash(&other).unwrap()
        );
    }

    #[test]
    fn canonicalization_sorts_keys() {
        let a: serde_json::Value = serde_json::from_str(r#"{"b":1,"a":2}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"a":2,"b":1}"#).unwrap();
        assert_eq!(
            canonical_json_bytes(&a).unwrap(),
            canonical_json_bytes(&b).unwrap()
        );
    }

    #[test]
    fn duplicate_positions_rejected() {
        let schema = Schema {
            name: "x".into(),
            attributes: vec![
                SchemaAttribute {
                    position: 0,
                    label: "a".into(),
                    kind: AttributeKind::Integer,
                    encoding_note: None,
                },
                SchemaAttribute {
                    position: 0,
                    label: "b".into(),
                    kind: AttributeKind::Integer,
                    encoding_note: None,
                },
            ],
        };
        assert!(schema.validate(8).is_err());
    }
}
