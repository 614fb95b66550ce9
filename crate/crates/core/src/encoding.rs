//! Deterministic mapping from typed attributes to credential leaves.
//!
//! Short strings pack byte-positionally (sum of a_i * 2^(8*i)) and stay
//! directly usable in predicates; long strings compress through a
//! length-prefixed sequential Poseidon fold and require the raw value to
//! travel with any presentation that reveals them. Floats and coordinates
//! scale by 10^7 before rounding; negatives map to field negation.

use serde::{Deserialize, Serialize};

use zkcred_arith::{poseidon_hash, FieldElement};

use crate::CoreError;

/// Maximum bytes that pack positionally into one field element. 32
/// single-byte characters would need 256 bits, which no longer fits below
/// the 254-bit modulus, so the cap is 31.
pub const SHORT_STRING_MAX: usize = 31;

/// Scale factor shared by floats and coordinates.
pub const FLOAT_SCALE: f64 = 1e7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum AttributeValue {
    ShortString(String),
    LongString(String),
    Integer(i64),
    Float(f64),
    Boolean(bool),
    /// UNIX timestamp, seconds.
    Date(u64),
    /// Decimal degrees; shares the float scaling convention so the polygon
    /// predicate sees the same integers.
    Coordinate(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodedLeaf {
    pub leaf: FieldElement,
    /// True iff the verifier needs the raw value to re-encode (long strings).
    pub needs_raw_attachment: bool,
}

fn pack_bytes(bytes: &[u8]) -> FieldElement {
    debug_assert!(bytes.len() <= SHORT_STRING_MAX);
    let mut acc = FieldElement::ZERO;
    let mut shift = FieldElement::ONE;
    let two_pow_8 = FieldElement::from_u64(256);
    for &b in bytes {
        acc += FieldElement::from_u64(b as u64) * shift;
        shift *= two_pow_8;
    }
    acc
}

fn scaled_decimal(v: f64) -> Result<FieldElement, CoreError> {
    if !v.is_finite() {
        return Err(CoreError::NonFiniteFloat);
    }
    let scaled = (v * FLOAT_SCALE).round();
    if scaled.abs() >= 2f64.powi(100) {
        return Err(CoreError::OutOfRange);
    }
    Ok(FieldElement::from_i128(scaled as i128))
}

/// Length-prefixed sequential Poseidon compression of arbitrary bytes.
///
/// The byte length leads the fold as its own chunk, so two strings whose
/// 31-byte chunkings collide positionally still hash apart. The empty
/// string folds to H(0).
pub fn encode_long_string(bytes: &[u8]) -> FieldElement {
    let mut running =
        poseidon_hash(&[FieldElement::from_u64(bytes.len() as u64)]).expect("arity 1");
    for chunk in bytes.chunks(SHORT_STRING_MAX) {
        running = poseidon_hash(&[running, pack_bytes(chunk)]).expect("arity 2");
    }
    running
}

pub fn encode(value: &AttributeValue) -> Result<EncodedLeaf, CoreError> {
    let leaf = match value {
        AttributeValue::ShortString(s) => {
            if !s.is_ascii() {
                return Err(CoreError::NonAsciiShortString);
            }
            if s.len() > SHORT_STRING_MAX {
                return Err(CoreError::ShortStringTooLong(s.len()));
            }
            pack_bytes(s.as_bytes())
        }
        AttributeValue::LongString(s) => {
            return Ok(EncodedLeaf {
                leaf: encode_long_string(s.as_bytes()),
                needs_raw_attachment: true,
            })
        }
        AttributeValue::Integer(v) => FieldElement::from_i128(*v as i128),
        AttributeValue::Float(v) => scaled_decimal(*v)?,
        AttributeValue::Boolean(b) => {
            if *b {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            }
        }
        AttributeValue::Date(ts) => FieldElement::from_u64(*ts),
        AttributeValue::Coordinate(v) => scaled_decimal(*v)?,
    };
    Ok(EncodedLeaf {
        leaf,
        needs_raw_attachment: false,
    })
}

/// Verifier-side re-encoding check for raw attachments.
pub fn verify_raw_attachment(raw: &AttributeValue, leaf: FieldElement) -> bool {
    match encode(raw) {
        Ok(e) => e.leaf == leaf,
        Err(_) => false,
    }
}

/// The filler for unused content slots: the empty long-string marker, so
/// "absent" never collides with boolean false or integer zero.
pub fn empty_slot_leaf() -> FieldElement {
    encode_long_string(b"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_rule() {
        assert_eq!(
            encode(&AttributeValue::Boolean(true)).unwrap().leaf,
            FieldElement::ONE
        );
        assert_eq!(
            encode(&AttributeValue::Boolean(false)).unwrap().leaf,
            FieldElement::ZERO
        );
    }

    #[test]
    fn float_scaling() {
        assert_eq!(
            encode(&AttributeValue::Float(1.5)).unwrap().leaf,
            FieldElement::from_u64(15_000_000)
        );
        // negative floats land on field negation
        assert_eq!(
            encode(&AttributeValue::Float(-1.5)).unwrap().leaf,
            -FieldElement::from_u64(15_000_000)
        );
    }

    #[test]
    fn short_string_packing() {
        assert_eq!(
            encode(&AttributeValue::ShortString("AB".into())).unwrap().leaf,
            FieldElement::from_u64(65 + 66 * 256)
        );
        assert_eq!(
            encode(&AttributeValue::ShortString(String::new())).unwrap().leaf,
            FieldElement::ZERO
        );
    }

    #[test]
    fn short_string_length_cap() {
        let s: String = std::iter::repeat('a').take(32).collect();
        assert!(matches!(
            encode(&AttributeValue::ShortString(s)),
            Err(CoreError::ShortStringTooLong(32))
        ));
        let ok: String = std::iter::repeat('a').take(31).collect();
        assert!(encode(&AttributeValue::ShortString(ok)).is_ok());
    }

    #[test]
    fn date_epoch() {
        assert_eq!(
            encode(&AttributeValue::Date(0)).unwrap().leaf,
            FieldElement::ZERO
        );
    }

    #[test]
    fn attachment_checks() {
        assert!(verify_raw_attachment(
            &AttributeValue::Boolean(true),
            FieldElement::ONE
        ));
        assert!(verify_raw_attachment(
            &AttributeValue::Float(1.5),
            FieldElement::from_u64(15_000_000)
        ));
        assert!(!verify_raw_attachment(
            &AttributeValue::ShortString("AB".into()),
            FieldElement::from_u64(16962)
        ));
    }
}
