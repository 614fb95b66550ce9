//! EdDSA-Poseidon over Baby Jubjub.
//!
//! Key expansion and the deterministic nonce use BLAKE-512; the message
//! commitment is Poseidon(R8.x, R8.y, A.x, A.y, M). The verification
//! equation is S*B8 == R8 + (8*hm)*A with S reduced below the subgroup
//! order. Messages are single field elements; every payload signed in the
//! protocol (credential root, challenge) is one.

use num_bigint::BigUint;

use crate::blake512::blake512;
use crate::curve::{CurvePoint, BASE8, SUBGROUP_ORDER};
use crate::poseidon::poseidon_hash;
use crate::{ArithError, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigningKeyPair {
    seed: [u8; 32],
    /// Pruned key scalar (low 3 bits cleared, bit 254 clear, bit 62 of the
    /// top byte set), as expanded from the seed.
    key_scalar: BigUint,
    /// Upper half of the seed expansion, feeds the nonce derivation.
    nonce_key: [u8; 32],
    pub public: CurvePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub r: CurvePoint,
    /// Scalar below the subgroup order.
    pub s: FieldElement,
}

impl Signature {
    /// 96 bytes: R.x || R.y || S.
    pub fn to_bytes(&self) -> [u8; 96] {
        let mut out = [0u8; 96];
        out[..64].copy_from_slice(&self.r.to_bytes());
        out[64..].copy_from_slice(&self.s.to_bytes_le());
        out
    }

    pub fn from_bytes(bytes: &[u8; 96]) -> Result<Self, ArithError> {
        let mut rb = [0u8; 64];
        rb.copy_from_slice(&bytes[..64]);
        let mut sb = [0u8; 32];
        sb.copy_from_slice(&bytes[64..]);
        let s = FieldElement::from_bytes_le(&sb)?;
        if s.to_biguint() >= *SUBGROUP_ORDER {
            return Err(ArithError::ScalarOutOfRange);
        }
        Ok(Signature {
            r: CurvePoint::from_bytes(&rb)?,
            s,
        })
    }
}

fn prune(mut half: [u8; 32]) -> [u8; 32] {
    half[0] &= 0xf8;
    half[31] &= 0x7f;
    half[31] |= 0x40;
    half
}

/// Deterministic key derivation from a 32-byte seed.
pub fn eddsa_keygen(seed: [u8; 32]) -> SigningKeyPair {
    let expanded = blake512(&seed);
    let mut lower = [0u8; 32];
    lower.copy_from_slice(&expanded[..32]);
    let mut upper = [0u8; 32];
    upper.copy_from_slice(&expanded[32..]);
    let key_scalar = BigUint::from_bytes_le(&prune(lower));
    let public = BASE8.mul_scalar(&(&key_scalar >> 3u32));
    SigningKeyPair {
        seed,
        key_scalar,
        nonce_key: upper,
        public,
    }
}

impl SigningKeyPair {
    pub fn seed(&self) -> [u8; 32] {
        self.seed
    }
}

/// Deterministic signature over a single field element.
pub fn eddsa_sign(kp: &SigningKeyPair, msg: FieldElement) -> Signature {
    let mut nonce_input = [0u8; 64];
    nonce_input[..32].copy_from_slice(&kp.nonce_key);
    nonce_input[32..].copy_from_slice(&msg.to_bytes_le());
    let r = BigUint::from_bytes_le(&blake512(&nonce_input)) % &*SUBGROUP_ORDER;
    let r8 = BASE8.mul_scalar(&r);
    let hm = poseidon_hash(&[r8.x, r8.y, kp.public.x, kp.public.y, msg])
        .expect("arity 5 is valid");
    let s = (r + hm.to_biguint() * &kp.key_scalar) % &*SUBGROUP_ORDER;
    Signature {
        r: r8,
        s: FieldElement::from_biguint(&s),
    }
}

/// Returns Ok(false) on a well-formed but invalid signature; an off-curve
/// public key is an error, not a "false".
pub fn eddsa_verify(
    pk: &CurvePoint,
    msg: FieldElement,
    sig: &Signature,
) -> Result<bool, ArithError> {
    if !pk.is_on_curve() {
        return Err(ArithError::InvalidKey);
    }
    if !sig.r.is_on_curve() {
        return Ok(false);
    }
    let s_int = sig.s.to_biguint();
    if s_int >= *SUBGROUP_ORDER {
        return Ok(false);
    }
    let pk8 = pk.double().double().double();
    if pk8.x.is_zero() {
        return Ok(false);
    }
    let hm = poseidon_hash(&[sig.r.x, sig.r.y, pk.x, pk.y, msg]).expect("arity 5 is valid");
    let left = BASE8.mul_scalar(&s_int);
    let hm8 = hm.to_biguint() * BigUint::from(8u8);
    let right = sig.r.add(&pk.mul_scalar(&hm8));
    Ok(left == right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let kp = eddsa_keygen([7u8; 32]);
        let msg = FieldElement::from_u64(998877);
        let sig = eddsa_sign(&kp, msg);
        assert!(eddsa_verify(&kp.public, msg, &sig).unwrap());
        assert!(!eddsa_verify(&kp.public, msg + FieldElement::ONE, &sig).unwrap());
    }

    #[test]
    fn off_curve_key_is_an_error() {
        let bad = CurvePoint::new(FieldElement::from_u64(3), FieldElement::from_u64(4));
        let kp = eddsa_keygen([1u8; 32]);
        let sig = eddsa_sign(&kp, FieldElement::ONE);
        assert_eq!(
            eddsa_verify(&bad, FieldElement::ONE, &sig),
            Err(ArithError::InvalidKey)
        );
    }

    #[test]
    fn tampered_signature_fails() {
        let kp = eddsa_keygen([9u8; 32]);
        let msg = FieldElement::from_u64(5);
        let mut sig = eddsa_sign(&kp, msg);
        sig.s = sig.s + FieldElement::ONE;
        assert!(!eddsa_verify(&kp.public, msg, &sig).unwrap());
    }
}

impl serde::Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Signature", 3)?;
        st.serialize_field("Rx", &self.r.x)?;
        st.serialize_field("Ry", &self.r.y)?;
        st.serialize_field("S", &self.s)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            #[serde(rename = "Rx")]
            rx: FieldElement,
            #[serde(rename = "Ry")]
            ry: FieldElement,
            #[serde(rename = "S")]
            s: FieldElement,
        }
        let raw = Raw::deserialize(d)?;
        let r = CurvePoint::new(raw.rx, raw.ry);
        if !r.is_on_curve() {
            return Err(serde::de::Error::custom("signature R is not on the curve"));
        }
        if raw.s.to_biguint() >= *SUBGROUP_ORDER {
            return Err(serde::de::Error::custom("signature scalar out of range"));
        }
        Ok(Signature { r, s: raw.s })
    }
}
