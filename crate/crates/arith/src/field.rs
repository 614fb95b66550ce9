use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use ark_bn254::Fr;
use ark_ff::{BigInteger, Field, One, PrimeField, Zero};
use num_bigint::BigUint;

use crate::ArithError;

/// Element of the 254-bit prime scalar field.
///
/// p = 21888242871839275222246405745257275088548364400416034343698204186575808495617
///
/// All arithmetic is modular; the canonical byte form is 32 bytes
/// little-endian and injective on [0, p).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement(pub(crate) Fr);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(ark_ff::MontFp!("0"));
    pub const ONE: FieldElement = FieldElement(ark_ff::MontFp!("1"));

    pub fn from_u64(v: u64) -> Self {
        FieldElement(Fr::from(v))
    }

    pub fn from_u128(v: u128) -> Self {
        FieldElement(Fr::from(v))
    }

    /// Signed mapping: negative integers land on p - |v|.
    pub fn from_i128(v: i128) -> Self {
        if v >= 0 {
            Self::from_u128(v as u128)
        } else {
            -Self::from_u128(v.unsigned_abs())
        }
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        FieldElement(Fr::from(v.clone()))
    }

    pub fn to_biguint(&self) -> BigUint {
        self.0.into_bigint().into()
    }

    pub fn modulus() -> BigUint {
        Fr::MODULUS.into()
    }

    pub fn from_dec_str(s: &str) -> Result<Self, ArithError> {
        let v: BigUint = s
            .parse()
            .map_err(|_| ArithError::InvalidHex(s.to_string()))?;
        if v >= Self::modulus() {
            return Err(ArithError::NonCanonicalBytes);
        }
        Ok(Self::from_biguint(&v))
    }

    /// Canonical 32-byte little-endian form.
    pub fn to_bytes_le(&self) -> [u8; 32] {
        let bytes = self.0.into_bigint().to_bytes_le();
        let mut out = [0u8; 32];
        out[..bytes.len()].copy_from_slice(&bytes);
        out
    }

    /// Rejects non-canonical encodings (values >= p).
    pub fn from_bytes_le(bytes: &[u8; 32]) -> Result<Self, ArithError> {
        let v = BigUint::from_bytes_le(bytes);
        if v >= Self::modulus() {
            return Err(ArithError::NonCanonicalBytes);
        }
        Ok(Self::from_biguint(&v))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes_le())
    }

    pub fn from_hex(s: &str) -> Result<Self, ArithError> {
        let raw = hex::decode(s).map_err(|e| ArithError::InvalidHex(e.to_string()))?;
        if raw.len() != 32 {
            return Err(ArithError::InvalidHex(format!(
                "expected 32 bytes, got {}",
                raw.len()
            )));
        }
        let mut b = [0u8; 32];
        b.copy_from_slice(&raw);
        Self::from_bytes_le(&b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.inverse().map(FieldElement)
    }

    pub fn square(&self) -> Self {
        FieldElement(self.0.square())
    }

    pub fn pow(&self, exp: u64) -> Self {
        FieldElement(self.0.pow([exp]))
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let mut bytes = [0u8; 48];
        rng.fill(&mut bytes[..]);
        FieldElement(Fr::from_le_bytes_mod_order(&bytes))
    }

    pub fn to_dec_string(&self) -> String {
        self.to_biguint().to_string()
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({})", self.to_dec_string())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dec_string())
    }
}

impl From<u64> for FieldElement {
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}

impl From<Fr> for FieldElement {
    fn from(v: Fr) -> Self {
        FieldElement(v)
    }
}

impl From<FieldElement> for Fr {
    fn from(v: FieldElement) -> Fr {
        v.0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        FieldElement(self.0 + rhs.0)
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        FieldElement(self.0 - rhs.0)
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 -= rhs.0;
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        FieldElement(self.0 * rhs.0)
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: Self) {
        self.0 *= rhs.0;
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        FieldElement(-self.0)
    }
}

impl One for FieldElement {
    fn one() -> Self {
        Self::ONE
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_matches_config() {
        assert_eq!(
            FieldElement::modulus().to_string(),
            "21888242871839275222246405745257275088548364400416034343698204186575808495617"
        );
    }

    #[test]
    fn byte_round_trip_rejects_modulus() {
        let p = FieldElement::modulus();
        let mut bytes = [0u8; 32];
        let pb = p.to_bytes_le();
        bytes[..pb.len()].copy_from_slice(&pb);
        assert_eq!(
            FieldElement::from_bytes_le(&bytes),
            Err(ArithError::NonCanonicalBytes)
        );
    }

    #[test]
    fn negative_mapping() {
        let v = FieldElement::from_i128(-5);
        assert_eq!(v + FieldElement::from_u64(5), FieldElement::ZERO);
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> serde::Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldElement::from_hex(&s).map_err(serde::de::Error::custom)
    }
}
