use once_cell::sync::Lazy;
use num_bigint::BigUint;

use crate::{ArithError, FieldElement};

/// Twisted Edwards coefficients of Baby Jubjub: a*x^2 + y^2 = 1 + d*x^2*y^2.
pub const COEFF_A: u64 = 168700;
pub const COEFF_D: u64 = 168696;

/// Order of the prime-order subgroup (curve order / 8).
pub static SUBGROUP_ORDER: Lazy<BigUint> = Lazy::new(|| {
    "2736030358979909402780800718157159386076813972158567259200215660948447373041"
        .parse()
        .unwrap()
});

/// Full curve order (cofactor 8 times the subgroup order).
pub static CURVE_ORDER: Lazy<BigUint> = Lazy::new(|| {
    "21888242871839275222246405745257275088614511777268538073601725287587578984328"
        .parse()
        .unwrap()
});

/// Curve generator.
pub static GENERATOR: Lazy<CurvePoint> = Lazy::new(|| CurvePoint {
    x: FieldElement::from_dec_str(
        "995203441582195749578291179787384436505546430278305826713579947235728471134",
    )
    .unwrap(),
    y: FieldElement::from_dec_str(
        "5472060717959818805561601436314318772137091100104008585924551046643952123905",
    )
    .unwrap(),
});

/// Generator of the prime-order subgroup (8 times `GENERATOR`).
pub static BASE8: Lazy<CurvePoint> = Lazy::new(|| CurvePoint {
    x: FieldElement::from_dec_str(
        "5299619240641551281634865583518297030282874472190772894086521144482721001553",
    )
    .unwrap(),
    y: FieldElement::from_dec_str(
        "16950150798460657717958625567821834550301663161624707787222815936182638968203",
    )
    .unwrap(),
});

/// Affine point on Baby Jubjub. The identity is (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurvePoint {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl CurvePoint {
    pub const fn new(x: FieldElement, y: FieldElement) -> Self {
        CurvePoint { x, y }
    }

    pub fn identity() -> Self {
        CurvePoint {
            x: FieldElement::ZERO,
            y: FieldElement::ONE,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y == FieldElement::ONE
    }

    pub fn is_on_curve(&self) -> bool {
        let a = FieldElement::from_u64(COEFF_A);
        let d = FieldElement::from_u64(COEFF_D);
        let x2 = self.x.square();
        let y2 = self.y.square();
        a * x2 + y2 == FieldElement::ONE + d * x2 * y2
    }

    /// Complete twisted Edwards addition.
    pub fn add(&self, other: &CurvePoint) -> CurvePoint {
        let a = FieldElement::from_u64(COEFF_A);
        let d = FieldElement::from_u64(COEFF_D);
        let x1y2 = self.x * other.y;
        let y1x2 = self.y * other.x;
        let y1y2 = self.y * other.y;
        let x1x2 = self.x * other.x;
        let dxy = d * x1y2 * y1x2;
        let x3 = (x1y2 + y1x2) * (FieldElement::ONE + dxy).inverse().expect("1+dxy != 0");
        let y3 = (y1y2 - a * x1x2) * (FieldElement::ONE - dxy).inverse().expect("1-dxy != 0");
        CurvePoint { x: x3, y: y3 }
    }

    pub fn double(&self) -> CurvePoint {
        self.add(self)
    }

    pub fn negate(&self) -> CurvePoint {
        CurvePoint {
            x: -self.x,
            y: self.y,
        }
    }

    /// Double-and-add; scalar_mul(0, P) is the identity.
    pub fn mul_scalar(&self, k: &BigUint) -> CurvePoint {
        let mut result = CurvePoint::identity();
        let mut acc = *self;
        let bits = k.bits();
        for i in 0..bits {
            if k.bit(i) {
                result = result.add(&acc);
            }
            acc = acc.double();
        }
        result
    }

    /// Membership in the prime-order subgroup.
    pub fn in_subgroup(&self) -> bool {
        self.is_on_curve() && self.mul_scalar(&SUBGROUP_ORDER).is_identity()
    }

    /// 64 bytes: x || y, each 32-byte little-endian.
    pub fn to_bytes(&self) -> [u8; 64] {
        let mut out = [0u8; 64];
        out[..32].copy_from_slice(&self.x.to_bytes_le());
        out[32..].copy_from_slice(&self.y.to_bytes_le());
        out
    }

    pub fn from_bytes(bytes: &[u8; 64]) -> Result<Self, ArithError> {
        let mut xb = [0u8; 32];
        let mut yb = [0u8; 32];
        xb.copy_from_slice(&bytes[..32]);
        yb.copy_from_slice(&bytes[32..]);
        let p = CurvePoint {
            x: FieldElement::from_bytes_le(&xb)?,
            y: FieldElement::from_bytes_le(&yb)?,
        };
        if !p.is_on_curve() {
            return Err(ArithError::InvalidKey);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_on_curve() {
        assert!(GENERATOR.is_on_curve());
        assert!(BASE8.is_on_curve());
        assert!(BASE8.in_subgroup());
    }

    #[test]
    fn base8_is_eight_times_generator() {
        let eight = BigUint::from(8u8);
        assert_eq!(GENERATOR.mul_scalar(&eight), *BASE8);
    }

    #[test]
    fn identity_laws() {
        let p = BASE8.mul_scalar(&BigUint::from(12345u32));
        assert_eq!(p.add(&CurvePoint::identity()), p);
        assert!(p.add(&p.negate()).is_identity());
        assert!(p.mul_scalar(&BigUint::from(0u8)).is_identity());
    }

    #[test]
    fn subgroup_order_annihilates_base() {
        assert!(BASE8.mul_scalar(&SUBGROUP_ORDER).is_identity());
    }
}

impl serde::Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CurvePoint", 2)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("y", &self.y)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            x: FieldElement,
            y: FieldElement,
        }
        let raw = Raw::deserialize(d)?;
        let p = CurvePoint::new(raw.x, raw.y);
        if !p.is_on_curve() {
            return Err(serde::de::Error::custom("point is not on the curve"));
        }
        Ok(p)
    }
}
