//! The gadget library. Every constructor pushes its rows under a named
//! tag so the accounting report can reproduce the component cost table;
//! the per-gadget costs are pinned by tests and treated as contracts.

pub mod eddsa;
pub mod polygon;
pub mod poseidon;

use zkcred_arith::FieldElement;

use crate::builder::{ConstraintSystem, Lc};

pub const TAG_SELECTOR: &str = "selector";
pub const TAG_RANGE: &str = "range-proof";
pub const TAG_DIVMOD: &str = "division-with-rest";
pub const TAG_POSEIDON: &str = "poseidon";
pub const TAG_KTH_BIT: &str = "extract-kth-bit";
pub const TAG_EDDSA: &str = "eddsa";
pub const TAG_POLYGON: &str = "polygon-vertex";
pub const TAG_DESIGNATED_OR: &str = "designated-or";

fn two_pow(n: u32) -> FieldElement {
    let v = num_bigint::BigUint::from(1u8) << n;
    FieldElement::from_biguint(&v)
}

/// Order a (current, sibling) pair by a direction bit: returns (left,
/// right) = dir ? (sibling, current) : (current, sibling). Five rows: the
/// direction booleanity and four mux products.
pub fn selector(cs: &mut ConstraintSystem, current: &Lc, sibling: &Lc, dir: &Lc) -> (Lc, Lc) {
    cs.begin_gadget(TAG_SELECTOR);
    cs.assert_boolean(dir);
    let not_dir = Lc::one().sub(dir);
    let p1 = cs.mul(dir, sibling);
    let p2 = cs.mul(&not_dir, current);
    let p3 = cs.mul(dir, current);
    let p4 = cs.mul(&not_dir, sibling);
    cs.end_gadget();
    (p1.add(&p2), p3.add(&p4))
}

/// Comparator bit a < b for operands below 2^251; decomposes a + 2^251 - b
/// over 252 bits, costing exactly 252 rows.
pub fn range_lt(cs: &mut ConstraintSystem, a: &Lc, b: &Lc) -> Lc {
    cs.begin_gadget(TAG_RANGE);
    let shifted = a.add_constant(two_pow(251)).sub(b);
    let bits = cs.num2bits(&shifted, 252);
    cs.end_gadget();
    Lc::one().sub(&bits[251])
}

/// Euclidean division by the constant 252: value = 252*q + r with
/// 0 <= r < 252 and q below 2^235. The quotient's bit wires are returned
/// so Merkle-ascent directions can reuse them without re-decomposing.
pub struct DivMod252 {
    pub quotient: Lc,
    pub remainder: Lc,
    pub quotient_bits: Vec<Lc>,
}

pub fn divmod252(cs: &mut ConstraintSystem, value: &Lc) -> DivMod252 {
    cs.begin_gadget(TAG_DIVMOD);
    let (q, r) = cs.divmod_wires(value, 252);
    let q_bits = cs.num2bits(&q, 235);
    let _r_bits = cs.num2bits(&r, 8);
    // r < 252 via an 8-bit comparison against the constant
    let shifted = r.add_constant(FieldElement::from_u64(256 - 252));
    let cmp_bits = cs.num2bits(&shifted, 9);
    // top bit zero <=> r + 4 < 256 <=> r < 252
    cs.assert_linear_zero(cmp_bits[8].clone());
    // the defining linear identity
    cs.assert_linear_zero(
        q.scale(FieldElement::from_u64(252))
            .add(&r)
            .sub(value),
    );
    cs.end_gadget();
    DivMod252 {
        quotient: q,
        remainder: r,
        quotient_bits: q_bits,
    }
}

/// Extract the bit of `input` (at most 253 bits) selected by the variable
/// index `k`: full decomposition, one equality test per position and a
/// running selected-bit sum. 253 + 253*2 + 253 = 1,012 rows.
pub fn extract_kth_bit(cs: &mut ConstraintSystem, input: &Lc, k: &Lc) -> Lc {
    cs.begin_gadget(TAG_KTH_BIT);
    let bits = cs.num2bits(input, 253);
    let mut acc = Lc::zero();
    for (i, bit) in bits.iter().enumerate() {
        let is_kth = cs.is_zero(&k.add_constant(-FieldElement::from_u64(i as u64)));
        let contrib = cs.mul(&is_kth, bit);
        acc = acc.add(&contrib);
    }
    cs.end_gadget();
    acc
}

/// Boolean XOR with an explicitly boolean-constrained output.
pub fn xor_bit(cs: &mut ConstraintSystem, a: &Lc, b: &Lc) -> Lc {
    let prod = cs.mul(a, b);
    let out = a.add(b).sub(&prod.scale(FieldElement::from_u64(2)));
    cs.assert_boolean(&out);
    out
}

/// Designated-verifier OR: asserts a + b - a*b = 1, satisfiable exactly
/// when at least one of the (boolean) inputs is 1.
pub fn designated_or(cs: &mut ConstraintSystem, a: &Lc, b: &Lc) {
    cs.begin_gadget(TAG_DESIGNATED_OR);
    let prod = cs.mul(a, b);
    cs.assert_linear_zero(a.add(b).sub(&prod).add_constant(-FieldElement::ONE));
    cs.end_gadget();
}

/// AND of a list of boolean lcs via a product chain.
pub fn and_all(cs: &mut ConstraintSystem, bits: &[Lc]) -> Lc {
    match bits {
        [] => Lc::one(),
        [only] => only.clone(),
        [first, rest @ ..] => {
            let mut acc = first.clone();
            for b in rest {
                acc = cs.mul(&acc, b);
            }
            acc
        }
    }
}

/// Equality as a bit (used when assertions are collected softly).
pub fn eq_bit(cs: &mut ConstraintSystem, a: &Lc, b: &Lc) -> Lc {
    cs.is_zero(&a.sub(b))
}
