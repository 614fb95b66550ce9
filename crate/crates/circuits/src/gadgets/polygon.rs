//! Point-in-polygon by crossing-number parity, division-free.
//!
//! Coordinates arrive as scaled decimal degrees (x 10^7) shifted by 2^31
//! so everything sits in [0, 2^32); the shift cancels inside every
//! difference. The per-edge test x < (xj-xi)(y-yi)/(yj-yi) + xi runs as a
//! sign-aware cross-multiplication compared under 64-bit comparators
//! (five per vertex at 64 rows each), plus the crossing bookkeeping, for
//! exactly 333 rows per vertex. Cross products must stay below 2^62, which
//! holds for any polygon whose longitude extent is under ~180 degrees.
//!
//! Ties follow the classical half-open rule: an edge counts when
//! (yi > y) != (yj > y) and the strict comparison crosses; points exactly
//! on an edge resolve deterministically by these strict comparisons.

use zkcred_arith::FieldElement;

use crate::builder::{ConstraintSystem, Lc};
use crate::gadgets::{selector, xor_bit, TAG_POLYGON};

/// The coordinate offset: encoded (possibly field-negative) values plus
/// 2^31 land in [0, 2^32) for every value within the supported range.
pub fn coordinate_offset() -> FieldElement {
    FieldElement::from_u64(1 << 31)
}

fn lt64_inner(cs: &mut ConstraintSystem, a: &Lc, b: &Lc) -> Lc {
    let shift = {
        let v = num_bigint::BigUint::from(1u8) << 63;
        FieldElement::from_biguint(&v)
    };
    let bits = cs.num2bits(&a.add_constant(shift).sub(b), 64);
    Lc::one().sub(&bits[63])
}

fn offset62() -> FieldElement {
    let v = num_bigint::BigUint::from(1u8) << 62;
    FieldElement::from_biguint(&v)
}

/// Crossing-number parity for the (already offset-shifted) point against
/// an offset-shifted vertex list. Returns the boolean inside bit.
pub fn polygon_inbound(
    cs: &mut ConstraintSystem,
    x: &Lc,
    y: &Lc,
    vertices: &[(Lc, Lc)],
) -> Lc {
    assert!(vertices.len() >= 3, "a polygon needs at least 3 vertices");
    let mut parity = cs.alloc_pinned(FieldElement::ZERO);
    let n = vertices.len();
    let mut j = n - 1;
    for i in 0..n {
        cs.begin_gadget(TAG_POLYGON);
        let (xi, yi) = &vertices[i];
        let (xj, yj) = &vertices[j];
        let c1 = lt64_inner(cs, y, yi);
        let c2 = lt64_inner(cs, y, yj);
        let dy_neg = lt64_inner(cs, yj, yi);
        let lhs = cs.mul(&x.sub(xi), &yj.sub(yi));
        let rhs = cs.mul(&xj.sub(xi), &y.sub(yi));
        let off = offset62();
        let m_pos = lt64_inner(cs, &lhs.add_constant(off), &rhs.add_constant(off));
        let m_neg = lt64_inner(cs, &rhs.add_constant(off), &lhs.add_constant(off));
        // direction-aware pick of the crossing comparison
        let (cmp, _) = selector(cs, &m_pos, &m_neg, &dy_neg);
        let straddles = xor_bit(cs, &c1, &c2);
        let crossing = cs.mul(&straddles, &cmp);
        cs.assert_boolean(&crossing);
        parity = xor_bit(cs, &parity, &crossing);
        cs.end_gadget();
        j = i;
    }
    parity
}

/// Native oracle with the identical integer formulation, for tests and
/// for wallet-side pre-checks.
pub fn polygon_inbound_native(x: i64, y: i64, vertices: &[(i64, i64)]) -> bool {
    let mut inside = false;
    let n = vertices.len();
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = vertices[i];
        let (xj, yj) = vertices[j];
        let straddles = (yi > y) != (yj > y);
        if straddles {
            let lhs = (x as i128 - xi as i128) * (yj as i128 - yi as i128);
            let rhs = (xj as i128 - xi as i128) * (y as i128 - yi as i128);
            let crossing = if yj > yi { lhs < rhs } else { rhs < lhs };
            if crossing {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled(v: f64) -> i64 {
        (v * 1e7).round() as i64
    }

    fn build(n: usize) -> (ConstraintSystem, Vec<Lc>, Lc, Lc, Lc) {
        let mut cs = ConstraintSystem::new();
        let x = cs.alloc_private();
        let y = cs.alloc_private();
        let mut vs = Vec::new();
        let mut vertex_lcs = Vec::new();
        for _ in 0..n {
            let vx = cs.alloc_public();
            let vy = cs.alloc_public();
            vs.push(vx.clone());
            vs.push(vy.clone());
            vertex_lcs.push((vx, vy));
        }
        let inside = polygon_inbound(&mut cs, &x, &y, &vertex_lcs);
        (cs, vs, x, y, inside)
    }

    fn off(v: i64) -> FieldElement {
        FieldElement::from_i128(v as i128) + coordinate_offset()
    }

    #[test]
    fn per_vertex_cost_is_333() {
        let (cs, _, _, _, _) = build(4);
        assert_eq!(cs.num_constraints(), 4 * 333);
        let (cs50, _, _, _, _) = build(50);
        assert_eq!(cs50.num_constraints(), 16_650);
    }

    #[test]
    fn unit_square_membership() {
        let square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let (cs, _, _, _, inside) = build(4);
        let publics: Vec<FieldElement> = square
            .iter()
            .flat_map(|&(a, b)| [off(scaled(a)), off(scaled(b))])
            .collect();
        let w = cs
            .evaluate(&publics, &[off(scaled(0.5)), off(scaled(0.5))])
            .unwrap();
        assert_eq!(w.value_of(&inside), FieldElement::ONE);
        let w = cs
            .evaluate(&publics, &[off(scaled(2.0)), off(scaled(2.0))])
            .unwrap();
        assert_eq!(w.value_of(&inside), FieldElement::ZERO);
    }
}
