//! In-circuit EdDSA-Poseidon verification over Baby Jubjub.
//!
//! The scalar multiplications run in Montgomery form with windowed
//! fixed-base and bit-ladder any-base variants; the fixed-base
//! precomputation chain folds to constants, which together with the
//! capacity-lane fold in Poseidon is what pins the whole verifier at
//! 4,218 rows. Verifies S*B8 == R8 + (8*hm)*A with S below the subgroup
//! order and hm = Poseidon(R8.x, R8.y, A.x, A.y, M).

use num_bigint::BigUint;

use zkcred_arith::{CurvePoint, FieldElement, BASE8, SUBGROUP_ORDER};

use crate::builder::{ConstraintSystem, Lc};
use crate::gadgets::poseidon::poseidon;
use crate::gadgets::{and_all, TAG_EDDSA};

#[derive(Clone, Debug)]
pub struct PointLc {
    pub x: Lc,
    pub y: Lc,
}

impl PointLc {
    pub fn constant(p: &CurvePoint) -> Self {
        PointLc {
            x: Lc::constant(p.x),
            y: Lc::constant(p.y),
        }
    }
}

/// Montgomery-form coefficient A = 2(a+d)/(a-d); B is 1 for Baby Jubjub.
fn mont_a() -> FieldElement {
    FieldElement::from_u64(168698)
}

fn edwards_a() -> FieldElement {
    FieldElement::from_u64(168700)
}

fn edwards_d() -> FieldElement {
    FieldElement::from_u64(168696)
}

/// u = (1+y)/(1-y), v = u/x.
fn edwards_to_montgomery(cs: &mut ConstraintSystem, p: &PointLc) -> PointLc {
    let one = Lc::one();
    let u = cs.div(&one.add(&p.y), &one.sub(&p.y)).expect("y != 1");
    let v = cs.div(&u, &p.x).expect("x != 0");
    PointLc { x: u, y: v }
}

/// x = u/v, y = (u-1)/(u+1).
fn montgomery_to_edwards(cs: &mut ConstraintSystem, p: &PointLc) -> PointLc {
    let x = cs.div(&p.x, &p.y).expect("v != 0");
    let y = cs
        .div(
            &p.x.add_constant(-FieldElement::ONE),
            &p.x.add_constant(FieldElement::ONE),
        )
        .expect("u != -1");
    PointLc { x, y }
}

fn montgomery_add(cs: &mut ConstraintSystem, p1: &PointLc, p2: &PointLc) -> PointLc {
    let lamda = cs
        .div(&p2.y.sub(&p1.y), &p2.x.sub(&p1.x))
        .expect("distinct x");
    let lam2 = cs.mul(&lamda, &lamda);
    // x3 = B*lamda^2 - A - x1 - x2, with B = 1
    let x3 = lam2
        .add_constant(-mont_a())
        .sub(&p1.x)
        .sub(&p2.x);
    let t = cs.mul(&lamda, &p1.x.sub(&x3));
    let y3 = t.sub(&p1.y);
    PointLc { x: x3, y: y3 }
}

fn montgomery_double(cs: &mut ConstraintSystem, p: &PointLc) -> PointLc {
    let a = mont_a();
    let x1_2 = cs.mul(&p.x, &p.x);
    // lamda = (3x^2 + 2Ax + 1) / (2By)
    let num = x1_2
        .scale(FieldElement::from_u64(3))
        .add(&p.x.scale(a * FieldElement::from_u64(2)))
        .add_constant(FieldElement::ONE);
    let den = p.y.scale(FieldElement::from_u64(2));
    let lamda = cs.div(&num, &den).expect("y != 0");
    let lam2 = cs.mul(&lamda, &lamda);
    let x3 = lam2
        .add_constant(-a)
        .sub(&p.x.scale(FieldElement::from_u64(2)));
    let t = cs.mul(&lamda, &p.x.sub(&x3));
    let y3 = t.sub(&p.y);
    PointLc { x: x3, y: y3 }
}

/// Complete twisted Edwards addition.
pub fn baby_add(cs: &mut ConstraintSystem, p1: &PointLc, p2: &PointLc) -> PointLc {
    let a = edwards_a();
    let d = edwards_d();
    let beta = cs.mul(&p1.x, &p2.y);
    let gamma = cs.mul(&p1.y, &p2.x);
    let delta = cs.mul(&p1.x.scale(-a).add(&p1.y), &p2.x.add(&p2.y));
    let tau = cs.mul(&beta, &gamma);
    let x3 = cs
        .div(&beta.add(&gamma), &tau.scale(d).add_constant(FieldElement::ONE))
        .expect("complete");
    let y3 = cs
        .div(
            &delta.add(&beta.scale(a)).sub(&gamma),
            &tau.scale(-d).add_constant(FieldElement::ONE),
        )
        .expect("complete");
    PointLc { x: x3, y: y3 }
}

pub fn baby_dbl(cs: &mut ConstraintSystem, p: &PointLc) -> PointLc {
    let q = p.clone();
    baby_add(cs, p, &q)
}

/// Two-way point mux: out = sel ? in1 : in0.
fn multiplexor2(cs: &mut ConstraintSystem, sel: &Lc, in0: &PointLc, in1: &PointLc) -> PointLc {
    let dx = cs.mul(sel, &in1.x.sub(&in0.x));
    let dy = cs.mul(sel, &in1.y.sub(&in0.y));
    PointLc {
        x: in0.x.add(&dx),
        y: in0.y.add(&dy),
    }
}

struct BitElementOut {
    dbl: PointLc,
    add: PointLc,
}

fn bit_element_mul_any(
    cs: &mut ConstraintSystem,
    sel: &Lc,
    dbl_in: &PointLc,
    add_in: &PointLc,
) -> BitElementOut {
    let doubled = montgomery_double(cs, dbl_in);
    let added = montgomery_add(cs, &doubled, add_in);
    let selected = multiplexor2(cs, sel, add_in, &added);
    BitElementOut {
        dbl: doubled,
        add: selected,
    }
}

struct SegmentOut {
    out: PointLc,
    dbl: PointLc,
}

/// Ladder over n bits of an arbitrary (nonzero, subgroup) point.
fn segment_mul_any(cs: &mut ConstraintSystem, bits: &[Lc], p: &PointLc) -> SegmentOut {
    let n = bits.len();
    let e2m = edwards_to_montgomery(cs, p);
    let mut dbl_in = e2m.clone();
    let mut add_in = e2m.clone();
    let mut last = None;
    for (i, sel) in bits.iter().enumerate().skip(1) {
        let step = bit_element_mul_any(cs, sel, &dbl_in, &add_in);
        dbl_in = step.dbl.clone();
        add_in = step.add.clone();
        if i == n - 1 {
            last = Some(step);
        }
    }
    let last = last.expect("n >= 2");
    let m2e = montgomery_to_edwards(cs, &last.add);
    let neg_p = PointLc {
        x: p.x.scale(-FieldElement::ONE),
        y: p.y.clone(),
    };
    let eadder = baby_add(cs, &m2e, &neg_p);
    let out = multiplexor2(cs, &bits[0], &eadder, &m2e);
    SegmentOut {
        out,
        dbl: last.dbl,
    }
}

/// Variable-base scalar multiplication, bits little-endian. The input
/// point must be in the subgroup; a zero point is forced to the subgroup
/// generator and the result zeroed out, as in the reference circuit.
pub fn escalar_mul_any(cs: &mut ConstraintSystem, bits: &[Lc], p: &PointLc) -> PointLc {
    const SEG: usize = 148;
    let n = bits.len();
    let nsegments = (n - 1) / SEG + 1;
    let zero = cs.is_zero(&p.x);
    let base8 = &*BASE8;
    // force the generator when the point is zero
    let fx = cs.mul(&Lc::constant(base8.x).sub(&p.x), &zero);
    let fy = cs.mul(&Lc::constant(base8.y).sub(&p.y), &zero);
    let mut seg_p = PointLc {
        x: p.x.add(&fx),
        y: p.y.add(&fy),
    };
    let mut segments: Vec<SegmentOut> = Vec::new();
    let mut acc: Option<PointLc> = None;
    for s in 0..nsegments {
        let lo = s * SEG;
        let hi = ((s + 1) * SEG).min(n);
        if s > 0 {
            let doubled = montgomery_double(cs, &segments[s - 1].dbl);
            seg_p = montgomery_to_edwards(cs, &doubled);
        }
        let seg = segment_mul_any(cs, &bits[lo..hi], &seg_p);
        acc = Some(match acc {
            None => seg.out.clone(),
            Some(prev) => baby_add(cs, &prev, &seg.out),
        });
        segments.push(seg);
    }
    let total = acc.expect("at least one segment");
    let not_zero = Lc::one().sub(&zero);
    let out_x = cs.mul(&total.x, &not_zero);
    let ty = cs.mul(&Lc::one().sub(&total.y), &zero);
    PointLc {
        x: out_x,
        y: total.y.add(&ty),
    }
}

/// 3-bit window lookup over a pair of coordinates.
fn multimux3_pair(cs: &mut ConstraintSystem, sel: &[Lc; 3], table: &[[Lc; 8]; 2]) -> PointLc {
    let s10 = cs.mul(&sel[1], &sel[0]);
    let mut outs = Vec::with_capacity(2);
    for lane in table {
        let c = lane;
        let a210 = cs.mul(
            &c[7]
                .sub(&c[6])
                .sub(&c[5])
                .add(&c[4])
                .sub(&c[3])
                .add(&c[2])
                .add(&c[1])
                .sub(&c[0]),
            &s10,
        );
        let a21 = cs.mul(&c[6].sub(&c[4]).sub(&c[2]).add(&c[0]), &sel[1]);
        let a20 = cs.mul(&c[5].sub(&c[4]).sub(&c[1]).add(&c[0]), &sel[0]);
        let a2 = c[4].sub(&c[0]);
        let a10 = cs.mul(&c[3].sub(&c[2]).sub(&c[1]).add(&c[0]), &s10);
        let a1 = cs.mul(&c[2].sub(&c[0]), &sel[1]);
        let a0 = cs.mul(&c[1].sub(&c[0]), &sel[0]);
        let a = c[0].clone();
        let hi = a210.add(&a21).add(&a20).add(&a2);
        let lo = a10.add(&a1).add(&a0).add(&a);
        let out = cs.mul(&hi, &sel[2]);
        outs.push(out.add(&lo));
    }
    PointLc {
        x: outs[0].clone(),
        y: outs[1].clone(),
    }
}

struct WindowOut {
    out: PointLc,
    out8: PointLc,
}

/// Window of three bits over a Montgomery base: selects k*base for
/// k = 1..8 and also exposes 8*base for chaining.
fn window_mul_fix(cs: &mut ConstraintSystem, sel: &[Lc; 3], base: &PointLc) -> WindowOut {
    let two = montgomery_double(cs, base);
    let mut multiples: Vec<PointLc> = vec![base.clone(), two];
    for _ in 2..8 {
        let prev = multiples.last().unwrap().clone();
        multiples.push(montgomery_add(cs, base, &prev));
    }
    let table = [
        std::array::from_fn(|k| multiples[k].x.clone()),
        std::array::from_fn(|k| multiples[k].y.clone()),
    ];
    let out = multimux3_pair(cs, sel, &table);
    WindowOut {
        out,
        out8: multiples[7].clone(),
    }
}

fn segment_mul_fix(cs: &mut ConstraintSystem, bits: &[Lc], base: &PointLc) -> SegmentOut {
    assert_eq!(bits.len() % 3, 0);
    let n_windows = bits.len() / 3;
    let e2m = edwards_to_montgomery(cs, base);
    let mut windows: Vec<WindowOut> = Vec::with_capacity(n_windows);
    for i in 0..n_windows {
        let sel: [Lc; 3] = std::array::from_fn(|j| bits[3 * i + j].clone());
        let wbase = if i == 0 {
            e2m.clone()
        } else {
            windows[i - 1].out8.clone()
        };
        windows.push(window_mul_fix(cs, &sel, &wbase));
    }
    let dbl_last = montgomery_double(cs, &windows[n_windows - 1].out8);
    // compensation accumulator: base + 8B + 64B + ... + dblLast
    let mut cacc = e2m.clone();
    for (i, w) in windows.iter().enumerate() {
        let addend = if i < n_windows - 1 { &w.out8 } else { &dbl_last };
        cacc = montgomery_add(cs, &cacc, addend);
    }
    // windowed accumulator seeded with the final doubling
    let mut acc = dbl_last;
    for w in &windows {
        acc = montgomery_add(cs, &acc, &w.out);
    }
    let m2e = montgomery_to_edwards(cs, &acc);
    let cm2e = montgomery_to_edwards(cs, &cacc);
    let neg_c = PointLc {
        x: cm2e.x.scale(-FieldElement::ONE),
        y: cm2e.y.clone(),
    };
    let out = baby_add(cs, &m2e, &neg_c);
    SegmentOut {
        out,
        dbl: windows[n_windows - 1].out8.clone(),
    }
}

/// Fixed-base scalar multiplication: 253 scalar bits against a constant
/// base point. Window tables over the constant base collapse to
/// constants.
pub fn escalar_mul_fix(cs: &mut ConstraintSystem, bits: &[Lc], base: &CurvePoint) -> PointLc {
    const SEG_BITS: usize = 249;
    let n = bits.len();
    let nsegments = (n - 1) / 246 + 1;
    let mut acc: Option<PointLc> = None;
    let mut seg_base = PointLc::constant(base);
    let mut prev_dbl: Option<PointLc> = None;
    for s in 0..nsegments {
        let lo = s * SEG_BITS;
        let hi = ((s + 1) * SEG_BITS).min(n);
        let mut seg_bits: Vec<Lc> = bits[lo..hi].to_vec();
        while seg_bits.len() % 3 != 0 {
            seg_bits.push(cs.alloc_pinned(FieldElement::ZERO));
        }
        if s > 0 {
            let m2e = montgomery_to_edwards(cs, prev_dbl.as_ref().unwrap());
            seg_base = m2e;
        }
        let seg = segment_mul_fix(cs, &seg_bits, &seg_base);
        acc = Some(match acc {
            None => seg.out.clone(),
            Some(prev) => baby_add(cs, &prev, &seg.out),
        });
        prev_dbl = Some(seg.dbl);
    }
    acc.expect("at least one segment")
}

/// Comparison of a 254-bit decomposition against a constant: returns 1
/// iff the bit string (as an integer) exceeds `ct`.
pub fn comp_constant(cs: &mut ConstraintSystem, bits: &[Lc], ct: &BigUint) -> Lc {
    assert_eq!(bits.len(), 254);
    let mut b = (BigUint::from(1u8) << 128) - 1u8;
    let mut a = BigUint::from(1u8);
    let mut e = BigUint::from(1u8);
    let mut sum = Lc::zero();
    for i in 0..127 {
        let clsb = ct.bit(2 * i as u64);
        let cmsb = ct.bit(2 * i as u64 + 1);
        let slsb = &bits[2 * i];
        let smsb = &bits[2 * i + 1];
        let fb = FieldElement::from_biguint(&b);
        let fa = FieldElement::from_biguint(&a);
        let prod = cs.mul(smsb, slsb);
        let part = match (cmsb, clsb) {
            (false, false) => prod.scale(-fb).add(&smsb.scale(fb)).add(&slsb.scale(fb)),
            (false, true) => prod
                .scale(fa)
                .sub(&slsb.scale(fa))
                .add(&smsb.scale(fb))
                .sub(&smsb.scale(fa))
                .add_constant(fa),
            (true, false) => prod.scale(fb).sub(&smsb.scale(fa)).add_constant(fa),
            (true, true) => prod.scale(-fa).add_constant(fa),
        };
        sum = sum.add(&part);
        b -= &e;
        a += &e;
        e <<= 1;
    }
    let out_bits = cs.num2bits(&sum, 135);
    out_bits[127].clone()
}

/// Strict 254-bit decomposition: the recomposed value must not alias
/// past the modulus.
pub fn num2bits_strict(cs: &mut ConstraintSystem, value: &Lc) -> Vec<Lc> {
    let bits = cs.num2bits(value, 254);
    let p_minus_1 = FieldElement::modulus() - BigUint::from(1u8);
    let over = comp_constant(cs, &bits, &p_minus_1);
    cs.assert_linear_zero(over);
    bits
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EddsaMode {
    /// Hard-assert validity (the cost-table component).
    Assert,
    /// Produce a validity bit; costs a few rows more and is used by the
    /// designated-verifier composition.
    Bit,
}

pub struct EddsaSignals {
    pub pk: PointLc,
    pub msg: Lc,
    pub r: PointLc,
    pub s: Lc,
}

/// EdDSA-Poseidon verification. In `Assert` mode the system is
/// satisfiable only with a valid signature and the returned lc is the
/// constant 1; in `Bit` mode the returned lc is a boolean-constrained
/// validity bit.
pub fn eddsa_verify_gadget(cs: &mut ConstraintSystem, sig: &EddsaSignals, mode: EddsaMode) -> Lc {
    cs.begin_gadget(TAG_EDDSA);

    // S below the subgroup order
    let s_bits = cs.num2bits(&sig.s, 253);
    let mut s_bits_padded = s_bits.clone();
    s_bits_padded.push(cs.alloc_pinned(FieldElement::ZERO));
    let sub_minus_1 = &*SUBGROUP_ORDER - BigUint::from(1u8);
    let s_over = comp_constant(cs, &s_bits_padded, &sub_minus_1);

    // hm = Poseidon(R8.x, R8.y, A.x, A.y, M)
    let hm = poseidon(
        cs,
        &[
            sig.r.x.clone(),
            sig.r.y.clone(),
            sig.pk.x.clone(),
            sig.pk.y.clone(),
            sig.msg.clone(),
        ],
    );
    let hm_bits = num2bits_strict(cs, &hm);

    // A8 = 8*A; doubling also clears any small-order component
    let dbl1 = baby_dbl(cs, &sig.pk);
    let dbl2 = baby_dbl(cs, &dbl1);
    let a8 = baby_dbl(cs, &dbl2);
    let a8_zero = cs.is_zero(&a8.x);

    // right = R8 + hm*A8, left = S*B8
    let hm_a8 = escalar_mul_any(cs, &hm_bits, &a8);
    let right = baby_add(cs, &sig.r, &hm_a8);
    let left = escalar_mul_fix(cs, &s_bits, &BASE8);

    let out = match mode {
        EddsaMode::Assert => {
            cs.assert_linear_zero(s_over);
            cs.assert_linear_zero(a8_zero);
            let eq_x = cs.is_zero(&left.x.sub(&right.x));
            let eq_y = cs.is_zero(&left.y.sub(&right.y));
            cs.assert_linear_zero(Lc::one().sub(&eq_x));
            cs.assert_linear_zero(Lc::one().sub(&eq_y));
            Lc::one()
        }
        EddsaMode::Bit => {
            let eq_x = cs.is_zero(&left.x.sub(&right.x));
            let eq_y = cs.is_zero(&left.y.sub(&right.y));
            let s_ok = Lc::one().sub(&s_over);
            let a_ok = Lc::one().sub(&a8_zero);
            let valid = and_all(cs, &[eq_x, eq_y, s_ok, a_ok]);
            cs.assert_boolean(&valid);
            valid
        }
    };
    cs.end_gadget();
    out
}
