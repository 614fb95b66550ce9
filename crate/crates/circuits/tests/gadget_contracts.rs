//! Pinned per-gadget costs. These are contracts: a parameter change that
//! shifts a count must fail here rather than silently re-baselining.

use zkcred_circuits::gadgets::eddsa::{eddsa_verify_gadget, EddsaMode, EddsaSignals, PointLc};
use zkcred_circuits::gadgets::polygon::polygon_inbound;
use zkcred_circuits::gadgets::poseidon::poseidon;
use zkcred_circuits::gadgets::{
    designated_or, divmod252, extract_kth_bit, range_lt, selector,
};
use zkcred_circuits::{ConstraintSystem, Lc};

fn private_wires(cs: &mut ConstraintSystem, n: usize) -> Vec<Lc> {
    (0..n).map(|_| cs.alloc_private()).collect()
}

#[test]
fn selector_is_5() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 3);
    selector(&mut cs, &w[0], &w[1], &w[2]);
    assert_eq!(cs.num_constraints(), 5);
}

#[test]
fn poseidon_pairwise_is_240() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 2);
    poseidon(&mut cs, &w);
    assert_eq!(cs.num_constraints(), 240);
}

#[test]
fn range_proof_is_252() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 2);
    range_lt(&mut cs, &w[0], &w[1]);
    assert_eq!(cs.num_constraints(), 252);
}

#[test]
fn division_with_rest_is_252() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 1);
    divmod252(&mut cs, &w[0]);
    assert_eq!(cs.num_constraints(), 252);
}

#[test]
fn extract_kth_bit_is_1012() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 2);
    extract_kth_bit(&mut cs, &w[0], &w[1]);
    assert_eq!(cs.num_constraints(), 1012);
}

#[test]
fn eddsa_verifier_is_4218() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 6);
    eddsa_verify_gadget(
        &mut cs,
        &EddsaSignals {
            pk: PointLc {
                x: w[0].clone(),
                y: w[1].clone(),
            },
            msg: w[2].clone(),
            r: PointLc {
                x: w[3].clone(),
                y: w[4].clone(),
            },
            s: w[5].clone(),
        },
        EddsaMode::Assert,
    );
    assert_eq!(cs.num_constraints(), 4218);
}

#[test]
fn eddsa_bit_mode_stays_within_small_overhead() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 6);
    eddsa_verify_gadget(
        &mut cs,
        &EddsaSignals {
            pk: PointLc {
                x: w[0].clone(),
                y: w[1].clone(),
            },
            msg: w[2].clone(),
            r: PointLc {
                x: w[3].clone(),
                y: w[4].clone(),
            },
            s: w[5].clone(),
        },
        EddsaMode::Bit,
    );
    let extra = cs.num_constraints() - 4218;
    assert!(extra <= 16, "bit mode costs 4218 + {extra}");
}

#[test]
fn polygon_is_333_per_vertex_and_16650_for_50() {
    for n in [3usize, 4, 50] {
        let mut cs = ConstraintSystem::new();
        let xy = private_wires(&mut cs, 2);
        let vs: Vec<(Lc, Lc)> = (0..n)
            .map(|_| {
                let x = cs.alloc_public();
                let y = cs.alloc_public();
                (x, y)
            })
            .collect();
        polygon_inbound(&mut cs, &xy[0], &xy[1], &vs);
        assert_eq!(cs.num_constraints(), 333 * n, "vertices = {n}");
    }
}

#[test]
fn designated_or_is_constant_size() {
    let mut cs = ConstraintSystem::new();
    let w = private_wires(&mut cs, 2);
    cs.assert_boolean(&w[0]);
    cs.assert_boolean(&w[1]);
    let before = cs.num_constraints();
    designated_or(&mut cs, &w[0], &w[1]);
    assert_eq!(cs.num_constraints() - before, 1);
}

#[test]
fn counts_are_deterministic_across_rebuilds() {
    let build = || {
        let mut cs = ConstraintSystem::new();
        let w = private_wires(&mut cs, 2);
        poseidon(&mut cs, &w);
        range_lt(&mut cs, &w[0], &w[1]);
        (cs.num_constraints(), cs.digest())
    };
    assert_eq!(build(), build());
}
