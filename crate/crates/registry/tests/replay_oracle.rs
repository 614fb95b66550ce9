//! Delta replay must agree bit-exactly with a brute-force rebuild of the
//! whole tree from the final bitmap.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use zkcred_arith::FieldElement;
use zkcred_core::merkle_root;
use zkcred_registry::{capacity, ClientRegistryState, RevocationRegistry, Status};

/// Independent oracle: materialize the bitmap, pack leaves, full Merkle fold.
fn brute_force_root(depth: u32, revoked: &std::collections::HashSet<u64>) -> FieldElement {
    let leaf_count = 1usize << depth;
    let mut leaves = Vec::with_capacity(leaf_count);
    for leaf_idx in 0..leaf_count as u64 {
        let mut v: BigUint = (BigUint::from(1u8) << 252) - 1u8;
        for bit in 0..252u64 {
            if revoked.contains(&(leaf_idx * 252 + bit)) {
                v.set_bit(bit, false);
            }
        }
        leaves.push(FieldElement::from_biguint(&v));
    }
    merkle_root(&leaves).unwrap()
}

#[test]
fn randomized_delta_replay_equals_rebuild() {
    let depth = 5;
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let mut reg = RevocationRegistry::new(depth).unwrap();
    let mut client = ClientRegistryState::new(depth).unwrap();
    let mut revoked = std::collections::HashSet::new();

    let mut deltas = Vec::new();
    for _ in 0..100 {
        let id = rng.gen_range(0..capacity(depth));
        let status = if rng.gen_bool(0.7) {
            revoked.insert(id);
            Status::Revoked
        } else {
            revoked.remove(&id);
            Status::Valid
        };
        deltas.push(reg.set_status(id, status).unwrap());
    }

    client.apply_deltas(&deltas).unwrap();
    let oracle = brute_force_root(depth, &revoked);
    assert_eq!(reg.root(), oracle, "direct mutation vs rebuild");
    assert_eq!(client.root(), oracle, "delta replay vs rebuild");
    assert_eq!(client.version(), 100);

    let replayed = RevocationRegistry::replay(depth, reg.delta_log()).unwrap();
    assert_eq!(replayed.root(), oracle, "log replay vs rebuild");
}

#[test]
fn witness_soundness_randomized() {
    let depth = 4;
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut reg = RevocationRegistry::new(depth).unwrap();
    for _ in 0..200 {
        let id = rng.gen_range(0..capacity(depth));
        if rng.gen_bool(0.5) {
            reg.set_status(id, Status::Revoked).unwrap();
            assert!(reg.witness(id).is_err(), "revoked id must refuse a witness");
        } else {
            reg.set_status(id, Status::Valid).unwrap();
            let w = reg.witness(id).unwrap();
            assert!(w.verify());
            assert_eq!(w.version, reg.version());
        }
    }
}

#[test]
fn version_log_is_contiguous() {
    let mut reg = RevocationRegistry::new(3).unwrap();
    for i in 0..10 {
        reg.set_status(i, Status::Revoked).unwrap();
    }
    for (i, d) in reg.delta_log().iter().enumerate() {
        assert_eq!(d.version, i as u64 + 1);
    }
}
