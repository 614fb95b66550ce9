//! Bit-for-bit agreement between circuit gadget evaluation and native
//! brute-force oracles over randomized inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use zkcred_arith::FieldElement;
use zkcred_circuits::gadgets::polygon::{polygon_inbound, polygon_inbound_native};
use zkcred_circuits::gadgets::poseidon::poseidon2;
use zkcred_circuits::gadgets::{divmod252, extract_kth_bit, range_lt, selector};
use zkcred_circuits::{ConstraintSystem, Lc};

#[test]
fn divmod_semantics_and_oracle() {
    let mut cs = ConstraintSystem::new();
    let v = cs.alloc_private();
    let dm = divmod252(&mut cs, &v);
    // the worked example: 505 = 2*252 + 1
    let w = cs.evaluate(&[], &[FieldElement::from_u64(505)]).unwrap();
    assert_eq!(w.value_of(&dm.quotient), FieldElement::from_u64(2));
    assert_eq!(w.value_of(&dm.remainder), FieldElement::from_u64(1));

    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let x: u64 = rng.gen_range(0..u64::MAX / 2);
        let w = cs.evaluate(&[], &[FieldElement::from_u64(x)]).unwrap();
        assert_eq!(w.value_of(&dm.quotient), FieldElement::from_u64(x / 252));
        assert_eq!(w.value_of(&dm.remainder), FieldElement::from_u64(x % 252));
    }
}

#[test]
fn extract_kth_bit_oracle() {
    let mut cs = ConstraintSystem::new();
    let v = cs.alloc_private();
    let k = cs.alloc_private();
    let bit = extract_kth_bit(&mut cs, &v, &k);
    // 5 = 101b
    for (kk, expect) in [(0u64, 1u64), (1, 0), (2, 1), (3, 0)] {
        let w = cs
            .evaluate(&[], &[FieldElement::from_u64(5), FieldElement::from_u64(kk)])
            .unwrap();
        assert_eq!(w.value_of(&bit), FieldElement::from_u64(expect));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let x: u128 = rng.gen();
        let kk: u64 = rng.gen_range(0..128);
        let w = cs
            .evaluate(
                &[],
                &[FieldElement::from_u128(x), FieldElement::from_u64(kk)],
            )
            .unwrap();
        let expect = (x >> kk) & 1;
        assert_eq!(w.value_of(&bit), FieldElement::from_u128(expect));
    }
}

#[test]
fn comparator_oracle() {
    let mut cs = ConstraintSystem::new();
    let a = cs.alloc_private();
    let b = cs.alloc_private();
    let lt = range_lt(&mut cs, &a, &b);
    for (x, y, expect) in [(3u64, 7u64, 1u64), (7, 3, 0), (5, 5, 0)] {
        let w = cs
            .evaluate(&[], &[FieldElement::from_u64(x), FieldElement::from_u64(y)])
            .unwrap();
        assert_eq!(w.value_of(&lt), FieldElement::from_u64(expect), "{x} < {y}");
    }
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let x: u64 = rng.gen();
        let y: u64 = rng.gen();
        let w = cs
            .evaluate(&[], &[FieldElement::from_u64(x), FieldElement::from_u64(y)])
            .unwrap();
        assert_eq!(
            w.value_of(&lt),
            FieldElement::from_u64(u64::from(x < y)),
            "{x} < {y}"
        );
    }
}

#[test]
fn merkle_ascent_matches_native_path() {
    use zkcred_core::{merkle_prove, merkle_root};
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for _ in 0..200 {
        let leaves: Vec<FieldElement> = (0..8).map(|_| FieldElement::random(&mut rng)).collect();
        let index = rng.gen_range(0..8usize);
        let root = merkle_root(&leaves).unwrap();
        let path = merkle_prove(&leaves, index).unwrap();

        let mut cs = ConstraintSystem::new();
        let leaf = cs.alloc_private();
        let sibs: Vec<Lc> = (0..3).map(|_| cs.alloc_private()).collect();
        let pos = cs.alloc_private();
        let dirs = cs.num2bits(&pos, 3);
        let mut cur = leaf.clone();
        for (s, d) in sibs.iter().zip(&dirs) {
            let (l, r) = selector(&mut cs, &cur, s, d);
            cur = poseidon2(&mut cs, &l, &r);
        }
        let mut inputs = vec![leaves[index]];
        inputs.extend(path.siblings.iter().copied());
        inputs.push(FieldElement::from_u64(index as u64));
        let w = cs.evaluate(&[], &inputs).unwrap();
        assert_eq!(w.value_of(&cur), root);
    }
}

fn scale(v: f64) -> i64 {
    (v * 1e7).round() as i64
}

fn bavaria() -> Vec<(i64, i64)> {
    // 49-entry closed ring (the final point repeats the first); the
    // repeated closing point is kept, and the gadget tests pad to 50 by
    // repeating the closing vertex, a zero-length edge with no effect on
    // crossing parity.
    let raw: Vec<(f64, f64)> = vec![
        (10.4544399, 47.5557964),
        (11.2698847, 47.3975653),
        (11.6361799, 47.5945549),
        (12.2039614, 47.6067646),
        (12.2570286, 47.7430345),
        (12.7811652, 47.6738182),
        (13.0066207, 47.4643842),
        (13.0807484, 47.6870338),
        (12.9052586, 47.7234349),
        (13.0033609, 47.8500223),
        (12.7581257, 48.1260686),
        (13.329798, 48.3235141),
        (13.5089626, 48.5905995),
        (13.730512, 48.5147674),
        (13.8395518, 48.771618),
        (12.6555517, 49.4347994),
        (12.4005551, 49.7538049),
        (12.5476758, 49.920496),
        (11.9349229, 50.4236526),
        (11.5194652, 50.3739938),
        (11.3467213, 50.5214416),
        (11.2531027, 50.2678525),
        (10.8304723, 50.3927122),
        (10.7174795, 50.2043467),
        (10.1062239, 50.5632937),
        (9.5013397, 50.2431399),
        (9.5130437, 50.0943483),
        (8.9763497, 50.0497851),
        (9.1505794, 49.7427032),
        (9.0664847, 49.6022936),
        (9.4061438, 49.6454555),
        (9.2956877, 49.7404603),
        (9.4224965, 49.789454),
        (9.7999073, 49.730973),
        (9.8117746, 49.5556982),
        (10.1212713, 49.5110265),
        (10.1248147, 49.1988368),
        (10.4568403, 48.9204496),
        (10.4951298, 48.6871989),
        (10.2687047, 48.7035845),
        (10.3120672, 48.522946),
        (9.9674293, 48.3742096),
        (10.1407065, 48.0977316),
        (10.1301574, 47.6768474),
        (9.840425, 47.677494),
        (9.550566, 47.5371757),
        (9.9704798, 47.5458589),
        (10.2323482, 47.2705791),
        (10.4544399, 47.5557964),
    ];
    raw.into_iter().map(|(x, y)| (scale(x), scale(y))).collect()
}

#[test]
fn polygon_circuit_matches_native_oracle_on_bavaria() {
    let mut ring = bavaria();
    ring.push(ring[0]); // 50 vertices
    assert_eq!(ring.len(), 50);

    let n = ring.len();
    let mut cs = ConstraintSystem::new();
    let x = cs.alloc_private();
    let y = cs.alloc_private();
    let vs: Vec<(Lc, Lc)> = (0..n)
        .map(|_| {
            let a = cs.alloc_public();
            let b = cs.alloc_public();
            (a, b)
        })
        .collect();
    let inside = polygon_inbound(&mut cs, &x, &y, &vs);
    assert_eq!(cs.num_constraints(), 16_650);

    let off = FieldElement::from_u64(1 << 31);
    let publics: Vec<FieldElement> = ring
        .iter()
        .flat_map(|&(a, b)| {
            [
                FieldElement::from_i128(a as i128) + off,
                FieldElement::from_i128(b as i128) + off,
            ]
        })
        .collect();

    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut inside_count = 0;
    for _ in 0..1000 {
        // sample around the bounding box so both outcomes occur
        let px = scale(rng.gen_range(8.0..15.0));
        let py = scale(rng.gen_range(46.5..51.0));
        let expect = polygon_inbound_native(px, py, &ring);
        inside_count += usize::from(expect);
        let w = cs
            .evaluate(
                &publics,
                &[
                    FieldElement::from_i128(px as i128) + off,
                    FieldElement::from_i128(py as i128) + off,
                ],
            )
            .unwrap();
        assert_eq!(
            w.value_of(&inside),
            FieldElement::from_u64(u64::from(expect)),
            "({px}, {py})"
        );
    }
    // the sample actually exercised both branches
    assert!(inside_count > 100 && inside_count < 900, "{inside_count}");
}

#[test]
fn polygon_centroid_and_far_point() {
    let ring = bavaria();
    // Munich is inside Bavaria, Berlin is not
    assert!(polygon_inbound_native(scale(11.5820), scale(48.1351), &ring));
    assert!(!polygon_inbound_native(scale(13.4050), scale(52.5200), &ring));
}
