//! Poseidon permutation over the scalar field, parameterized exactly like
//! the reference circuit library: width t = arity + 1, 8 full rounds, a
//! t-dependent number of partial rounds, and the round constants / MDS
//! matrices shipped as a binary blob (32-byte little-endian elements).

use once_cell::sync::Lazy;

use crate::{ArithError, FieldElement};

/// Partial-round counts for widths t = 2..=17.
pub const N_ROUNDS_P: [usize; 16] = [56, 57, 56, 60, 60, 63, 64, 63, 60, 66, 60, 65, 70, 60, 64, 68];
pub const N_ROUNDS_F: usize = 8;

const CONSTANTS_BIN: &[u8] = include_bytes!("poseidon/constants.bin");

pub struct PoseidonParams {
    pub t: usize,
    /// Round constants, laid out round-major: c[r * t + lane].
    pub c: Vec<FieldElement>,
    /// MDS matrix, row-major: m[i][j] multiplies lane j into output lane i.
    pub m: Vec<Vec<FieldElement>>,
}

static PARAMS: Lazy<Vec<PoseidonParams>> = Lazy::new(|| {
    let mut off = 0usize;
    let mut read = |n: usize| -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut b = [0u8; 32];
            b.copy_from_slice(&CONSTANTS_BIN[off..off + 32]);
            off += 32;
            out.push(FieldElement::from_bytes_le(&b).expect("constant blob is canonical"));
        }
        out
    };
    let mut all = Vec::with_capacity(16);
    for t in 2..=17usize {
        let rp = N_ROUNDS_P[t - 2];
        let c = read(t * (N_ROUNDS_F + rp));
        let flat_m = read(t * t);
        let m: Vec<Vec<FieldElement>> = flat_m.chunks(t).map(|r| r.to_vec()).collect();
        all.push(PoseidonParams { t, c, m });
    }
    assert_eq!(off, CONSTANTS_BIN.len(), "constants blob fully consumed");
    all
});

/// Parameters for a given state width.
pub fn params(t: usize) -> &'static PoseidonParams {
    assert!((2..=17).contains(&t), "unsupported poseidon width {t}");
    &PARAMS[t - 2]
}

fn pow5(x: FieldElement) -> FieldElement {
    let x2 = x.square();
    x2.square() * x
}

/// Poseidon hash of 1..=16 field elements. Width is arity + 1 with the
/// capacity lane initialized to zero, so distinct arities are domain
/// separated.
pub fn poseidon_hash(inputs: &[FieldElement]) -> Result<FieldElement, ArithError> {
    if inputs.is_empty() || inputs.len() > 16 {
        return Err(ArithError::InvalidArity(inputs.len()));
    }
    let t = inputs.len() + 1;
    let p = params(t);
    let rf = N_ROUNDS_F;
    let rp = N_ROUNDS_P[t - 2];

    let mut state = Vec::with_capacity(t);
    state.push(FieldElement::ZERO);
    state.extend_from_slice(inputs);

    for r in 0..rf + rp {
        for (i, lane) in state.iter_mut().enumerate() {
            *lane += p.c[r * t + i];
        }
        if r < rf / 2 || r >= rf / 2 + rp {
            for lane in state.iter_mut() {
                *lane = pow5(*lane);
            }
        } else {
            state[0] = pow5(state[0]);
        }
        let mut next = vec![FieldElement::ZERO; t];
        for (i, out) in next.iter_mut().enumerate() {
            for (j, lane) in state.iter().enumerate() {
                *out += p.m[i][j] * *lane;
            }
        }
        state = next;
    }
    Ok(state[0])
}

/// Pairwise Poseidon convenience used throughout Merkle construction.
pub fn hash2(l: FieldElement, r: FieldElement) -> FieldElement {
    poseidon_hash(&[l, r]).expect("arity 2 is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_bounds() {
        assert!(matches!(poseidon_hash(&[]), Err(ArithError::InvalidArity(0))));
        let many = vec![FieldElement::ONE; 17];
        assert!(matches!(
            poseidon_hash(&many),
            Err(ArithError::InvalidArity(17))
        ));
    }

    #[test]
    fn deterministic() {
        let a = poseidon_hash(&[FieldElement::from_u64(42)]).unwrap();
        let b = poseidon_hash(&[FieldElement::from_u64(42)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn arity_is_domain_separated() {
        let one = poseidon_hash(&[FieldElement::ZERO]).unwrap();
        let two = poseidon_hash(&[FieldElement::ZERO, FieldElement::ZERO]).unwrap();
        assert_ne!(one, two);
    }
}
