//! Binary Merkle folds over Poseidon: H(left, right) per level, exactly
//! 2^k - 1 hash evaluations for 2^k leaves.

use serde::{Deserialize, Serialize};

use zkcred_arith::{poseidon_hash, FieldElement};

use crate::CoreError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MerklePath {
    pub siblings: Vec<FieldElement>,
    /// Bit per level, least-significant first: true when the current node
    /// is the right child.
    pub index_bits: Vec<bool>,
}

impl MerklePath {
    pub fn depth(&self) -> usize {
        self.siblings.len()
    }
}

fn hash2(l: FieldElement, r: FieldElement) -> FieldElement {
    poseidon_hash(&[l, r]).expect("arity 2")
}

pub fn merkle_root(leaves: &[FieldElement]) -> Result<FieldElement, CoreError> {
    if leaves.is_empty() || !leaves.len().is_power_of_two() {
        return Err(CoreError::NotPowerOfTwo(leaves.len()));
    }
    let mut level = leaves.to_vec();
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| hash2(pair[0], pair[1]))
            .collect();
    }
    Ok(level[0])
}

pub fn merkle_prove(leaves: &[FieldElement], index: usize) -> Result<MerklePath, CoreError> {
    if leaves.is_empty() || !leaves.len().is_power_of_two() {
        return Err(CoreError::NotPowerOfTwo(leaves.len()));
    }
    if index >= leaves.len() {
        return Err(CoreError::IndexOutOfRange {
            index,
            len: leaves.len(),
        });
    }
    let mut siblings = Vec::new();
    let mut index_bits = Vec::new();
    let mut level = leaves.to_vec();
    let mut idx = index;
    while level.len() > 1 {
        let is_right = idx % 2 == 1;
        siblings.push(level[idx ^ 1]);
        index_bits.push(is_right);
        level = level
            .chunks(2)
            .map(|pair| hash2(pair[0], pair[1]))
            .collect();
        idx /= 2;
    }
    Ok(MerklePath {
        siblings,
        index_bits,
    })
}

pub fn merkle_verify(
    leaf: FieldElement,
    index: usize,
    path: &MerklePath,
    root: FieldElement,
) -> bool {
    if path.siblings.len() != path.index_bits.len() {
        return false;
    }
    if path.depth() < usize::BITS as usize - 1 && index >= (1usize << path.depth()) {
        return false;
    }
    let mut current = leaf;
    for (level, (&sibling, &is_right)) in path
        .siblings
        .iter()
        .zip(path.index_bits.iter())
        .enumerate()
    {
        if ((index >> level) & 1 == 1) != is_right {
            return false;
        }
        current = if is_right {
            hash2(sibling, current)
        } else {
            hash2(current, sibling)
        };
    }
    current == root
}

/// Ascend from a known leaf using only a path (no full leaf set), for
/// witness construction against sparse local state.
pub fn ascend(leaf: FieldElement, path: &MerklePath) -> FieldElement {
    let mut current = leaf;
    for (&sibling, &is_right) in path.siblings.iter().zip(path.index_bits.iter()) {
        current = if is_right {
            hash2(sibling, current)
        } else {
            hash2(current, sibling)
        };
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves(n: usize) -> Vec<FieldElement> {
        (0..n as u64).map(|i| FieldElement::from_u64(i * 11 + 3)).collect()
    }

    #[test]
    fn single_leaf_is_its_own_root() {
        let l = [FieldElement::from_u64(77)];
        assert_eq!(merkle_root(&l).unwrap(), l[0]);
    }

    #[test]
    fn zero_tree_pin() {
        // 8 all-zero leaves, pinned from pairwise brute-force hashing with
        // the reference Poseidon
        let root = merkle_root(&[FieldElement::ZERO; 8]).unwrap();
        assert_eq!(
            root,
            FieldElement::from_dec_str(
                "11286972368698509976183087595462810875513684078608517520839298933882497716792"
            )
            .unwrap()
        );
    }

    #[test]
    fn round_trip_every_index() {
        let l = leaves(8);
        let root = merkle_root(&l).unwrap();
        for i in 0..8 {
            let path = merkle_prove(&l, i).unwrap();
            assert_eq!(path.depth(), 3);
            assert!(merkle_verify(l[i], i, &path, root));
        }
    }

    #[test]
    fn perturbed_sibling_fails() {
        let l = leaves(8);
        let root = merkle_root(&l).unwrap();
        let mut path = merkle_prove(&l, 3).unwrap();
        path.siblings[1] += FieldElement::ONE;
        assert!(!merkle_verify(l[3], 3, &path, root));
    }

    #[test]
    fn sibling_order_matters() {
        let mut l = leaves(8);
        let root = merkle_root(&l).unwrap();
        l.swap(4, 5);
        assert_ne!(merkle_root(&l).unwrap(), root);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(merkle_root(&leaves(6)).is_err());
        assert!(merkle_root(&[]).is_err());
    }
}
