//! Hybrid synchronization: the wallet stores only the bottom subtree that
//! contains its leaf (kept current via deltas) and fetches the upper node
//! levels wholesale, a query that does not depend on which leaf the
//! wallet cares about.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use zkcred_arith::FieldElement;
use zkcred_core::MerklePath;

use crate::bitmap::{locate, NonRevocationWitness, RevocationRegistry};
use crate::RegistryError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HybridSyncPlan {
    pub depth: u32,
    /// Levels cut off the top; the stored subtree covers 2^-j of the leaves.
    pub subtree_levels_cut: u32,
    /// Which of the 2^j subtrees holds the client's leaf.
    pub subtree_index: u64,
    pub stored_nodes: u64,
    pub stored_bytes: u64,
    pub fetched_upper_nodes: u64,
    pub fetched_bytes: u64,
}

/// Storage and download plan for a depth-n registry where the client keeps
/// the 1/2^j bottom subtree containing `leaf_index`.
pub fn hybrid_sync_plan(depth: u32, levels_cut: u32, leaf_index: u64) -> Result<HybridSyncPlan, RegistryError> {
    if levels_cut > depth {
        return Err(RegistryError::DepthOutOfRange(levels_cut));
    }
    if leaf_index >= 1u64 << depth {
        return Err(RegistryError::LeafOutsideSubtree { leaf: leaf_index });
    }
    let sub_depth = depth - levels_cut;
    let stored_nodes = (1u64 << (sub_depth + 1)) - 1;
    let fetched_upper_nodes = if levels_cut == 0 {
        0
    } else {
        (1u64 << (levels_cut + 1)) - 1
    };
    Ok(HybridSyncPlan {
        depth,
        subtree_levels_cut: levels_cut,
        subtree_index: leaf_index >> sub_depth,
        stored_nodes,
        stored_bytes: stored_nodes * 32,
        fetched_upper_nodes,
        fetched_bytes: fetched_upper_nodes * 32,
    })
}

/// Client state holding one bottom subtree plus fetched upper nodes.
#[derive(Clone, Debug)]
pub struct SubtreeState {
    depth: u32,
    levels_cut: u32,
    subtree_index: u64,
    /// Heap-layout node array of the subtree (root of the subtree at 1).
    nodes: Vec<FieldElement>,
    /// Upper nodes of the global tree by heap index (levels 0..=levels_cut).
    upper: HashMap<u64, FieldElement>,
    version: u64,
}

impl SubtreeState {
    /// Snapshot the subtree containing `leaf_index` out of a full registry
    /// mirror, e.g. after an initial bulk download.
    pub fn from_registry(
        reg: &RevocationRegistry,
        levels_cut: u32,
        leaf_index: u64,
    ) -> Result<Self, RegistryError> {
        let plan = hybrid_sync_plan(reg.depth(), levels_cut, leaf_index)?;
        let sub_depth = reg.depth() - levels_cut;
        let sub_leaves = 1u64 << sub_depth;
        let first_leaf = plan.subtree_index * sub_leaves;
        let mut nodes = vec![FieldElement::ZERO; (2 * sub_leaves) as usize];
        for i in 0..sub_leaves {
            nodes[(sub_leaves + i) as usize] = reg.leaf(first_leaf + i);
        }
        for i in (1..sub_leaves).rev() {
            nodes[i as usize] = zkcred_arith::poseidon_hash(&[
                nodes[(2 * i) as usize],
                nodes[(2 * i + 1) as usize],
            ])?;
        }
        Ok(SubtreeState {
            depth: reg.depth(),
            levels_cut,
            subtree_index: plan.subtree_index,
            nodes,
            upper: HashMap::new(),
            version: reg.version(),
        })
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn subtree_root(&self) -> FieldElement {
        self.nodes[1]
    }

    fn sub_depth(&self) -> u32 {
        self.depth - self.levels_cut
    }

    fn contains_leaf(&self, leaf_index: u64) -> bool {
        leaf_index >> self.sub_depth() == self.subtree_index
    }

    /// Install the upper-level node set fetched from the service.
    pub fn set_upper_nodes(&mut self, nodes: &[(u64, FieldElement)]) {
        for &(i, v) in nodes {
            self.upper.insert(i, v);
        }
    }

    /// Apply deltas, ignoring changes that fall outside the stored subtree
    /// (their effect arrives through the refreshed upper nodes).
    pub fn apply_deltas(&mut self, deltas: &[crate::StatusDelta]) -> Result<(), RegistryError> {
        use crate::bitmap::Status;
        for d in deltas {
            if d.version != self.version + 1 {
                return Err(RegistryError::VersionGap {
                    local: self.version,
                    got: d.version,
                });
            }
            let sub_leaves = 1u64 << self.sub_depth();
            let first_leaf = self.subtree_index * sub_leaves;
            for c in &d.changes {
                let (leaf_idx, bit_idx) = locate(c.id);
                if !self.contains_leaf(leaf_idx) {
                    continue;
                }
                let local = sub_leaves + (leaf_idx - first_leaf);
                let mut leaf = self.nodes[local as usize].to_biguint();
                leaf.set_bit(bit_idx, c.status == Status::Valid);
                self.nodes[local as usize] = FieldElement::from_biguint(&leaf);
                let mut i = local / 2;
                while i >= 1 {
                    self.nodes[i as usize] = zkcred_arith::poseidon_hash(&[
                        self.nodes[(2 * i) as usize],
                        self.nodes[(2 * i + 1) as usize],
                    ])?;
                    if i == 1 {
                        break;
                    }
                    i /= 2;
                }
            }
            self.version = d.version;
        }
        Ok(())
    }

    /// Witness assembled from the local subtree plus fetched upper nodes;
    /// verifies against the global root when the upper set is current.
    pub fn witness(&self, id: u64) -> Result<NonRevocationWitness, RegistryError> {
        let (leaf_idx, bit_idx) = locate(id);
        if !self.contains_leaf(leaf_idx) {
            return Err(RegistryError::LeafOutsideSubtree { leaf: leaf_idx });
        }
        let sub_leaves = 1u64 << self.sub_depth();
        let first_leaf = self.subtree_index * sub_leaves;
        let local = sub_leaves + (leaf_idx - first_leaf);
        let leaf_value = self.nodes[local as usize];
        if !leaf_value.to_biguint().bit(bit_idx) {
            return Err(RegistryError::Revoked(id));
        }

        let mut siblings = Vec::with_capacity(self.depth as usize);
        let mut index_bits = Vec::with_capacity(self.depth as usize);
        // bottom part from the local subtree
        let mut i = local;
        while i > 1 {
            siblings.push(self.nodes[(i ^ 1) as usize]);
            index_bits.push(i & 1 == 1);
            i /= 2;
        }
        // upper part from the fetched node set; global heap index of the
        // subtree root is 2^levels_cut + subtree_index
        let mut g = (1u64 << self.levels_cut) + self.subtree_index;
        let root = loop {
            if g == 1 {
                break *self
                    .upper
                    .get(&1)
                    .ok_or(RegistryError::MissingUpperNode { index: 1 })?;
            }
            let sib = *self
                .upper
                .get(&(g ^ 1))
                .ok_or(RegistryError::MissingUpperNode { index: g ^ 1 })?;
            siblings.push(sib);
            index_bits.push(g & 1 == 1);
            g /= 2;
        };
        Ok(NonRevocationWitness {
            revocation_id: id,
            leaf_value,
            path: MerklePath {
                siblings,
                index_bits,
            },
            root,
            version: self.version,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmap::Status;

    #[test]
    fn plan_depth13_full_tree() {
        let p = hybrid_sync_plan(13, 0, 0).unwrap();
        assert_eq!(p.stored_bytes, ((1u64 << 14) - 1) * 32); // ~0.5 MB
        assert_eq!(p.fetched_upper_nodes, 0);
    }

    #[test]
    fn plan_depth13_quarter() {
        let p = hybrid_sync_plan(13, 2, 6000).unwrap();
        assert_eq!(p.stored_nodes, (1 << 12) - 1);
        assert_eq!(p.stored_bytes, ((1u64 << 12) - 1) * 32); // ~120 kB
        assert_eq!(p.subtree_index, 6000 >> 11);
    }

    #[test]
    fn hybrid_witness_matches_global_root() {
        let mut reg = RevocationRegistry::new(6).unwrap();
        reg.set_status(7, Status::Revoked).unwrap();
        let mut sub = SubtreeState::from_registry(&reg, 2, 3).unwrap();
        sub.set_upper_nodes(&reg.nodes_up_to_level(2));
        let w = sub.witness(3).unwrap();
        assert_eq!(w.root, reg.root());
        assert!(w.verify());
    }

    #[test]
    fn leaf_outside_subtree_errors() {
        let reg = RevocationRegistry::new(6).unwrap();
        let mut sub = SubtreeState::from_registry(&reg, 2, 0).unwrap();
        sub.set_upper_nodes(&reg.nodes_up_to_level(2));
        // leaf 16 sits in the second quarter
        assert!(matches!(
            sub.witness(16 * 252),
            Err(RegistryError::LeafOutsideSubtree { .. })
        ));
    }

    #[test]
    fn deltas_keep_subtree_consistent() {
        let mut reg = RevocationRegistry::new(6).unwrap();
        let mut sub = SubtreeState::from_registry(&reg, 2, 3).unwrap();
        let d1 = reg.set_status(5, Status::Revoked).unwrap();
        let d2 = reg.set_status(2000, Status::Revoked).unwrap();
        sub.apply_deltas(&[d1, d2]).unwrap();
        sub.set_upper_nodes(&reg.nodes_up_to_level(2));
        let w = sub.witness(3).unwrap();
        assert_eq!(w.root, reg.root());
        assert!(w.verify());
    }
}
