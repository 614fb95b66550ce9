use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use zkcred_arith::{poseidon_hash, FieldElement};
use zkcred_core::MerklePath;

use crate::delta::{StatusChange, StatusDelta};
use crate::RegistryError;

/// Status bits packed per leaf. 252 bits always fit below the modulus.
pub const BITS_PER_LEAF: u64 = 252;

pub const MIN_DEPTH: u32 = 1;
pub const MAX_DEPTH: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Valid,
    Revoked,
}

/// capacity(n) = 2^n * 252.
pub fn capacity(depth: u32) -> u64 {
    (1u64 << depth) * BITS_PER_LEAF
}

/// Leaf index (id / 252) and bit position (id % 252).
pub fn locate(id: u64) -> (u64, u64) {
    (id / BITS_PER_LEAF, id % BITS_PER_LEAF)
}

fn hash2(l: FieldElement, r: FieldElement) -> FieldElement {
    poseidon_hash(&[l, r]).expect("arity 2")
}

fn all_valid_leaf() -> FieldElement {
    // 2^252 - 1: every status bit set
    let v = (BigUint::from(1u8) << 252) - 1u8;
    FieldElement::from_biguint(&v)
}

/// Issuer-side registry: full node array (heap layout, root at index 1,
/// children of i at 2i and 2i+1, leaves at 2^n..2^(n+1)), a monotone
/// version and the append-only delta log.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RevocationRegistry {
    depth: u32,
    nodes: Vec<FieldElement>,
    version: u64,
    delta_log: Vec<StatusDelta>,
}

impl RevocationRegistry {
    /// Fresh registry: every credential valid, version 0.
    pub fn new(depth: u32) -> Result<Self, RegistryError> {
        if !(MIN_DEPTH..=MAX_DEPTH).contains(&depth) {
            return Err(RegistryError::DepthOutOfRange(depth));
        }
        let leaf_count = 1usize << depth;
        let mut nodes = vec![FieldElement::ZERO; 2 * leaf_count];
        let leaf = all_valid_leaf();
        for n in nodes.iter_mut().skip(leaf_count) {
            *n = leaf;
        }
        for i in (1..leaf_count).rev() {
            nodes[i] = hash2(nodes[2 * i], nodes[2 * i + 1]);
        }
        Ok(RevocationRegistry {
            depth,
            nodes,
            version: 0,
            delta_log: Vec::new(),
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn capacity(&self) -> u64 {
        capacity(self.depth)
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn root(&self) -> FieldElement {
        self.nodes[1]
    }

    pub fn delta_log(&self) -> &[StatusDelta] {
        &self.delta_log
    }

    pub fn leaf(&self, leaf_index: u64) -> FieldElement {
        self.nodes[(1usize << self.depth) + leaf_index as usize]
    }

    /// Node by heap index; index 1 is the root.
    pub fn node(&self, index: u64) -> Option<FieldElement> {
        self.nodes.get(index as usize).copied()
    }

    /// All (heap index, value) pairs with depth <= max_level. Level 0 is
    /// the root; the response never depends on any particular leaf, which
    /// is what hybrid sync relies on.
    pub fn nodes_up_to_level(&self, max_level: u32) -> Vec<(u64, FieldElement)> {
        let max_level = max_level.min(self.depth);
        let mut out = Vec::new();
        for level in 0..=max_level {
            let start = 1u64 << level;
            let end = 1u64 << (level + 1);
            for i in start..end {
                out.push((i, self.nodes[i as usize]));
            }
        }
        out
    }

    pub fn status(&self, id: u64) -> Result<Status, RegistryError> {
        self.check_id(id)?;
        let (leaf_idx, bit_idx) = locate(id);
        let leaf = self.leaf(leaf_idx).to_biguint();
        Ok(if leaf.bit(bit_idx) {
            Status::Valid
        } else {
            Status::Revoked
        })
    }

    fn check_id(&self, id: u64) -> Result<(), RegistryError> {
        if id >= self.capacity() {
            return Err(RegistryError::IdOutOfRange {
                id,
                capacity: self.capacity(),
            });
        }
        Ok(())
    }

    /// Apply a change set atomically: bits updated, the affected paths
    /// rehashed, the version bumped once and the delta appended.
    pub fn apply_changes(&mut self, changes: &[(u64, Status)]) -> Result<StatusDelta, RegistryError> {
        for (id, _) in changes {
            self.check_id(*id)?;
        }
        let leaf_base = 1usize << self.depth;
        let mut touched = Vec::new();
        for &(id, status) in changes {
            let (leaf_idx, bit_idx) = locate(id);
            let mut leaf = self.leaf(leaf_idx).to_biguint();
            leaf.set_bit(bit_idx, status == Status::Valid);
            self.nodes[leaf_base + leaf_idx as usize] = FieldElement::from_biguint(&leaf);
            touched.push(leaf_idx);
        }
        // rehash each touched path once
        touched.sort_unstable();
        touched.dedup();
        for leaf_idx in touched {
            let mut i = (leaf_base as u64 + leaf_idx) / 2;
            while i >= 1 {
                self.nodes[i as usize] =
                    hash2(self.nodes[2 * i as usize], self.nodes[2 * i as usize + 1]);
                if i == 1 {
                    break;
                }
                i /= 2;
            }
        }
        self.version += 1;
        let delta = StatusDelta {
            version: self.version,
            changes: changes
                .iter()
                .map(|&(id, status)| StatusChange { id, status })
                .collect(),
        };
        self.delta_log.push(delta.clone());
        Ok(delta)
    }

    pub fn set_status(&mut self, id: u64, status: Status) -> Result<StatusDelta, RegistryError> {
        self.apply_changes(&[(id, status)])
    }

    pub fn path(&self, leaf_index: u64) -> MerklePath {
        let mut siblings = Vec::with_capacity(self.depth as usize);
        let mut index_bits = Vec::with_capacity(self.depth as usize);
        let mut i = (1u64 << self.depth) + leaf_index;
        while i > 1 {
            siblings.push(self.nodes[(i ^ 1) as usize]);
            index_bits.push(i & 1 == 1);
            i /= 2;
        }
        MerklePath {
            siblings,
            index_bits,
        }
    }

    /// Non-revocation witness for a currently valid credential.
    pub fn witness(&self, id: u64) -> Result<NonRevocationWitness, RegistryError> {
        self.check_id(id)?;
        if self.status(id)? == Status::Revoked {
            return Err(RegistryError::Revoked(id));
        }
        let (leaf_idx, _) = locate(id);
        Ok(NonRevocationWitness {
            revocation_id: id,
            leaf_value: self.leaf(leaf_idx),
            path: self.path(leaf_idx),
            root: self.root(),
            version: self.version,
        })
    }

    /// Bytes of the full serialized node array (leaves plus inner nodes).
    pub fn serialized_tree_bytes(&self) -> usize {
        (self.nodes.len() - 1) * 32
    }

    /// Rebuild from the all-valid initial state by replaying a delta log.
    pub fn replay(depth: u32, deltas: &[StatusDelta]) -> Result<Self, RegistryError> {
        let mut reg = RevocationRegistry::new(depth)?;
        for d in deltas {
            if d.version != reg.version + 1 {
                return Err(RegistryError::VersionGap {
                    local: reg.version,
                    got: d.version,
                });
            }
            let changes: Vec<(u64, Status)> = d.changes.iter().map(|c| (c.id, c.status)).collect();
            reg.apply_changes(&changes)?;
            // apply_changes appends a fresh delta; keep the log as given
            reg.delta_log.pop();
            reg.delta_log.push(d.clone());
        }
        Ok(reg)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonRevocationWitness {
    pub revocation_id: u64,
    pub leaf_value: FieldElement,
    pub path: MerklePath,
    pub root: FieldElement,
    pub version: u64,
}

impl NonRevocationWitness {
    /// Path verifies against the root and the status bit is set.
    pub fn verify(&self) -> bool {
        let (leaf_idx, bit_idx) = locate(self.revocation_id);
        zkcred_core::merkle_verify(self.leaf_value, leaf_idx as usize, &self.path, self.root)
            && self.leaf_value.to_biguint().bit(bit_idx)
    }
}
