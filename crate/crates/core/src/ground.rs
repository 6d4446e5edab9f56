//! Ground sets, their partition among players, and the cardinality bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense universe of elements `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("ground set must be non-empty".into()));
        }
        Ok(Self { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut ground = Self::new(labels.len())?;
        ground.labels = Some(labels);
        Ok(ground)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn label(&self, element: usize) -> String {
        match &self.labels {
            Some(labels) if element < labels.len() => labels[element].clone(),
            _ => format!("e{element}"),
        }
    }
}

/// Ground set split into disjoint per-player blocks `W_i`, with the private
/// input `V_i ⊆ W_i` each player actually receives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    ground: GroundSet,
    blocks: Vec<Vec<usize>>,
    private: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(ground: GroundSet, blocks: Vec<Vec<usize>>, private: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Invalid("partition needs at least one block".into()));
        }
        if blocks.len() != private.len() {
            return Err(Error::Invalid(format!(
                "{} blocks but {} private sets",
                blocks.len(),
                private.len()
            )));
        }
        let n = ground.size();
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n {
                    return Err(Error::Invalid(format!("element {e} outside ground set of size {n}")));
                }
                if owner[e] != usize::MAX {
                    return Err(Error::Invalid(format!("element {e} appears in two blocks")));
                }
                owner[e] = b;
            }
        }
        if let Some(e) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Invalid(format!("element {e} is not covered by any block")));
        }
        let mut seen = vec![false; n];
        for (b, set) in private.iter().enumerate() {
            for &e in set {
                if e >= n || owner[e] != b {
                    return Err(Error::Invalid(format!("private element {e} is not in block {b}")));
                }
                if seen[e] {
                    return Err(Error::Invalid(format!("private element {e} repeated")));
                }
                seen[e] = true;
            }
        }
        let sorted = |sets: Vec<Vec<usize>>| {
            sets.into_iter()
                .map(|mut s| {
                    s.sort_unstable();
                    s
                })
                .collect::<Vec<_>>()
        };
        Ok(Self {
            ground,
            blocks: sorted(blocks),
            private: sorted(private),
        })
    }

    /// Two blocks where each player receives its whole block.
    pub fn two_player(ground: GroundSet, alice: Vec<usize>, bob: Vec<usize>) -> Result<Self> {
        Self::new(ground, vec![alice.clone(), bob.clone()], vec![alice, bob])
    }

    /// Each player receives the whole block.
    pub fn full(ground: GroundSet, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let private = blocks.clone();
        Self::new(ground, blocks, private)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn players(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, player: usize) -> &[usize] {
        &self.blocks[player]
    }

    pub fn private_sets(&self) -> &[Vec<usize>] {
        &self.private
    }

    pub fn private(&self, player: usize) -> &[usize] {
        &self.private[player]
    }

    /// `W_1 ∪ … ∪ W_{upto}` (players are zero-based, `upto` inclusive).
    pub fn prefix_blocks(&self, upto: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.blocks[..=upto].iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }

    /// `V_1 ∪ … ∪ V_p`, sorted.
    pub fn all_private(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.private.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityConstraint {
    k: usize,
}

impl CardinalityConstraint {
    pub fn new(k: usize, ground_size: usize) -> Result<Self> {
        if k == 0 || k > ground_size {
            return Err(Error::Invalid(format!(
                "cardinality bound {k} must lie in 1..={ground_size}"
            )));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn admits(&self, set_len: usize) -> bool {
        set_len <= self.k
    }
}
