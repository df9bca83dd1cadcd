//! Onto maps from chain states to blocks.

use crate::error::{Error, Result};

/// A surjective map `f: 0..d -> 0..b`, stored both as `block_of` and as the
/// sorted member list of each block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregationMap {
    block_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl AggregationMap {
    /// Block count is `max(block_of) + 1`; every block must be hit.
    pub fn new(block_of: Vec<usize>) -> Result<Self> {
        if block_of.is_empty() {
            return Err(Error::InvalidAggregation("no source states".into()));
        }
        let b = block_of.iter().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); b];
        for (z, &y) in block_of.iter().enumerate() {
            members[y].push(z);
        }
        if let Some(y) = members.iter().position(Vec::is_empty) {
            return Err(Error::InvalidAggregation(format!("block {y} is empty")));
        }
        Ok(Self { block_of, members })
    }

    /// From an explicit list of blocks, which must partition `0..source_size`.
    pub fn from_blocks(source_size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut block_of = vec![usize::MAX; source_size];
        for (y, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidAggregation(format!("block {y} is empty")));
            }
            for &z in block {
                if z >= source_size {
                    return Err(Error::IndexOutOfRange {
                        index: z,
                        len: source_size,
                    });
                }
                if block_of[z] != usize::MAX {
                    return Err(Error::InvalidAggregation(format!(
                        "state {z} appears in blocks {} and {y}",
                        block_of[z]
                    )));
                }
                block_of[z] = y;
            }
        }
        if let Some(z) = block_of.iter().position(|&y| y == usize::MAX) {
            return Err(Error::InvalidAggregation(format!(
                "state {z} is not covered by any block"
            )));
        }
        Self::new(block_of)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            block_of: (0..d).collect(),
            members: (0..d).map(|z| vec![z]).collect(),
        }
    }

    pub fn constant(d: usize) -> Result<Self> {
        Self::new(vec![0; d])
    }

    pub fn source_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.members.len()
    }

    pub fn block_of(&self, z: usize) -> usize {
        self.block_of[z]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.block_of
    }

    /// Members of block `y` in ascending order.
    pub fn members(&self, y: usize) -> &[usize] {
        &self.members[y]
    }

    /// Lowest-index member of block `y`.
    pub fn representative(&self, y: usize) -> usize {
        self.members[y][0]
    }

    /// Sums a vector over `0..d` into block totals, adding in ascending
    /// source index.
    pub fn aggregate(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.source_size(), "vector length mismatch");
        let mut out = vec![0.0; self.block_count()];
        for (z, &p) in v.iter().enumerate() {
            out[self.block_of[z]] += p;
        }
        out
    }

    /// The same partition after relabelling source states so that new index
    /// `i` is old index `order[i]`. Block numbering is kept.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        crate::chain::check_permutation(order, self.source_size())?;
        Self::new(order.iter().map(|&z| self.block_of[z]).collect())
    }
}
