use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::polynomial::Polynomial;
use crate::scalar::Scalar;

/// Variable blocks `(k_1, ..., k_w)` with per-block degree caps `(d_1, ..., d_w)`.
/// Block `i` owns a contiguous run of `k_i` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockSpec {
    block_sizes: Vec<usize>,
    degree_caps: Vec<u32>,
}

impl BlockSpec {
    pub fn new(block_sizes: Vec<usize>, degree_caps: Vec<u32>) -> Result<Self> {
        if block_sizes.is_empty() {
            return Err(Error::InvalidBlocks("at least one block is required".into()));
        }
        if block_sizes.len() != degree_caps.len() {
            return Err(Error::InvalidBlocks(format!(
                "{} block sizes but {} degree caps",
                block_sizes.len(),
                degree_caps.len()
            )));
        }
        if block_sizes.contains(&0) {
            return Err(Error::InvalidBlocks("block sizes must be positive".into()));
        }
        if degree_caps.contains(&0) {
            return Err(Error::InvalidBlocks("degree caps must be positive".into()));
        }
        Ok(BlockSpec { block_sizes, degree_caps })
    }

    pub fn single(k: usize, d: u32) -> Result<Self> {
        BlockSpec::new(vec![k], vec![d])
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn degree_caps(&self) -> &[u32] {
        &self.degree_caps
    }

    pub fn block_count(&self) -> usize {
        self.block_sizes.len()
    }

    /// `|k| = k_1 + ... + k_w`.
    pub fn total_vars(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn block_range(&self, block: usize) -> Range<usize> {
        let start: usize = self.block_sizes[..block].iter().sum();
        start..start + self.block_sizes[block]
    }

    /// `d_i' = min(k_i, d_i)`.
    pub fn reduced_degrees(&self) -> Vec<usize> {
        self.block_sizes.iter().zip(&self.degree_caps).map(|(&k, &d)| k.min(d as usize)).collect()
    }

    /// Dimension of the power-sum image space, `sum_i min(k_i, d_i)`.
    pub fn image_dim(&self) -> usize {
        self.reduced_degrees().iter().sum()
    }

    pub fn check_covers<S: Scalar>(&self, p: &Polynomial<S>) -> Result<()> {
        if p.var_count() != self.total_vars() {
            return Err(Error::DimensionMismatch { expected: self.total_vars(), got: p.var_count() });
        }
        Ok(())
    }
}

/// Per-block degree of `p`; with a single block this is the total degree.
pub fn multidegree<S: Scalar>(p: &Polynomial<S>, blocks: &BlockSpec) -> Result<Vec<u32>> {
    blocks.check_covers(p)?;
    Ok((0..blocks.block_count()).map(|b| p.degree_in_range(blocks.block_range(b))).collect())
}
