//! Random chains and partitions, for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::aggregation::AggregationMap;
use crate::chain::MarkovChain;
use crate::error::Result;

/// A random probability vector of length `len`. Each entry is zeroed with
/// probability `sparsity` (at least one entry always survives).
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, len: usize, sparsity: f64) -> Vec<f64> {
    let keep = rng.random_range(0..len);
    let mut w: Vec<f64> = (0..len)
        .map(|i| {
            if i != keep && rng.random_bool(sparsity) {
                0.0
            } else {
                // Exponential weights give a uniform draw from the simplex.
                -(1.0 - rng.random::<f64>()).ln() + f64::MIN_POSITIVE
            }
        })
        .collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    w
}

pub fn chain<R: Rng + ?Sized>(rng: &mut R, d: usize, sparsity: f64) -> Result<MarkovChain> {
    let rows = (0..d)
        .map(|_| probability_vector(rng, d, sparsity))
        .collect();
    MarkovChain::from_rows(rows)
}

/// A uniformly shuffled onto map from `d` states to `b` blocks.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, d: usize, b: usize) -> Result<AggregationMap> {
    let mut block_of: Vec<usize> = (0..d)
        .map(|z| if z < b { z } else { rng.random_range(0..b) })
        .collect();
    block_of.shuffle(rng);
    AggregationMap::new(block_of)
}

/// A chain on `map.source_size()` states that is strongly lumpable under
/// `map` with lumped transition matrix `lumped`: each block-to-block mass is
/// spread over the target block's members with random weights.
pub fn lift<R: Rng + ?Sized>(
    rng: &mut R,
    lumped: &MarkovChain,
    map: &AggregationMap,
) -> Result<MarkovChain> {
    let rows = (0..map.source_size())
        .map(|z| {
            let q = lumped.row(map.block_of(z));
            let mut row = vec![0.0; map.source_size()];
            for (y, &mass) in q.iter().enumerate() {
                let members = map.members(y);
                let w = probability_vector(rng, members.len(), 0.0);
                for (&m, wi) in members.iter().zip(w) {
                    row[m] = mass * wi;
                }
            }
            row
        })
        .collect();
    MarkovChain::from_rows(rows)
}
