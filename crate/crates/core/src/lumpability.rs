//! Deciding whether an aggregated chain is itself Markov.
//!
//! Two criteria are provided. [`strong_check`] compares one-step aggregated
//! rows of every pair of states sharing a block (strong lumpability).
//! [`cameron_check`] compares n-step aggregated rows for every `n` in
//! `1..=d`; by Cayley–Hamilton every higher power of `P` is a linear
//! combination of `P^1..P^d`, so this horizon decides the "for every n"
//! condition. Singleton blocks suffice for arbitrary block events by
//! additivity.
//!
//! Comparisons are absolute. A witness names the lexicographically first
//! violating pair `(z, z')`, the smallest violating horizon `n` for that
//! pair, and among the blocks violating at that horizon the one that `z`
//! over-weights most relative to `z'` (lowest index on ties).

use std::fmt;

use serde::Serialize;

use crate::aggregation::AggregationMap;
use crate::chain::{self, check_map, MarkovChain};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub z: usize,
    pub z_prime: usize,
    pub block: usize,
    pub n: usize,
    pub discrepancy: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(z={}, z'={}, block={}, n={}, Δ={})",
            self.z, self.z_prime, self.block, self.n, self.discrepancy
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LumpabilityVerdict {
    pub lumpable: bool,
    pub witness: Option<Witness>,
    /// Largest absolute difference seen over every compared pair, block and
    /// horizon.
    pub max_discrepancy: f64,
}

impl fmt::Display for LumpabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "lumpable (max discrepancy {})", self.max_discrepancy),
            Some(w) => write!(
                f,
                "not lumpable, witness {w} (max discrepancy {})",
                self.max_discrepancy
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    Strong,
    Cameron,
}

pub fn check(
    chain: &MarkovChain,
    map: &AggregationMap,
    tol: f64,
    criterion: Criterion,
) -> Result<LumpabilityVerdict> {
    match criterion {
        Criterion::Strong => strong_check(chain, map, tol),
        Criterion::Cameron => cameron_check(chain, map, tol),
    }
}

/// One-step condition: states in the same block have equal aggregated rows.
pub fn strong_check(
    chain: &MarkovChain,
    map: &AggregationMap,
    tol: f64,
) -> Result<LumpabilityVerdict> {
    check_map(chain, map)?;
    let agg = aggregate_all(chain.transition().rows(), map);
    Ok(compare_horizons(map, &[agg], tol))
}

/// n-step condition for every `n` in `1..=d`.
pub fn cameron_check(
    chain: &MarkovChain,
    map: &AggregationMap,
    tol: f64,
) -> Result<LumpabilityVerdict> {
    check_map(chain, map)?;
    let horizons: Vec<_> = chain::powers(chain)
        .take(chain.dim())
        .map(|p| aggregate_all(p.rows(), map))
        .collect();
    Ok(compare_horizons(map, &horizons, tol))
}

/// The chain on blocks, with block `y`'s row taken from its lowest-index
/// member. Labels are `B0..B{b-1}`.
pub fn lumped_chain(chain: &MarkovChain, map: &AggregationMap, tol: f64) -> Result<MarkovChain> {
    let verdict = strong_check(chain, map, tol)?;
    if !verdict.lumpable {
        return Err(Error::NotLumpable(Box::new(verdict)));
    }
    let rows = (0..map.block_count())
        .map(|y| map.aggregate(chain.row(map.representative(y))))
        .collect();
    let labels = (0..map.block_count()).map(|y| format!("B{y}")).collect();
    chain::validate_chain::<String>(labels, rows, chain::ROW_SUM_TOL)
}

fn aggregate_all<'a>(rows: impl Iterator<Item = &'a [f64]>, map: &AggregationMap) -> Vec<Vec<f64>> {
    rows.map(|r| map.aggregate(r)).collect()
}

/// `horizons[k]` holds aggregated rows at horizon `n = k + 1`.
fn compare_horizons(
    map: &AggregationMap,
    horizons: &[Vec<Vec<f64>>],
    tol: f64,
) -> LumpabilityVerdict {
    let mut max_discrepancy = 0.0_f64;
    let mut witness = None;
    for y in 0..map.block_count() {
        let members = map.members(y);
        for (i, &z) in members.iter().enumerate() {
            for &z_prime in &members[i + 1..] {
                for (k, agg) in horizons.iter().enumerate() {
                    let (a, b) = (&agg[z], &agg[z_prime]);
                    let mut best: Option<(usize, f64)> = None;
                    for block in 0..a.len() {
                        let signed = a[block] - b[block];
                        let gap = signed.abs();
                        max_discrepancy = max_discrepancy.max(gap);
                        if gap > tol && best.is_none_or(|(_, s)| signed > s) {
                            best = Some((block, signed));
                        }
                    }
                    if let Some((block, signed)) = best {
                        let candidate = Witness {
                            z,
                            z_prime,
                            block,
                            n: k + 1,
                            discrepancy: signed.abs(),
                        };
                        if witness.is_none_or(|w: Witness| (z, z_prime) < (w.z, w.z_prime)) {
                            witness = Some(candidate);
                        }
                    }
                }
            }
        }
    }
    LumpabilityVerdict {
        lumpable: witness.is_none(),
        witness,
        max_discrepancy,
    }
}
