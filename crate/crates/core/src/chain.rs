//! Finite Markov chains and exact law propagation.

use std::collections::HashSet;

use crate::aggregation::AggregationMap;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Default tolerance used when validating row sums.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// A finite homogeneous Markov chain: unique state labels plus a
/// row-stochastic transition matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    states: Vec<String>,
    transition: Matrix,
}

impl MarkovChain {
    /// Validates with the default row-sum tolerance.
    pub fn new<S: Into<String>>(states: Vec<S>, rows: Vec<Vec<f64>>) -> Result<Self> {
        validate_chain(states, rows, ROW_SUM_TOL)
    }

    /// Chain labelled `0..d` by index.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let states = (0..rows.len()).map(|i| i.to_string()).collect();
        validate_chain::<String>(states, rows, ROW_SUM_TOL)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn row(&self, z: usize) -> &[f64] {
        self.transition.row(z)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    /// Relabels states and permutes the matrix so that new index `i` is old
    /// index `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.dim())?;
        let d = self.dim();
        let mut transition = Matrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                transition[(i, j)] = self.transition[(order[i], order[j])];
            }
        }
        let states = order.iter().map(|&i| self.states[i].clone()).collect();
        Ok(Self { states, transition })
    }
}

pub(crate) fn check_permutation(order: &[usize], d: usize) -> Result<()> {
    if order.len() != d {
        return Err(Error::SizeMismatch {
            expected: d,
            found: order.len(),
        });
    }
    let mut seen = vec![false; d];
    for &i in order {
        if i >= d || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidParameter(format!(
                "{order:?} is not a permutation of 0..{d}"
            )));
        }
    }
    Ok(())
}

/// Checks and repairs a raw chain.
///
/// Entries in `[-tol, 0)` are clamped to zero and rows whose sum is within
/// `tol` of 1 are divided by their sum. Anything further off is rejected.
pub fn validate_chain<S: Into<String>>(
    raw_states: Vec<S>,
    raw_matrix: Vec<Vec<f64>>,
    tol: f64,
) -> Result<MarkovChain> {
    let states: Vec<String> = raw_states.into_iter().map(Into::into).collect();
    let d = raw_matrix.len();
    if d == 0 && states.is_empty() {
        return Err(Error::EmptyChain);
    }
    if states.len() != d {
        return Err(Error::LabelCountMismatch {
            states: states.len(),
            rows: d,
        });
    }
    for (row, r) in raw_matrix.iter().enumerate() {
        if r.len() != d {
            return Err(Error::NonSquare {
                rows: d,
                row,
                cols: r.len(),
            });
        }
    }
    let mut seen = HashSet::with_capacity(d);
    for s in &states {
        if !seen.insert(s.as_str()) {
            return Err(Error::DuplicateLabel(s.clone()));
        }
    }

    let mut rows = raw_matrix;
    for (row, r) in rows.iter_mut().enumerate() {
        for (col, p) in r.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFiniteEntry { row, col });
            }
            if *p < 0.0 {
                if *p < -tol {
                    return Err(Error::NegativeEntry { row, col });
                }
                *p = 0.0;
            }
        }
        let sum: f64 = r.iter().sum();
        let deviation = sum - 1.0;
        if deviation.abs() > tol {
            return Err(Error::RowSumOutOfTolerance { row, deviation });
        }
        if sum != 1.0 {
            for p in r.iter_mut() {
                *p /= sum;
            }
        }
    }

    Ok(MarkovChain {
        states,
        transition: Matrix::from_rows_unchecked(&rows),
    })
}

/// A probability vector over `0..d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionVector {
    probs: Vec<f64>,
}

impl DistributionVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, ROW_SUM_TOL)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(i) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {}",
                probs[i]
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution(format!("mass is {sum}")));
        }
        Ok(Self { probs })
    }

    pub fn point_mass(dim: usize, at: usize) -> Result<Self> {
        if at >= dim {
            return Err(Error::IndexOutOfRange {
                index: at,
                len: dim,
            });
        }
        let mut probs = vec![0.0; dim];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        Ok(Self {
            probs: vec![1.0 / dim as f64; dim],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.probs
    }
}

/// `P^n`, by repeated right-multiplication starting from `P`.
pub fn n_step(chain: &MarkovChain, n: usize) -> Matrix {
    let p = chain.transition();
    if n == 0 {
        return Matrix::identity(chain.dim());
    }
    let mut acc = p.clone();
    for _ in 1..n {
        acc = acc.matmul(p);
    }
    acc
}

/// Iterator over `P^1, P^2, ...`, sharing the products `n_step` computes.
pub(crate) fn powers(chain: &MarkovChain) -> impl Iterator<Item = Matrix> + '_ {
    let p = chain.transition();
    std::iter::successors(Some(p.clone()), move |acc| Some(acc.matmul(p)))
}

/// Block-aggregated row `z` of `P^n`: entry `y` is the probability of being
/// in block `y` after `n` steps from `z`.
pub fn aggregate_row(
    chain: &MarkovChain,
    z: usize,
    map: &AggregationMap,
    n: usize,
) -> Result<Vec<f64>> {
    check_map(chain, map)?;
    if z >= chain.dim() {
        return Err(Error::IndexOutOfRange {
            index: z,
            len: chain.dim(),
        });
    }
    Ok(map.aggregate(n_step(chain, n).row(z)))
}

/// `init * P^n`.
pub fn evolve_distribution(
    chain: &MarkovChain,
    init: &DistributionVector,
    n: usize,
) -> Result<DistributionVector> {
    if init.len() != chain.dim() {
        return Err(Error::SizeMismatch {
            expected: chain.dim(),
            found: init.len(),
        });
    }
    let p = chain.transition();
    let mut v = init.probs().to_vec();
    for _ in 0..n {
        v = p.left_mul(&v);
    }
    Ok(DistributionVector { probs: v })
}

pub(crate) fn check_map(chain: &MarkovChain, map: &AggregationMap) -> Result<()> {
    if map.source_size() != chain.dim() {
        return Err(Error::SizeMismatch {
            expected: chain.dim(),
            found: map.source_size(),
        });
    }
    Ok(())
}
