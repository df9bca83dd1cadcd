//! Chi-square test of first-order against second-order Markov dependence.
//!
//! Consecutive triples `(a, b, c)` are counted and, for each middle symbol
//! `b`, the `a × c` table is tested for independence. Under a first-order
//! source `c` is independent of `a` given `b`, so the pooled statistic over
//! strata is asymptotically chi-square with the summed degrees of freedom.
//!
//! Sparse categories are pooled within a stratum before testing: while the
//! smallest expected cell is below `min_expected`, the two categories with
//! the smallest marginals (on whichever side has the smaller marginal) are
//! merged. A stratum left with fewer than two categories on either side
//! contributes nothing.

use std::fmt;

use serde::Serialize;

use super::chi2::chi2_sf;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCounts {
    k: usize,
    counts: Vec<u64>,
}

impl TripleCounts {
    pub fn zeros(k: usize) -> Self {
        Self {
            k,
            counts: vec![0; k * k * k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.counts[(a * self.k + b) * self.k + c]
    }

    fn bump(&mut self, a: usize, b: usize, c: usize) {
        self.counts[(a * self.k + b) * self.k + c] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Adds another table with the same alphabet.
    pub fn merge(&mut self, other: &TripleCounts) -> Result<()> {
        if other.k != self.k {
            return Err(Error::SizeMismatch {
                expected: self.k,
                found: other.k,
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// Counts with symbol `s` renamed to `perm[s]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        crate::chain::check_permutation(perm, self.k)?;
        let mut out = Self::zeros(self.k);
        for a in 0..self.k {
            for b in 0..self.k {
                for c in 0..self.k {
                    out.counts[(perm[a] * self.k + perm[b]) * self.k + perm[c]] = self.get(a, b, c);
                }
            }
        }
        Ok(out)
    }

    /// The `a × c` table for middle symbol `b`.
    pub fn stratum(&self, b: usize) -> Vec<Vec<u64>> {
        (0..self.k)
            .map(|a| (0..self.k).map(|c| self.get(a, b, c)).collect())
            .collect()
    }
}

/// Counts windows `(y[n-1], y[n], y[n+1])` within each trajectory; no
/// window spans two trajectories.
pub fn count_triples<T: AsRef<[usize]>>(trajectories: &[T], k: usize) -> Result<TripleCounts> {
    let mut counts = TripleCounts::zeros(k);
    for (i, t) in trajectories.iter().enumerate() {
        let t = t.as_ref();
        if t.len() < 3 {
            return Err(Error::TrajectoryTooShort {
                trajectory: i,
                len: t.len(),
                min: 3,
            });
        }
        if let Some(&symbol) = t.iter().find(|&&s| s >= k) {
            return Err(Error::SymbolOutOfRange {
                trajectory: i,
                symbol,
                k,
            });
        }
        for w in t.windows(3) {
            counts.bump(w[0], w[1], w[2]);
        }
    }
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumResult {
    pub middle: usize,
    pub total: u64,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: Option<f64>,
    /// Row (previous symbol) categories left after pooling.
    pub rows_retained: usize,
    /// Column (next symbol) categories left after pooling.
    pub cols_retained: usize,
}

impl StratumResult {
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderTestReport {
    pub k: usize,
    pub strata: Vec<StratumResult>,
    /// Sum of the stratum statistics.
    pub statistic: f64,
    /// Sum of the stratum degrees of freedom.
    pub dof: usize,
    pub p_value: Option<f64>,
    pub alpha: Option<f64>,
    /// Whether first order is rejected at `alpha`.
    pub reject: Option<bool>,
}

impl fmt::Display for OrderTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.k)?;
        for s in &self.strata {
            write!(
                f,
                "stratum {}: n={} statistic={} dof={} table={}x{}",
                s.middle, s.total, s.statistic, s.dof, s.rows_retained, s.cols_retained
            )?;
            match (s.is_empty(), s.p_value) {
                (true, _) => writeln!(f, " (empty)")?,
                (false, Some(p)) => writeln!(f, " p={p}")?,
                (false, None) => writeln!(f)?,
            }
        }
        writeln!(f, "pooled statistic: {}", self.statistic)?;
        writeln!(f, "pooled dof: {}", self.dof)?;
        if let Some(p) = self.p_value {
            writeln!(f, "p-value: {p}")?;
        }
        if let (Some(alpha), Some(reject)) = (self.alpha, self.reject) {
            let verdict = if reject {
                "reject first order"
            } else {
                "fail to reject first order"
            };
            writeln!(f, "decision at alpha={alpha}: {verdict}")?;
        }
        Ok(())
    }
}

pub const DEFAULT_MIN_EXPECTED: f64 = 5.0;
pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_BURN_IN: usize = 100;

/// Per-stratum and pooled statistics. P-values are left empty.
pub fn chi2_conditional_independence(
    counts: &TripleCounts,
    min_expected: f64,
) -> Result<OrderTestReport> {
    if min_expected.is_nan() || min_expected <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "min_expected must be positive, got {min_expected}"
        )));
    }
    let strata: Vec<_> = (0..counts.k())
        .map(|b| test_stratum(b, &counts.stratum(b), min_expected))
        .collect();
    Ok(OrderTestReport {
        k: counts.k(),
        statistic: strata.iter().map(|s| s.statistic).sum(),
        dof: strata.iter().map(|s| s.dof).sum(),
        strata,
        p_value: None,
        alpha: None,
        reject: None,
    })
}

fn test_stratum(middle: usize, table: &[Vec<u64>], min_expected: f64) -> StratumResult {
    let k = table.len();
    let total: u64 = table.iter().flatten().sum();
    let row_total = |a: usize| table[a].iter().sum::<u64>();
    let col_total = |c: usize| table.iter().map(|r| r[c]).sum::<u64>();

    let mut rows: Vec<Vec<usize>> = (0..k)
        .filter(|&a| row_total(a) > 0)
        .map(|a| vec![a])
        .collect();
    let mut cols: Vec<Vec<usize>> = (0..k)
        .filter(|&c| col_total(c) > 0)
        .map(|c| vec![c])
        .collect();
    let marginal = |groups: &[Vec<usize>], f: &dyn Fn(usize) -> u64| -> Vec<u64> {
        groups
            .iter()
            .map(|g| g.iter().map(|&i| f(i)).sum())
            .collect()
    };

    let n = total as f64;
    loop {
        if rows.len() < 2 || cols.len() < 2 {
            return StratumResult {
                middle,
                total,
                statistic: 0.0,
                dof: 0,
                p_value: None,
                rows_retained: rows.len(),
                cols_retained: cols.len(),
            };
        }
        let r = marginal(&rows, &row_total);
        let c = marginal(&cols, &col_total);
        let (min_r, min_c) = (*r.iter().min().unwrap(), *c.iter().min().unwrap());
        if min_r as f64 * min_c as f64 / n >= min_expected {
            break;
        }
        if min_r <= min_c {
            merge_two_smallest(&mut rows, &r);
        } else {
            merge_two_smallest(&mut cols, &c);
        }
    }

    let r = marginal(&rows, &row_total);
    let c = marginal(&cols, &col_total);
    let mut statistic = 0.0;
    for (g, rg) in rows.iter().zip(&r) {
        for (h, ch) in cols.iter().zip(&c) {
            let observed: u64 = g
                .iter()
                .flat_map(|&a| h.iter().map(move |&cc| table[a][cc]))
                .sum();
            let expected = *rg as f64 * *ch as f64 / n;
            let diff = observed as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    StratumResult {
        middle,
        total,
        statistic,
        dof: (rows.len() - 1) * (cols.len() - 1),
        p_value: None,
        rows_retained: rows.len(),
        cols_retained: cols.len(),
    }
}

/// Merges the two groups with the smallest marginals (earliest on ties)
/// into the position of the earlier one.
fn merge_two_smallest(groups: &mut Vec<Vec<usize>>, marginals: &[u64]) {
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by_key(|&i| (marginals[i], i));
    let (keep, gone) = (order[0].min(order[1]), order[0].max(order[1]));
    let moved = groups.remove(gone);
    groups[keep].extend(moved);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderTestConfig {
    pub alpha: f64,
    pub min_expected: f64,
    /// Leading symbols dropped from every trajectory before counting.
    pub burn_in: usize,
}

impl Default for OrderTestConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            min_expected: DEFAULT_MIN_EXPECTED,
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

/// Runs the test with default pooling and burn-in at level `alpha`.
pub fn markov_order_test<T: AsRef<[usize]>>(
    trajectories: &[T],
    k: usize,
    alpha: f64,
) -> Result<OrderTestReport> {
    markov_order_test_with(
        trajectories,
        k,
        &OrderTestConfig {
            alpha,
            ..OrderTestConfig::default()
        },
    )
}

pub fn markov_order_test_with<T: AsRef<[usize]>>(
    trajectories: &[T],
    k: usize,
    config: &OrderTestConfig,
) -> Result<OrderTestReport> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {}",
            config.alpha
        )));
    }
    let mut trimmed = Vec::with_capacity(trajectories.len());
    for (i, t) in trajectories.iter().enumerate() {
        let t = t.as_ref();
        let min = config.burn_in + 3;
        if t.len() < min {
            return Err(Error::TrajectoryTooShort {
                trajectory: i,
                len: t.len(),
                min,
            });
        }
        trimmed.push(&t[config.burn_in..]);
    }
    let counts = count_triples(&trimmed, k)?;
    let mut report = chi2_conditional_independence(&counts, config.min_expected)?;
    for s in &mut report.strata {
        if s.dof > 0 {
            s.p_value = Some(chi2_sf(s.statistic, s.dof)?);
        }
    }
    let p = if report.dof > 0 {
        chi2_sf(report.statistic, report.dof)?
    } else {
        1.0
    };
    report.p_value = Some(p);
    report.alpha = Some(config.alpha);
    report.reject = Some(p < config.alpha);
    Ok(report)
}
