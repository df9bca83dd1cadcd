//! Stimulus-pattern model on a discretized rim of `K` locations.
//!
//! The learning state maps each of `N` patterns to a location. On a trial a
//! pattern `s` is sampled uniformly, a prediction `y` is drawn from
//! `lambda[x_s]`, the illuminated spot `z` is drawn from `pi[y]`, and the
//! sampled pattern's location is overwritten by `z`. The response kernel is
//! shared across patterns and depends on the pattern only through `x_s`.

use serde::{Deserialize, Serialize};

use crate::aggregation::AggregationMap;
use crate::chain::{self, MarkovChain};
use crate::error::{Error, Result};
use crate::rscc::Rscc;

/// Largest composite state space [`suppes_compile_chain`] will build; the
/// transition matrix is dense.
pub const MAX_COMPILED_STATES: usize = 4096;

const KERNEL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuppesParams {
    n_patterns: usize,
    n_locations: usize,
    lambda: Vec<Vec<f64>>,
    pi: Vec<Vec<f64>>,
}

impl SuppesParams {
    /// `lambda[x][y]`: prediction `y` given learned location `x`.
    /// `pi[y][z]`: outcome `z` given prediction `y`.
    pub fn new(n_patterns: usize, lambda: Vec<Vec<f64>>, pi: Vec<Vec<f64>>) -> Result<Self> {
        if n_patterns == 0 {
            return Err(Error::InvalidParameter("need at least one pattern".into()));
        }
        let k = lambda.len();
        if k == 0 {
            return Err(Error::InvalidParameter("need at least one location".into()));
        }
        check_kernel("lambda", &lambda, k)?;
        check_kernel("pi", &pi, k)?;
        Ok(Self {
            n_patterns,
            n_locations: k,
            lambda,
            pi,
        })
    }

    pub fn n_patterns(&self) -> usize {
        self.n_patterns
    }

    pub fn n_locations(&self) -> usize {
        self.n_locations
    }

    pub fn lambda(&self) -> &[Vec<f64>] {
        &self.lambda
    }

    pub fn pi(&self) -> &[Vec<f64>] {
        &self.pi
    }

    pub fn event_count(&self) -> usize {
        self.n_patterns * self.n_locations * self.n_locations
    }

    pub fn event_index(&self, e: SuppesEvent) -> usize {
        let k = self.n_locations;
        (e.pattern * k + e.prediction) * k + e.outcome
    }

    pub fn event_at(&self, index: usize) -> SuppesEvent {
        let k = self.n_locations;
        SuppesEvent {
            pattern: index / (k * k),
            prediction: (index / k) % k,
            outcome: index % k,
        }
    }

    pub fn check_state(&self, state: &SuppesState) -> Result<()> {
        if state.x.len() != self.n_patterns {
            return Err(Error::SizeMismatch {
                expected: self.n_patterns,
                found: state.x.len(),
            });
        }
        if let Some(&bad) = state.x.iter().find(|&&x| x >= self.n_locations) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.n_locations,
            });
        }
        Ok(())
    }
}

fn check_kernel(name: &str, rows: &[Vec<f64>], k: usize) -> Result<()> {
    if rows.len() != k {
        return Err(Error::InvalidParameter(format!(
            "{name} has {} rows, expected {k}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{name} row {i} has {} entries, expected {k}",
                row.len()
            )));
        }
        if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} row {i} has a negative or non-finite entry"
            )));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > KERNEL_TOL {
            return Err(Error::InvalidParameter(format!(
                "{name} row {i} sums to {sum}"
            )));
        }
    }
    Ok(())
}

/// Location learned for each pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuppesState {
    pub x: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuppesEvent {
    pub pattern: usize,
    pub prediction: usize,
    pub outcome: usize,
}

/// `P(s, y, z) = (1/N) lambda[x_s][y] pi[y][z]`, indexed as
/// [`SuppesParams::event_index`].
pub fn suppes_event_distribution(params: &SuppesParams, state: &SuppesState) -> Result<Vec<f64>> {
    params.check_state(state)?;
    let k = params.n_locations;
    let inv_n = 1.0 / params.n_patterns as f64;
    let mut probs = Vec::with_capacity(params.event_count());
    for &xs in &state.x {
        for y in 0..k {
            for z in 0..k {
                probs.push(inv_n * params.lambda[xs][y] * params.pi[y][z]);
            }
        }
    }
    Ok(probs)
}

/// Overwrites the sampled pattern's location with the outcome.
pub fn suppes_update(state: &SuppesState, event: SuppesEvent) -> Result<SuppesState> {
    if event.pattern >= state.x.len() {
        return Err(Error::IndexOutOfRange {
            index: event.pattern,
            len: state.x.len(),
        });
    }
    let mut x = state.x.clone();
    x[event.pattern] = event.outcome;
    Ok(SuppesState { x })
}

/// What the sampled pattern learns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UpdateRule {
    /// `x_s <- z`, the model.
    #[default]
    LearnOutcome,
    /// `x_s <- y`: learning one's own prediction. Used as a negative
    /// control, since it makes the next state depend on the response.
    LearnPrediction,
}

impl UpdateRule {
    fn learned(self, event: SuppesEvent) -> usize {
        match self {
            UpdateRule::LearnOutcome => event.outcome,
            UpdateRule::LearnPrediction => event.prediction,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuppesModel {
    pub params: SuppesParams,
    pub rule: UpdateRule,
}

impl SuppesModel {
    pub fn new(params: SuppesParams) -> Self {
        Self {
            params,
            rule: UpdateRule::LearnOutcome,
        }
    }
}

impl Rscc for SuppesModel {
    type State = SuppesState;

    fn event_count(&self) -> usize {
        self.params.event_count()
    }

    fn event_distribution(&self, state: &SuppesState) -> Vec<f64> {
        // An invalid state yields an empty kernel, which the engine reports.
        suppes_event_distribution(&self.params, state).unwrap_or_default()
    }

    fn update(&self, state: &SuppesState, event: usize) -> SuppesState {
        let e = self.params.event_at(event);
        let mut x = state.x.clone();
        x[e.pattern] = self.rule.learned(e);
        SuppesState { x }
    }
}

/// A compiled chain, plus the map that forgets the prediction when the
/// prediction was kept.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledSuppes {
    pub chain: MarkovChain,
    pub drop_prediction: Option<AggregationMap>,
}

/// Composite state layout shared by the full `(x, s, y, z)` and reduced
/// `(x, s, z)` chains: `x` in lexicographic order (pattern 0 most
/// significant), then `s`, then `y` (full only), then `z`.
#[derive(Clone, Copy, Debug)]
struct Layout {
    n: usize,
    k: usize,
    x_count: usize,
}

impl Layout {
    fn new(params: &SuppesParams, include_y: bool) -> Result<Self> {
        let (n, k) = (params.n_patterns, params.n_locations);
        let states = u128::try_from(k)
            .ok()
            .and_then(|k| k.checked_pow(u32::try_from(n).ok()?))
            .and_then(|x| x.checked_mul((n * k) as u128))
            .and_then(|x| x.checked_mul(if include_y { k as u128 } else { 1 }))
            .unwrap_or(u128::MAX);
        if states > MAX_COMPILED_STATES as u128 {
            return Err(Error::StateSpaceTooLarge {
                states,
                limit: MAX_COMPILED_STATES,
            });
        }
        Ok(Self {
            n,
            k,
            x_count: k.pow(n as u32),
        })
    }

    fn decode_x(&self, mut index: usize) -> Vec<usize> {
        let mut x = vec![0; self.n];
        for slot in x.iter_mut().rev() {
            *slot = index % self.k;
            index /= self.k;
        }
        x
    }

    fn encode_x(&self, x: &[usize]) -> usize {
        x.iter().fold(0, |acc, &xi| acc * self.k + xi)
    }

    fn full(&self, x: usize, s: usize, y: usize, z: usize) -> usize {
        ((x * self.n + s) * self.k + y) * self.k + z
    }

    fn reduced(&self, x: usize, s: usize, z: usize) -> usize {
        (x * self.n + s) * self.k + z
    }

    fn x_label(&self, x: &[usize]) -> String {
        x.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

/// Exact finite chain of the model's composite states.
///
/// From `(x, s, y, z)` the learning state becomes `x'` (with `x'_s = z`)
/// and the next `(s', y', z')` has probability
/// `(1/N) lambda[x'_{s'}][y'] pi[y'][z']`. Without `y` the next `(s', z')`
/// carries the sum over `y'`.
pub fn suppes_compile_chain(params: &SuppesParams, include_y: bool) -> Result<CompiledSuppes> {
    suppes_compile_chain_with_rule(params, include_y, UpdateRule::LearnOutcome)
}

pub fn suppes_compile_chain_with_rule(
    params: &SuppesParams,
    include_y: bool,
    rule: UpdateRule,
) -> Result<CompiledSuppes> {
    if !include_y && rule == UpdateRule::LearnPrediction {
        return Err(Error::InvalidParameter(
            "learning the prediction needs the prediction in the state".into(),
        ));
    }
    let layout = Layout::new(params, include_y)?;
    let Layout { n, k, x_count } = layout;
    let inv_n = 1.0 / n as f64;
    let lambda = &params.lambda;
    let pi = &params.pi;

    let y_count = if include_y { k } else { 1 };
    let size = x_count * n * y_count * k;
    let mut labels = Vec::with_capacity(size);
    let mut rows = Vec::with_capacity(size);
    for xi in 0..x_count {
        let x = layout.decode_x(xi);
        for s in 0..n {
            for y in 0..y_count {
                for z in 0..k {
                    let event = SuppesEvent {
                        pattern: s,
                        prediction: y,
                        outcome: z,
                    };
                    let mut next_x = x.clone();
                    next_x[s] = rule.learned(event);
                    let nx = layout.encode_x(&next_x);

                    let mut row = vec![0.0; size];
                    for s2 in 0..n {
                        let lam = &lambda[next_x[s2]];
                        for y2 in 0..k {
                            for z2 in 0..k {
                                let p = inv_n * lam[y2] * pi[y2][z2];
                                if include_y {
                                    row[layout.full(nx, s2, y2, z2)] = p;
                                } else {
                                    row[layout.reduced(nx, s2, z2)] += p;
                                }
                            }
                        }
                    }
                    rows.push(row);
                    labels.push(if include_y {
                        format!("x={}|s={s}|y={y}|z={z}", layout.x_label(&x))
                    } else {
                        format!("x={}|s={s}|z={z}", layout.x_label(&x))
                    });
                }
            }
        }
    }
    let chain = chain::validate_chain(labels, rows, KERNEL_TOL)?;
    let drop_prediction = if include_y {
        let mut block_of = Vec::with_capacity(size);
        for xi in 0..x_count {
            for s in 0..n {
                for _y in 0..k {
                    for z in 0..k {
                        block_of.push(layout.reduced(xi, s, z));
                    }
                }
            }
        }
        Some(AggregationMap::new(block_of)?)
    } else {
        None
    };
    Ok(CompiledSuppes {
        chain,
        drop_prediction,
    })
}

/// Index of `(x, s, z)` in the reduced chain.
pub fn reduced_state_index(
    params: &SuppesParams,
    state: &SuppesState,
    s: usize,
    z: usize,
) -> Result<usize> {
    params.check_state(state)?;
    let layout = Layout::new(params, false)?;
    if s >= params.n_patterns || z >= params.n_locations {
        return Err(Error::IndexOutOfRange {
            index: s.max(z),
            len: params.n_patterns.min(params.n_locations),
        });
    }
    Ok(layout.reduced(layout.encode_x(&state.x), s, z))
}
