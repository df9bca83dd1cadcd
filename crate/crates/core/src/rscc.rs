//! Random systems with complete connection over a finite event alphabet.
//!
//! A system has a state, an event kernel giving the law of the next event
//! given the current state, and a deterministic update
//! `next = update(state, event)`. Events are conditionally independent of
//! the past given the current state, and the system is time-homogeneous.

use std::cmp::Ordering;

use rand::Rng;
use serde::Serialize;

use crate::chain::MarkovChain;
use crate::error::{Error, Result};
use crate::rng;

/// Allowed deviation of an event kernel's total mass from 1.
pub const KERNEL_TOL: f64 = 1e-12;

pub trait Rscc {
    type State: Clone;

    /// Size of the event alphabet; events are `0..event_count()`.
    fn event_count(&self) -> usize;

    fn event_distribution(&self, state: &Self::State) -> Vec<f64>;

    fn update(&self, state: &Self::State, event: usize) -> Self::State;
}

/// A finite chain is the system whose event is the next state.
impl Rscc for MarkovChain {
    type State = usize;

    fn event_count(&self) -> usize {
        self.dim()
    }

    fn event_distribution(&self, state: &usize) -> Vec<f64> {
        self.row(*state).to_vec()
    }

    fn update(&self, _state: &usize, event: usize) -> usize {
        event
    }
}

fn checked_kernel<S: Rscc + ?Sized>(sys: &S, state: &S::State) -> Result<Vec<f64>> {
    let probs = sys.event_distribution(state);
    if probs.len() != sys.event_count() {
        return Err(Error::KernelInvalid(format!(
            "kernel has {} entries for {} events",
            probs.len(),
            sys.event_count()
        )));
    }
    if let Some(e) = probs.iter().position(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::KernelInvalid(format!(
            "event {e} has probability {}",
            probs[e]
        )));
    }
    let mass: f64 = probs.iter().sum();
    if (mass - 1.0).abs() > KERNEL_TOL {
        return Err(Error::KernelInvalid(format!("total mass {mass}")));
    }
    Ok(probs)
}

/// Samples one event by inverse CDF over events in index order and applies
/// the update.
pub fn step<S, R>(sys: &S, state: &S::State, rng: &mut R) -> Result<(usize, S::State)>
where
    S: Rscc + ?Sized,
    R: Rng + ?Sized,
{
    let probs = checked_kernel(sys, state)?;
    let u: f64 = rng.random();
    let mut cum = 0.0;
    let mut event = None;
    for (e, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        cum += p;
        event = Some(e);
        if u < cum {
            break;
        }
    }
    // Rounding can leave the cumulative mass a hair below u; the last
    // positive-probability event absorbs it.
    let event = event.ok_or_else(|| Error::KernelInvalid("no event has positive mass".into()))?;
    Ok((event, sys.update(state, event)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    /// `T + 1` states, starting with the initial one.
    pub states: Vec<S>,
    /// `T` event indices; `states[n + 1] = update(states[n], events[n])`.
    pub events: Vec<usize>,
    pub seed: u64,
    pub stream: u64,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

pub fn simulate<S: Rscc + ?Sized>(
    sys: &S,
    x0: S::State,
    trials: usize,
    seed: u64,
) -> Result<Trajectory<S::State>> {
    simulate_replicate(sys, x0, trials, seed, 0)
}

/// Simulates on the independent stream `replicate` of `master_seed`.
/// Stream 0 coincides with [`simulate`].
pub fn simulate_replicate<S: Rscc + ?Sized>(
    sys: &S,
    x0: S::State,
    trials: usize,
    master_seed: u64,
    replicate: u64,
) -> Result<Trajectory<S::State>> {
    let mut rng = rng::replicate_stream(master_seed, replicate);
    let mut states = Vec::with_capacity(trials + 1);
    let mut events = Vec::with_capacity(trials);
    states.push(x0);
    for _ in 0..trials {
        let (e, next) = step(sys, states.last().expect("non-empty"), &mut rng)?;
        events.push(e);
        states.push(next);
    }
    Ok(Trajectory {
        states,
        events,
        seed: master_seed,
        stream: replicate,
    })
}

/// Re-applies the update along a recorded event sequence.
pub fn replay<S: Rscc + ?Sized>(sys: &S, x0: S::State, events: &[usize]) -> Vec<S::State> {
    let mut states = Vec::with_capacity(events.len() + 1);
    states.push(x0);
    for &e in events {
        let next = sys.update(states.last().expect("non-empty"), e);
        states.push(next);
    }
    states
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub value: Vec<f64>,
    pub prob: f64,
}

/// Finite-support one-step law of an observed quantity: atoms sorted by
/// value, equal values merged, probabilities positive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomicKernel {
    pub atoms: Vec<Atom>,
}

impl AtomicKernel {
    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.prob).sum()
    }
}

fn cmp_values(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// Law of `observe(event, next_state)` one step after `state`. Atoms with
/// bitwise-equal values are merged, summing in event-index order.
pub fn observed_kernel<S, F>(sys: &S, state: &S::State, observe: F) -> Result<AtomicKernel>
where
    S: Rscc + ?Sized,
    F: Fn(usize, &S::State) -> Vec<f64>,
{
    let probs = checked_kernel(sys, state)?;
    let mut raw: Vec<Atom> = probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(e, &p)| Atom {
            value: observe(e, &sys.update(state, e)),
            prob: p,
        })
        .collect();
    // Stable, so equal values stay in event order.
    raw.sort_by(|a, b| cmp_values(&a.value, &b.value));
    let mut atoms: Vec<Atom> = Vec::with_capacity(raw.len());
    for atom in raw {
        match atoms.last_mut() {
            Some(last) if same_bits(&last.value, &atom.value) => last.prob += atom.prob,
            _ => atoms.push(atom),
        }
    }
    Ok(AtomicKernel { atoms })
}

/// Law of the projected next state.
pub fn projected_kernel<S, P>(sys: &S, state: &S::State, project_state: P) -> Result<AtomicKernel>
where
    S: Rscc + ?Sized,
    P: Fn(&S::State) -> Vec<f64>,
{
    observed_kernel(sys, state, |_, next| project_state(next))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum KernelMismatch {
    /// Supports differ at atom position `atom`; `None` means that side ran
    /// out of atoms.
    Support {
        atom: usize,
        left: Option<Vec<f64>>,
        right: Option<Vec<f64>>,
    },
    Probability {
        atom: usize,
        value: Vec<f64>,
        left: f64,
        right: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceWitness {
    /// Indices into the checked state list.
    pub first: usize,
    pub second: usize,
    pub mismatch: KernelMismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub witness: Option<IndependenceWitness>,
    /// Largest probability gap among pairs whose supports agree.
    pub max_probability_gap: f64,
}

/// Checks that states sharing a projection have identical one-step laws of
/// the projected next state: same atom values bit for bit, probabilities
/// within `tol`.
pub fn projection_independence_check<S, P>(
    sys: &S,
    states: &[S::State],
    project_state: P,
    tol: f64,
) -> Result<IndependenceVerdict>
where
    S: Rscc + ?Sized,
    P: Fn(&S::State) -> Vec<f64>,
{
    independence_check(
        sys,
        states,
        &project_state,
        |_, next| project_state(next),
        tol,
    )
}

/// Like [`projection_independence_check`] but on the joint law of the
/// projected next state and the projected event.
pub fn projection_independence_check_with_events<S, P, Q>(
    sys: &S,
    states: &[S::State],
    project_state: P,
    project_event: Q,
    tol: f64,
) -> Result<IndependenceVerdict>
where
    S: Rscc + ?Sized,
    P: Fn(&S::State) -> Vec<f64>,
    Q: Fn(usize) -> Vec<f64>,
{
    independence_check(
        sys,
        states,
        &project_state,
        |e, next| {
            let mut v = project_state(next);
            v.extend(project_event(e));
            v
        },
        tol,
    )
}

fn independence_check<S, P, F>(
    sys: &S,
    states: &[S::State],
    project_state: &P,
    observe: F,
    tol: f64,
) -> Result<IndependenceVerdict>
where
    S: Rscc + ?Sized,
    P: Fn(&S::State) -> Vec<f64>,
    F: Fn(usize, &S::State) -> Vec<f64>,
{
    if let Some(first) = states.first() {
        let base = project_state(first);
        if let Some(index) = states
            .iter()
            .position(|s| !same_bits(&project_state(s), &base))
        {
            return Err(Error::ProjectionMismatch { index });
        }
    }
    let kernels = states
        .iter()
        .map(|s| observed_kernel(sys, s, &observe))
        .collect::<Result<Vec<_>>>()?;

    let mut witness = None;
    let mut max_probability_gap = 0.0_f64;
    for i in 0..kernels.len() {
        for j in i + 1..kernels.len() {
            let (gap, mismatch) = compare_kernels(&kernels[i], &kernels[j], tol);
            max_probability_gap = max_probability_gap.max(gap);
            if witness.is_none() {
                witness = mismatch.map(|mismatch| IndependenceWitness {
                    first: i,
                    second: j,
                    mismatch,
                });
            }
        }
    }
    Ok(IndependenceVerdict {
        independent: witness.is_none(),
        witness,
        max_probability_gap,
    })
}

fn compare_kernels(a: &AtomicKernel, b: &AtomicKernel, tol: f64) -> (f64, Option<KernelMismatch>) {
    let n = a.atoms.len().max(b.atoms.len());
    for atom in 0..n {
        let (l, r) = (a.atoms.get(atom), b.atoms.get(atom));
        let support_differs = match (l, r) {
            (Some(l), Some(r)) => !same_bits(&l.value, &r.value),
            _ => true,
        };
        if support_differs {
            return (
                0.0,
                Some(KernelMismatch::Support {
                    atom,
                    left: l.map(|x| x.value.clone()),
                    right: r.map(|x| x.value.clone()),
                }),
            );
        }
    }
    let mut gap = 0.0_f64;
    let mut mismatch = None;
    for (atom, (l, r)) in a.atoms.iter().zip(&b.atoms).enumerate() {
        let d = (l.prob - r.prob).abs();
        gap = gap.max(d);
        if d > tol && mismatch.is_none() {
            mismatch = Some(KernelMismatch::Probability {
                atom,
                value: l.value.clone(),
                left: l.prob,
                right: r.prob,
            });
        }
    }
    (gap, mismatch)
}
