//! Attention model for a T-maze with the reward always on the black arm.
//!
//! The state is `(v, y, z)`: the probability of attending to brightness,
//! the probability of choosing black when attending to brightness, and the
//! probability of choosing left when attending to position. A trial's event
//! is `(black side, attention, chosen side)`, eight events in all.
//!
//! Update table, with `rewarded` meaning the black arm was chosen:
//!
//! | coordinate | condition                                   | new value          |
//! |------------|---------------------------------------------|--------------------|
//! | v          | (br and rewarded) or (pos and not rewarded) | `v + phi1 (1 - v)` |
//! | v          | otherwise                                   | `v - phi2 v`       |
//! | y          | br                                          | `y + theta1 (1 - y)` |
//! | y          | pos                                         | `y`                |
//! | z          | br                                          | `z`                |
//! | z          | pos, black on the left                      | `z + theta2 (1 - z)` |
//! | z          | pos, black on the right                     | `z - theta2 z`     |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rscc::Rscc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Attention {
    Brightness,
    Position,
}

impl Attention {
    pub fn code(self) -> &'static str {
        match self {
            Attention::Brightness => "br",
            Attention::Position => "pos",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn code(self) -> &'static str {
        match self {
            Color::Black => "B",
            Color::White => "W",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZhlEvent {
    /// Side of the black arm.
    pub black: Side,
    pub attention: Attention,
    /// Arm the rat runs to.
    pub choice: Side,
}

impl ZhlEvent {
    pub const COUNT: usize = 8;

    /// Canonical index: `black`, then `attention`, then `choice`, with
    /// Left < Right and br < pos.
    pub fn index(self) -> usize {
        (self.black as usize) * 4 + (self.attention as usize) * 2 + self.choice as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        if i >= Self::COUNT {
            return None;
        }
        let side = |b: usize| if b == 0 { Side::Left } else { Side::Right };
        Some(Self {
            black: side(i / 4),
            attention: if (i / 2).is_multiple_of(2) {
                Attention::Brightness
            } else {
                Attention::Position
            },
            choice: side(i % 2),
        })
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..Self::COUNT).filter_map(Self::from_index)
    }

    pub fn chose_black(self) -> bool {
        self.choice == self.black
    }

    pub fn chosen_color(self) -> Color {
        if self.chose_black() {
            Color::Black
        } else {
            Color::White
        }
    }

    /// Food is always on the black arm.
    pub fn rewarded(self) -> bool {
        self.chose_black()
    }
}

/// Learning rates, each strictly inside `(0, 1)`. `phi1`/`phi2` move `v`
/// up/down; `theta1` moves `y` and `theta2` moves `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZhlParams {
    pub phi1: f64,
    pub phi2: f64,
    pub theta1: f64,
    pub theta2: f64,
}

impl ZhlParams {
    pub fn new(phi1: f64, phi2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        for (name, x) in [
            ("phi1", phi1),
            ("phi2", phi2),
            ("theta1", theta1),
            ("theta2", theta2),
        ] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {x} must lie strictly inside (0, 1)"
                )));
            }
        }
        Ok(Self {
            phi1,
            phi2,
            theta1,
            theta2,
        })
    }

    pub fn uniform(rate: f64) -> Result<Self> {
        Self::new(rate, rate, rate, rate)
    }
}

impl Default for ZhlParams {
    fn default() -> Self {
        Self {
            phi1: 0.1,
            phi2: 0.1,
            theta1: 0.1,
            theta2: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZhlState {
    pub v: f64,
    pub y: f64,
    pub z: f64,
}

impl ZhlState {
    pub fn new(v: f64, y: f64, z: f64) -> Result<Self> {
        for (name, x) in [("v", v), ("y", y), ("z", z)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {x} must lie in [0, 1]"
                )));
            }
        }
        Ok(Self { v, y, z })
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.v, self.y, self.z]
    }
}

impl Default for ZhlState {
    fn default() -> Self {
        Self {
            v: 0.5,
            y: 0.5,
            z: 0.5,
        }
    }
}

/// Event probabilities in canonical index order.
///
/// The black side is a fair coin; attention is brightness with probability
/// `v`; under brightness the black arm is chosen with probability `y`,
/// under position the left arm with probability `z`.
pub fn zhl_event_distribution(state: &ZhlState) -> [f64; ZhlEvent::COUNT] {
    let mut probs = [0.0; ZhlEvent::COUNT];
    for e in ZhlEvent::all() {
        probs[e.index()] = match e.attention {
            Attention::Brightness => {
                let choice = if e.chose_black() {
                    state.y
                } else {
                    1.0 - state.y
                };
                0.5 * state.v * choice
            }
            Attention::Position => {
                let choice = match e.choice {
                    Side::Left => state.z,
                    Side::Right => 1.0 - state.z,
                };
                0.5 * (1.0 - state.v) * choice
            }
        };
    }
    probs
}

fn raise(x: f64, rate: f64) -> f64 {
    x + rate * (1.0 - x)
}

fn lower(x: f64, rate: f64) -> f64 {
    x - rate * x
}

/// Whether `v` increases on this event.
pub fn attention_reinforced(event: ZhlEvent) -> bool {
    match event.attention {
        Attention::Brightness => event.rewarded(),
        Attention::Position => !event.rewarded(),
    }
}

pub fn zhl_update(state: &ZhlState, event: ZhlEvent, params: &ZhlParams) -> ZhlState {
    update_with(state, event, params, ZhlVariant::Standard)
}

/// Ways of making the `v` update depend on `z`. Only [`ZhlVariant::Standard`]
/// is the model; the others exist to show that the projection check notices
/// a dependence on the dropped coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZhlVariant {
    #[default]
    Standard,
    /// Both `v` rates multiplied by `z`. The corner `(v, y) = (1, 1)` is a
    /// fixed point for every `z`, so the coupling is invisible there.
    RateScaledByZ,
    /// The standard new `v` multiplied by `z`. Visible at every `(v, y)`.
    OutputScaledByZ,
}

fn update_with(
    state: &ZhlState,
    event: ZhlEvent,
    params: &ZhlParams,
    variant: ZhlVariant,
) -> ZhlState {
    let scale = match variant {
        ZhlVariant::RateScaledByZ => state.z,
        ZhlVariant::Standard | ZhlVariant::OutputScaledByZ => 1.0,
    };
    let mut v = if attention_reinforced(event) {
        raise(state.v, params.phi1 * scale)
    } else {
        lower(state.v, params.phi2 * scale)
    };
    if variant == ZhlVariant::OutputScaledByZ {
        v *= state.z;
    }
    let (y, z) = match event.attention {
        Attention::Brightness => (raise(state.y, params.theta1), state.z),
        Attention::Position => match event.black {
            Side::Left => (state.y, raise(state.z, params.theta2)),
            Side::Right => (state.y, lower(state.z, params.theta2)),
        },
    };
    ZhlState { v, y, z }
}

/// Probability of choosing the black arm on the current trial:
/// `v y + (1 - v) / 2`, since position-attending choices hit black half the
/// time whatever `z` is.
pub fn zhl_success_probability(state: &ZhlState) -> f64 {
    state.v * state.y + (1.0 - state.v) * 0.5
}

/// `(v, y, z) -> (v, y)`.
pub fn project_state(state: &ZhlState) -> (f64, f64) {
    (state.v, state.y)
}

/// `(black, attention, choice) -> (attention, chosen color)`. The color, not
/// the side, is what the reward and every update except `z`'s depend on;
/// keeping the side would leak `z` through position-attending choices.
pub fn project_event(event: ZhlEvent) -> (Attention, Color) {
    (event.attention, event.chosen_color())
}

pub type StateProjection = fn(&ZhlState) -> Vec<f64>;
pub type EventProjection = fn(usize) -> Vec<f64>;

/// The two projections as numeric tuples, in the shape the generic
/// kernel machinery wants.
pub fn zhl_projections() -> (StateProjection, EventProjection) {
    fn state_tuple(s: &ZhlState) -> Vec<f64> {
        let (v, y) = project_state(s);
        vec![v, y]
    }
    fn event_tuple(e: usize) -> Vec<f64> {
        let (a, r) = project_event(ZhlEvent::from_index(e).expect("event index in range"));
        vec![a as usize as f64, r as usize as f64]
    }
    (state_tuple, event_tuple)
}

/// The model as a random system with eight events.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZhlModel {
    pub params: ZhlParams,
    pub variant: ZhlVariant,
}

impl ZhlModel {
    pub fn with_variant(params: ZhlParams, variant: ZhlVariant) -> Self {
        Self { params, variant }
    }
}

pub fn zhl_as_rscc(params: ZhlParams) -> ZhlModel {
    ZhlModel::with_variant(params, ZhlVariant::Standard)
}

impl Rscc for ZhlModel {
    type State = ZhlState;

    fn event_count(&self) -> usize {
        ZhlEvent::COUNT
    }

    fn event_distribution(&self, state: &ZhlState) -> Vec<f64> {
        zhl_event_distribution(state).to_vec()
    }

    fn update(&self, state: &ZhlState, event: usize) -> ZhlState {
        let event = ZhlEvent::from_index(event).expect("event index in range");
        update_with(state, event, &self.params, self.variant)
    }
}
