//! On-disk formats.
//!
//! * chain: `{"states": [labels...], "transition": [[row]...]}`
//! * partition: `{"blocks": [[labels...]...]}`
//! * ZHL model: `{"phi1", "phi2", "theta1", "theta2", "v0", "y0", "z0"}`,
//!   every field optional (rates default to 0.1, start to 0.5)
//! * Suppes model: `{"N", "K", "lambda", "pi", "x0"}`
//! * symbol trajectories: one symbol index per line, a blank line between
//!   trajectories

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::aggregation::AggregationMap;
use crate::chain::{self, MarkovChain};
use crate::error::{Error, Result};
use crate::models::suppes::{SuppesParams, SuppesState};
use crate::models::zhl::{ZhlParams, ZhlState};

/// Labels may be written as strings or integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(serde_json::Number),
}

impl Label {
    pub fn as_string(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub states: Vec<Label>,
    pub transition: Vec<Vec<f64>>,
}

impl ChainFile {
    pub fn into_chain(self, tol: f64) -> Result<MarkovChain> {
        let states = self.states.iter().map(Label::as_string).collect::<Vec<_>>();
        chain::validate_chain(states, self.transition, tol)
    }

    pub fn from_chain(chain: &MarkovChain) -> Self {
        Self {
            states: chain.states().iter().cloned().map(Label::Text).collect(),
            transition: chain.transition().to_rows(),
        }
    }
}

pub fn parse_chain(text: &str) -> Result<MarkovChain> {
    serde_json::from_str::<ChainFile>(text)?.into_chain(chain::ROW_SUM_TOL)
}

pub fn chain_to_json(chain: &MarkovChain) -> String {
    let mut s =
        serde_json::to_string_pretty(&ChainFile::from_chain(chain)).expect("chain serializes");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    pub blocks: Vec<Vec<Label>>,
}

impl PartitionFile {
    /// Resolves labels against the chain. Block order is file order.
    pub fn to_map(&self, chain: &MarkovChain) -> Result<AggregationMap> {
        let blocks = self
            .blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|label| {
                        let label = label.as_string();
                        chain.index_of(&label).ok_or_else(|| {
                            Error::InvalidAggregation(format!("unknown state label {label:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        AggregationMap::from_blocks(chain.dim(), &blocks)
    }
}

pub fn parse_partition(text: &str, chain: &MarkovChain) -> Result<AggregationMap> {
    serde_json::from_str::<PartitionFile>(text)?.to_map(chain)
}

fn default_rate() -> f64 {
    0.1
}

fn default_start() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZhlFile {
    #[serde(default = "default_rate")]
    pub phi1: f64,
    #[serde(default = "default_rate")]
    pub phi2: f64,
    #[serde(default = "default_rate")]
    pub theta1: f64,
    #[serde(default = "default_rate")]
    pub theta2: f64,
    #[serde(default = "default_start")]
    pub v0: f64,
    #[serde(default = "default_start")]
    pub y0: f64,
    #[serde(default = "default_start")]
    pub z0: f64,
}

impl ZhlFile {
    pub fn params(&self) -> Result<ZhlParams> {
        ZhlParams::new(self.phi1, self.phi2, self.theta1, self.theta2)
    }

    pub fn start(&self) -> Result<ZhlState> {
        ZhlState::new(self.v0, self.y0, self.z0)
    }
}

impl Default for ZhlFile {
    fn default() -> Self {
        Self {
            phi1: 0.1,
            phi2: 0.1,
            theta1: 0.1,
            theta2: 0.1,
            v0: 0.5,
            y0: 0.5,
            z0: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuppesFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub lambda: Vec<Vec<f64>>,
    pub pi: Vec<Vec<f64>>,
    pub x0: Vec<usize>,
}

impl SuppesFile {
    pub fn params(&self) -> Result<SuppesParams> {
        let params = SuppesParams::new(self.n, self.lambda.clone(), self.pi.clone())?;
        if params.n_locations() != self.k {
            return Err(Error::InvalidParameter(format!(
                "K = {} but the kernels are {}x{}",
                self.k,
                params.n_locations(),
                params.n_locations()
            )));
        }
        Ok(params)
    }

    pub fn start(&self) -> Result<SuppesState> {
        let state = SuppesState { x: self.x0.clone() };
        self.params()?.check_state(&state)?;
        Ok(state)
    }
}

/// Any input `simulate` accepts.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelFile {
    Zhl(ZhlFile),
    Suppes(SuppesFile),
    Chain(ChainFile),
}

/// Picks the model kind from the keys present: `states`/`transition` mean a
/// chain, `N`/`K`/`lambda`/`pi` a Suppes model, anything else ZHL.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Format("model file must hold a JSON object".into()))?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("states") || has("transition") {
        ModelFile::Chain(serde_json::from_value(value)?)
    } else if has("N") || has("K") || has("lambda") || has("pi") {
        ModelFile::Suppes(serde_json::from_value(value)?)
    } else {
        ModelFile::Zhl(serde_json::from_value(value)?)
    })
}

/// Reads symbol trajectories. Runs of blank lines separate trajectories;
/// surrounding whitespace on a line is ignored.
pub fn parse_symbol_trajectories(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            continue;
        }
        let symbol = line.parse::<usize>().map_err(|e| {
            Error::Format(format!(
                "line {}: {line:?} is not a symbol index ({e})",
                lineno + 1
            ))
        })?;
        current.push(symbol);
    }
    if !current.is_empty() {
        out.push(current);
    }
    Ok(out)
}

pub fn write_symbol_trajectories<T: AsRef<[usize]>>(trajectories: &[T]) -> String {
    let mut s = String::new();
    for (i, t) in trajectories.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        for sym in t.as_ref() {
            s.push_str(&sym.to_string());
            s.push('\n');
        }
    }
    s
}
