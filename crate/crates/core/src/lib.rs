//! Finite Markov chains, lumpability under state aggregation, random systems
//! with complete connections, two learning models built on them, and a
//! chi-square test of the Markov property for observed symbol sequences.

pub mod aggregation;
pub mod chain;
pub mod error;
pub mod io;
pub mod lumpability;
pub mod matrix;
pub mod models;
pub mod random;
pub mod rng;
pub mod rscc;
pub mod stats;

pub use aggregation::AggregationMap;
pub use chain::{
    aggregate_row, evolve_distribution, n_step, validate_chain, DistributionVector, MarkovChain,
};
pub use error::{Error, Result};
pub use lumpability::{
    cameron_check, check, lumped_chain, strong_check, Criterion, LumpabilityVerdict, Witness,
};
pub use matrix::Matrix;
pub use rscc::{
    projection_independence_check, projection_independence_check_with_events, simulate,
    simulate_replicate, AtomicKernel, IndependenceVerdict, Rscc, Trajectory,
};
pub use stats::chi2::chi2_sf;
pub use stats::order::{markov_order_test, OrderTestConfig, OrderTestReport};
