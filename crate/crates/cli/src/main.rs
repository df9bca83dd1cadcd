//! `amproc`: check and lump Markov chains, simulate the learning models and
//! test symbol sequences for the Markov property.
//!
//! Exit codes: 0 for a positive verdict (lumpable, first order not
//! rejected) or success, 1 for a negative verdict, 2 for usage, input or
//! runtime errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod lumping;
mod output;
mod simulate;

#[derive(Debug, Parser)]
#[command(name = "amproc", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether a partition of a chain's states is lumpable
    Check(lumping::CheckArgs),
    /// Write the lumped chain of a strongly lumpable partition
    Lump(lumping::LumpArgs),
    /// Simulate trajectories of a model and write them as CSV
    Simulate(simulate::SimulateArgs),
    /// Test symbol trajectories for first-order Markov dependence
    MarkovTest(markov_test::MarkovTestArgs),
    /// Mean ZHL success probability per trial over replicates
    LearningCurve(simulate::LearningCurveArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => lumping::check(a),
        Command::Lump(a) => lumping::lump(a),
        Command::Simulate(a) => simulate::simulate(a),
        Command::MarkovTest(a) => markov_test::run(a),
        Command::LearningCurve(a) => simulate::learning_curve(a),
    };
    match result {
        Ok(Outcome::Accept) => ExitCode::SUCCESS,
        Ok(Outcome::Reject) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
