use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use amproc::io::{self, ChainFile, PartitionFile};
use amproc::lumpability::{self, Criterion};
use amproc::{AggregationMap, Error, MarkovChain};
use anyhow::{Context, Result};
use clap::{Args, ValueEnum};

use crate::output::{num, read_input, write_output};
use crate::Outcome;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CriterionArg {
    /// One-step aggregated rows agree within each block
    Strong,
    /// n-step aggregated rows agree for n = 1..d
    Cameron,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Strong => Criterion::Strong,
            CriterionArg::Cameron => Criterion::Cameron,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Chain file: {"states": [...], "transition": [[...]]}
    pub chain: PathBuf,
    /// Partition file: {"blocks": [[labels...]...]}
    pub partition: PathBuf,
    /// Absolute tolerance on aggregated probabilities
    #[arg(long, default_value_t = lumpability::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = CriterionArg::Strong)]
    pub criterion: CriterionArg,
}

#[derive(Debug, Args)]
pub struct LumpArgs {
    /// Chain file
    pub chain: PathBuf,
    /// Partition file
    pub partition: PathBuf,
    /// Where to write the lumped chain (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Absolute tolerance on aggregated probabilities
    #[arg(long, default_value_t = lumpability::DEFAULT_TOL)]
    pub tol: f64,
}

pub fn load_chain(path: &Path) -> Result<MarkovChain> {
    let text = read_input(path)?;
    let file: ChainFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.into_chain(amproc::chain::ROW_SUM_TOL)
        .with_context(|| format!("invalid chain in {}", path.display()))
}

pub fn load_partition(path: &Path, chain: &MarkovChain) -> Result<AggregationMap> {
    let text = read_input(path)?;
    let file: PartitionFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_map(chain)
        .with_context(|| format!("invalid partition in {}", path.display()))
}

fn check_tol(tol: f64) -> Result<()> {
    anyhow::ensure!(
        tol.is_finite() && tol >= 0.0,
        "--tol must be finite and >= 0, got {tol}"
    );
    Ok(())
}

pub fn check(args: &CheckArgs) -> Result<Outcome> {
    check_tol(args.tol)?;
    let chain = load_chain(&args.chain)?;
    let map = load_partition(&args.partition, &chain)?;
    let criterion = args.criterion.into();
    let verdict = lumpability::check(&chain, &map, args.tol, criterion)?;

    let mut report = String::new();
    let name = match criterion {
        Criterion::Strong => "strong",
        Criterion::Cameron => "cameron",
    };
    writeln!(report, "criterion: {name}")?;
    writeln!(report, "tolerance: {}", num(args.tol))?;
    writeln!(report, "states: {}", chain.dim())?;
    writeln!(report, "blocks: {}", map.block_count())?;
    writeln!(report, "lumpable: {}", verdict.lumpable)?;
    writeln!(report, "max_discrepancy: {}", num(verdict.max_discrepancy))?;
    if let Some(w) = &verdict.witness {
        writeln!(report, "witness: {w}")?;
        writeln!(
            report,
            "witness states: {:?} and {:?}",
            chain.states()[w.z],
            chain.states()[w.z_prime]
        )?;
    } else {
        let lumped = lumpability::lumped_chain(&chain, &map, args.tol)?;
        writeln!(report, "lumped chain:")?;
        for (label, row) in lumped.states().iter().zip(lumped.transition().rows()) {
            let cells: Vec<_> = row.iter().map(|&p| num(p)).collect();
            writeln!(report, "  {label}: [{}]", cells.join(", "))?;
        }
    }
    print!("{report}");
    Ok(if verdict.lumpable {
        Outcome::Accept
    } else {
        Outcome::Reject
    })
}

pub fn lump(args: &LumpArgs) -> Result<Outcome> {
    check_tol(args.tol)?;
    let chain = load_chain(&args.chain)?;
    let map = load_partition(&args.partition, &chain)?;
    match lumpability::lumped_chain(&chain, &map, args.tol) {
        Ok(lumped) => {
            write_output(args.out.as_deref(), &io::chain_to_json(&lumped))?;
            Ok(Outcome::Accept)
        }
        Err(Error::NotLumpable(verdict)) => {
            eprintln!("{verdict}");
            Ok(Outcome::Reject)
        }
        Err(e) => Err(e.into()),
    }
}
