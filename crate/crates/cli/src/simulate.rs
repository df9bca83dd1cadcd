use std::fmt::Write as _;
use std::path::PathBuf;

use amproc::io::{self, ModelFile};
use amproc::models::suppes::{SuppesModel, SuppesState};
use amproc::models::zhl::{zhl_as_rscc, zhl_success_probability, ZhlEvent, ZhlModel, ZhlState};
use amproc::{simulate_replicate, AggregationMap, MarkovChain};
use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;

use crate::lumping::load_partition;
use crate::output::{num, push_num, read_input, write_output};
use crate::Outcome;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// ZHL or Suppes model file, or a chain file
    pub model: PathBuf,
    /// Steps per trajectory
    #[arg(long)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    /// Master seed; replicate r draws from stream r of this seed
    #[arg(long)]
    pub seed: u64,
    /// Output path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Drop z and the black side (ZHL) or the prediction (Suppes)
    #[arg(long)]
    pub project: bool,
    /// For chain models: write block indices under this partition
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LearningCurveArgs {
    /// ZHL model file
    pub model: PathBuf,
    /// Trials per replicate
    #[arg(long)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
    /// Master seed; replicate r draws from stream r of this seed
    #[arg(long)]
    pub seed: u64,
    /// Output path (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
    }
}

/// Runs `rows` for every replicate in parallel and joins the results in
/// replicate order.
fn per_replicate(
    replicates: u64,
    rows: impl Fn(u64) -> Result<String> + Sync + Send,
) -> Result<String> {
    let chunks = (0..replicates)
        .into_par_iter()
        .map(rows)
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}

fn load_model(path: &std::path::Path) -> Result<ModelFile> {
    io::parse_model(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome> {
    let model = load_model(&args.model)?;
    let display = args.model.display();
    if args.partition.is_some() && !matches!(model, ModelFile::Chain(_)) {
        bail!("--partition applies to chain files only");
    }
    let body = match model {
        ModelFile::Zhl(file) => {
            let params = file
                .params()
                .with_context(|| format!("invalid model in {display}"))?;
            let x0 = file
                .start()
                .with_context(|| format!("invalid model in {display}"))?;
            let sys = zhl_as_rscc(params);
            let mut out = String::from(if args.project {
                "replicate,trial,v,y,a,r\n"
            } else {
                "replicate,trial,v,y,z,s,a,r\n"
            });
            out += &with_threads(args.threads, || {
                per_replicate(args.replicates, |r| zhl_rows(&sys, x0, args, r))
            })??;
            out
        }
        ModelFile::Suppes(file) => {
            let params = file
                .params()
                .with_context(|| format!("invalid model in {display}"))?;
            let x0 = file
                .start()
                .with_context(|| format!("invalid model in {display}"))?;
            let sys = SuppesModel::new(params);
            let mut out = String::from("replicate,trial");
            for i in 0..x0.x.len() {
                write!(out, ",x{i}")?;
            }
            out += if args.project { ",s,z\n" } else { ",s,y,z\n" };
            out += &with_threads(args.threads, || {
                per_replicate(args.replicates, |r| suppes_rows(&sys, &x0, args, r))
            })??;
            out
        }
        ModelFile::Chain(file) => {
            if args.project {
                bail!("--project does not apply to chain files; use --partition");
            }
            let chain = file
                .into_chain(amproc::chain::ROW_SUM_TOL)
                .with_context(|| format!("invalid chain in {display}"))?;
            let map = match &args.partition {
                Some(p) => load_partition(p, &chain)?,
                None => AggregationMap::identity(chain.dim()),
            };
            with_threads(args.threads, || symbol_trajectories(&chain, &map, args))??
        }
    };
    write_output(args.out.as_deref(), &body)?;
    Ok(Outcome::Accept)
}

fn zhl_rows(sys: &ZhlModel, x0: ZhlState, args: &SimulateArgs, r: u64) -> Result<String> {
    let traj = simulate_replicate(sys, x0, args.trials, args.seed, r)?;
    let mut out = String::new();
    for (n, s) in traj.states.iter().enumerate() {
        write!(out, "{r},{n},")?;
        push_num(&mut out, s.v);
        out.push(',');
        push_num(&mut out, s.y);
        if !args.project {
            out.push(',');
            push_num(&mut out, s.z);
        }
        match traj
            .events
            .get(n)
            .map(|&e| ZhlEvent::from_index(e).expect("event in range"))
        {
            Some(e) if args.project => {
                write!(out, ",{},{}", e.attention.code(), e.chosen_color().code())?
            }
            Some(e) => write!(
                out,
                ",{},{},{}",
                e.black.code(),
                e.attention.code(),
                e.choice.code()
            )?,
            None if args.project => out.push_str(",,"),
            None => out.push_str(",,,"),
        }
        out.push('\n');
    }
    Ok(out)
}

fn suppes_rows(sys: &SuppesModel, x0: &SuppesState, args: &SimulateArgs, r: u64) -> Result<String> {
    let traj = simulate_replicate(sys, x0.clone(), args.trials, args.seed, r)?;
    let mut out = String::new();
    for (n, s) in traj.states.iter().enumerate() {
        write!(out, "{r},{n}")?;
        for x in &s.x {
            write!(out, ",{x}")?;
        }
        match traj.events.get(n).map(|&e| sys.params.event_at(e)) {
            Some(e) if args.project => write!(out, ",{},{}", e.pattern, e.outcome)?,
            Some(e) => write!(out, ",{},{},{}", e.pattern, e.prediction, e.outcome)?,
            None if args.project => out.push_str(",,"),
            None => out.push_str(",,,"),
        }
        out.push('\n');
    }
    Ok(out)
}

/// One symbol per line, trajectories separated by a blank line, starting
/// in state 0.
fn symbol_trajectories(
    chain: &MarkovChain,
    map: &AggregationMap,
    args: &SimulateArgs,
) -> Result<String> {
    let trajectories = (0..args.replicates)
        .into_par_iter()
        .map(|r| {
            let traj = simulate_replicate(chain, 0, args.trials, args.seed, r)?;
            Ok(traj
                .states
                .iter()
                .map(|&z| map.block_of(z))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(io::write_symbol_trajectories(&trajectories))
}

pub fn learning_curve(args: &LearningCurveArgs) -> Result<Outcome> {
    let ModelFile::Zhl(file) = load_model(&args.model)? else {
        bail!(
            "{}: learning curves need a ZHL model file",
            args.model.display()
        );
    };
    anyhow::ensure!(args.replicates > 0, "--replicates must be at least 1");
    let display = args.model.display();
    let sys = zhl_as_rscc(
        file.params()
            .with_context(|| format!("invalid model in {display}"))?,
    );
    let x0 = file
        .start()
        .with_context(|| format!("invalid model in {display}"))?;

    let curves = with_threads(args.threads, || {
        (0..args.replicates)
            .into_par_iter()
            .map(|r| {
                let traj = simulate_replicate(&sys, x0, args.trials, args.seed, r)?;
                Ok(traj
                    .states
                    .iter()
                    .map(zhl_success_probability)
                    .collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let r = args.replicates as f64;
    let mut out = String::from("trial,mean,std_error\n");
    for n in 0..=args.trials {
        // Sums run in replicate order, so the result does not depend on
        // how the replicates were scheduled.
        let mean = curves.iter().map(|c| c[n]).sum::<f64>() / r;
        let std_error = if curves.len() > 1 {
            let ss: f64 = curves.iter().map(|c| (c[n] - mean).powi(2)).sum();
            (ss / (r - 1.0) / r).sqrt()
        } else {
            0.0
        };
        writeln!(out, "{n},{},{}", num(mean), num(std_error))?;
    }
    write_output(args.out.as_deref(), &out)?;
    Ok(Outcome::Accept)
}
