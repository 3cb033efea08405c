//! The `bmf` command line tool: run the factorization methods of
//! `bmf-core` on data files, time the product kernel, extract topics and
//! combine saved factor pools.

pub mod bench;
pub mod combine_cmd;
pub mod pool_io;
pub mod reference;
pub mod run;
pub mod runspec;
pub mod topics;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Result};
use bmf_core::combine::{ExactCombineLimits, HeurCombParams};
use bmf_core::dataio::{relative_error_of, Dataset};
use bmf_core::{Budget, Factorization};
use clap::{Args, Parser, Subcommand};

use crate::combine_cmd::{run_combine, CombineMode, CombineOutcome, CombineSettings};
use crate::reference::ReferenceTable;
use crate::run::Trial;
use crate::runspec::{Format, RunOptions, RunSpec};
use crate::topics::TopicsReport;

pub use bmf_core::dataio::ReportRow;

#[derive(Parser, Debug)]
#[command(name = "bmf", version, about = "Boolean matrix factorization with multi-start, combination and tree schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factorize a data file with one of the methods.
    Factorize(FactorizeArgs),
    /// Time the packed Boolean product against the byte-per-entry reference.
    BenchKernel(BenchArgs),
    /// Topic extraction from a words x documents matrix.
    Topics(TopicsArgs),
    /// Select r rank-one factors from a saved pool.
    Combine(CombineArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct FactorizeArgs {
    #[command(flatten)]
    pub run: RunOptions,
    /// TOML preset; command line flags override its values.
    #[arg(long)]
    pub preset: Option<PathBuf>,
    /// Threads running trials in parallel (default: available cores).
    #[arg(long, env = "BMF_WORKERS")]
    pub workers: Option<usize>,
    /// Also write the per-trial report as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Directory for the best trial's W and H.
    #[arg(long)]
    pub save_factors: Option<PathBuf>,
    /// Write the rank-one factors of all trials as a pool file.
    #[arg(long)]
    pub save_pool: Option<PathBuf>,
    /// Reference table (`dataset,r,error` CSV) instead of the bundled one.
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Matrix sizes n (n x n times n x n).
    #[arg(long, value_delimiter = ',', default_values_t = vec![250, 500, 1000, 2000])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TopicsArgs {
    #[command(flatten)]
    pub run: RunOptions,
    #[arg(long)]
    pub preset: Option<PathBuf>,
    #[arg(long, env = "BMF_WORKERS")]
    pub workers: Option<usize>,
    /// Words listed per topic.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Evict small or overlapping topics and refill their slots.
    #[arg(long)]
    pub diversify: bool,
    /// Directory for the final W and H.
    #[arg(long)]
    pub save_factors: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CombineArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    pub format: Format,
    /// Pool file as written by `factorize --save-pool`.
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(short = 'r', long)]
    pub rank: usize,
    #[arg(long, value_enum, default_value_t = CombineMode::Auto)]
    pub mode: CombineMode,
    /// Selection file to start the heuristic from (and to warm start exact).
    #[arg(long)]
    pub start: Option<PathBuf>,
    /// Write the selection here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub save_factors: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seconds; unlimited when not given.
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long)]
    pub t_max: Option<usize>,
    #[arg(long)]
    pub n_trials: Option<usize>,
    #[arg(long)]
    pub exact_max_pool: Option<usize>,
    #[arg(long)]
    pub enumeration_cap: Option<u64>,
}

/// Everything a `factorize` invocation produced.
#[derive(Debug)]
pub struct FactorizeSummary {
    pub spec: RunSpec,
    pub dataset: Dataset,
    pub trials: Vec<Trial>,
    pub rows: Vec<ReportRow>,
}

impl FactorizeSummary {
    pub fn best(&self) -> &Factorization {
        &run::best_trial(&self.trials).factorization
    }
}

fn options(run: &RunOptions, preset: Option<&PathBuf>) -> Result<RunOptions> {
    Ok(match preset {
        Some(p) => RunOptions::from_preset(p)?.merged(run.clone()),
        None => run.clone(),
    })
}

fn workers(w: Option<usize>, trials: usize) -> Result<usize> {
    match w {
        Some(0) => bail!("--workers must be positive"),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get()).min(trials.max(1))),
    }
}

pub fn cmd_factorize<W: Write>(args: &FactorizeArgs, out: W) -> Result<FactorizeSummary> {
    let spec = RunSpec::resolve(&options(&args.run, args.preset.as_ref())?, false)?;
    let reference = match &args.reference {
        Some(p) => ReferenceTable::load(p)?,
        None => ReferenceTable::builtin(),
    };
    let ds = spec.load_dataset()?;
    let trials = run::run_trials(&ds, &spec, workers(args.workers, spec.trials)?)?;
    let rows = run::report_rows(&ds, &spec, &trials, &reference);
    let best = run::best_trial(&trials);
    run::print_table(out, &rows, best)?;
    if let Some(p) = &args.csv {
        run::write_csv(p, &rows)?;
    }
    if let Some(dir) = &args.save_factors {
        run::save_factors(dir, &format!("{}_{}_r{}", ds.name, spec.method.as_str(), spec.r), &best.factorization)?;
    }
    if let Some(p) = &args.save_pool {
        run::save_trial_pool(p, &ds, &trials)?;
    }
    Ok(FactorizeSummary { spec, dataset: ds, trials, rows })
}

pub fn cmd_bench<W: Write>(args: &BenchArgs, out: W) -> Result<Vec<bench::KernelTiming>> {
    let rows = bench::bench_kernel(&args.sizes, args.trials, args.seed)?;
    bench::print_timings(out, &rows)?;
    if let Some(p) = &args.csv {
        bench::write_timings_csv(std::fs::File::create(p)?, &rows)?;
    }
    if rows.iter().any(|r| !r.identical) {
        bail!("packed and naive products differ");
    }
    Ok(rows)
}

pub fn cmd_topics<W: Write>(args: &TopicsArgs, out: W) -> Result<TopicsReport> {
    let spec = RunSpec::resolve(&options(&args.run, args.preset.as_ref())?, true)?;
    let ds = spec.load_dataset()?;
    let rep = topics::run_topics(&ds, &spec, args.k, args.diversify, workers(args.workers, spec.trials)?)?;
    topics::print_topics(out, &rep)?;
    if let Some(dir) = &args.save_factors {
        let f = Factorization::from_factors(&ds.x, &ds.m, rep.w.clone(), rep.h.clone(), spec.method.as_str(), spec.seed)?;
        run::save_factors(dir, &format!("{}_topics_r{}", ds.name, spec.r), &f)?;
    }
    Ok(rep)
}

pub fn cmd_combine<W: Write>(args: &CombineArgs, mut out: W) -> Result<CombineOutcome> {
    let ds = runspec::load_with_format(&args.data, args.format)?;
    let pool = pool_io::read_pool(&args.pool)?;
    if let Some(b) = args.budget {
        if !(b.is_finite() && b > 0.0) {
            bail!("--budget must be a positive number of seconds, got {b}");
        }
    }
    let start = match &args.start {
        Some(p) => Some(pool_io::parse_selection(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let mut limits = ExactCombineLimits::default();
    if let Some(v) = args.exact_max_pool {
        limits.max_pool = v;
    }
    if let Some(v) = args.enumeration_cap {
        limits.enumeration_cap = v;
    }
    let heur = HeurCombParams { t_max: args.t_max, n_trials: args.n_trials, seed: args.seed };
    let settings = CombineSettings { mode: args.mode, limits, heur };
    let budget = args.budget.map_or_else(Budget::unlimited, Budget::seconds);
    let res = run_combine(&ds, &pool, args.rank, &settings, start.as_ref(), &budget)?;
    let text = pool_io::format_selection(&res.selection);
    match &args.out {
        Some(p) => std::fs::write(p, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    let rel = relative_error_of(res.selection.error, &ds.x, &ds.m)?;
    eprintln!(
        "{} combine: error {} ({:.2}%), {} factors from a pool of {}",
        if res.exact { "exact" } else { "heuristic" },
        res.selection.error,
        100.0 * rel,
        res.selection.indices.len(),
        pool.len()
    );
    if let Some(dir) = &args.save_factors {
        let (w, h) = pool.rebuild(&res.selection.indices, args.rank);
        let f = Factorization::from_factors(&ds.x, &ds.m, w, h, "combine", args.seed)?;
        run::save_factors(dir, &format!("{}_combine_r{}", ds.name, args.rank), &f)?;
    }
    Ok(res)
}

pub fn dispatch<W: Write>(cli: &Cli, out: W) -> Result<()> {
    match &cli.command {
        Command::Factorize(a) => cmd_factorize(a, out).map(drop),
        Command::BenchKernel(a) => cmd_bench(a, out).map(drop),
        Command::Topics(a) => cmd_topics(a, out).map(drop),
        Command::Combine(a) => cmd_combine(a, out).map(drop),
    }
}
