use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use bmf_core::combine::{greedy_comb, greedy_tree_bmf, ms_comb_ao, tree_bmf, FactorPool};
use bmf_core::dataio::{relative_error_of, write_dense, write_report, Dataset, ReportRow};
use bmf_core::factorize::{ms_ao, Factorization};
use bmf_core::rng::derive_seed;
use bmf_core::{BoolMatrix, Budget};
use rayon::prelude::*;

use crate::pool_io::write_pool;
use crate::reference::ReferenceTable;
use crate::runspec::{Method, RunSpec};

#[derive(Clone, Debug)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub factorization: Factorization,
    pub seconds: f64,
}

/// Seed of trial `t`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    derive_seed(seed, t as u64)
}

/// One run of the configured method.
pub fn run_method(ds: &Dataset, spec: &RunSpec, seed: u64) -> Result<Factorization> {
    let budget = match spec.budget {
        Some(s) => Budget::seconds(s),
        None => Budget::unlimited(),
    };
    let cfg = spec.scheme.with_seed(seed);
    let (x, m, r) = (&ds.x, &ds.m, spec.r);
    let f = match spec.method {
        Method::MsAo => ms_ao(x, m, r, &budget, &cfg.ms)?,
        Method::MsCombAo => ms_comb_ao(x, m, r, &budget, &cfg)?,
        Method::TreeBmf => tree_bmf(x, m, r, &spec.tree, &budget, &cfg)?,
        Method::GreedyComb => greedy_comb(x, m, r, &budget, &cfg)?,
        Method::GreedyTree => {
            let per_call = match spec.budget {
                Some(s) => Budget::seconds(s / spec.calls as f64),
                None => Budget::unlimited(),
            };
            greedy_tree_bmf(x, m, r, spec.calls, &per_call, &cfg)?
        }
    };
    Ok(f)
}

/// Runs all trials on a pool of `workers` threads. Results come back in
/// trial order whatever the scheduling.
pub fn run_trials(ds: &Dataset, spec: &RunSpec, workers: usize) -> Result<Vec<Trial>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let seed = trial_seed(spec.seed, t);
                let start = Instant::now();
                let f = run_method(ds, spec, seed).with_context(|| format!("trial {t}"))?;
                Ok(Trial { index: t, seed, factorization: f, seconds: start.elapsed().as_secs_f64() })
            })
            .collect()
    })
}

/// The first trial with the lowest error.
pub fn best_trial(trials: &[Trial]) -> &Trial {
    trials.iter().min_by_key(|t| (t.factorization.error(), t.index)).expect("at least one trial")
}

pub fn report_rows(ds: &Dataset, spec: &RunSpec, trials: &[Trial], reference: &ReferenceTable) -> Vec<ReportRow> {
    let refv = reference.get(&ds.name, spec.r);
    trials
        .iter()
        .map(|t| {
            let e = t.factorization.error();
            let rel = relative_error_of(e, &ds.x, &ds.m).ok();
            ReportRow::new(&ds.name, spec.method.as_str(), spec.r, t.seed, t.seconds, e, refv, rel)
        })
        .collect()
}

/// Aligned text table followed by a summary line for the best trial.
pub fn print_table<W: Write>(mut out: W, rows: &[ReportRow], best: &Trial) -> Result<()> {
    writeln!(out, "{:<12} {:<12} {:>3} {:>20} {:>9} {:>8} {:>8} {:>8}", "dataset", "method", "r", "seed", "time_s", "error", "diff", "rel_%")?;
    for r in rows {
        let diff = r.error_diff_vs_reference.map_or("-".to_string(), |d| format!("{d:+}"));
        let rel = if r.relative_error_pct.is_empty() { "-" } else { &r.relative_error_pct };
        writeln!(
            out,
            "{:<12} {:<12} {:>3} {:>20} {:>9} {:>8} {:>8} {:>8}",
            r.dataset, r.method, r.r, r.seed, r.time_s, r.error, diff, rel
        )?;
    }
    let b = &rows[best.index];
    let diff = b.error_diff_vs_reference.map_or(String::new(), |d| format!(", diff vs reference {d:+}"));
    writeln!(out, "best: error {} (trial {}, seed {}{diff})", b.error, best.index, b.seed)?;
    Ok(())
}

pub fn write_csv(path: &Path, rows: &[ReportRow]) -> Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_report(std::io::BufWriter::new(file), rows)?;
    Ok(())
}

/// Writes `W` and `H` of `f` as dense files `<prefix>_W.txt`, `<prefix>_H.txt`.
pub fn save_factors(dir: &Path, prefix: &str, f: &Factorization) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (m, tag) in [(&f.w, "W"), (&f.h, "H")] {
        let path = dir.join(format!("{prefix}_{tag}.txt"));
        let ones = BoolMatrix::ones(m.rows(), m.cols());
        std::fs::write(&path, write_dense(m, &ones)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Pools the rank-one factors of every trial, for the `combine` command.
pub fn save_trial_pool(path: &Path, ds: &Dataset, trials: &[Trial]) -> Result<()> {
    let pool = FactorPool::from_factorizations(ds.x.rows(), ds.x.cols(), trials.iter().map(|t| &t.factorization))?;
    write_pool(path, &pool)
}
