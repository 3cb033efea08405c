use anyhow::{bail, Result};
use bmf_core::combine::{
    combine_exact_until, combine_heuristic_traced, greedy_forward, CombineSelection, ExactCombineLimits, FactorPool,
    HeurCombParams,
};
use bmf_core::dataio::Dataset;
use bmf_core::Budget;
use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CombineMode {
    /// Exact when the pool is small enough, otherwise the swap heuristic.
    Auto,
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug)]
pub struct CombineSettings {
    pub mode: CombineMode,
    pub limits: ExactCombineLimits,
    pub heur: HeurCombParams,
}

#[derive(Clone, Debug)]
pub struct CombineOutcome {
    pub selection: CombineSelection,
    /// True when the exact search ran to completion.
    pub exact: bool,
    /// Heuristic error after each accepted move, starting with the start.
    pub trace: Vec<u64>,
}

/// Selects `r` rank-one factors of `pool` for `ds`. The heuristic starts
/// from `start`, or from a greedy forward pick when none is given.
pub fn run_combine(
    ds: &Dataset,
    pool: &FactorPool,
    r: usize,
    settings: &CombineSettings,
    start: Option<&CombineSelection>,
    budget: &Budget,
) -> Result<CombineOutcome> {
    if pool.shape() != ds.x.shape() {
        bail!("pool is {:?} but the data is {:?}", pool.shape(), ds.x.shape());
    }
    if r == 0 {
        bail!("rank must be positive");
    }
    let (x, m) = (&ds.x, &ds.m);
    let CombineSettings { mode, ref limits, ref heur } = *settings;
    let exact = match mode {
        CombineMode::Exact => true,
        CombineMode::Heuristic => false,
        CombineMode::Auto => limits.allows(pool.len(), r),
    };
    if exact {
        let sel = combine_exact_until(x, m, pool, r, limits, start, budget)?;
        let trace = vec![sel.error];
        return Ok(CombineOutcome { selection: sel, exact: !budget.expired(), trace });
    }
    let start = match start {
        Some(s) => s.clone(),
        None => greedy_forward(x, m, pool, r)?,
    };
    let (selection, trace) = combine_heuristic_traced(x, m, pool, &start, r, heur, budget)?;
    Ok(CombineOutcome { selection, exact: false, trace })
}
