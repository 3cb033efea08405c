use super::ao::{ao_bmf, ao_bmf_from_h, AoConfig};
use super::init::{init_nmf, init_random_selection, Axis, InitConfig, InitStrategy};
use super::Factorization;
use crate::bitcore::BoolMatrix;
use crate::budget::Budget;
use crate::error::{dim_err, param_err, Result};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct MultiStartConfig {
    pub ao: AoConfig,
    pub init: InitConfig,
    /// Stop after this many runs even if time is left. Runs bounded this way
    /// are reproducible; a pure time bound is not.
    pub max_runs: Option<usize>,
}

/// Initialization used by run `t` of a multi-start loop.
pub fn strategy_for_run(strategy: InitStrategy, t: usize, complete: bool) -> InitStrategy {
    match strategy {
        InitStrategy::Alternate | InitStrategy::RandomAlternate if !complete => InitStrategy::Nmf,
        InitStrategy::RandomAlternate if t.is_multiple_of(2) => InitStrategy::RandomColumns,
        InitStrategy::RandomAlternate => InitStrategy::RandomRows,
        InitStrategy::Alternate => match t % 4 {
            0 => InitStrategy::RandomColumns,
            2 => InitStrategy::RandomRows,
            _ => InitStrategy::Nmf,
        },
        s => s,
    }
}

/// One initialization followed by one AO run.
pub fn ao_from_init(
    x: &BoolMatrix,
    m: &BoolMatrix,
    r: usize,
    strategy: InitStrategy,
    init: &InitConfig,
    ao: &AoConfig,
) -> Result<Factorization> {
    let complete = m.is_all_ones();
    let seed = ao.seed;
    match strategy {
        InitStrategy::RandomColumns | InitStrategy::RandomRows if !complete => {
            param_err("random column/row initialization needs complete data; use nmf")
        }
        InitStrategy::RandomColumns if r <= x.cols() => {
            ao_bmf(x, m, &init_random_selection(x, r, Axis::Columns, derive_seed(seed, 101))?, ao)
        }
        InitStrategy::RandomRows if r <= x.rows() => {
            ao_bmf_from_h(x, m, &init_random_selection(x, r, Axis::Rows, derive_seed(seed, 102))?, ao)
        }
        InitStrategy::RandomColumns | InitStrategy::RandomRows => {
            param_err(format!("rank {r} exceeds the number of rows/columns to sample from"))
        }
        InitStrategy::Nmf | InitStrategy::Alternate | InitStrategy::RandomAlternate => {
            let (w0, _) = init_nmf(x, m, r, init, derive_seed(seed, 103))?;
            ao_bmf(x, m, &w0, ao)
        }
    }
}

/// Runs AO from fresh initializations until the budget or run cap is hit,
/// calling `on_run` with each result. At least one run always completes.
pub fn for_each_run(
    x: &BoolMatrix,
    m: &BoolMatrix,
    r: usize,
    budget: &Budget,
    cfg: &MultiStartConfig,
    mut on_run: impl FnMut(Factorization),
) -> Result<usize> {
    if x.shape() != m.shape() {
        return dim_err(format!("X is {:?} but M is {:?}", x.shape(), m.shape()));
    }
    let complete = m.is_all_ones();
    let cap = cfg.max_runs.unwrap_or(usize::MAX).max(1);
    let mut t = 0;
    while t < cap && (t == 0 || !budget.expired()) {
        let mut strategy = strategy_for_run(cfg.init.strategy, t, complete);
        if matches!(cfg.init.strategy, InitStrategy::Alternate | InitStrategy::RandomAlternate) {
            let too_small = match strategy {
                InitStrategy::RandomColumns => r > x.cols(),
                InitStrategy::RandomRows => r > x.rows(),
                _ => false,
            };
            if too_small {
                strategy = InitStrategy::Nmf;
            }
        }
        let ao = cfg.ao.with_seed(derive_seed(cfg.ao.seed, t as u64));
        on_run(ao_from_init(x, m, r, strategy, &cfg.init, &ao)?);
        t += 1;
    }
    Ok(t)
}

/// Multi-start AO: the best of as many runs as fit in the budget. Ties keep
/// the earlier run.
pub fn ms_ao(x: &BoolMatrix, m: &BoolMatrix, r: usize, budget: &Budget, cfg: &MultiStartConfig) -> Result<Factorization> {
    let mut best: Option<Factorization> = None;
    let runs = for_each_run(x, m, r, budget, cfg, |f| {
        if best.as_ref().is_none_or(|b| f.error() < b.error()) {
            best = Some(f);
        }
    })?;
    let mut best = best.expect("at least one run");
    best.method = "ms-ao".into();
    best.runs = runs;
    Ok(best)
}
