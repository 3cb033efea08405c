use super::exact::{combine_exact_until, ExactCombineLimits};
use super::heuristic::{combine_heuristic_traced, HeurCombParams};
use super::pool::{CombineSelection, FactorPool};
use crate::bitcore::BoolMatrix;
use crate::boolls::Backend;
use crate::budget::Budget;
use crate::error::{dim_err, param_err, Result};
use crate::factorize::{ao_bmf, for_each_run, Factorization, InitStrategy, MultiStartConfig};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeConfig {
    pub ms: MultiStartConfig,
    pub exact: ExactCombineLimits,
    pub heur: HeurCombParams,
    /// Share of the budget spent gathering runs; the rest goes to combining.
    pub gather_fraction: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            ms: MultiStartConfig::default(),
            exact: ExactCombineLimits::default(),
            heur: HeurCombParams::default(),
            gather_fraction: 0.75,
        }
    }
}

impl SchemeConfig {
    pub fn seed(&self) -> u64 {
        self.ms.ao.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.ms.ao.seed = seed;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.gather_fraction > 0.0 && self.gather_fraction <= 1.0) {
            return param_err(format!("gather fraction {} is not in (0, 1]", self.gather_fraction));
        }
        Ok(())
    }
}

/// Everything gathered by a multi-start loop: the deduplicated pool, the
/// best run and its pool indices.
struct Gathered {
    pool: FactorPool,
    best: Factorization,
    best_indices: Vec<usize>,
    runs: usize,
}

fn gather(x: &BoolMatrix, m: &BoolMatrix, r: usize, budget: &Budget, ms: &MultiStartConfig) -> Result<Gathered> {
    let mut pool = FactorPool::new(x.rows(), x.cols());
    let mut best: Option<(Factorization, Vec<usize>)> = None;
    let mut failure = None;
    let runs = for_each_run(x, m, r, budget, ms, |f| {
        if failure.is_some() {
            return;
        }
        match pool.add_factorization(&f, pool.len()) {
            Ok(idx) => {
                if best.as_ref().is_none_or(|(b, _)| f.error() < b.error()) {
                    best = Some((f, idx));
                }
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (best, best_indices) = best.expect("at least one run");
    Ok(Gathered { pool, best, best_indices, runs })
}

/// Exact combine when the pool is small enough, the swap heuristic from
/// `start` otherwise.
#[allow(clippy::too_many_arguments)]
fn combine_pool(
    x: &BoolMatrix,
    m: &BoolMatrix,
    pool: &FactorPool,
    start: &CombineSelection,
    r: usize,
    cfg: &SchemeConfig,
    deadline: &Budget,
    stream: u64,
) -> Result<CombineSelection> {
    if cfg.exact.allows(pool.len(), r) {
        combine_exact_until(x, m, pool, r, &cfg.exact, Some(start), deadline)
    } else {
        let heur = cfg.heur.with_seed(derive_seed(cfg.seed(), stream));
        Ok(combine_heuristic_traced(x, m, pool, start, r, &heur, deadline)?.0)
    }
}

fn polish(x: &BoolMatrix, m: &BoolMatrix, f: Factorization, cfg: &SchemeConfig, stream: u64) -> Result<Factorization> {
    let ao = cfg.ms.ao.with_seed(derive_seed(cfg.seed(), stream));
    let p = ao_bmf(x, m, &f.w, &ao)?;
    Ok(if p.error() < f.error() { p } else { f })
}

fn finish(mut f: Factorization, method: &str, seed: u64, runs: usize) -> Factorization {
    f.method = method.into();
    f.seed = seed;
    f.runs = runs;
    f
}

fn check_input(x: &BoolMatrix, m: &BoolMatrix, r: usize) -> Result<()> {
    if x.shape() != m.shape() {
        return dim_err(format!("X is {:?} but M is {:?}", x.shape(), m.shape()));
    }
    if r == 0 {
        return param_err("rank must be at least 1");
    }
    Ok(())
}

/// Picks the best selection from a pool, rebuilds it and keeps whichever of
/// it and `incumbent` is better.
#[allow(clippy::too_many_arguments)]
fn combine_and_rebuild(
    x: &BoolMatrix,
    m: &BoolMatrix,
    r: usize,
    pool: &FactorPool,
    start: &CombineSelection,
    incumbent: Factorization,
    cfg: &SchemeConfig,
    deadline: &Budget,
    stream: u64,
) -> Result<Factorization> {
    let sel = combine_pool(x, m, pool, start, r, cfg, deadline, stream)?;
    let (w, h) = pool.rebuild(&sel.indices, r);
    let f = Factorization::from_factors(x, m, w, h, "", cfg.seed())?;
    Ok(if f.error() < incumbent.error() { f } else { incumbent })
}

/// MS-Comb-AO: multi-start AO for a share of the budget, the best subset of
/// all gathered rank-one factors in the rest, then one more AO run from it.
pub fn ms_comb_ao(x: &BoolMatrix, m: &BoolMatrix, r: usize, budget: &Budget, cfg: &SchemeConfig) -> Result<Factorization> {
    check_input(x, m, r)?;
    cfg.check()?;
    let g = gather(x, m, r, &budget.fraction(cfg.gather_fraction), &cfg.ms)?;
    let start = CombineSelection::new(x, m, &g.pool, g.best_indices.clone())?;
    let combined = combine_and_rebuild(x, m, r, &g.pool, &start, g.best, cfg, &budget.rest(), 1)?;
    let f = polish(x, m, combined, cfg, 2)?;
    Ok(finish(f, "ms-comb-ao", cfg.seed(), g.runs))
}

/// Shape of a combining tree: `children` subtrees per internal node,
/// `depth` levels of internal nodes, `leaf_solutions` runs per leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeShape {
    pub depth: usize,
    pub children: usize,
    pub leaf_solutions: usize,
}

impl Default for TreeShape {
    fn default() -> Self {
        TreeShape { depth: 1, children: 2, leaf_solutions: 5 }
    }
}

/// Tree BMF. Leaves run MS-Comb-AO with `leaf_solutions` runs each; every
/// internal node pools the factors of its children's results, combines
/// them and improves the outcome with AO. Children are solved in
/// depth-first postorder, each with half of its parent's budget, and the
/// parent's combine step gets half as well.
pub fn tree_bmf(x: &BoolMatrix, m: &BoolMatrix, r: usize, shape: &TreeShape, budget: &Budget, cfg: &SchemeConfig) -> Result<Factorization> {
    check_input(x, m, r)?;
    cfg.check()?;
    if shape.depth == 0 || shape.children == 0 || shape.leaf_solutions == 0 {
        return param_err(format!("invalid tree shape {shape:?}"));
    }
    let mut next_leaf = 0u64;
    let mut runs = 0usize;
    let f = tree_node(x, m, r, shape, shape.depth, budget, cfg, &mut next_leaf, &mut runs)?;
    Ok(finish(f, "tree-bmf", cfg.seed(), runs))
}

#[allow(clippy::too_many_arguments)]
fn tree_node(
    x: &BoolMatrix,
    m: &BoolMatrix,
    r: usize,
    shape: &TreeShape,
    levels_below: usize,
    budget: &Budget,
    cfg: &SchemeConfig,
    next_leaf: &mut u64,
    runs: &mut usize,
) -> Result<Factorization> {
    if levels_below == 0 {
        let leaf = derive_seed(cfg.seed(), 1000 + *next_leaf);
        *next_leaf += 1;
        let mut leaf_cfg = cfg.with_seed(leaf);
        leaf_cfg.ms.max_runs = Some(shape.leaf_solutions);
        let f = ms_comb_ao(x, m, r, budget, &leaf_cfg)?;
        *runs += f.runs;
        return Ok(f);
    }
    let node_seed = derive_seed(cfg.seed(), 2000 + *next_leaf);
    let mut kids = Vec::with_capacity(shape.children);
    for _ in 0..shape.children {
        kids.push(tree_node(x, m, r, shape, levels_below - 1, &budget.fraction(0.5), cfg, next_leaf, runs)?);
    }
    let mut pool = FactorPool::new(x.rows(), x.cols());
    let mut best = 0;
    let mut best_indices = Vec::new();
    for (s, k) in kids.iter().enumerate() {
        let idx = pool.add_factorization(k, s)?;
        if s == 0 || k.error() < kids[best].error() {
            best = s;
            best_indices = idx;
        }
    }
    let start = CombineSelection::new(x, m, &pool, best_indices)?;
    let node_cfg = cfg.with_seed(node_seed);
    let incumbent = kids.swap_remove(best);
    let combined = combine_and_rebuild(x, m, r, &pool, &start, incumbent, &node_cfg, &budget.fraction(0.5), 1)?;
    polish(x, m, combined, &node_cfg, 2)
}

/// Greedy-Comb: AO with the greedy BoolLS backend from random column and
/// row initializations for a share of the budget, then the swap heuristic
/// over all gathered rank-one factors starting from the best run.
pub fn greedy_comb(x: &BoolMatrix, m: &BoolMatrix, r: usize, budget: &Budget, cfg: &SchemeConfig) -> Result<Factorization> {
    Ok(greedy_comb_pooled(x, m, r, budget, cfg)?.0)
}

/// [`greedy_comb`], also returning the pool and the final selection.
pub fn greedy_comb_pooled(
    x: &BoolMatrix,
    m: &BoolMatrix,
    r: usize,
    budget: &Budget,
    cfg: &SchemeConfig,
) -> Result<(Factorization, FactorPool, CombineSelection)> {
    check_input(x, m, r)?;
    cfg.check()?;
    let ms = greedy_ms(&cfg.ms);
    let g = gather(x, m, r, &budget.fraction(cfg.gather_fraction), &ms)?;
    let start = CombineSelection::new(x, m, &g.pool, g.best_indices.clone())?;
    let heur = cfg.heur.with_seed(derive_seed(cfg.seed(), 1));
    let (sel, _) = combine_heuristic_traced(x, m, &g.pool, &start, r, &heur, &budget.rest())?;
    let (f, sel) = if sel.error < g.best.error() {
        let (w, h) = g.pool.rebuild(&sel.indices, r);
        (Factorization::from_factors(x, m, w, h, "", cfg.seed())?, sel)
    } else {
        (g.best, start)
    };
    Ok((finish(f, "greedy-comb", cfg.seed(), g.runs), g.pool, sel))
}

fn greedy_ms(ms: &MultiStartConfig) -> MultiStartConfig {
    let mut ms = *ms;
    ms.ao.backend = Backend::GreedyLs;
    if ms.init.strategy == InitStrategy::Alternate {
        ms.init.strategy = InitStrategy::RandomAlternate;
    }
    ms
}

/// Greedy-TreeBMF: `calls` independent Greedy-Comb runs, each with its own
/// budget, whose factors are pooled and combined once more by the swap
/// heuristic from the best call.
pub fn greedy_tree_bmf(
    x: &BoolMatrix,
    m: &BoolMatrix,
    r: usize,
    calls: usize,
    per_call: &Budget,
    cfg: &SchemeConfig,
) -> Result<Factorization> {
    check_input(x, m, r)?;
    if calls == 0 {
        return param_err("calls must be at least 1");
    }
    let mut results = Vec::with_capacity(calls);
    let mut runs = 0;
    for c in 0..calls {
        let call_cfg = cfg.with_seed(derive_seed(cfg.seed(), 3000 + c as u64));
        let f = greedy_comb(x, m, r, &per_call.fraction(1.0), &call_cfg)?;
        runs += f.runs;
        results.push(f);
    }
    let mut pool = FactorPool::new(x.rows(), x.cols());
    let mut best = 0;
    let mut best_indices = Vec::new();
    for (s, f) in results.iter().enumerate() {
        let idx = pool.add_factorization(f, s)?;
        if s == 0 || f.error() < results[best].error() {
            best = s;
            best_indices = idx;
        }
    }
    let start = CombineSelection::new(x, m, &pool, best_indices)?;
    let heur = cfg.heur.with_seed(derive_seed(cfg.seed(), 4000));
    let (sel, _) = combine_heuristic_traced(x, m, &pool, &start, r, &heur, &Budget::unlimited())?;
    let incumbent = results.swap_remove(best);
    let f = if sel.error < incumbent.error() {
        let (w, h) = pool.rebuild(&sel.indices, r);
        Factorization::from_factors(x, m, w, h, "", cfg.seed())?
    } else {
        incumbent
    };
    Ok(finish(f, "greedy-tree", cfg.seed(), runs))
}
