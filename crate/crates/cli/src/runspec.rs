use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use bmf_core::boolls::{Backend, LocalSearchParams};
use bmf_core::combine::{DiversifyParams, ExactCombineLimits, HeurCombParams, SchemeConfig, TreeShape};
use bmf_core::dataio::{load_dense, load_triplets, Dataset};
use bmf_core::factorize::{AoConfig, InitConfig, InitStrategy, MultiStartConfig};
use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MsAo,
    MsCombAo,
    TreeBmf,
    GreedyComb,
    GreedyTree,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::MsAo => "ms-ao",
            Method::MsCombAo => "ms-comb-ao",
            Method::TreeBmf => "tree-bmf",
            Method::GreedyComb => "greedy-comb",
            Method::GreedyTree => "greedy-tree",
        }
    }

    fn is_greedy(&self) -> bool {
        matches!(self, Method::GreedyComb | Method::GreedyTree)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendArg {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    Alternate,
    RandomColumns,
    RandomRows,
    Nmf,
    RandomAlternate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// By extension: `.tri`/`.triplets` are triplets, anything else dense.
    #[default]
    Auto,
    Dense,
    Triplets,
}

/// Run settings as given on the command line or in a preset file. Every
/// field is optional; command line values override preset values, and
/// unset fields fall back to defaults when the run is resolved.
#[derive(Args, Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunOptions {
    /// Input matrix (dense 0/1/? text or triplets).
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Dataset name for reports and reference lookup (default: file stem).
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Factorization rank.
    #[arg(short = 'r', long)]
    #[serde(alias = "r")]
    pub rank: Option<usize>,
    /// Soft wall-clock limit per trial, in seconds. Defaults to 30, or to no
    /// limit when --max-runs is given.
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// BoolLS solver inside AO.
    #[arg(long, value_enum)]
    pub backend: Option<BackendArg>,
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,
    /// Maximum AO sweeps per run.
    #[arg(long)]
    pub maxiter: Option<usize>,
    /// Cap on AO runs per gather loop; makes runs reproducible.
    #[arg(long)]
    pub max_runs: Option<usize>,
    /// Tree depth (tree-bmf).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Children per tree node (tree-bmf).
    #[arg(long)]
    pub children: Option<usize>,
    /// AO runs per tree leaf (tree-bmf).
    #[arg(long)]
    pub leaf_solutions: Option<usize>,
    /// Greedy-Comb calls (greedy-tree); the budget is split evenly.
    #[arg(long)]
    pub calls: Option<usize>,
    /// Smallest topic size kept by the diversity step (topics).
    #[arg(long)]
    pub w_min: Option<u32>,
    /// Smallest allowed diagonal/off-diagonal Gram ratio (topics).
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Accepted swaps allowed in the combine heuristic.
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Consecutive failed swaps before the combine heuristic stops.
    #[arg(long)]
    pub n_trials: Option<usize>,
    /// Largest perturbation radius of the local search (greedy backend).
    #[arg(long)]
    pub q_max: Option<usize>,
    /// Rounds T of the local search (greedy backend).
    #[arg(long)]
    pub ls_rounds: Option<usize>,
    /// Pools up to this size are combined exactly.
    #[arg(long)]
    pub exact_max_pool: Option<usize>,
    /// Larger pools are combined exactly while C(N, r) stays below this.
    #[arg(long)]
    pub enumeration_cap: Option<u64>,
    /// Highest rank the exact BoolLS solver accepts.
    #[arg(long)]
    pub exact_rank_limit: Option<usize>,
    /// Share of the budget spent gathering runs before combining.
    #[arg(long)]
    pub gather_fraction: Option<f64>,
    /// Multiplicative-update iterations of the NMF initialization.
    #[arg(long)]
    pub nmf_iters: Option<usize>,
}

macro_rules! merge_fields {
    ($base:expr, $over:expr, $($f:ident),*) => {
        RunOptions { $($f: $over.$f.or($base.$f)),* }
    };
}

impl RunOptions {
    /// `over` wins wherever it sets a value.
    pub fn merged(self, over: RunOptions) -> RunOptions {
        merge_fields!(
            self, over, data, format, name, method, rank, budget, trials, seed, backend, init, maxiter, max_runs,
            depth, children, leaf_solutions, calls, w_min, ratio, t_max, n_trials, q_max, ls_rounds,
            exact_max_pool, enumeration_cap, exact_rank_limit, gather_fraction, nmf_iters
        )
    }

    pub fn from_preset(path: &Path) -> Result<RunOptions> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading preset {}", path.display()))?;
        let mut opts: RunOptions = toml::from_str(&text).map_err(|e| anyhow!("preset {}: {}", path.display(), e.message()))?;
        // Relative data paths in a preset are relative to the preset file.
        if let (Some(d), Some(dir)) = (&opts.data, path.parent()) {
            if d.is_relative() && !d.exists() {
                opts.data = Some(dir.join(d));
            }
        }
        Ok(opts)
    }
}

/// A validated, fully resolved run.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub data: PathBuf,
    pub format: Format,
    pub name: String,
    pub method: Method,
    pub r: usize,
    /// `None` runs without a time limit.
    pub budget: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub scheme: SchemeConfig,
    pub tree: TreeShape,
    pub calls: usize,
    pub diversify: DiversifyParams,
}

pub const DEFAULT_BUDGET_SECS: f64 = 30.0;

fn positive<T: PartialOrd + Default + std::fmt::Display>(v: Option<T>, flag: &str) -> Result<()> {
    match v {
        Some(x) if x <= T::default() => bail!("--{flag} must be positive, got {x}"),
        _ => Ok(()),
    }
}

impl RunSpec {
    /// Validates counts and method/knob compatibility. `topics` allows the
    /// diversity knobs.
    pub fn resolve(o: &RunOptions, topics: bool) -> Result<RunSpec> {
        let data = o.data.clone().ok_or_else(|| anyhow!("--data is required"))?;
        let method = o.method.ok_or_else(|| anyhow!("--method is required"))?;
        let r = o.rank.ok_or_else(|| anyhow!("--rank is required"))?;
        positive(Some(r), "rank")?;
        positive(o.trials, "trials")?;
        positive(o.maxiter, "maxiter")?;
        positive(o.max_runs, "max-runs")?;
        positive(o.depth, "depth")?;
        positive(o.children, "children")?;
        positive(o.leaf_solutions, "leaf-solutions")?;
        positive(o.calls, "calls")?;
        positive(o.t_max, "t-max")?;
        positive(o.n_trials, "n-trials")?;
        positive(o.q_max, "q-max")?;
        positive(o.ls_rounds, "ls-rounds")?;
        positive(o.exact_max_pool, "exact-max-pool")?;
        positive(o.enumeration_cap, "enumeration-cap")?;
        positive(o.exact_rank_limit, "exact-rank-limit")?;
        positive(o.nmf_iters, "nmf-iters")?;
        positive(o.ratio, "ratio")?;
        if let Some(b) = o.budget {
            if !(b.is_finite() && b > 0.0) {
                bail!("--budget must be a positive number of seconds, got {b}");
            }
        }
        if let Some(g) = o.gather_fraction {
            if !(g > 0.0 && g <= 1.0) {
                bail!("--gather-fraction must be in (0, 1], got {g}");
            }
        }

        let only = |set: bool, flag: &str, ok: bool, what: &str| -> Result<()> {
            if set && !ok {
                bail!("--{flag} applies to {what} only, not to {}", method.as_str());
            }
            Ok(())
        };
        let tree = method == Method::TreeBmf;
        let combines = method != Method::MsAo;
        only(o.depth.is_some(), "depth", tree, "tree-bmf")?;
        only(o.children.is_some(), "children", tree, "tree-bmf")?;
        only(o.leaf_solutions.is_some(), "leaf-solutions", tree, "tree-bmf")?;
        only(o.calls.is_some(), "calls", method == Method::GreedyTree, "greedy-tree")?;
        only(o.t_max.is_some(), "t-max", combines, "combining methods")?;
        only(o.n_trials.is_some(), "n-trials", combines, "combining methods")?;
        only(o.gather_fraction.is_some(), "gather-fraction", combines, "combining methods")?;
        let exact_combine = matches!(method, Method::MsCombAo | Method::TreeBmf);
        only(o.exact_max_pool.is_some(), "exact-max-pool", exact_combine, "ms-comb-ao and tree-bmf")?;
        only(o.enumeration_cap.is_some(), "enumeration-cap", exact_combine, "ms-comb-ao and tree-bmf")?;
        only(o.w_min.is_some(), "w-min", topics, "the topics command")?;
        only(o.ratio.is_some(), "ratio", topics, "the topics command")?;

        let backend = match (o.backend, method.is_greedy()) {
            (Some(BackendArg::Exact), true) => bail!("{} always uses the greedy backend", method.as_str()),
            (_, true) | (Some(BackendArg::Greedy), false) => Backend::GreedyLs,
            _ => Backend::Exact,
        };
        if backend == Backend::Exact {
            only(o.q_max.is_some(), "q-max", false, "the greedy backend")?;
            only(o.ls_rounds.is_some(), "ls-rounds", false, "the greedy backend")?;
        } else {
            only(o.exact_rank_limit.is_some(), "exact-rank-limit", false, "the exact backend")?;
        }

        let strategy = match o.init.unwrap_or(InitArg::Alternate) {
            InitArg::Alternate => InitStrategy::Alternate,
            InitArg::RandomColumns => InitStrategy::RandomColumns,
            InitArg::RandomRows => InitStrategy::RandomRows,
            InitArg::Nmf => InitStrategy::Nmf,
            InitArg::RandomAlternate => InitStrategy::RandomAlternate,
        };
        let defaults = AoConfig::default();
        let ao = AoConfig {
            maxiter: o.maxiter.unwrap_or(defaults.maxiter),
            backend,
            local_search: LocalSearchParams { q_max: o.q_max, t: o.ls_rounds, seed: 0 },
            exact_rank_limit: o.exact_rank_limit.unwrap_or(defaults.exact_rank_limit),
            seed: 0,
        };
        let init = InitConfig { strategy, nmf_iters: o.nmf_iters.unwrap_or(InitConfig::default().nmf_iters), ..Default::default() };
        let exact = ExactCombineLimits {
            max_pool: o.exact_max_pool.unwrap_or(ExactCombineLimits::default().max_pool),
            enumeration_cap: o.enumeration_cap.unwrap_or(ExactCombineLimits::default().enumeration_cap),
        };
        let scheme = SchemeConfig {
            ms: MultiStartConfig { ao, init, max_runs: o.max_runs },
            exact,
            heur: HeurCombParams { t_max: o.t_max, n_trials: o.n_trials, seed: 0 },
            gather_fraction: o.gather_fraction.unwrap_or(SchemeConfig::default().gather_fraction),
        };
        let tree_default = TreeShape::default();
        let tree = TreeShape {
            depth: o.depth.unwrap_or(tree_default.depth),
            children: o.children.unwrap_or(tree_default.children),
            leaf_solutions: o.leaf_solutions.unwrap_or(tree_default.leaf_solutions),
        };
        let div_default = DiversifyParams::default();
        let diversify = DiversifyParams {
            w_min: o.w_min.unwrap_or(div_default.w_min),
            ratio: o.ratio.unwrap_or(div_default.ratio),
            n_trials: o.n_trials,
            seed: 0,
        };
        let budget = match (o.budget, o.max_runs) {
            (Some(b), _) => Some(b),
            (None, Some(_)) => None,
            (None, None) => Some(DEFAULT_BUDGET_SECS),
        };
        let name = match &o.name {
            Some(n) => n.clone(),
            None => data.file_stem().and_then(|s| s.to_str()).unwrap_or("data").to_string(),
        };
        Ok(RunSpec {
            data,
            format: o.format.unwrap_or_default(),
            name,
            method,
            r,
            budget,
            trials: o.trials.unwrap_or(1),
            seed: o.seed.unwrap_or(0),
            scheme,
            tree,
            calls: o.calls.unwrap_or(3),
            diversify,
        })
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        let ds = load_with_format(&self.data, self.format)?;
        Ok(Dataset { name: self.name.clone(), ..ds })
    }
}

pub fn load_with_format(path: &Path, format: Format) -> Result<Dataset> {
    match format {
        Format::Auto => Dataset::load(path),
        Format::Dense => load_dense(path),
        Format::Triplets => load_triplets(path),
    }
    .with_context(|| format!("loading {}", path.display()))
}
