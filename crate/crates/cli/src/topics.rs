use std::io::Write;

use anyhow::{bail, Context, Result};
use bmf_core::combine::{diversify, greedy_comb_pooled, CombineSelection, DiversifyOutcome, DiversifyParams, FactorPool};
use bmf_core::dataio::{relative_error_of, top_words, topic_importance, Dataset};
use bmf_core::rng::derive_seed;
use bmf_core::{BoolMatrix, Budget, Factorization};
use rayon::prelude::*;

use crate::run::{best_trial, run_trials, trial_seed};
use crate::runspec::{Method, RunSpec};

#[derive(Clone, Debug)]
pub struct TopicsReport {
    pub dataset: String,
    pub method: &'static str,
    pub r: usize,
    pub error: u64,
    pub relative_error: f64,
    pub w: BoolMatrix,
    pub h: BoolMatrix,
    /// Documents covered by each topic.
    pub sizes: Vec<u32>,
    /// Top words of each topic with their importance.
    pub topics: Vec<Vec<(String, u32)>>,
    pub diversify: Option<DiversifyOutcome>,
}

/// Factorizes a words x documents matrix, optionally diversifies the
/// topics, and lists the `k` most important words of each topic.
///
/// Greedy-Comb keeps the pool gathered by its best trial; the other
/// methods pool the factors of all trials.
pub fn run_topics(ds: &Dataset, spec: &RunSpec, k: usize, diversify_topics: bool, workers: usize) -> Result<TopicsReport> {
    let Some(labels) = ds.row_labels.as_ref() else {
        bail!("topics need row labels (a `.rows` file next to the data)");
    };
    if k == 0 {
        bail!("--k must be positive");
    }
    let (x, m, r) = (&ds.x, &ds.m, spec.r);
    let (f, pool, sel) = if spec.method == Method::GreedyComb {
        greedy_trials(ds, spec, workers)?
    } else {
        let trials = run_trials(ds, spec, workers)?;
        let best = best_trial(&trials).index;
        let mut pool = FactorPool::new(x.rows(), x.cols());
        let mut best_idx = Vec::new();
        for t in &trials {
            let idx = pool.add_factorization(&t.factorization, t.index)?;
            if t.index == best {
                best_idx = idx;
            }
        }
        let sel = CombineSelection::new(x, m, &pool, best_idx)?;
        (trials[best].factorization.clone(), pool, sel)
    };

    let (w, h, outcome) = if diversify_topics {
        let params = DiversifyParams { seed: derive_seed(spec.seed, 5000), ..spec.diversify };
        let out = diversify(x, m, &pool, &sel, r, &params)?;
        let (w, h) = pool.rebuild(&out.selection.indices, r);
        (w, h, Some(out))
    } else {
        (f.w.clone(), f.h.clone(), None)
    };

    let error = bmf_core::bitcore::factor_error(x, m, &w, &h)?;
    let relative_error = relative_error_of(error, x, m)?;
    let wt = topic_importance(x, &w, &h)?;
    let topics = top_words(&wt, k, labels)?;
    let sizes = (0..h.rows()).map(|t| h.row_count_ones(t) as u32).collect();
    Ok(TopicsReport { dataset: ds.name.clone(), method: spec.method.as_str(), r, error, relative_error, w, h, sizes, topics, diversify: outcome })
}

fn greedy_trials(ds: &Dataset, spec: &RunSpec, workers: usize) -> Result<(Factorization, FactorPool, CombineSelection)> {
    let tp = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let results: Vec<(Factorization, FactorPool, CombineSelection)> = tp.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let budget = spec.budget.map_or_else(Budget::unlimited, Budget::seconds);
                let cfg = spec.scheme.with_seed(trial_seed(spec.seed, t));
                greedy_comb_pooled(&ds.x, &ds.m, spec.r, &budget, &cfg).with_context(|| format!("trial {t}"))
            })
            .collect::<Result<_>>()
    })?;
    let best = (0..results.len()).min_by_key(|&i| (results[i].0.error(), i)).expect("at least one trial");
    Ok(results.into_iter().nth(best).expect("index in range"))
}

pub fn print_topics<W: Write>(mut out: W, rep: &TopicsReport) -> Result<()> {
    writeln!(
        out,
        "{} ({}, r={}): error {}, relative error {:.2}%",
        rep.dataset,
        rep.method,
        rep.r,
        rep.error,
        100.0 * rep.relative_error
    )?;
    if let Some(d) = &rep.diversify {
        let state = if d.satisfied { "rules hold" } else { "stopped with r factors left" };
        writeln!(out, "diversify: {} evicted, {state}", d.evicted.len())?;
    }
    for (t, words) in rep.topics.iter().enumerate() {
        let list: Vec<String> = words.iter().map(|(w, c)| format!("{w} ({c})")).collect();
        writeln!(out, "topic {} [{} docs]: {}", t + 1, rep.sizes[t], list.join(", "))?;
    }
    Ok(())
}

/// `G = H Hᵀ` of the reported topics.
pub fn report_gram(rep: &TopicsReport) -> Vec<Vec<u32>> {
    let h = &rep.h;
    (0..h.rows())
        .map(|a| {
            (0..h.rows())
                .map(|b| h.row_words(a).iter().zip(h.row_words(b)).map(|(p, q)| (p & q).count_ones()).sum())
                .collect()
        })
        .collect()
}
