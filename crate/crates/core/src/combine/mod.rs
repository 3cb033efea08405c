//! Combining rank-one factors gathered from many factorizations.
//!
//! Every rank-`r` factorization is a set of `r` rank-one factors `w hᵀ`.
//! Runs are pooled, duplicates dropped, and the best `r` of the pool are
//! picked, exactly for small pools and by random swaps otherwise.

mod diversify;
mod exact;
mod heuristic;
mod pool;
mod schemes;

pub use diversify::{diversify, diversity_violation, topic_gram, DiversifyOutcome, DiversifyParams};
pub use exact::{binomial, combine_exact, combine_exact_until, greedy_forward, ExactCombineLimits};
pub use heuristic::{combine_heuristic, combine_heuristic_traced, HeurCombParams};
pub use pool::{CombineSelection, FactorPool, RankOneFactor, DEFAULT_CACHE_LIMIT_BITS};
pub use schemes::{greedy_comb, greedy_comb_pooled, greedy_tree_bmf, ms_comb_ao, tree_bmf, SchemeConfig, TreeShape};
