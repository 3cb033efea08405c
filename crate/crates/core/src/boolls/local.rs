use rand::Rng;

use super::{solve_greedy, BoolLsInstance, BoolLsResult};
use crate::bitcore::BitVec;
use crate::rng::{rng_from_seed, Rng as StdRng};

/// Randomized local search around a starting point. `None` picks the
/// defaults `q_max = max(2, ceil(log2 r))` and `T = r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LocalSearchParams {
    pub q_max: Option<usize>,
    pub t: Option<usize>,
    pub seed: u64,
}

impl LocalSearchParams {
    pub fn with_seed(seed: u64) -> Self {
        LocalSearchParams { seed, ..Default::default() }
    }

    /// Resolved `(q_max, T)` for rank `r`, with `2 <= q_max <= r`.
    pub fn resolve(&self, r: usize) -> (usize, usize) {
        let log = (r.max(1) as f64).log2().ceil() as usize;
        let q = self.q_max.unwrap_or(log.max(2)).max(2).min(r);
        (q, self.t.unwrap_or(r))
    }
}

/// Perturbation search: for each of `T` rounds and each radius `k` in
/// `2..=q_max`, flip `k` random distinct bits; on a strict improvement
/// continue from there with one round less. Never increases the error.
pub fn local_search(inst: &BoolLsInstance, start: BoolLsResult, params: &LocalSearchParams) -> BoolLsResult {
    let r = inst.rank();
    if r < 2 {
        return start;
    }
    let (q, t) = params.resolve(r);
    let mut rng = rng_from_seed(params.seed);
    let (h, error) = search(inst, start.h.clone(), start.error, t, q, &mut rng);
    if error < start.error {
        inst.evaluate(h)
    } else {
        start
    }
}

fn search(inst: &BoolLsInstance, mut h: BitVec, mut err: u64, t: usize, q: usize, rng: &mut StdRng) -> (BitVec, u64) {
    if t == 0 {
        return (h, err);
    }
    let r = inst.rank();
    for _ in 0..t {
        for k in 2..=q {
            // Draw uniform indices until k distinct ones are set.
            let mut u = BitVec::zeros(r);
            let mut set = 0;
            while set < k {
                let idx = rng.gen_range(0..r);
                if !u.get(idx) {
                    u.set(idx, true);
                    set += 1;
                }
            }
            u.xor_assign(&h);
            let e = inst.error_of(&u);
            if e < err {
                (h, err) = search(inst, u, e, t - 1, q, rng);
            }
        }
    }
    (h, err)
}

/// Greedy selection followed by local search.
pub fn solve_greedy_ls(inst: &BoolLsInstance, params: &LocalSearchParams) -> BoolLsResult {
    local_search(inst, solve_greedy(inst), params)
}
