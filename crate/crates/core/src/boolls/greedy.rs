use super::{BoolLsInstance, BoolLsResult};
use crate::bitcore::{or_words, BitVec};

/// Greedy forward selection: starting from `h = 0`, repeatedly switch on the
/// atom that lowers the error the most, until no atom lowers it.
pub fn solve_greedy(inst: &BoolLsInstance) -> BoolLsResult {
    solve_greedy_traced(inst).0
}

/// Like [`solve_greedy`], also returning the error after every accepted flip
/// (the first entry is the error of `h = 0`).
pub fn solve_greedy_traced(inst: &BoolLsInstance) -> (BoolLsResult, Vec<u64>) {
    let r = inst.rank();
    let (x, mask) = (inst.x().words(), inst.mask().words());
    let mut cover = vec![0u64; inst.words()];
    let mut h = BitVec::zeros(r);
    let mut err = inst.cover_error(&cover);
    let mut trace = vec![err];
    loop {
        let mut best: Option<(i64, usize)> = None;
        for k in 0..r {
            if h.get(k) {
                continue;
            }
            let mut gain = 0i64;
            let mut loss = 0i64;
            for (i, &a) in inst.atom(k).iter().enumerate() {
                let fresh = a & !cover[i] & mask[i];
                gain += (fresh & x[i]).count_ones() as i64;
                loss += (fresh & !x[i]).count_ones() as i64;
            }
            let delta = loss - gain;
            if delta < 0 && best.is_none_or(|(d, _)| delta < d) {
                best = Some((delta, k));
            }
        }
        let Some((delta, k)) = best else { break };
        h.set(k, true);
        or_words(&mut cover, inst.atom(k));
        err = (err as i64 + delta) as u64;
        trace.push(err);
    }
    let cover = BitVec::from_words(inst.len(), cover);
    debug_assert_eq!(err, inst.cover_error(cover.words()));
    (BoolLsResult { h, cover, error: err }, trace)
}
