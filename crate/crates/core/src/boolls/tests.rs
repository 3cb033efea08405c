use super::exact::solve_exact_bnb;
use super::*;
use crate::bitcore::{random_bitvec, random_matrix, BitVec, BoolMatrix};
use crate::rng::rng_from_seed;
use rand::Rng;

/// The 7x2 instance where greedy selection is suboptimal.
fn counterexample() -> (BoolMatrix, BitVec, BitVec) {
    let w = BoolMatrix::from_cols(
        7,
        &[BitVec::from_01(&[1, 1, 1, 1, 1, 0, 0]), BitVec::from_01(&[1, 1, 1, 0, 0, 1, 1])],
    )
    .unwrap();
    (w, BitVec::from_01(&[0, 0, 0, 1, 1, 1, 1]), BitVec::ones(7))
}

/// Independent oracle: enumerate all assignments on byte arrays.
fn brute_force(w: &BoolMatrix, x: &BitVec, mask: &BitVec) -> (u64, Vec<u32>) {
    let (m, r) = w.shape();
    let mut best = u64::MAX;
    let mut argmins = Vec::new();
    for s in 0u32..(1 << r) {
        let mut err = 0;
        for i in 0..m {
            let mut c = false;
            for k in 0..r {
                c |= (s >> k) & 1 == 1 && w.get(i, k);
            }
            if mask.get(i) && c != x.get(i) {
                err += 1;
            }
        }
        if err < best {
            best = err;
            argmins.clear();
        }
        if err == best {
            argmins.push(s);
        }
    }
    (best, argmins)
}

fn h_mask(h: &BitVec) -> u32 {
    h.iter_ones().map(|k| 1u32 << k).sum()
}

#[test]
fn exact_counterexample() {
    let (w, x, mask) = counterexample();
    let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
    let res = solve_exact(&inst).unwrap();
    assert_eq!(res.h, BitVec::from_01(&[1, 1]));
    assert_eq!(res.error, 3);
}

#[test]
fn greedy_counterexample() {
    let (w, x, mask) = counterexample();
    let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
    let res = solve_greedy(&inst);
    assert_eq!(res.h, BitVec::from_01(&[0, 0]));
    assert_eq!(res.error, 4);
}

#[test]
fn local_search_escapes_counterexample() {
    let (w, x, mask) = counterexample();
    let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
    let start = solve_greedy(&inst);
    let p = LocalSearchParams { q_max: Some(2), t: Some(5), seed: 0 };
    let res = local_search(&inst, start, &p);
    assert_eq!(res.h, BitVec::from_01(&[1, 1]));
    assert_eq!(res.error, 3);
    let hits = (0..100).filter(|&s| solve_greedy_ls(&inst, &LocalSearchParams::with_seed(s)).error == 3).count();
    assert!(hits >= 1);
}

#[test]
fn trivial_cases() {
    let mut rng = rng_from_seed(11);
    let w = random_matrix(10, 4, 0.4, &mut rng);
    let zero = BitVec::zeros(10);
    let full = BitVec::ones(10);
    let inst = BoolLsInstance::new(&w, &zero, &full).unwrap();
    let res = solve_exact(&inst).unwrap();
    assert!(res.h.none());
    assert_eq!(res.error, 0);

    // x equals the second column, the others disjoint from it.
    let w = BoolMatrix::from_cols(
        6,
        &[BitVec::from_01(&[1, 1, 0, 0, 0, 0]), BitVec::from_01(&[0, 0, 1, 1, 0, 0]), BitVec::from_01(&[0, 0, 0, 0, 1, 1])],
    )
    .unwrap();
    let x = w.col(1);
    let full = BitVec::ones(6);
    let inst = BoolLsInstance::new(&w, &x, &full).unwrap();
    assert_eq!(solve_exact(&inst).unwrap().h, BitVec::from_01(&[0, 1, 0]));
    let g = solve_greedy(&inst);
    assert_eq!(g.h, BitVec::from_01(&[0, 1, 0]));
    assert_eq!(g.error, 0);

    // Nothing observed.
    let nothing = BitVec::zeros(6);
    let inst = BoolLsInstance::new(&w, &x, &nothing).unwrap();
    let res = solve_greedy_ls(&inst, &LocalSearchParams::with_seed(3));
    assert_eq!(res.error, 0);
    assert!(res.h.none());
}

#[test]
fn rejects_bad_dimensions() {
    let w = BoolMatrix::zeros(4, 2);
    let x = BitVec::zeros(5);
    let m = BitVec::ones(5);
    assert!(BoolLsInstance::new(&w, &x, &m).is_err());
    let w0 = BoolMatrix::zeros(5, 0);
    assert!(BoolLsInstance::new(&w0, &x, &m).is_err());
}

#[test]
fn exact_rank_limit_is_a_capability_error() {
    let w = BoolMatrix::zeros(5, 21);
    let x = BitVec::zeros(5);
    let m = BitVec::ones(5);
    let inst = BoolLsInstance::new(&w, &x, &m).unwrap();
    assert!(matches!(solve_exact(&inst), Err(crate::BmfError::Capability(_))));
    assert!(solve_exact_with_limit(&inst, 25).is_ok());
}

#[test]
fn exact_matches_brute_force_with_ties() {
    let mut rng = rng_from_seed(12);
    for _ in 0..200 {
        let m = rng.gen_range(1..=14);
        let r = rng.gen_range(1..=8);
        let w = random_matrix(m, r, rng.gen_range(0.1..0.7), &mut rng);
        let x = random_bitvec(m, 0.5, &mut rng);
        let mask = random_bitvec(m, 0.8, &mut rng);
        let (best, argmins) = brute_force(&w, &x, &mask);
        let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
        let res = solve_exact(&inst).unwrap();
        assert_eq!(res.error, best);
        assert_eq!(inst.cover_of(&res.h), res.cover);
        // Deterministic tie-break: fewest ones, then lexicographically smallest.
        let want = argmins
            .iter()
            .copied()
            .min_by_key(|&s| (s.count_ones(), (0..r).map(|k| (s >> k) & 1).collect::<Vec<_>>()))
            .unwrap();
        assert_eq!(h_mask(&res.h), want);
        let bnb = solve_exact_bnb(&inst);
        assert_eq!(bnb, res);
    }
}

#[test]
fn branch_and_bound_at_larger_rank() {
    let mut rng = rng_from_seed(13);
    for _ in 0..5 {
        let w = random_matrix(40, 14, 0.2, &mut rng);
        let x = random_bitvec(40, 0.5, &mut rng);
        let mask = random_bitvec(40, 0.9, &mut rng);
        let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
        let res = solve_exact(&inst).unwrap();
        let (best, _) = brute_force(&w, &x, &mask);
        assert_eq!(res.error, best);
    }
}

#[test]
fn greedy_trace_is_strictly_decreasing() {
    let mut rng = rng_from_seed(14);
    for _ in 0..100 {
        let w = random_matrix(20, 7, 0.3, &mut rng);
        let x = random_bitvec(20, 0.5, &mut rng);
        let mask = random_bitvec(20, 0.8, &mut rng);
        let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
        let (res, trace) = solve_greedy_traced(&inst);
        assert!(trace.windows(2).all(|p| p[1] < p[0]));
        assert!(trace.len() - 1 <= 7);
        assert_eq!(trace[0], (x.and(&mask).unwrap()).count_ones() as u64);
        assert_eq!(*trace.last().unwrap(), res.error);
        assert_eq!(res.h.count_ones(), trace.len() - 1);
        assert_eq!(inst.error_of(&res.h), res.error);
    }
}

#[test]
fn rank_one_greedy_is_optimal() {
    let mut rng = rng_from_seed(15);
    for _ in 0..100 {
        let w = random_matrix(12, 1, 0.5, &mut rng);
        let x = random_bitvec(12, 0.5, &mut rng);
        let mask = random_bitvec(12, 0.8, &mut rng);
        let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
        let exact = solve_exact(&inst).unwrap();
        assert_eq!(solve_greedy(&inst), exact);
        assert_eq!(solve_greedy_ls(&inst, &LocalSearchParams::with_seed(1)), exact);
    }
}

#[test]
fn local_search_sits_between_exact_and_greedy() {
    let mut rng = rng_from_seed(16);
    for i in 0..30 {
        let w = random_matrix(12, 6, 0.3, &mut rng);
        let x = random_bitvec(12, 0.5, &mut rng);
        let mask = random_bitvec(12, 0.8, &mut rng);
        let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
        let exact = solve_exact(&inst).unwrap();
        let greedy = solve_greedy(&inst);
        let ls = local_search(&inst, greedy.clone(), &LocalSearchParams::with_seed(i));
        assert!(ls.error >= exact.error);
        assert!(ls.error <= greedy.error);
        assert_eq!(inst.error_of(&ls.h), ls.error);
        // An optimal start is never changed.
        let again = local_search(&inst, exact.clone(), &LocalSearchParams::with_seed(i));
        assert_eq!(again.error, exact.error);
    }
}

#[test]
fn masked_rows_do_not_matter() {
    let mut rng = rng_from_seed(17);
    for i in 0..50 {
        let w = random_matrix(16, 6, 0.3, &mut rng);
        let x = random_bitvec(16, 0.5, &mut rng);
        let mask = random_bitvec(16, 0.7, &mut rng);
        let flipped = x.xor(&mask.not()).unwrap();
        let a = BoolLsInstance::new(&w, &x, &mask).unwrap();
        let b = BoolLsInstance::new(&w, &flipped, &mask).unwrap();
        assert_eq!(solve_exact(&a).unwrap(), solve_exact(&b).unwrap());
        let p = LocalSearchParams::with_seed(i);
        assert_eq!(solve_greedy_ls(&a, &p), solve_greedy_ls(&b, &p));
    }
}

#[test]
fn params_defaults() {
    assert_eq!(LocalSearchParams::default().resolve(10), (4, 10));
    assert_eq!(LocalSearchParams::default().resolve(2), (2, 2));
    assert_eq!(LocalSearchParams::default().resolve(3), (2, 3));
    assert_eq!(LocalSearchParams { q_max: Some(9), ..Default::default() }.resolve(5), (5, 5));
}
