//! Acceptance checks, one test per criterion. Each prints a single
//! `[criterion N] PASS` or `FAIL` line to stderr and fails when the
//! criterion does not hold.
//!
//! The tests share one lock so the timed criteria never compete for CPU.
//! Criteria 4, 6 and 7 run the 30 second protocol and take about half an
//! hour on one core.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use bmf_cli::runspec::{Method, RunOptions};
use bmf_cli::{bench, cmd_factorize, cmd_topics, topics, FactorizeArgs, TopicsArgs};
use bmf_core::bitcore::random_matrix;
use bmf_core::boolls::{solve_exact, solve_greedy, Backend, BoolLsInstance};
use bmf_core::combine::{
    combine_exact, greedy_comb, greedy_tree_bmf, ms_comb_ao, tree_bmf, ExactCombineLimits, FactorPool, RankOneFactor,
    SchemeConfig, TreeShape,
};
use bmf_core::dataio::write_dense;
use bmf_core::factorize::{ao_from_init, ms_ao, AoConfig, InitConfig, InitStrategy};
use bmf_core::rng::{derive_seed, rng_from_seed};
use bmf_core::{bool_product, masked_sq_error, BitVec, BoolMatrix, Budget};
use rand::Rng;

static LOCK: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

/// Written straight to stderr so the line shows even when the harness
/// captures test output.
fn report(n: u32, ok: bool, detail: &str) {
    let line = format!("[criterion {n}] {}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

type Grid = Vec<Vec<bool>>;

fn grid(m: &BoolMatrix) -> Grid {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
}

fn naive_product(a: &Grid, b: &Grid, cols: usize) -> Grid {
    a.iter().map(|row| (0..cols).map(|j| row.iter().enumerate().any(|(k, &v)| v && b[k][j])).collect()).collect()
}

fn naive_masked(x: &Grid, m: &Grid, a: &Grid) -> u64 {
    let mut e = 0;
    for i in 0..x.len() {
        for j in 0..x[i].len() {
            e += (m[i][j] && x[i][j] != a[i][j]) as u64;
        }
    }
    e
}

#[test]
fn criterion_01_kernel_oracles() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = rng_from_seed(101);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(1..=200);
        let a: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        let b: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        let (va, vb) = (BitVec::from_bools(&a), BitVec::from_bools(&b));
        let expect = |f: fn(bool, bool) -> bool| a.iter().zip(&b).map(|(&p, &q)| f(p, q)).collect::<Vec<_>>();
        mismatches += (va.or(&vb).unwrap().to_bools() != expect(|p, q| p | q)) as u32;
        mismatches += (va.and(&vb).unwrap().to_bools() != expect(|p, q| p & q)) as u32;
        mismatches += (va.xor(&vb).unwrap().to_bools() != expect(|p, q| p ^ q)) as u32;
    }
    for _ in 0..1000 {
        let (m, n, r) = (rng.gen_range(1..=32), rng.gen_range(1..=32), rng.gen_range(1..=8));
        let p = rng.gen_range(0.05..0.8);
        let w = random_matrix(m, r, p, &mut rng);
        let h = random_matrix(r, n, p, &mut rng);
        mismatches += (grid(&bool_product(&w, &h).unwrap()) != naive_product(&grid(&w), &grid(&h), n)) as u32;
    }
    for _ in 0..1000 {
        let (m, n) = (rng.gen_range(1..=40), rng.gen_range(1..=90));
        let x = random_matrix(m, n, 0.5, &mut rng);
        let mask = random_matrix(m, n, rng.gen_range(0.0..=1.0), &mut rng);
        let a = random_matrix(m, n, 0.5, &mut rng);
        mismatches += (masked_sq_error(&x, &mask, &a).unwrap() != naive_masked(&grid(&x), &grid(&mask), &grid(&a))) as u32;
    }
    let secs = start.elapsed().as_secs_f64();
    report(1, mismatches == 0 && secs < 10.0, &format!("{mismatches} mismatches in 5000 cases, {secs:.2} s"));
}

/// Best error over all `2^r` selections, entry by entry.
fn enumerate_h(w: &Grid, x: &[bool], mask: &[bool]) -> u64 {
    let r = w[0].len();
    (0u32..1 << r)
        .map(|s| {
            (0..x.len())
                .filter(|&i| {
                    let c = (0..r).any(|k| s >> k & 1 == 1 && w[i][k]);
                    mask[i] && c != x[i]
                })
                .count() as u64
        })
        .min()
        .unwrap()
}

#[test]
fn criterion_02_exact_boolls_optimality() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = rng_from_seed(202);
    let mut wrong = 0;
    for _ in 0..500 {
        let (m, r) = (rng.gen_range(1..=14), rng.gen_range(1..=8));
        let w = random_matrix(m, r, rng.gen_range(0.1..0.7), &mut rng);
        let x: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
        let mask: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.75)).collect();
        let (xv, mv) = (BitVec::from_bools(&x), BitVec::from_bools(&mask));
        let res = solve_exact(&BoolLsInstance::new(&w, &xv, &mv).unwrap()).unwrap();
        wrong += (res.error != enumerate_h(&grid(&w), &x, &mask)) as u32;
    }
    let secs = start.elapsed().as_secs_f64();
    report(2, wrong == 0 && secs < 30.0, &format!("{wrong} of 500 instances differ from enumeration, {secs:.2} s"));
}

#[test]
fn criterion_03_greedy_counterexample() {
    let _g = serial();
    let w = BoolMatrix::from_01(&[
        vec![1, 1],
        vec![1, 1],
        vec![1, 1],
        vec![1, 0],
        vec![1, 0],
        vec![0, 1],
        vec![0, 1],
    ])
    .unwrap();
    let x = BitVec::from_01(&[0, 0, 0, 1, 1, 1, 1]);
    let mask = BitVec::ones(7);
    let inst = BoolLsInstance::new(&w, &x, &mask).unwrap();
    let exact = solve_exact(&inst).unwrap();
    let greedy = solve_greedy(&inst);
    let ok = exact.error == 3
        && exact.h == BitVec::from_01(&[1, 1])
        && greedy.error == 4
        && greedy.h == BitVec::from_01(&[0, 0]);
    report(
        3,
        ok,
        &format!("exact h={:?} error {}, greedy h={:?} error {}", exact.h.to_bools(), exact.error, greedy.h.to_bools(), greedy.error),
    );
}

fn factorize(file: &str, method: Method, r: usize, trials: usize) -> (u64, f64) {
    let args = FactorizeArgs {
        run: RunOptions {
            data: Some(data(file)),
            method: Some(method),
            rank: Some(r),
            budget: Some(30.0),
            trials: Some(trials),
            seed: Some(0),
            ..Default::default()
        },
        ..Default::default()
    };
    let start = Instant::now();
    let mut out = Vec::new();
    let summary = cmd_factorize(&args, &mut out).unwrap();
    eprint!("{}", String::from_utf8_lossy(&out));
    (summary.best().error(), start.elapsed().as_secs_f64())
}

#[test]
fn criterion_04_zoo_reproduction() {
    let _g = serial();
    let (e2, t2) = factorize("zoo.txt", Method::MsAo, 2, 10);
    let (e5, t5) = factorize("zoo.txt", Method::MsAo, 5, 10);
    let (e10, t10) = factorize("zoo.txt", Method::MsAo, 10, 10);
    let ok = e2 == 271 && e5 <= 126 && e10 <= 42;
    report(4, ok, &format!("r=2 {e2} (need 271), r=5 {e5} (<= 126), r=10 {e10} (<= 42); runtime {:.0} s", t2 + t5 + t10));
}

/// Every scheme against the runs it was built from, on 100 instances,
/// then exact combination against subset enumeration.
#[test]
fn criterion_05_combine_dominance_and_exactness() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = rng_from_seed(505);
    let mut failures = Vec::new();
    let unlimited = Budget::unlimited();
    for inst in 0..100u64 {
        let (m, n) = (rng.gen_range(8..=16), rng.gen_range(8..=14));
        let r = rng.gen_range(2..=4);
        let x = random_matrix(m, n, rng.gen_range(0.25..0.55), &mut rng);
        let mask = if inst % 3 == 0 { random_matrix(m, n, 0.85, &mut rng) } else { BoolMatrix::ones(m, n) };
        let mut cfg = SchemeConfig::default().with_seed(inst);
        cfg.ms.max_runs = Some(3);
        cfg.ms.ao.maxiter = 20;

        let comb = ms_comb_ao(&x, &mask, r, &unlimited, &cfg).unwrap();
        let runs = ms_ao(&x, &mask, r, &unlimited, &cfg.ms).unwrap();
        if comb.error() > runs.error() {
            failures.push(format!("ms-comb-ao #{inst}: {} > {}", comb.error(), runs.error()));
        }

        let shape = TreeShape { depth: 1, children: 2, leaf_solutions: 2 };
        let tree = tree_bmf(&x, &mask, r, &shape, &unlimited, &cfg).unwrap();
        let leaf_min = (0..2)
            .map(|c| {
                let mut lc = cfg.with_seed(derive_seed(inst, 1000 + c));
                lc.ms.max_runs = Some(2);
                ms_comb_ao(&x, &mask, r, &unlimited, &lc).unwrap().error()
            })
            .min()
            .unwrap();
        if tree.error() > leaf_min {
            failures.push(format!("tree-bmf #{inst}: {} > {leaf_min}", tree.error()));
        }

        let gc = greedy_comb(&x, &mask, r, &unlimited, &cfg).unwrap();
        let mut gms = cfg.ms;
        gms.ao.backend = Backend::GreedyLs;
        gms.init.strategy = InitStrategy::RandomAlternate;
        let gruns = ms_ao(&x, &mask, r, &unlimited, &gms).unwrap();
        if gc.error() > gruns.error() {
            failures.push(format!("greedy-comb #{inst}: {} > {}", gc.error(), gruns.error()));
        }

        let gt = greedy_tree_bmf(&x, &mask, r, 2, &unlimited, &cfg).unwrap();
        let call_min = (0..2)
            .map(|c| greedy_comb(&x, &mask, r, &unlimited, &cfg.with_seed(derive_seed(inst, 3000 + c))).unwrap().error())
            .min()
            .unwrap();
        if gt.error() > call_min {
            failures.push(format!("greedy-tree #{inst}: {} > {call_min}", gt.error()));
        }
        for f in [&comb, &tree, &gc, &gt] {
            if f.revalidate(&x, &mask).unwrap() != f.error() {
                failures.push(format!("{} #{inst}: reported error does not match its factors", f.method));
            }
        }
    }

    let mut exact_checked = 0;
    for inst in 0..150u64 {
        let (m, n) = (rng.gen_range(4..=12), rng.gen_range(4..=12));
        let x = random_matrix(m, n, 0.45, &mut rng);
        let mask = if inst % 2 == 0 { BoolMatrix::ones(m, n) } else { random_matrix(m, n, 0.8, &mut rng) };
        let size = rng.gen_range(1..=12);
        let mut pool = FactorPool::new(m, n);
        while pool.len() < size {
            let w = BitVec::from_bools(&(0..m).map(|_| rng.gen_bool(0.35)).collect::<Vec<_>>());
            let h = BitVec::from_bools(&(0..n).map(|_| rng.gen_bool(0.35)).collect::<Vec<_>>());
            pool.insert(RankOneFactor::new(w, h, 0)).unwrap();
        }
        let r = rng.gen_range(1..=4);
        let got = combine_exact(&x, &mask, &pool, r, &ExactCombineLimits::default()).unwrap();
        let oracle = subset_oracle(&grid(&x), &grid(&mask), &pool, r.min(pool.len()));
        let direct = subset_error(&grid(&x), &grid(&mask), &pool, &got.indices);
        if got.error != oracle || direct != oracle {
            failures.push(format!("combine_exact #{inst}: {} (recomputed {direct}) vs enumeration {oracle}", got.error));
        }
        exact_checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 120.0 {
        failures.push(format!("runtime {secs:.1} s"));
    }
    report(
        5,
        failures.is_empty(),
        &format!("100 scheme instances x 4, {exact_checked} exact/enumeration pairs, {secs:.1} s; {failures:?}"),
    );
}

fn subset_error(x: &Grid, m: &Grid, pool: &FactorPool, sel: &[usize]) -> u64 {
    let mut e = 0;
    for i in 0..x.len() {
        for j in 0..x[i].len() {
            let c = sel.iter().any(|&s| pool.get(s).w.get(i) && pool.get(s).h.get(j));
            e += (m[i][j] && c != x[i][j]) as u64;
        }
    }
    e
}

/// Smallest error over all `k`-subsets of the pool.
fn subset_oracle(x: &Grid, m: &Grid, pool: &FactorPool, k: usize) -> u64 {
    let n = pool.len();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| {
            let sel: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
            subset_error(x, m, pool, &sel)
        })
        .min()
        .unwrap()
}

#[test]
fn criterion_06_missing_data_reproduction() {
    let _g = serial();
    let (audio, ta) = factorize("audio.txt", Method::MsAo, 2, 10);
    let (votes, tv) = factorize("votes.txt", Method::MsAo, 2, 10);
    let ok = audio <= 1411 && votes <= 1246;
    report(6, ok, &format!("audio r=2 {audio} (<= 1411), votes r=2 {votes} (<= 1246); runtime {:.0} s", ta + tv));
}

#[test]
fn criterion_07_greedy_comb_lymp() {
    let _g = serial();
    let (e, t) = factorize("lymp.txt", Method::GreedyComb, 5, 5);
    report(7, e <= 949, &format!("lymp r=5 greedy-comb best of 5: {e} (<= 949); runtime {t:.0} s"));
}

#[test]
fn criterion_08_ao_monotonicity() {
    let _g = serial();
    let mut rng = rng_from_seed(808);
    let mut failures = Vec::new();
    let strategies = [InitStrategy::RandomColumns, InitStrategy::RandomRows, InitStrategy::Nmf];
    for run in 0..200u64 {
        let (m, n) = (rng.gen_range(10..=40), rng.gen_range(10..=30));
        let r = rng.gen_range(1..=7);
        let x = random_matrix(m, n, rng.gen_range(0.2..0.6), &mut rng);
        let masked = run % 2 == 1;
        let mask = if masked { random_matrix(m, n, 0.8, &mut rng) } else { BoolMatrix::ones(m, n) };
        let exact = run % 4 < 2;
        let cfg = if exact { AoConfig::default() } else { AoConfig::greedy() }.with_seed(run);
        let strategy = if masked { InitStrategy::Nmf } else { strategies[(run / 4) as usize % 3] };
        let f = ao_from_init(&x, &mask, r, strategy, &InitConfig::default(), &cfg).unwrap();
        let t = &f.error_trace;
        if t.windows(2).any(|p| p[1] > p[0]) {
            failures.push(format!("run {run}: trace increases {t:?}"));
        }
        // The final sweep is the one that failed to improve.
        if exact && t.len() > 2 && t[..t.len() - 1].windows(2).any(|p| p[1] >= p[0]) {
            failures.push(format!("run {run}: exact trace stalls early {t:?}"));
        }
        if *t.last().unwrap() != f.revalidate(&x, &mask).unwrap() {
            failures.push(format!("run {run}: last trace entry is not the returned error"));
        }
    }
    report(8, failures.is_empty(), &format!("200 runs, {} violations {failures:?}", failures.len()));
}

#[test]
fn criterion_09_kernel_speedup() {
    let _g = serial();
    let rows = bench::bench_kernel(&[2000], 10, 9).unwrap();
    let r = &rows[0];
    report(
        9,
        r.identical && r.speedup >= 5.0,
        &format!("n=2000: packed {:.1} ms, naive {:.1} ms, speedup {:.1}x, identical {}", r.packed_ms, r.naive_ms, r.speedup, r.identical),
    );
}

#[test]
fn criterion_10_planted_topics() {
    let _g = serial();
    let (words, docs) = (15, 40);
    let mut rng = rng_from_seed(1010);
    // Words 0..15 belong to documents 0..40, words 15..30 to 40..80.
    let x = BoolMatrix::from_fn(2 * words, 2 * docs, |i, j| i / words == j / docs && rng.gen_bool(0.7));
    let labels: Vec<String> = (0..words).map(|i| format!("alpha{i}")).chain((0..words).map(|i| format!("beta{i}"))).collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("planted.txt");
    std::fs::write(&path, write_dense(&x, &BoolMatrix::ones(x.rows(), x.cols()))).unwrap();
    std::fs::write(dir.path().join("planted.rows"), labels.join("\n") + "\n").unwrap();

    let args = TopicsArgs {
        run: RunOptions {
            data: Some(path),
            method: Some(Method::GreedyComb),
            rank: Some(2),
            max_runs: Some(20),
            seed: Some(0),
            ..Default::default()
        },
        k: 5,
        diversify: true,
        ..Default::default()
    };
    let mut out = Vec::new();
    let rep = cmd_topics(&args, &mut out).unwrap();
    eprint!("{}", String::from_utf8_lossy(&out));

    let vocab = |t: &[(String, u32)]| -> Option<&'static str> {
        let all = |p: &str| !t.is_empty() && t.iter().all(|(w, _)| w.starts_with(p));
        if all("alpha") {
            Some("alpha")
        } else if all("beta") {
            Some("beta")
        } else {
            None
        }
    };
    let kinds: Vec<Option<&str>> = rep.topics.iter().map(|t| vocab(t)).collect();
    let distinct = rep.topics.len() == 2 && kinds[0].is_some() && kinds[1].is_some() && kinds[0] != kinds[1];
    let full = rep.topics.iter().all(|t| t.len() == 5);

    let g = topics::report_gram(&rep);
    let (w_min, ratio) = (10u32, 8.0);
    let diag_ok = (0..g.len()).all(|i| g[i][i] >= w_min);
    let ratio_ok = (0..g.len()).all(|i| (0..g.len()).all(|j| i == j || g[i][j] == 0 || g[i][i] as f64 >= ratio * g[i][j] as f64));
    let satisfied = rep.diversify.as_ref().is_some_and(|d| d.satisfied);
    report(
        10,
        distinct && full && diag_ok && ratio_ok && satisfied,
        &format!("topic vocabularies {kinds:?}, gram {g:?}, diversify satisfied {satisfied}"),
    );
}
