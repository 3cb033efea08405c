use std::hint::black_box;
use std::path::PathBuf;

use bmf_core::boolls::{solve_exact, solve_greedy, solve_greedy_ls, BoolLsInstance, LocalSearchParams};
use bmf_core::dataio::Dataset;
use bmf_core::factorize::{ao_bmf, init_random_selection, AoConfig, Axis};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn zoo() -> Dataset {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/zoo.txt");
    Dataset::load(path).expect("zoo dataset")
}

/// All columns of zoo against W taken from random columns.
fn boolls(c: &mut Criterion) {
    let ds = zoo();
    let mut group = c.benchmark_group("boolls_zoo");
    for r in [5, 10] {
        let w = init_random_selection(&ds.x, r, Axis::Columns, 1).unwrap();
        let cols: Vec<_> = (0..ds.x.cols()).map(|j| (ds.x.col(j), ds.m.col(j))).collect();
        let insts: Vec<_> = cols.iter().map(|(x, m)| BoolLsInstance::new(&w, x, m).unwrap()).collect();
        group.bench_with_input(BenchmarkId::new("exact", r), &r, |b, _| {
            b.iter(|| insts.iter().map(|i| solve_exact(black_box(i)).unwrap().error).sum::<u64>())
        });
        group.bench_with_input(BenchmarkId::new("greedy", r), &r, |b, _| {
            b.iter(|| insts.iter().map(|i| solve_greedy(black_box(i)).error).sum::<u64>())
        });
        group.bench_with_input(BenchmarkId::new("greedy_ls", r), &r, |b, _| {
            b.iter(|| insts.iter().map(|i| solve_greedy_ls(black_box(i), &LocalSearchParams::with_seed(3)).error).sum::<u64>())
        });
    }
    group.finish();
}

fn ao(c: &mut Criterion) {
    let ds = zoo();
    let mut group = c.benchmark_group("ao_zoo");
    for r in [5, 10] {
        let w0 = init_random_selection(&ds.x, r, Axis::Columns, 2).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", r), &r, |b, _| {
            b.iter(|| ao_bmf(&ds.x, &ds.m, black_box(&w0), &AoConfig::default()).unwrap().error())
        });
        group.bench_with_input(BenchmarkId::new("greedy", r), &r, |b, _| {
            b.iter(|| ao_bmf(&ds.x, &ds.m, black_box(&w0), &AoConfig::greedy()).unwrap().error())
        });
    }
    group.finish();
}

criterion_group!(benches, boolls, ao);
criterion_main!(benches);
