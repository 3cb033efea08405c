use std::hint::black_box;

use bmf_core::bitcore::random_matrix;
use bmf_core::bitcore::reference::{naive_bool_product, naive_masked_sq_error, ByteMatrix};
use bmf_core::rng::rng_from_seed;
use bmf_core::{bool_product, masked_sq_error};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn product(c: &mut Criterion) {
    let mut group = c.benchmark_group("bool_product");
    group.sample_size(10);
    for n in [250, 500, 1000, 2000] {
        let mut rng = rng_from_seed(n as u64);
        let a = random_matrix(n, n, 0.5, &mut rng);
        let b = random_matrix(n, n, 0.5, &mut rng);
        let (ab, bb) = (ByteMatrix::from_bool(&a), ByteMatrix::from_bool(&b));
        group.bench_with_input(BenchmarkId::new("packed", n), &n, |bch, _| {
            bch.iter(|| bool_product(black_box(&a), black_box(&b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("naive", n), &n, |bch, _| {
            bch.iter(|| naive_bool_product(black_box(&ab), black_box(&bb)))
        });
    }
    group.finish();
}

fn masked_error(c: &mut Criterion) {
    let mut group = c.benchmark_group("masked_sq_error");
    let mut rng = rng_from_seed(7);
    let (m, n) = (1000, 1000);
    let x = random_matrix(m, n, 0.5, &mut rng);
    let mask = random_matrix(m, n, 0.9, &mut rng);
    let a = random_matrix(m, n, 0.5, &mut rng);
    let (xb, mb, ab) = (ByteMatrix::from_bool(&x), ByteMatrix::from_bool(&mask), ByteMatrix::from_bool(&a));
    group.bench_function("packed", |b| b.iter(|| masked_sq_error(black_box(&x), black_box(&mask), black_box(&a)).unwrap()));
    group.bench_function("naive", |b| b.iter(|| naive_masked_sq_error(black_box(&xb), black_box(&mb), black_box(&ab))));
    group.finish();
}

criterion_group!(benches, product, masked_error);
criterion_main!(benches);
