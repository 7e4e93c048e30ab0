//! Parallel vs. serial dense kernels. With the default `parallel` feature,
//! matvec/mul fan rows out over rayon while keeping the fixed reduction
//! tree, so both paths are bitwise identical; this bench measures the gap.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lcuwalk::testgen;
use lcuwalk::ComplexMatrix;
use num_complex::Complex64;

fn random_matrix(seed: u64, n: usize) -> ComplexMatrix {
    let mut rng = testgen::rng(seed);
    testgen::random_hermitian(&mut rng, n).matrix().clone()
}

fn random_vec(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = testgen::rng(seed);
    testgen::random_state(&mut rng, n)
}

fn bench_matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for &n in &[64usize, 128, 256] {
        let m = random_matrix(1, n);
        let x = random_vec(2, n);
        group.bench_with_input(BenchmarkId::new("serial", n), &n, |b, _| {
            b.iter(|| m.matvec_serial(&x))
        });
        group.bench_with_input(BenchmarkId::new("default", n), &n, |b, _| {
            b.iter(|| m.matvec(&x))
        });
    }
    group.finish();
}

fn bench_mul(c: &mut Criterion) {
    let mut group = c.benchmark_group("mul");
    group.sample_size(20);
    for &n in &[64usize, 128] {
        let a = random_matrix(3, n);
        let b2 = random_matrix(4, n);
        group.bench_with_input(BenchmarkId::new("serial", n), &n, |b, _| {
            b.iter(|| a.mul_serial(&b2))
        });
        group.bench_with_input(BenchmarkId::new("default", n), &n, |b, _| {
            b.iter(|| a.mul(&b2))
        });
    }
    group.finish();
}

fn bench_evolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve");
    group.sample_size(10);
    let mut rng = testgen::rng(5);
    let h = testgen::random_hermitian(&mut rng, 8);
    let psi0 = testgen::random_state(&mut rng, 8);
    group.bench_function("circuit_n8_t0.5", |b| {
        b.iter(|| {
            lcuwalk::lcu::evolve(&h, 0.5, 1e-4, &psi0, lcuwalk::lcu::SegmentMode::Circuit, false)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_matvec, bench_mul, bench_evolve);
criterion_main!(benches);
