use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxcard_bench::coverage_instance;
use maxcard_core::hardness::{make_weights, HardnessInstance};
use maxcard_core::solve::{brute_force_opt, greedy};
use maxcard_core::{IndexHardness, SetFunction};

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    for n in [12, 16, 20] {
        let inst = coverage_instance(n, 1);
        let o = inst.oracle(None).unwrap();
        let all: Vec<usize> = (0..n).collect();
        group.bench_with_input(BenchmarkId::new("brute_force_k3", n), &all, |b, all| {
            b.iter(|| brute_force_opt(&o, black_box(all), 3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("greedy_k3", n), &all, |b, all| {
            b.iter(|| greedy(&o, black_box(all), 3).unwrap())
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluation");
    for p in [4, 64, 1024] {
        let inst = HardnessInstance::from_offsets(make_weights(p).unwrap(), 2, &vec![0; p]).unwrap();
        let set: Vec<usize> = (0..2 * p).step_by(3).collect();
        group.bench_with_input(BenchmarkId::new("hardness", p), &set, |b, s| b.iter(|| inst.value(black_box(s))));
    }
    for k in [4, 16, 64] {
        let f = IndexHardness::new(8, k, 3).unwrap();
        let set: Vec<usize> = (0..f.w() + 1).step_by(2).collect();
        group.bench_with_input(BenchmarkId::new("index_multilinear", k), &set, |b, s| b.iter(|| f.value(black_box(s))));
    }
    group.bench_function("weights_p10000", |b| b.iter(|| make_weights(black_box(10_000)).unwrap()));
    group.finish();
}

criterion_group!(benches, solvers, evaluation);
criterion_main!(benches);
