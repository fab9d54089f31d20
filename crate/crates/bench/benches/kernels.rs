use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dof_lab_bench::{configs, draw};
use dof_lab_core::biascheme::{build_u, verify, BiaScheme, Tolerances};
use dof_lab_core::dofregion::{fic_nocsit_region, region, Channel};
use dof_lab_core::matkernel::{kron, numerical_rank};
use dof_lab_core::simulate::rate_sweep;
use dof_lab_core::AntennaConfig;
use std::hint::black_box;

fn bench_kron(c: &mut Criterion) {
    let mut group = c.benchmark_group("kron");
    for cfg in configs() {
        let d = draw(&cfg);
        let scheme = BiaScheme::new(cfg).unwrap();
        let qp = scheme.q.matmul(&scheme.p).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cfg), &d.h12, |b, h12| {
            b.iter(|| kron(black_box(&qp), black_box(h12)).unwrap())
        });
    }
    group.finish();
}

fn bench_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerical_rank");
    for cfg in configs() {
        let scheme = BiaScheme::new(cfg).unwrap();
        let u = build_u(&scheme.q, &draw(&cfg).h11_slots).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cfg), &u, |b, u| {
            b.iter(|| numerical_rank(black_box(u), 1e-10).unwrap())
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    let tol = Tolerances::default();
    for cfg in configs() {
        let scheme = BiaScheme::new(cfg).unwrap();
        let d = draw(&cfg);
        group.bench_function(BenchmarkId::from_parameter(cfg), |b| {
            b.iter(|| verify(&cfg, &scheme.q, &scheme.p, &d.h11_slots, &d.h12, &tol).unwrap())
        });
    }
    group.finish();
}

fn bench_regions(c: &mut Criterion) {
    let all: Vec<AntennaConfig> = AntennaConfig::all_up_to(4).collect();
    c.bench_function("regions/all-256-fic-nocsit", |b| {
        b.iter(|| all.iter().map(|cfg| fic_nocsit_region(black_box(cfg)).vertices().len()).sum::<usize>())
    });
    let big = AntennaConfig::new(17, 40, 33, 64).unwrap();
    c.bench_function("regions/zic-csit-large", |b| b.iter(|| region(black_box(&big), Channel::Zic, true)));
}

fn bench_rate_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("rate_sweep");
    group.sample_size(10);
    let cfg = AntennaConfig::new(1, 2, 3, 3).unwrap();
    group.bench_function("(1,2,3,3)x50", |b| {
        b.iter(|| rate_sweep(&cfg, &[60.0, 80.0], 50, 1, &Tolerances::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_kron, bench_rank, bench_verify, bench_regions, bench_rate_sweep);
criterion_main!(benches);
