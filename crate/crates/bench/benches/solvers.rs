use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxcov::generate::random_instance;
use maxcov::mmas::{compute_tau_min, construct_plan, cost_floor, heuristic_matrix, PheromoneState};
use maxcov::{
    build_distance_matrix, critical_distance, nn_construct, run_mmas, DistanceMatrix, Instance,
    MmasParams, ProblemConfig, TieRule,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(n: usize, uavs: usize) -> (Instance, DistanceMatrix, ProblemConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let inst = random_instance(n, 1000.0, &mut rng);
    let dm = build_distance_matrix(&inst);
    let cfg = ProblemConfig::new(critical_distance(&dm, 0), uavs).unwrap();
    (inst, dm, cfg)
}

fn nn(c: &mut Criterion) {
    let mut group = c.benchmark_group("nn_construct");
    for n in [50, 150, 500] {
        let (inst, dm, cfg) = setup(n, 5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| nn_construct(black_box(&inst), &dm, &cfg, TieRule::LowestIndex))
        });
    }
    group.finish();
}

fn ant(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_plan");
    for n in [50, 150, 500] {
        let (inst, dm, cfg) = setup(n, 5);
        let mut tau = PheromoneState::init(0.01, 0.5, n, cost_floor(n - 1));
        tau.set_tau_min(compute_tau_min(0.01, 1000, tau.tau_max));
        let eta = heuristic_matrix(&dm).powered(7.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| construct_plan(black_box(&inst), &dm, &cfg, &tau, &eta, &mut rng))
        });
    }
    group.finish();
}

fn mmas(c: &mut Criterion) {
    let (inst, dm, cfg) = setup(150, 3);
    let params = MmasParams {
        num_ants: 30,
        iterations: 20,
        ..MmasParams::default()
    };
    let mut group = c.benchmark_group("run_mmas");
    group.sample_size(10);
    group.bench_function("150_nodes_30x20", |b| {
        b.iter(|| run_mmas(black_box(&inst), &dm, &cfg, &params).unwrap())
    });
    group.finish();
}

criterion_group!(benches, nn, ant, mmas);
criterion_main!(benches);
