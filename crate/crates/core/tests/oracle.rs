mod support;

use maxcov::generate::random_instance;
use maxcov::mmas::{compute_tau_min, construct_plan, cost_floor, heuristic_matrix, PheromoneState};
use maxcov::{
    build_distance_matrix, critical_distance, nn_construct, run_mmas, validate_plan, Instance,
    MmasParams, ProblemConfig, TieRule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn coords(inst: &Instance) -> Vec<(f64, f64)> {
    inst.coords().iter().map(|p| (p.x, p.y)).collect()
}

#[test]
fn nn_never_beats_optimum_and_mmas_finds_it() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut hits = 0;
    let instances = 12;
    for _ in 0..instances {
        let n = rng.gen_range(4..=8);
        let inst = random_instance(n, 100.0, &mut rng);
        let dm = build_distance_matrix(&inst);
        let uavs = rng.gen_range(1..=2);
        let fr = critical_distance(&dm, 0) * rng.gen_range(1.0..2.5);
        let cfg = ProblemConfig::new(fr, uavs).unwrap();
        let opt = support::optimal_coverage(&coords(&inst), 0, fr, uavs);

        let nn = nn_construct(&inst, &dm, &cfg, TieRule::LowestIndex);
        assert!(nn.visited_count() <= opt);

        let mut found = 0;
        for seed in 0..10 {
            let params = MmasParams {
                num_ants: 20,
                iterations: 200,
                seed,
                ..MmasParams::default()
            };
            let out = run_mmas(&inst, &dm, &cfg, &params).unwrap();
            assert!(validate_plan(&out.best, &inst, &cfg).is_empty());
            assert!(out.best.visited_count() <= opt);
            if out.best.visited_count() == opt {
                found += 1;
            }
        }
        if found >= 9 {
            hits += 1;
        }
    }
    assert!(hits * 10 >= instances * 9, "{hits}/{instances}");
}

#[test]
fn greedy_ant_matches_or_beats_nn() {
    // large beta on flat pheromone makes the ant near-greedy
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = 0;
    for _ in 0..10 {
        let inst = random_instance(16, 100.0, &mut rng);
        let dm = build_distance_matrix(&inst);
        let cfg = ProblemConfig::new(critical_distance(&dm, 0) * 1.5, 2).unwrap();
        let nn = nn_construct(&inst, &dm, &cfg, TieRule::LowestIndex);
        let mut tau = PheromoneState::init(0.01, 0.5, inst.len(), cost_floor(inst.num_targets()));
        tau.set_tau_min(compute_tau_min(0.01, 200, tau.tau_max));
        let eta = heuristic_matrix(&dm).powered(40.0);
        let plan = construct_plan(&inst, &dm, &cfg, &tau, &eta, &mut rng);
        if plan.visited_count() >= nn.visited_count() {
            ok += 1;
        }
    }
    assert!(ok >= 9, "{ok}/10");
}

#[test]
fn full_coverage_is_infeasible_at_critical_distance() {
    // the farthest target needs a 2*CD round trip
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let n = rng.gen_range(3..=8);
        let inst = random_instance(n, 100.0, &mut rng);
        let dm = build_distance_matrix(&inst);
        let cd = critical_distance(&dm, 0);
        let opt = support::optimal_coverage(&coords(&inst), 0, cd, n);
        assert!(opt < inst.num_targets());
        let opt_double = support::optimal_coverage(&coords(&inst), 0, 2.0 * cd, n);
        assert_eq!(opt_double, inst.num_targets());
    }
}
