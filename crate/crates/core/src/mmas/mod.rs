//! Max-Min Ant System adapted to fleet coverage.
//!
//! Every ant builds a complete multi-UAV plan. After each ant the pheromone
//! matrix evaporates and that ant's plan deposits `1/c` on its edges, with the
//! matrix held inside `[tau_min, tau_max]`. The initial bound comes from the
//! nearest-neighbour plan's cost.

mod construct;
mod pheromone;

use std::io;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use construct::{
    construct_plan, heuristic_matrix, sample_next, selection_probabilities, AntState, Choice,
    HeuristicMatrix,
};
pub use pheromone::{compute_tau_min, cost_floor, PheromoneState};

use crate::model::{ProblemConfig, RoutePlan};
use crate::nn::{nn_construct, TieRule};
use crate::tsplib::{DistanceMatrix, Instance};

/// Which plans deposit pheromone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateRule {
    /// Evaporate and deposit after every ant, using that ant's plan.
    #[default]
    PerAnt,
    /// Evaporate once per iteration and deposit only the iteration-best plan.
    IterationBest,
}

impl FromStr for UpdateRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-ant" => Ok(UpdateRule::PerAnt),
            "iteration-best" => Ok(UpdateRule::IterationBest),
            other => Err(format!("unknown update rule `{other}`")),
        }
    }
}

/// How `tau_min` is derived over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMinSchedule {
    /// Fixed at start from the total iteration budget.
    #[default]
    Static,
    /// Recomputed at the start of each iteration from its 1-based index.
    Dynamic,
}

impl FromStr for TauMinSchedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(TauMinSchedule::Static),
            "dynamic" => Ok(TauMinSchedule::Dynamic),
            other => Err(format!("unknown tau-min schedule `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("rho must lie in (0, 1), got {0}")]
    Rho(f64),
    #[error("beta must be finite and >= 0, got {0}")]
    Beta(f64),
    #[error("need at least one ant")]
    NoAnts,
    #[error("need at least one iteration")]
    NoIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MmasParams {
    pub beta: f64,
    pub rho: f64,
    pub num_ants: usize,
    pub iterations: usize,
    pub seed: u64,
    pub update_rule: UpdateRule,
    pub tau_min_schedule: TauMinSchedule,
}

impl Default for MmasParams {
    fn default() -> Self {
        MmasParams {
            beta: 7.0,
            rho: 0.01,
            num_ants: 151,
            iterations: 1000,
            seed: 0,
            update_rule: UpdateRule::PerAnt,
            tau_min_schedule: TauMinSchedule::Static,
        }
    }
}

impl MmasParams {
    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(ParamsError::Rho(self.rho));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(ParamsError::Beta(self.beta));
        }
        if self.num_ants == 0 {
            return Err(ParamsError::NoAnts);
        }
        if self.iterations == 0 {
            return Err(ParamsError::NoIterations);
        }
        Ok(())
    }
}

/// One row of the per-iteration trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationStats {
    pub iteration: usize,
    /// Cost of the best plan found so far.
    pub best_cost: f64,
    /// Mean cost over this iteration's ants.
    pub mean_cost: f64,
    pub best_coverage: f64,
    pub best_total_distance: f64,
    pub iteration_best_cost: f64,
    pub iteration_best_distance: f64,
}

#[derive(Debug, Clone)]
pub struct MmasOutcome {
    pub best: RoutePlan,
    /// Iteration (1-based) in which `best` was found.
    pub best_iteration: usize,
    pub initial: RoutePlan,
    pub tau_max: f64,
    pub tau_min: f64,
    pub stats: Vec<IterationStats>,
}

/// Emitted after every evaporate/deposit cycle.
pub struct CycleEvent<'a> {
    pub iteration: usize,
    pub ant: usize,
    pub pheromone: &'a PheromoneState,
    pub plan: &'a RoutePlan,
}

pub fn run_mmas(
    inst: &Instance,
    dm: &DistanceMatrix,
    cfg: &ProblemConfig,
    params: &MmasParams,
) -> Result<MmasOutcome, ParamsError> {
    run_mmas_observed(inst, dm, cfg, params, |_| {})
}

/// [`run_mmas`] with a callback invoked after each pheromone update cycle.
pub fn run_mmas_observed<F>(
    inst: &Instance,
    dm: &DistanceMatrix,
    cfg: &ProblemConfig,
    params: &MmasParams,
    mut observe: F,
) -> Result<MmasOutcome, ParamsError>
where
    F: FnMut(&CycleEvent<'_>),
{
    params.validate()?;
    let total = inst.num_targets();
    let initial = nn_construct(inst, dm, cfg, TieRule::LowestIndex);

    let mut tau = PheromoneState::init(params.rho, initial.cost, inst.len(), cost_floor(total));
    let static_min = compute_tau_min(params.rho, params.iterations, tau.tau_max);
    tau.set_tau_min(static_min);
    let eta_pow = heuristic_matrix(dm).powered(params.beta);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut best: Option<(RoutePlan, usize)> = None;
    let mut stats = Vec::with_capacity(params.iterations);

    for iteration in 1..=params.iterations {
        if params.tau_min_schedule == TauMinSchedule::Dynamic {
            tau.set_tau_min(compute_tau_min(params.rho, iteration, tau.tau_max));
        }
        let mut cost_sum = 0.0;
        let mut iter_best: Option<RoutePlan> = None;

        for ant in 0..params.num_ants {
            let plan = construct_plan(inst, dm, cfg, &tau, &eta_pow, &mut rng);
            cost_sum += plan.cost;
            if params.update_rule == UpdateRule::PerAnt {
                tau.evaporate();
                tau.deposit(&plan);
                debug_assert!(tau.within_bounds());
                observe(&CycleEvent {
                    iteration,
                    ant,
                    pheromone: &tau,
                    plan: &plan,
                });
            }
            if iter_best.as_ref().is_none_or(|b| plan.is_better_than(b)) {
                iter_best = Some(plan);
            }
        }

        let iter_best = iter_best.expect("at least one ant");
        if params.update_rule == UpdateRule::IterationBest {
            tau.evaporate();
            tau.deposit(&iter_best);
            debug_assert!(tau.within_bounds());
            observe(&CycleEvent {
                iteration,
                ant: params.num_ants - 1,
                pheromone: &tau,
                plan: &iter_best,
            });
        }

        let row_iter_cost = iter_best.cost;
        let row_iter_dist = iter_best.total_distance;
        if best.as_ref().is_none_or(|(b, _)| iter_best.is_better_than(b)) {
            best = Some((iter_best, iteration));
        }
        let (b, _) = best.as_ref().expect("set above");
        stats.push(IterationStats {
            iteration,
            best_cost: b.cost,
            mean_cost: cost_sum / params.num_ants as f64,
            best_coverage: b.coverage(),
            best_total_distance: b.total_distance,
            iteration_best_cost: row_iter_cost,
            iteration_best_distance: row_iter_dist,
        });
    }

    let (best, best_iteration) = best.expect("at least one iteration");
    Ok(MmasOutcome {
        best,
        best_iteration,
        initial,
        tau_max: tau.tau_max,
        tau_min: tau.tau_min,
        stats,
    })
}

#[derive(Serialize)]
struct StatsRow {
    iteration: usize,
    best_cost: f64,
    mean_cost: f64,
    best_coverage: f64,
    best_total_distance: f64,
}

/// Writes the statistics series as CSV with columns
/// `iteration,best_cost,mean_cost,best_coverage,best_total_distance`.
pub fn write_stats_csv<W: io::Write>(stats: &[IterationStats], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in stats {
        w.serialize(StatsRow {
            iteration: s.iteration,
            best_cost: s.best_cost,
            mean_cost: s.mean_cost,
            best_coverage: s.best_coverage,
            best_total_distance: s.best_total_distance,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_plan;
    use crate::tsplib::{build_distance_matrix, Metric, Point};

    fn small() -> (Instance, DistanceMatrix) {
        let coords = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(-1.0, 3.0),
            Point::new(4.0, -2.0),
            Point::new(-3.0, -3.0),
            Point::new(1.0, 5.0),
        ];
        let inst = Instance::new("small", coords, 0, Metric::Exact).unwrap();
        let dm = build_distance_matrix(&inst);
        (inst, dm)
    }

    fn quick(seed: u64) -> MmasParams {
        MmasParams {
            num_ants: 10,
            iterations: 30,
            seed,
            ..MmasParams::default()
        }
    }

    #[test]
    fn defaults_match_reference_settings() {
        let p = MmasParams::default();
        assert_eq!((p.beta, p.rho, p.num_ants, p.iterations), (7.0, 0.01, 151, 1000));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn param_validation() {
        let bad = |f: fn(&mut MmasParams)| {
            let mut p = MmasParams::default();
            f(&mut p);
            p.validate().unwrap_err()
        };
        assert_eq!(bad(|p| p.rho = 0.0), ParamsError::Rho(0.0));
        assert_eq!(bad(|p| p.rho = 1.0), ParamsError::Rho(1.0));
        assert_eq!(bad(|p| p.beta = -1.0), ParamsError::Beta(-1.0));
        assert_eq!(bad(|p| p.num_ants = 0), ParamsError::NoAnts);
        assert_eq!(bad(|p| p.iterations = 0), ParamsError::NoIterations);
    }

    #[test]
    fn single_target_is_covered_in_first_iteration() {
        let inst = Instance::new(
            "one",
            vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)],
            0,
            Metric::Exact,
        )
        .unwrap();
        let dm = build_distance_matrix(&inst);
        let cfg = ProblemConfig::new(10.0, 1).unwrap();
        let out = run_mmas(&inst, &dm, &cfg, &quick(5)).unwrap();
        assert_eq!(out.stats[0].best_coverage, 100.0);
        assert_eq!(out.best_iteration, 1);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (inst, dm) = small();
        let cfg = ProblemConfig::new(9.0, 2).unwrap();
        let a = run_mmas(&inst, &dm, &cfg, &quick(42)).unwrap();
        let b = run_mmas(&inst, &dm, &cfg, &quick(42)).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn best_cost_never_increases_and_plans_are_valid() {
        let (inst, dm) = small();
        for rule in [UpdateRule::PerAnt, UpdateRule::IterationBest] {
            for sched in [TauMinSchedule::Static, TauMinSchedule::Dynamic] {
                let cfg = ProblemConfig::new(8.0, 2).unwrap();
                let params = MmasParams {
                    update_rule: rule,
                    tau_min_schedule: sched,
                    ..quick(9)
                };
                let mut cycles = 0;
                let out = run_mmas_observed(&inst, &dm, &cfg, &params, |ev| {
                    cycles += 1;
                    assert!(ev.pheromone.within_bounds());
                    assert!(ev.pheromone.is_symmetric());
                    assert!(validate_plan(ev.plan, &inst, &cfg).is_empty());
                })
                .unwrap();
                let expected = match rule {
                    UpdateRule::PerAnt => 300,
                    UpdateRule::IterationBest => 30,
                };
                assert_eq!(cycles, expected);
                assert!(out
                    .stats
                    .windows(2)
                    .all(|w| w[1].best_cost <= w[0].best_cost));
                assert!(validate_plan(&out.best, &inst, &cfg).is_empty());
            }
        }
    }

    #[test]
    fn stats_csv_header() {
        let (inst, dm) = small();
        let cfg = ProblemConfig::new(8.0, 1).unwrap();
        let out = run_mmas(&inst, &dm, &cfg, &MmasParams { iterations: 3, ..quick(1) }).unwrap();
        let mut buf = Vec::new();
        write_stats_csv(&out.stats, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("iteration,best_cost,mean_cost,best_coverage,best_total_distance")
        );
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn option_parsing() {
        assert_eq!("per-ant".parse::<UpdateRule>(), Ok(UpdateRule::PerAnt));
        assert_eq!(
            "iteration-best".parse::<UpdateRule>(),
            Ok(UpdateRule::IterationBest)
        );
        assert!("best".parse::<UpdateRule>().is_err());
        assert_eq!("dynamic".parse::<TauMinSchedule>(), Ok(TauMinSchedule::Dynamic));
    }
}
