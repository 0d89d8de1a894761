//! Greedy nearest-neighbour baseline.
//!
//! Each UAV in turn leaves the base and repeatedly flies to the closest
//! unvisited target from which it can still get home. When nothing fits it
//! returns, and the next UAV starts fresh with a full range.

use crate::model::{ProblemConfig, RoutePlan, RANGE_TOLERANCE};
use crate::tsplib::{DistanceMatrix, Instance};

/// How to choose between equidistant targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    LowestIndex,
}

pub fn nn_construct(
    inst: &Instance,
    dm: &DistanceMatrix,
    cfg: &ProblemConfig,
    tie_rule: TieRule,
) -> RoutePlan {
    let TieRule::LowestIndex = tie_rule;
    let base = inst.base();
    let n = inst.len();
    let mut visited = vec![false; n];
    visited[base] = true;
    let limit = cfg.flight_range + RANGE_TOLERANCE;

    let mut routes = Vec::with_capacity(cfg.num_uavs);
    for _ in 0..cfg.num_uavs {
        let mut nodes = vec![base];
        let mut current = base;
        let mut used = 0.0;
        loop {
            let mut best: Option<(usize, f64)> = None;
            for (j, &seen) in visited.iter().enumerate() {
                if seen {
                    continue;
                }
                let step = dm.get(current, j);
                if used + step + dm.get(j, base) > limit {
                    continue;
                }
                // strict `<` keeps the lowest index among ties
                if best.is_none_or(|(_, d)| step < d) {
                    best = Some((j, step));
                }
            }
            let Some((next, step)) = best else { break };
            visited[next] = true;
            nodes.push(next);
            used += step;
            current = next;
        }
        nodes.push(base);
        routes.push(nodes);
    }

    RoutePlan::from_node_lists(routes, dm, inst.num_targets())
        .expect("nearest-neighbour routes use valid node indices")
}

/// Cost of the nearest-neighbour plan, used to seed the pheromone bounds.
pub fn initial_cost(inst: &Instance, dm: &DistanceMatrix, cfg: &ProblemConfig) -> f64 {
    nn_construct(inst, dm, cfg, TieRule::LowestIndex).cost
}
