//! Probabilistic plan construction for a single ant.

use rand::Rng;

use super::pheromone::PheromoneState;
use crate::model::{ProblemConfig, RoutePlan, RANGE_TOLERANCE};
use crate::tsplib::{DistanceMatrix, Instance};

/// Static edge desirability `1/d`, with coincident distinct nodes capped.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicMatrix {
    n: usize,
    eta: Vec<f64>,
    pub cap: f64,
}

impl HeuristicMatrix {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.eta[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Element-wise `eta^beta`, precomputed once per run.
    pub fn powered(&self, beta: f64) -> HeuristicMatrix {
        HeuristicMatrix {
            n: self.n,
            eta: self
                .eta
                .iter()
                .map(|&e| if e == 0.0 { 0.0 } else { e.powf(beta) })
                .collect(),
            cap: self.cap.powf(beta),
        }
    }
}

/// `eta[i][j] = 1/d[i][j]`, zero on the diagonal. A zero distance between
/// distinct nodes gets `2 / d_min`, where `d_min` is the smallest positive
/// distance in the matrix.
pub fn heuristic_matrix(dm: &DistanceMatrix) -> HeuristicMatrix {
    let n = dm.len();
    let cap = dm.min_positive().map_or(1.0, |d| 1.0 / (d / 2.0));
    let mut eta = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = dm.get(i, j);
            eta[i * n + j] = if d > 0.0 { 1.0 / d } else { cap };
        }
    }
    HeuristicMatrix { n, eta, cap }
}

/// Construction state of one ant part-way through building a plan.
#[derive(Debug, Clone)]
pub struct AntState {
    pub current: usize,
    /// Distance already flown by the current UAV.
    pub used: f64,
    pub flight_range: f64,
    pub uavs_used: usize,
    /// Targets this ant has visited (the base is always marked).
    pub visited: Vec<bool>,
    pub routes: Vec<Vec<usize>>,
    pub open_route: Vec<usize>,
}

impl AntState {
    pub fn new(n: usize, base: usize, flight_range: f64) -> Self {
        let mut visited = vec![false; n];
        visited[base] = true;
        AntState {
            current: base,
            used: 0.0,
            flight_range,
            uavs_used: 0,
            visited,
            routes: Vec::new(),
            open_route: vec![base],
        }
    }

    pub fn remaining_range(&self) -> f64 {
        (self.flight_range - self.used).max(0.0)
    }

    fn move_to(&mut self, next: usize, dm: &DistanceMatrix) {
        self.used += dm.get(self.current, next);
        self.visited[next] = true;
        self.open_route.push(next);
        self.current = next;
    }

    fn return_to_base(&mut self, base: usize) {
        self.open_route.push(base);
        self.routes.push(std::mem::replace(&mut self.open_route, vec![base]));
        self.uavs_used += 1;
        self.current = base;
        self.used = 0.0;
    }
}

/// Writes the unnormalized move weight `tau * eta^beta` for every candidate
/// into `weights` (zero for non-candidates) and returns their sum. A target is
/// a candidate when unvisited and the UAV can still reach the base after it.
fn candidate_weights(
    ant: &AntState,
    tau: &PheromoneState,
    eta_pow: &HeuristicMatrix,
    dm: &DistanceMatrix,
    base: usize,
    weights: &mut [f64],
) -> f64 {
    let c = ant.current;
    let limit = ant.flight_range + RANGE_TOLERANCE;
    let tau_row = tau.row(c);
    let d_row = dm.row(c);
    let mut sum = 0.0;
    for (j, w) in weights.iter_mut().enumerate() {
        *w = 0.0;
        if ant.visited[j] || ant.used + d_row[j] + dm.get(j, base) > limit {
            continue;
        }
        let v = tau_row[j] * eta_pow.get(c, j);
        *w = v;
        sum += v;
    }
    sum
}

/// Move probabilities from the ant's current node to each node. Entries for
/// visited or unreachable targets are zero; the vector is all zeros when the
/// ant has to go home.
pub fn selection_probabilities(
    ant: &AntState,
    tau: &PheromoneState,
    eta: &HeuristicMatrix,
    beta: f64,
    dm: &DistanceMatrix,
    base: usize,
) -> Vec<f64> {
    let eta_pow = eta.powered(beta);
    let mut p = vec![0.0; dm.len()];
    let sum = candidate_weights(ant, tau, &eta_pow, dm, base, &mut p);
    if sum > 0.0 {
        p.iter_mut().for_each(|v| *v /= sum);
    } else {
        // weights may underflow to zero while candidates exist; fall back to uniform
        let cands: Vec<usize> = candidates(ant, dm, base).collect();
        if !cands.is_empty() {
            let u = 1.0 / cands.len() as f64;
            cands.into_iter().for_each(|j| p[j] = u);
        }
    }
    p
}

fn candidates<'a>(
    ant: &'a AntState,
    dm: &'a DistanceMatrix,
    base: usize,
) -> impl Iterator<Item = usize> + 'a {
    let limit = ant.flight_range + RANGE_TOLERANCE;
    (0..dm.len()).filter(move |&j| {
        !ant.visited[j] && ant.used + dm.get(ant.current, j) + dm.get(j, base) <= limit
    })
}

/// Outcome of one roulette-wheel draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Target(usize),
    ReturnToBase,
}

/// Roulette-wheel draw over nonnegative weights summing to `total`.
fn roulette<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> Choice {
    if total <= 0.0 {
        return Choice::ReturnToBase;
    }
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (j, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(j);
        if r < acc {
            return Choice::Target(j);
        }
    }
    // rounding left r just past the accumulated total
    last.map_or(Choice::ReturnToBase, Choice::Target)
}

/// Draws the next node from a probability vector; an all-zero vector means
/// the ant returns to base.
pub fn sample_next<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Choice {
    let total: f64 = probs.iter().filter(|&&p| p > 0.0).sum();
    roulette(probs, total, rng)
}

/// Builds a full fleet plan for one ant: per UAV, keep drawing targets until
/// none is reachable, then close the route at base and reset the range.
pub fn construct_plan<R: Rng + ?Sized>(
    inst: &Instance,
    dm: &DistanceMatrix,
    cfg: &ProblemConfig,
    tau: &PheromoneState,
    eta_pow: &HeuristicMatrix,
    rng: &mut R,
) -> RoutePlan {
    let base = inst.base();
    let mut ant = AntState::new(dm.len(), base, cfg.flight_range);
    let mut weights = vec![0.0; dm.len()];
    let mut remaining_targets = inst.num_targets();

    while ant.uavs_used < cfg.num_uavs {
        if remaining_targets == 0 {
            ant.return_to_base(base);
            continue;
        }
        let mut total = candidate_weights(&ant, tau, eta_pow, dm, base, &mut weights);
        if total == 0.0 {
            // guard against underflowed weights: treat every candidate equally
            for j in candidates(&ant, dm, base) {
                weights[j] = 1.0;
                total += 1.0;
            }
        }
        match roulette(&weights, total, rng) {
            Choice::Target(j) => {
                ant.move_to(j, dm);
                remaining_targets -= 1;
            }
            Choice::ReturnToBase => ant.return_to_base(base),
        }
    }

    RoutePlan::from_node_lists(ant.routes, dm, inst.num_targets())
        .expect("ant routes use valid node indices")
}
