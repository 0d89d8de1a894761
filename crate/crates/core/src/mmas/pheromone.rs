//! Bounded pheromone matrix: initialization, evaporation and deposit.

use crate::model::RoutePlan;

/// Lower bound substituted for a zero plan cost when dividing by it.
///
/// Half of one target's worth of cost, so a full-coverage plan still deposits
/// strictly more than any plan that misses a target.
pub fn cost_floor(total_targets: usize) -> f64 {
    1.0 / (2.0 * total_targets.max(1) as f64)
}

/// `(1 - rho)^(iterations / 10) * tau_max`, kept strictly positive when the
/// power underflows.
pub fn compute_tau_min(rho: f64, iterations: usize, tau_max: f64) -> f64 {
    ((1.0 - rho).powf(iterations as f64 / 10.0) * tau_max).max(f64::MIN_POSITIVE)
}

/// Symmetric n×n pheromone matrix with its clamping bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneState {
    n: usize,
    tau: Vec<f64>,
    pub tau_max: f64,
    pub tau_min: f64,
    pub rho: f64,
    pub c_floor: f64,
}

impl PheromoneState {
    /// All entries start at `tau_max = 1 / (rho * max(c_init, c_floor))`.
    /// `tau_min` starts equal to `tau_max`; set it with [`Self::set_tau_min`].
    pub fn init(rho: f64, c_init: f64, n: usize, c_floor: f64) -> Self {
        debug_assert!(rho > 0.0 && rho < 1.0);
        debug_assert!((0.0..=1.0).contains(&c_init));
        let tau_max = 1.0 / (rho * c_init.max(c_floor));
        PheromoneState {
            n,
            tau: vec![tau_max; n * n],
            tau_max,
            tau_min: tau_max,
            rho,
            c_floor,
        }
    }

    pub fn set_tau_min(&mut self, tau_min: f64) {
        debug_assert!(tau_min > 0.0 && tau_min <= self.tau_max);
        self.tau_min = tau_min;
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.tau[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.tau
    }

    /// Multiplies every entry by `1 - rho` and raises anything below `tau_min` back to it.
    pub fn evaporate(&mut self) {
        let keep = 1.0 - self.rho;
        let floor = self.tau_min;
        for t in &mut self.tau {
            *t = (*t * keep).max(floor);
        }
    }

    /// Adds `1 / max(cost, c_floor)` to every edge the plan traverses, once
    /// per traversal, capped at `tau_max`.
    pub fn deposit(&mut self, plan: &RoutePlan) {
        let amount = 1.0 / plan.cost.max(self.c_floor);
        let cap = self.tau_max;
        let n = self.n;
        for route in &plan.routes {
            for (i, j) in route.edges() {
                if i == j {
                    continue;
                }
                let v = (self.tau[i * n + j] + amount).min(cap);
                self.tau[i * n + j] = v;
                self.tau[j * n + i] = v;
            }
        }
    }

    /// True when every entry lies in `[tau_min, tau_max]`.
    pub fn within_bounds(&self) -> bool {
        self.tau
            .iter()
            .all(|&t| t >= self.tau_min && t <= self.tau_max)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}
