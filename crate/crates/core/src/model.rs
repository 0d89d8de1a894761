//! Problem configuration, route plans, and the coverage objective.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tsplib::{DistanceMatrix, Instance, Metric};

/// Absolute slack allowed when comparing a route length against the flight range.
pub const RANGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("flight range must be positive and finite, got {0}")]
    BadFlightRange(f64),
    #[error("fleet needs at least one UAV")]
    NoUavs,
    #[error("total target count must be at least 1")]
    NoTargets,
    #[error("visited count {visited} exceeds total targets {total}")]
    TooManyVisited { visited: usize, total: usize },
    #[error("route is empty")]
    EmptyRoute,
    #[error("node index {node} out of range for {n} nodes")]
    IndexOutOfRange { node: usize, n: usize },
    #[error("malformed plan text at line {line}: {msg}")]
    PlanText { line: usize, msg: String },
}

/// Flight range and fleet size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub flight_range: f64,
    pub num_uavs: usize,
}

impl ProblemConfig {
    pub fn new(flight_range: f64, num_uavs: usize) -> Result<Self, ModelError> {
        if !(flight_range.is_finite() && flight_range > 0.0) {
            return Err(ModelError::BadFlightRange(flight_range));
        }
        if num_uavs == 0 {
            return Err(ModelError::NoUavs);
        }
        Ok(ProblemConfig {
            flight_range,
            num_uavs,
        })
    }
}

/// Total distance along `nodes`, summed left to right.
pub fn route_length(nodes: &[usize], dm: &DistanceMatrix) -> Result<f64, ModelError> {
    if nodes.is_empty() {
        return Err(ModelError::EmptyRoute);
    }
    if let Some(&node) = nodes.iter().find(|&&v| v >= dm.len()) {
        return Err(ModelError::IndexOutOfRange { node, n: dm.len() });
    }
    Ok(nodes.windows(2).map(|w| dm.get(w[0], w[1])).sum())
}

fn check_counts(visited: usize, total: usize) -> Result<(), ModelError> {
    if total == 0 {
        return Err(ModelError::NoTargets);
    }
    if visited > total {
        return Err(ModelError::TooManyVisited { visited, total });
    }
    Ok(())
}

/// `1 - visited/total`; zero when every target is covered.
pub fn plan_cost(visited: usize, total: usize) -> Result<f64, ModelError> {
    check_counts(visited, total)?;
    Ok(1.0 - visited as f64 / total as f64)
}

/// Target coverage as a percentage.
pub fn target_coverage(visited: usize, total: usize) -> Result<f64, ModelError> {
    check_counts(visited, total)?;
    Ok(100.0 * visited as f64 / total as f64)
}

/// One UAV's closed tour, base to base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub nodes: Vec<usize>,
    pub length: f64,
}

impl Route {
    pub fn new(nodes: Vec<usize>, dm: &DistanceMatrix) -> Result<Self, ModelError> {
        let length = route_length(&nodes, dm)?;
        Ok(Route { nodes, length })
    }

    /// Targets visited by this route (everything between the two base visits).
    pub fn interior(&self) -> &[usize] {
        match self.nodes.len() {
            0..=2 => &[],
            k => &self.nodes[1..k - 1],
        }
    }

    /// Consecutive node pairs, including the legs to and from the base.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }
}

/// A complete fleet assignment with its objective values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    pub routes: Vec<Route>,
    pub visited: BTreeSet<usize>,
    pub total_targets: usize,
    pub cost: f64,
    pub total_distance: f64,
}

impl RoutePlan {
    /// Assembles a plan from node sequences, deriving lengths, the visited set,
    /// and cost. Does not check feasibility; see [`validate_plan`].
    pub fn from_node_lists(
        routes: Vec<Vec<usize>>,
        dm: &DistanceMatrix,
        total_targets: usize,
    ) -> Result<Self, ModelError> {
        let routes = routes
            .into_iter()
            .map(|nodes| Route::new(nodes, dm))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_routes(routes, total_targets)
    }

    pub fn from_routes(routes: Vec<Route>, total_targets: usize) -> Result<Self, ModelError> {
        let visited: BTreeSet<usize> = routes
            .iter()
            .flat_map(|r| r.interior().iter().copied())
            .collect();
        let cost = plan_cost(visited.len().min(total_targets), total_targets)?;
        let total_distance = routes.iter().map(|r| r.length).sum();
        Ok(RoutePlan {
            routes,
            visited,
            total_targets,
            cost,
            total_distance,
        })
    }

    pub fn visited_count(&self) -> usize {
        self.visited.len()
    }

    pub fn coverage(&self) -> f64 {
        100.0 * self.visited.len() as f64 / self.total_targets as f64
    }

    /// More targets first, then shorter total distance.
    pub fn is_better_than(&self, other: &RoutePlan) -> bool {
        match self.visited.len().cmp(&other.visited.len()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.total_distance < other.total_distance,
        }
    }

    /// Canonical text form: a header line followed by one line of
    /// space-separated node indices per route.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# cost={} coverage={} total_distance={} targets={} routes={}",
            self.cost,
            self.coverage(),
            self.total_distance,
            self.total_targets,
            self.routes.len()
        );
        for r in &self.routes {
            let line: Vec<String> = r.nodes.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses [`RoutePlan::to_text`] output, recomputing all derived values.
    pub fn from_text(text: &str, dm: &DistanceMatrix) -> Result<Self, ModelError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(ModelError::PlanText {
            line: 1,
            msg: "missing header".into(),
        })?;
        let targets = header
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("targets="))
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or(ModelError::PlanText {
                line: 1,
                msg: "header lacks targets=<count>".into(),
            })?;
        let mut routes = Vec::new();
        for (i, line) in lines {
            let nodes = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ModelError::PlanText {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
            routes.push(nodes);
        }
        Self::from_node_lists(routes, dm, targets)
    }
}

/// A single broken constraint found by [`validate_plan`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    TooManyRoutes { routes: usize, max: usize },
    RouteTooShort { route: usize },
    NotAnchoredAtBase { route: usize },
    NodeOutOfRange { route: usize, node: usize },
    BaseRevisited { route: usize },
    DuplicateTarget { target: usize },
    RangeExceeded { route: usize, length: f64, flight_range: f64 },
    LengthMismatch { route: usize, stored: f64, actual: f64 },
    VisitedMismatch,
    TargetCountMismatch { stored: usize, actual: usize },
    CostMismatch { stored: f64, expected: f64 },
    TotalDistanceMismatch { stored: f64, actual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            TooManyRoutes { routes, max } => write!(f, "too many routes: {routes} > {max}"),
            RouteTooShort { route } => write!(f, "route {route}: fewer than two nodes"),
            NotAnchoredAtBase { route } => write!(f, "route {route}: does not start and end at base"),
            NodeOutOfRange { route, node } => write!(f, "route {route}: node {node} out of range"),
            BaseRevisited { route } => write!(f, "route {route}: base appears mid-route"),
            DuplicateTarget { target } => write!(f, "duplicate target {target}"),
            RangeExceeded {
                route,
                length,
                flight_range,
            } => write!(f, "route {route}: range exceeded ({length} > {flight_range})"),
            LengthMismatch {
                route,
                stored,
                actual,
            } => write!(f, "route {route}: stored length {stored} != {actual}"),
            VisitedMismatch => write!(f, "visited set differs from route interiors"),
            TargetCountMismatch { stored, actual } => {
                write!(f, "target count {stored} != instance targets {actual}")
            }
            CostMismatch { stored, expected } => write!(f, "cost {stored} != {expected}"),
            TotalDistanceMismatch { stored, actual } => {
                write!(f, "total distance {stored} != {actual}")
            }
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn node_distance(inst: &Instance, i: usize, j: usize) -> f64 {
    let e = inst.coords()[i].distance(&inst.coords()[j]);
    match inst.metric() {
        Metric::Exact => e,
        Metric::Rounded => (e + 0.5).floor(),
    }
}

/// Checks every structural and range constraint of `plan`. Distances are
/// recomputed from the instance coordinates. An empty result means feasible.
pub fn validate_plan(plan: &RoutePlan, inst: &Instance, cfg: &ProblemConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.len();
    let base = inst.base();

    if plan.routes.len() > cfg.num_uavs {
        out.push(Violation::TooManyRoutes {
            routes: plan.routes.len(),
            max: cfg.num_uavs,
        });
    }
    if plan.total_targets != inst.num_targets() {
        out.push(Violation::TargetCountMismatch {
            stored: plan.total_targets,
            actual: inst.num_targets(),
        });
    }

    let mut seen = BTreeSet::new();
    let mut total = 0.0;
    for (ri, route) in plan.routes.iter().enumerate() {
        let nodes = &route.nodes;
        if nodes.len() < 2 {
            out.push(Violation::RouteTooShort { route: ri });
            continue;
        }
        if let Some(&node) = nodes.iter().find(|&&v| v >= n) {
            out.push(Violation::NodeOutOfRange { route: ri, node });
            continue;
        }
        if nodes[0] != base || nodes[nodes.len() - 1] != base {
            out.push(Violation::NotAnchoredAtBase { route: ri });
        }
        for &t in &nodes[1..nodes.len() - 1] {
            if t == base {
                out.push(Violation::BaseRevisited { route: ri });
            } else if !seen.insert(t) {
                out.push(Violation::DuplicateTarget { target: t });
            }
        }
        let actual: f64 = nodes
            .windows(2)
            .map(|w| node_distance(inst, w[0], w[1]))
            .sum();
        if !close(actual, route.length) {
            out.push(Violation::LengthMismatch {
                route: ri,
                stored: route.length,
                actual,
            });
        }
        if actual > cfg.flight_range + RANGE_TOLERANCE {
            out.push(Violation::RangeExceeded {
                route: ri,
                length: actual,
                flight_range: cfg.flight_range,
            });
        }
        total += actual;
    }

    if seen != plan.visited {
        out.push(Violation::VisitedMismatch);
    }
    if plan.total_targets > 0 {
        let expected = 1.0 - seen.len() as f64 / plan.total_targets as f64;
        if !close(expected, plan.cost) {
            out.push(Violation::CostMismatch {
                stored: plan.cost,
                expected,
            });
        }
    }
    if !close(total, plan.total_distance) {
        out.push(Violation::TotalDistanceMismatch {
            stored: plan.total_distance,
            actual: total,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsplib::{build_distance_matrix, Point};

    fn fixture() -> (Instance, DistanceMatrix) {
        let inst = Instance::new(
            "tri3",
            vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0), Point::new(6.0, 8.0)],
            0,
            Metric::Exact,
        )
        .unwrap();
        let dm = build_distance_matrix(&inst);
        (inst, dm)
    }

    #[test]
    fn route_length_examples() {
        let (_, dm) = fixture();
        assert_eq!(route_length(&[0], &dm).unwrap(), 0.0);
        assert_eq!(route_length(&[0, 1, 0], &dm).unwrap(), 10.0);
        assert_eq!(route_length(&[], &dm), Err(ModelError::EmptyRoute));
        assert_eq!(
            route_length(&[0, 3], &dm),
            Err(ModelError::IndexOutOfRange { node: 3, n: 3 })
        );
    }

    #[test]
    fn cost_and_coverage() {
        assert_eq!(plan_cost(149, 149).unwrap(), 0.0);
        assert_eq!(plan_cost(0, 149).unwrap(), 1.0);
        assert!((plan_cost(75, 149).unwrap() - 0.496_644_295_302).abs() < 1e-9);
        assert_eq!(target_coverage(149, 149).unwrap(), 100.0);
        assert!((target_coverage(134, 149).unwrap() - 89.93).abs() < 5e-3);
        assert_eq!(plan_cost(1, 0), Err(ModelError::NoTargets));
        assert_eq!(target_coverage(0, 0), Err(ModelError::NoTargets));
        assert!(plan_cost(5, 4).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ProblemConfig::new(0.0, 1).is_err());
        assert!(ProblemConfig::new(f64::NAN, 1).is_err());
        assert_eq!(ProblemConfig::new(1.0, 0), Err(ModelError::NoUavs));
        assert!(ProblemConfig::new(1.0, 1).is_ok());
    }

    #[test]
    fn range_boundary() {
        let (inst, dm) = fixture();
        let plan = RoutePlan::from_node_lists(vec![vec![0, 1, 0]], &dm, 2).unwrap();
        let ok = ProblemConfig::new(10.0, 1).unwrap();
        assert!(validate_plan(&plan, &inst, &ok).is_empty());
        let tight = ProblemConfig::new(10.0 - 1e-6, 1).unwrap();
        let v = validate_plan(&plan, &inst, &tight);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("range exceeded"));
        // within the absolute tolerance
        let edge = ProblemConfig::new(10.0 - 5e-10, 1).unwrap();
        assert!(validate_plan(&plan, &inst, &edge).is_empty());
    }

    #[test]
    fn duplicate_target_detected() {
        let (inst, dm) = fixture();
        let plan =
            RoutePlan::from_node_lists(vec![vec![0, 1, 0], vec![0, 2, 1, 0]], &dm, 2).unwrap();
        let cfg = ProblemConfig::new(100.0, 2).unwrap();
        let v = validate_plan(&plan, &inst, &cfg);
        assert_eq!(v, vec![Violation::DuplicateTarget { target: 1 }]);
        assert!(v[0].to_string().contains("duplicate target"));
    }

    #[test]
    fn structural_violations() {
        let (inst, dm) = fixture();
        let cfg = ProblemConfig::new(100.0, 1).unwrap();
        let plan =
            RoutePlan::from_node_lists(vec![vec![1, 2, 1], vec![0, 0]], &dm, 2).unwrap();
        let v = validate_plan(&plan, &inst, &cfg);
        assert!(v.contains(&Violation::TooManyRoutes { routes: 2, max: 1 }));
        assert!(v.contains(&Violation::NotAnchoredAtBase { route: 0 }));

        let mut tampered = RoutePlan::from_node_lists(vec![vec![0, 2, 0]], &dm, 2).unwrap();
        tampered.cost = 0.0;
        tampered.routes[0].length = 3.0;
        let v = validate_plan(&tampered, &inst, &cfg);
        assert!(v.iter().any(|x| matches!(x, Violation::CostMismatch { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::LengthMismatch { .. })));
    }

    #[test]
    fn empty_routes_are_feasible() {
        let (inst, dm) = fixture();
        let plan = RoutePlan::from_node_lists(vec![vec![0, 0], vec![0, 0]], &dm, 2).unwrap();
        let cfg = ProblemConfig::new(1.0, 2).unwrap();
        assert!(validate_plan(&plan, &inst, &cfg).is_empty());
        assert_eq!(plan.cost, 1.0);
        assert_eq!(plan.coverage(), 0.0);
    }

    #[test]
    fn text_round_trip() {
        let (_, dm) = fixture();
        let plan = RoutePlan::from_node_lists(vec![vec![0, 2, 1, 0], vec![0, 0]], &dm, 2).unwrap();
        let text = plan.to_text();
        assert!(text.starts_with("# cost=0 coverage=100 total_distance=20 targets=2 routes=2\n"));
        assert!(text.contains("\n0 2 1 0\n0 0\n"));
        assert_eq!(RoutePlan::from_text(&text, &dm).unwrap(), plan);
    }

    #[test]
    fn ordering_prefers_coverage_then_distance() {
        let (_, dm) = fixture();
        let near = RoutePlan::from_node_lists(vec![vec![0, 1, 0]], &dm, 2).unwrap();
        let far = RoutePlan::from_node_lists(vec![vec![0, 2, 0]], &dm, 2).unwrap();
        let both = RoutePlan::from_node_lists(vec![vec![0, 1, 2, 0]], &dm, 2).unwrap();
        assert!(near.is_better_than(&far));
        assert!(!far.is_better_than(&near));
        assert!(both.is_better_than(&near));
        assert!(!near.is_better_than(&near.clone()));
    }
}
