//! Test-only helpers shared by the integration suites: an exhaustive
//! coverage oracle and a second, independently written plan checker.
//! Neither calls into the solver or validator code paths.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

/// Euclidean distance straight from coordinates.
pub fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn shortest_closed_tour(base: (f64, f64), pts: &[(f64, f64)]) -> f64 {
    fn go(
        base: (f64, f64),
        pts: &[(f64, f64)],
        used: &mut Vec<bool>,
        last: (f64, f64),
        acc: f64,
        depth: usize,
        best: &mut f64,
    ) {
        if depth == pts.len() {
            *best = best.min(acc + dist(last, base));
            return;
        }
        for i in 0..pts.len() {
            if !used[i] {
                used[i] = true;
                go(base, pts, used, pts[i], acc + dist(last, pts[i]), depth + 1, best);
                used[i] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(base, pts, &mut vec![false; pts.len()], base, 0.0, 0, &mut best);
    best
}

/// Maximum number of targets any feasible plan can cover, by enumerating
/// every target subset, every visiting order, and every assignment of
/// disjoint subsets to UAVs. Exact Euclidean metric.
pub fn optimal_coverage(coords: &[(f64, f64)], base: usize, fr: f64, uavs: usize) -> usize {
    let targets: Vec<(f64, f64)> = coords
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != base)
        .map(|(_, &p)| p)
        .collect();
    let t = targets.len();
    assert!(t <= 10, "oracle is exponential");
    let feasible: Vec<u32> = (0u32..(1 << t))
        .filter(|&mask| {
            let pts: Vec<_> = (0..t).filter(|i| mask >> i & 1 == 1).map(|i| targets[i]).collect();
            pts.is_empty() || shortest_closed_tour(coords[base], &pts) <= fr + 1e-9
        })
        .collect();

    fn best(k: usize, used: u32, feasible: &[u32]) -> u32 {
        if k == 0 {
            return 0;
        }
        feasible
            .iter()
            .filter(|&&s| s & used == 0)
            .map(|&s| s.count_ones() + best(k - 1, used | s, feasible))
            .max()
            .unwrap_or(0)
    }
    best(uavs, 0, &feasible) as usize
}

/// Plan as plain node lists plus the claimed objective values.
pub struct RawPlan<'a> {
    pub routes: &'a [Vec<usize>],
    pub claimed_visited: &'a [usize],
    pub claimed_cost: f64,
}

/// Independent feasibility check. Returns true iff the plan is valid.
pub fn independent_check(
    raw: &RawPlan<'_>,
    coords: &[(f64, f64)],
    base: usize,
    fr: f64,
    uavs: usize,
) -> bool {
    if raw.routes.len() > uavs {
        return false;
    }
    let mut seen = HashSet::new();
    for r in raw.routes {
        if r.len() < 2 || r[0] != base || *r.last().unwrap() != base {
            return false;
        }
        if r.iter().any(|&v| v >= coords.len()) {
            return false;
        }
        let inner = &r[1..r.len() - 1];
        for &v in inner {
            if v == base || !seen.insert(v) {
                return false;
            }
        }
        let mut len = 0.0;
        for w in r.windows(2) {
            len += dist(coords[w[0]], coords[w[1]]);
        }
        if len > fr + 1e-9 {
            return false;
        }
    }
    let mut claimed: Vec<usize> = raw.claimed_visited.to_vec();
    claimed.sort_unstable();
    let mut actual: Vec<usize> = seen.into_iter().collect();
    actual.sort_unstable();
    if claimed != actual {
        return false;
    }
    let total = coords.len() - 1;
    let cost = 1.0 - actual.len() as f64 / total as f64;
    (cost - raw.claimed_cost).abs() <= 1e-9
}

/// Location of the ch150 TSPLIB instance: `MAXCOV_CH150` if set, otherwise
/// `data/ch150.tsp` at the workspace root.
pub fn ch150_path() -> PathBuf {
    std::env::var_os("MAXCOV_CH150")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/ch150.tsp")
        })
}

pub fn read_ch150() -> Result<String, String> {
    let p = ch150_path();
    std::fs::read_to_string(&p).map_err(|e| {
        format!(
            "ch150 instance unavailable at {} ({e}); place TSPLIB ch150.tsp there or set MAXCOV_CH150",
            p.display()
        )
    })
}
