use std::fs;
use std::time::Instant;

use rayon::prelude::*;

use super::{resolve_flight_range, run_seed, Algorithm, ExperimentError, ExperimentSpec, ResultRecord};
use crate::mmas::{run_mmas, MmasParams};
use crate::model::{validate_plan, ProblemConfig, RoutePlan};
use crate::nn::{nn_construct, TieRule};
use crate::tsplib::{build_distance_matrix, critical_distance, parse_tsplib, DistanceMatrix, Instance};

/// Runs one solver once and returns its plan.
pub fn solve_once(
    algorithm: Algorithm,
    inst: &Instance,
    dm: &DistanceMatrix,
    cfg: &ProblemConfig,
    params: &MmasParams,
) -> Result<RoutePlan, ExperimentError> {
    Ok(match algorithm {
        Algorithm::Nn => nn_construct(inst, dm, cfg, TieRule::LowestIndex),
        Algorithm::Mmas => run_mmas(inst, dm, cfg, params)?.best,
    })
}

/// Loads the spec's instance file and runs the sweep.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<ResultRecord>, ExperimentError> {
    spec.validate()?;
    let text = fs::read_to_string(&spec.instance).map_err(|source| ExperimentError::Io {
        path: spec.instance.clone(),
        source,
    })?;
    let inst = parse_tsplib(&text).map_err(|source| ExperimentError::Parse {
        path: spec.instance.clone(),
        source,
    })?;
    run_sweep_on(inst, spec)
}

struct RunOutput {
    tc: f64,
    distance: f64,
    millis: f64,
    seed: u64,
}

/// Runs every (algorithm, fleet size, replication) job of the sweep on an
/// already-loaded instance. Jobs may execute in parallel; records come back
/// ordered by algorithm as listed in the spec, then fleet size.
pub fn run_sweep_on(
    inst: Instance,
    spec: &ExperimentSpec,
) -> Result<Vec<ResultRecord>, ExperimentError> {
    spec.validate()?;
    let mut inst = inst.with_metric(spec.metric);
    if let Some(b) = spec.base {
        inst = inst.with_base(b)?;
    }
    let dm = build_distance_matrix(&inst);
    let cd = critical_distance(&dm, inst.base());
    let fr = resolve_flight_range(spec.fr_mode, cd)?;

    let cells: Vec<(Algorithm, usize)> = spec
        .algorithms
        .iter()
        .flat_map(|&a| spec.uav_counts.iter().map(move |&u| (a, u)))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.runs_per_cell).map(move |r| (c, r)))
        .collect();

    let outputs: Vec<RunOutput> = jobs
        .par_iter()
        .map(|&(c, run)| {
            let (algorithm, uavs) = cells[c];
            let cfg = ProblemConfig::new(fr, uavs)
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            let seed = run_seed(spec.base_seed, algorithm, uavs, run);
            let params = MmasParams {
                seed,
                ..spec.mmas
            };
            let start = Instant::now();
            let plan = solve_once(algorithm, &inst, &dm, &cfg, &params)?;
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let violations = validate_plan(&plan, &inst, &cfg);
            if let Some(v) = violations.first() {
                return Err(ExperimentError::InvalidPlan {
                    algorithm,
                    uavs,
                    run,
                    detail: v.to_string(),
                });
            }
            Ok(RunOutput {
                tc: plan.coverage(),
                distance: plan.total_distance,
                millis,
                seed,
            })
        })
        .collect::<Result<_, _>>()?;

    let runs = spec.runs_per_cell;
    Ok(cells
        .iter()
        .zip(outputs.chunks(runs))
        .map(|(&(algorithm, uav_count), outs)| {
            let per_run_tc: Vec<f64> = outs.iter().map(|o| o.tc).collect();
            let per_run_distance: Vec<f64> = outs.iter().map(|o| o.distance).collect();
            ResultRecord {
                algorithm,
                uav_count,
                flight_range: fr,
                base_seed: spec.base_seed,
                run_seeds: outs.iter().map(|o| o.seed).collect(),
                mean_tc: per_run_tc.iter().sum::<f64>() / runs as f64,
                mean_distance: per_run_distance.iter().sum::<f64>() / runs as f64,
                per_run_tc,
                per_run_distance,
                wall_clock_ms: outs.iter().map(|o| o.millis).collect(),
            }
        })
        .collect())
}
