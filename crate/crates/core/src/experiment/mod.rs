//! Experiment harness: flight ranges relative to the critical distance,
//! seeded replications over fleet sizes, and report/plot output.

mod plot;
mod report;
mod sweep;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use plot::{emit_route_plot, CanvasMap, CANVAS_SIZE};
pub use report::{emit_report, read_csv_rows, ReportError, ReportFormat, ReportRow};
pub use sweep::{run_sweep, run_sweep_on, solve_once};

use crate::mmas::{MmasParams, ParamsError};
use crate::tsplib::{InstanceError, Metric, ParseError};

/// Flight range relative to the critical distance (CD), or an absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrMode {
    Cd,
    CdHalf,
    CdDouble,
    Absolute(f64),
}

pub fn resolve_flight_range(mode: FrMode, cd: f64) -> Result<f64, ExperimentError> {
    match mode {
        FrMode::Cd => Ok(cd),
        FrMode::CdHalf => Ok(cd / 2.0),
        FrMode::CdDouble => Ok(2.0 * cd),
        FrMode::Absolute(v) if v > 0.0 && v.is_finite() => Ok(v),
        FrMode::Absolute(v) => Err(ExperimentError::Config(format!(
            "absolute flight range must be positive, got {v}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nn,
    Mmas,
}

impl Algorithm {
    /// Stable numeric id mixed into run seeds.
    pub fn id(self) -> u64 {
        match self {
            Algorithm::Nn => 1,
            Algorithm::Mmas => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Nn => "nn",
            Algorithm::Mmas => "mmas",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nn" => Ok(Algorithm::Nn),
            "mmas" => Ok(Algorithm::Mmas),
            other => Err(format!("unknown algorithm `{other}` (expected nn|mmas)")),
        }
    }
}

fn default_runs() -> usize {
    10
}

fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Nn, Algorithm::Mmas]
}

/// A sweep description, usually loaded from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub instance: PathBuf,
    #[serde(default)]
    pub metric: Metric,
    #[serde(default)]
    pub base: Option<usize>,
    pub fr_mode: FrMode,
    pub uav_counts: Vec<usize>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_runs")]
    pub runs_per_cell: usize,
    #[serde(default)]
    pub mmas: MmasParams,
    #[serde(default)]
    pub base_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.uav_counts.is_empty() {
            return Err(ExperimentError::Config("uav_counts is empty".into()));
        }
        if self.uav_counts[0] == 0 {
            return Err(ExperimentError::Config("uav counts must be positive".into()));
        }
        if self.uav_counts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ExperimentError::Config(
                "uav_counts must be strictly increasing".into(),
            ));
        }
        if self.runs_per_cell == 0 {
            return Err(ExperimentError::Config("runs_per_cell must be >= 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(ExperimentError::Config("no algorithms selected".into()));
        }
        if let FrMode::Absolute(_) = self.fr_mode {
            resolve_flight_range(self.fr_mode, 1.0)?;
        }
        self.mmas.validate()?;
        Ok(())
    }

    /// Parses JSON; a relative `instance` path is resolved against `spec_dir`.
    pub fn from_json(text: &str, spec_dir: &Path) -> Result<Self, ExperimentError> {
        let mut spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        if spec.instance.is_relative() {
            spec.instance = spec_dir.join(&spec.instance);
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Aggregated results of one (algorithm, fleet size) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub algorithm: Algorithm,
    pub uav_count: usize,
    pub flight_range: f64,
    pub base_seed: u64,
    pub run_seeds: Vec<u64>,
    pub per_run_tc: Vec<f64>,
    pub per_run_distance: Vec<f64>,
    pub mean_tc: f64,
    pub mean_distance: f64,
    /// Wall-clock milliseconds per run; informational only.
    pub wall_clock_ms: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error("{algorithm} with {uavs} UAVs, run {run}: infeasible plan: {detail}")]
    InvalidPlan {
        algorithm: Algorithm,
        uavs: usize,
        run: usize,
        detail: String,
    },
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one replication, chained through SplitMix64 so every cell's
/// stream is independent of sweep order.
pub fn run_seed(base_seed: u64, algorithm: Algorithm, uav_count: usize, run: usize) -> u64 {
    let mut h = splitmix64(base_seed);
    h = splitmix64(h ^ algorithm.id());
    h = splitmix64(h ^ uav_count as u64);
    splitmix64(h ^ run as u64)
}
