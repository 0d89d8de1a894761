use std::collections::BTreeMap;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Algorithm, ResultRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Table,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "table" => Ok(ReportFormat::Table),
            other => Err(format!("unknown format `{other}` (expected csv|json|table)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no records to report")]
    Empty,
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One CSV line. Excludes wall-clock data so identical sweeps give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    pub uavs: usize,
    pub fr: f64,
    pub mean_tc: f64,
    pub mean_distance: f64,
    pub runs: usize,
    pub seed: u64,
}

impl From<&ResultRecord> for ReportRow {
    fn from(r: &ResultRecord) -> Self {
        ReportRow {
            algorithm: r.algorithm,
            uavs: r.uav_count,
            fr: r.flight_range,
            mean_tc: r.mean_tc,
            mean_distance: r.mean_distance,
            runs: r.per_run_tc.len(),
            seed: r.base_seed,
        }
    }
}

pub fn emit_report<W: io::Write>(
    records: &[ResultRecord],
    format: ReportFormat,
    mut out: W,
) -> Result<(), ReportError> {
    if records.is_empty() {
        return Err(ReportError::Empty);
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(ReportRow::from(r))?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
        ReportFormat::Table => write_table(records, &mut out)?,
    }
    Ok(())
}

pub fn read_csv_rows<R: io::Read>(input: R) -> Result<Vec<ReportRow>, ReportError> {
    let mut rdr = csv::Reader::from_reader(input);
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

/// One row per fleet size, one `TC_<ALG>` column per algorithm.
fn write_table<W: io::Write>(records: &[ResultRecord], out: &mut W) -> io::Result<()> {
    let mut algorithms: Vec<Algorithm> = Vec::new();
    let mut grid: BTreeMap<usize, BTreeMap<Algorithm, f64>> = BTreeMap::new();
    for r in records {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm);
        }
        grid.entry(r.uav_count)
            .or_default()
            .insert(r.algorithm, r.mean_tc);
    }
    algorithms.sort();

    write!(out, "{:>5}", "UAV")?;
    for a in &algorithms {
        write!(out, "  {:>9}", format!("TC_{}", a.label().to_uppercase()))?;
    }
    writeln!(out)?;
    for (uavs, row) in &grid {
        write!(out, "{uavs:>5}")?;
        for a in &algorithms {
            match row.get(a) {
                Some(tc) => write!(out, "  {:>9}", format!("{tc:.2}%"))?,
                None => write!(out, "  {:>9}", "-")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
