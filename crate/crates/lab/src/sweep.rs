//! Sweeps over `(n, δ, trial)` with CSV output and a per-cell summary.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::config::{clause_count, format_delta, Metric, SweepConfig};
use crate::error::{LabError, Result};
use crate::record::{run_trial, ObddSize, TrialRecord, BLOWUP, HEADER, NA};

/// Environment variable overriding the worker count.
pub const THREADS_VAR: &str = "OBDD_PHASE_LAB_THREADS";

pub const SUMMARY_HEADER: [&str; 18] = [
    "distribution",
    "n",
    "delta",
    "m",
    "trials",
    "satFraction",
    "simpleFraction",
    "oneCycleFraction",
    "prefixMatchingFraction",
    "thetaPrefixFraction",
    "thetaPrefixSkipped",
    "medianMaxDegree",
    "medianTwUpper",
    "medianMmwLinearBest",
    "medianPrefixMatchingSize",
    "medianObddSize",
    "blowups",
    "medianCertFloor",
];

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Worker count from [`THREADS_VAR`], defaulting to the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t),
            _ => Err(LabError::config(THREADS_VAR, format!("`{v}` is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |p| p.get())),
    }
}

/// Runs every trial of `config` on `threads` workers, in `(n, δ, trial)` order.
pub fn collect_records(config: &SweepConfig, threads: usize) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let jobs: Vec<_> = config
        .cells()
        .into_iter()
        .flat_map(|(n, d)| (0..config.trials).map(move |t| (n, d, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::config(THREADS_VAR, e.to_string()))?;
    pool.install(|| jobs.par_iter().map(|&(n, d, t)| run_trial(config, n, d, t)).collect())
}

/// Runs the sweep and writes the trial CSV to `outputPath` and the summary
/// to `outputPath` with `.summary.csv` appended.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    run_sweep_with_threads(config, worker_count()?)
}

pub fn run_sweep_with_threads(config: &SweepConfig, threads: usize) -> Result<SweepOutput> {
    let records = collect_records(config, threads)?;
    let csv_path = config.output_path.clone();
    let summary_path = summary_path(&csv_path);
    write_file(&csv_path, &records_csv(&records))?;
    write_file(&summary_path, &summary_csv(config, &records))?;
    Ok(SweepOutput { records, csv_path, summary_path })
}

pub fn summary_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    }
    let mut file = File::create(path).map_err(|e| LabError::io(path, e))?;
    file.write_all(bytes).map_err(|e| LabError::io(path, e))
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn records_csv(records: &[TrialRecord]) -> Vec<u8> {
    csv_bytes(&HEADER, records.iter().map(TrialRecord::to_row))
}

/// Lower median; `None` for an empty sample.
pub fn lower_median<T: Ord + Clone>(mut values: Vec<T>) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    values.sort();
    Some(values[(values.len() - 1) / 2].clone())
}

/// Median obddSize with BLOWUP ordered above every size.
pub fn median_obdd_size(sizes: impl IntoIterator<Item = ObddSize>) -> Option<ObddSize> {
    let keyed: Vec<(bool, usize)> = sizes
        .into_iter()
        .map(|s| match s {
            ObddSize::Nodes(x) => (false, x),
            ObddSize::Blowup => (true, 0),
        })
        .collect();
    lower_median(keyed).map(|(blown, x)| if blown { ObddSize::Blowup } else { ObddSize::Nodes(x) })
}

fn fraction_cell(values: impl Iterator<Item = bool>) -> String {
    let (mut hits, mut total) = (0u64, 0u64);
    for v in values {
        hits += u64::from(v);
        total += 1;
    }
    if total == 0 {
        return NA.to_string();
    }
    format!("{:.6}", hits as f64 / total as f64)
}

fn median_cell<T: Ord + Clone + ToString>(values: Vec<T>) -> String {
    lower_median(values).map_or_else(|| NA.to_string(), |v| v.to_string())
}

pub fn summary_csv(config: &SweepConfig, records: &[TrialRecord]) -> Vec<u8> {
    let mut rows = Vec::new();
    for chunk in records.chunk_by(|a, b| a.n == b.n && a.delta == b.delta) {
        let first = &chunk[0];
        let thetas: Vec<_> = chunk.iter().filter_map(|r| r.theta_prefix).collect();
        let theta_skipped = if config.wants(Metric::ThetaPrefix) {
            (chunk.len() - thetas.len()).to_string()
        } else {
            NA.to_string()
        };
        let sizes: Vec<ObddSize> = chunk.iter().filter_map(|r| r.obdd_size).collect();
        let blowups = if config.wants(Metric::ObddSize) {
            sizes.iter().filter(|s| **s == ObddSize::Blowup).count().to_string()
        } else {
            NA.to_string()
        };
        rows.push(vec![
            first.distribution.name().to_string(),
            first.n.to_string(),
            format_delta(first.delta),
            clause_count(first.n, first.delta).to_string(),
            chunk.len().to_string(),
            fraction_cell(chunk.iter().filter_map(|r| r.satisfiable)),
            fraction_cell(chunk.iter().filter_map(|r| r.simple)),
            fraction_cell(chunk.iter().filter_map(|r| r.one_cycle_per_component)),
            fraction_cell(chunk.iter().filter_map(|r| r.prefix_is_matching)),
            fraction_cell(thetas.iter().map(|t| t.at_least_two_thirds())),
            theta_skipped,
            median_cell(chunk.iter().filter_map(|r| r.max_degree).collect()),
            median_cell(chunk.iter().filter_map(|r| r.tw_upper).collect()),
            median_cell(chunk.iter().filter_map(|r| r.mmw_linear_best).collect()),
            median_cell(chunk.iter().filter_map(|r| r.prefix_matching_size).collect()),
            match median_obdd_size(sizes) {
                None => NA.to_string(),
                Some(ObddSize::Blowup) => BLOWUP.to_string(),
                Some(ObddSize::Nodes(x)) => x.to_string(),
            },
            blowups,
            median_cell::<BigUint>(chunk.iter().filter_map(|r| r.cert_floor.clone()).collect()),
        ]);
    }
    csv_bytes(&SUMMARY_HEADER, rows)
}
