//! Batch operations behind the `hss` binary: validate, run, sweep, compare.
//!
//! This module is the only place that touches the filesystem. Output
//! directories hold the resolved config and seed next to the results so any
//! run can be re-executed from its own output.

use crate::burden::{dalys_averted, ComparisonError, DalysAverted};
use crate::config::{ConfigError, Lever, Scenario, ScenarioConfig};
use crate::engine::{run, EngineError, RunResult, RunSummary};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("incompatible runs: {0}")]
    Incompatible(#[from] ComparisonError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read run output {path}: {message}")]
    BadRunOutput { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) | CommandError::Usage(_) => EXIT_CONFIG,
            CommandError::Engine(EngineError::InvalidConfig(_)) => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CommandError {
    let context = context.into();
    move |source| CommandError::Io { context, source }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CommandError> {
    fs::write(path, contents).map_err(io_err(format!("writing {}", path.display())))
}

/// Loads and validates a scenario file.
pub fn cmd_validate(path: impl AsRef<Path>) -> Result<Scenario, CommandError> {
    let config = ScenarioConfig::load(path)?;
    config
        .validate()
        .map_err(|r| CommandError::Config(ConfigError::Invalid(r)))
}

pub fn dalys_csv(summary: &RunSummary) -> String {
    let mut s = String::from("year,cause,yld,yll,daly\n");
    for r in &summary.dalys {
        let _ = writeln!(s, "{},{},{},{},{}", r.year, r.cause, r.yld, r.yll, r.daly());
    }
    s
}

pub fn delivery_csv(result: &RunResult) -> String {
    let mut s = String::from("date,facility,delivered,deferred,expired,cancelled\n");
    for d in &result.stats.daily {
        let c = d.counts;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            d.date,
            result.facility_labels[d.facility.index()],
            c.delivered,
            c.deferred,
            c.expired,
            c.cancelled
        );
    }
    s
}

pub fn delivery_summary_csv(summary: &RunSummary) -> String {
    let mut s = String::from("facility,disease,delivered,deferred,expired,cancelled\n");
    for r in &summary.delivery_by_facility_disease {
        let c = r.counts;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.facility, r.disease, c.delivered, c.deferred, c.expired, c.cancelled
        );
    }
    s
}

/// Utilisation is left empty when minutes were used with none available.
pub fn utilization_csv(result: &RunResult) -> String {
    let mut s = String::from(
        "date,facility,cadre,initial_minutes,consumed_minutes,remaining_minutes,overdraw_minutes,utilization\n",
    );
    for r in &result.stats.utilization {
        let u = r.utilization().map(|u| u.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.date,
            result.facility_labels[r.facility.index()],
            result.cadre_names[r.cadre.index()],
            r.initial,
            r.consumed,
            r.remaining,
            r.overdraw,
            u
        );
    }
    s
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

/// Writes every artifact of one run into `dir`.
pub fn write_run(dir: &Path, scenario: &Scenario, result: &RunResult) -> Result<(), CommandError> {
    fs::create_dir_all(dir).map_err(io_err(format!("creating {}", dir.display())))?;
    write_file(&dir.join("config.json"), to_pretty_json(&scenario.config))?;
    write_file(&dir.join("seed.txt"), format!("{}\n", result.summary.master_seed))?;
    write_file(&dir.join("result.json"), to_pretty_json(&result.summary))?;
    write_file(&dir.join("dalys.csv"), dalys_csv(&result.summary))?;
    write_file(&dir.join("delivery.csv"), delivery_csv(result))?;
    write_file(&dir.join("delivery_summary.csv"), delivery_summary_csv(&result.summary))?;
    if scenario.config.output.utilization_csv {
        write_file(&dir.join("utilization.csv"), utilization_csv(result))?;
    }
    Ok(())
}

fn timestamped(prefix: &str) -> PathBuf {
    PathBuf::from("runs").join(format!("{prefix}-{}", chrono::Local::now().format("%Y%m%dT%H%M%S")))
}

/// Validates, runs and writes one scenario. Returns the output directory.
pub fn cmd_run(config_path: impl AsRef<Path>, seed: u64, out: Option<PathBuf>) -> Result<PathBuf, CommandError> {
    let scenario = cmd_validate(config_path)?;
    let result = run(&scenario, seed)?;
    let dir = out.unwrap_or_else(|| timestamped(&format!("run-s{seed}")));
    write_run(&dir, &scenario, &result)?;
    log::info!("run written to {}", dir.display());
    Ok(dir)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub lever: Lever,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub value: f64,
    pub seed: u64,
    pub total_dalys: f64,
    pub delivered: u64,
    pub deferred: u64,
    pub expired: u64,
    /// DALYs at the first lever value minus DALYs here, same seed.
    pub averted_vs_first: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregate {
    pub value: f64,
    pub runs: usize,
    pub mean_dalys: f64,
    pub sd_dalys: f64,
    pub mean_averted: f64,
    pub sd_averted: f64,
    pub mean_delivered: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub lever: Lever,
    pub cells: Vec<SweepCell>,
    pub aggregates: Vec<SweepAggregate>,
}

/// Mean and sample standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every (value, seed) cell. Cells run in parallel on up to `jobs`
/// threads; results come back ordered by (value position, seed).
pub fn sweep(config: &ScenarioConfig, spec: &SweepSpec) -> Result<SweepResult, CommandError> {
    if spec.values.is_empty() || spec.seeds.is_empty() {
        return Err(CommandError::Usage(
            "sweep needs at least one value and one seed".into(),
        ));
    }
    let scenarios = spec
        .values
        .iter()
        .map(|v| {
            config
                .with_lever(spec.lever, *v)
                .validate()
                .map_err(|r| CommandError::Config(ConfigError::Invalid(r)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, u64)> = (0..spec.values.len())
        .flat_map(|vi| spec.seeds.iter().map(move |s| (vi, *s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| CommandError::Usage(format!("cannot start worker pool: {e}")))?;
    let mut summaries: Vec<(usize, u64, RunSummary)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(vi, seed)| {
                log::info!("sweep cell {}={} seed={seed}", spec.lever, spec.values[vi]);
                run(&scenarios[vi], seed).map(|r| (vi, seed, r.summary))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    summaries.sort_by_key(|(vi, seed, _)| (*vi, *seed));

    let first = |seed: u64| {
        summaries
            .iter()
            .find(|(vi, s, _)| *vi == 0 && *s == seed)
            .map(|(_, _, r)| r)
            .expect("first value ran for every seed")
    };
    let mut cells = Vec::with_capacity(summaries.len());
    for (vi, seed, summary) in &summaries {
        let averted = dalys_averted(first(*seed), summary)?;
        cells.push(SweepCell {
            value: spec.values[*vi],
            seed: *seed,
            total_dalys: summary.total_dalys,
            delivered: summary.delivery_totals.delivered,
            deferred: summary.delivery_totals.deferred,
            expired: summary.delivery_totals.expired,
            averted_vs_first: averted.total,
        });
    }
    let aggregates = spec
        .values
        .iter()
        .enumerate()
        .map(|(vi, v)| {
            let these: Vec<&SweepCell> = cells
                .iter()
                .zip(&summaries)
                .filter(|(_, (i, _, _))| *i == vi)
                .map(|(c, _)| c)
                .collect();
            let dalys: Vec<f64> = these.iter().map(|c| c.total_dalys).collect();
            let averted: Vec<f64> = these.iter().map(|c| c.averted_vs_first).collect();
            let delivered: Vec<f64> = these.iter().map(|c| c.delivered as f64).collect();
            let (mean_dalys, sd_dalys) = mean_sd(&dalys);
            let (mean_averted, sd_averted) = mean_sd(&averted);
            SweepAggregate {
                value: *v,
                runs: these.len(),
                mean_dalys,
                sd_dalys,
                mean_averted,
                sd_averted,
                mean_delivered: mean_sd(&delivered).0,
            }
        })
        .collect();
    Ok(SweepResult {
        lever: spec.lever,
        cells,
        aggregates,
    })
}

pub fn sweep_cells_csv(result: &SweepResult) -> String {
    let mut s = String::from("lever,value,seed,total_dalys,delivered,deferred,expired,dalys_averted_vs_first\n");
    for c in &result.cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            result.lever, c.value, c.seed, c.total_dalys, c.delivered, c.deferred, c.expired, c.averted_vs_first
        );
    }
    s
}

pub fn sweep_summary_csv(result: &SweepResult) -> String {
    let mut s = String::from("lever,value,runs,mean_dalys,sd_dalys,mean_averted,sd_averted,mean_delivered\n");
    for a in &result.aggregates {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            result.lever, a.value, a.runs, a.mean_dalys, a.sd_dalys, a.mean_averted, a.sd_averted, a.mean_delivered
        );
    }
    s
}

pub fn cmd_sweep(
    config_path: impl AsRef<Path>,
    spec: &SweepSpec,
    out: Option<PathBuf>,
) -> Result<(PathBuf, SweepResult), CommandError> {
    let config = ScenarioConfig::load(config_path)?;
    config
        .validate()
        .map_err(|r| CommandError::Config(ConfigError::Invalid(r)))?;
    let result = sweep(&config, spec)?;
    let dir = out.unwrap_or_else(|| timestamped(&format!("sweep-{}", spec.lever)));
    fs::create_dir_all(&dir).map_err(io_err(format!("creating {}", dir.display())))?;
    write_file(&dir.join("config.json"), to_pretty_json(&config))?;
    write_file(&dir.join("sweep.json"), to_pretty_json(&(spec, &result)))?;
    write_file(&dir.join("sweep_cells.csv"), sweep_cells_csv(&result))?;
    write_file(&dir.join("sweep_summary.csv"), sweep_summary_csv(&result))?;
    Ok((dir, result))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub baseline: String,
    pub comparator: String,
    pub master_seed: u64,
    pub baseline_mode: u8,
    pub comparator_mode: u8,
    pub dalys_averted: DalysAverted,
    pub delivered_baseline: u64,
    pub delivered_comparator: u64,
}

impl ComparisonReport {
    pub fn to_text(&self) -> String {
        let a = &self.dalys_averted;
        let mut s = String::new();
        let _ = writeln!(s, "baseline:   {} (mode {})", self.baseline, self.baseline_mode);
        let _ = writeln!(s, "comparator: {} (mode {})", self.comparator, self.comparator_mode);
        let _ = writeln!(s, "seed:       {}", self.master_seed);
        let _ = writeln!(
            s,
            "total DALYs: baseline {:.3}, comparator {:.3}",
            a.baseline_total, a.comparator_total
        );
        match a.percent_of_baseline {
            Some(p) => {
                let _ = writeln!(s, "DALYs averted: {:.3} ({:.2}% of baseline)", a.total, p);
            }
            None => {
                let _ = writeln!(s, "DALYs averted: {:.3}", a.total);
            }
        }
        for (cause, v) in &a.per_cause {
            let _ = writeln!(s, "  {cause}: {v:.3}");
        }
        let _ = writeln!(
            s,
            "HSIs delivered: baseline {}, comparator {}",
            self.delivered_baseline, self.delivered_comparator
        );
        s
    }
}

pub fn load_summary(dir: &Path) -> Result<RunSummary, CommandError> {
    let path = dir.join("result.json");
    let text = fs::read_to_string(&path).map_err(|e| CommandError::BadRunOutput {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CommandError::BadRunOutput {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Compares two run output directories; `dir_a` is the baseline.
pub fn cmd_compare(dir_a: &Path, dir_b: &Path) -> Result<ComparisonReport, CommandError> {
    let a = load_summary(dir_a)?;
    let b = load_summary(dir_b)?;
    let averted = dalys_averted(&a, &b)?;
    Ok(ComparisonReport {
        baseline: dir_a.display().to_string(),
        comparator: dir_b.display().to_string(),
        master_seed: a.master_seed,
        baseline_mode: a.mode.number(),
        comparator_mode: b.mode.number(),
        dalys_averted: averted,
        delivered_baseline: a.delivery_totals.delivered,
        delivered_comparator: b.delivery_totals.delivered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_sd_basic() {
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_sd(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn exit_codes() {
        let usage = CommandError::Usage("x".into());
        assert_eq!(usage.exit_code(), EXIT_CONFIG);
        let incompatible = CommandError::Incompatible(ComparisonError::SeedMismatch(1, 2));
        assert_eq!(incompatible.exit_code(), EXIT_RUNTIME);
    }
}
