//! Noise sweeps: independent trials over `(noise value, repetition, method)`
//! run on a bounded worker pool, written in canonical order so the output is
//! a function of the configuration alone.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use specmatch_core::diagnostics::dominance_report;
use specmatch_core::models::{gen_er_pair, gen_gaussian_pair, noise_params, ModelKind};
use specmatch_core::rounding::overlap;
use specmatch_core::similarity::Method;
use specmatch_core::CorrelatedPair;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::pipeline::{similarity, Rounder};

pub const WORKERS_ENV: &str = "SPECMATCH_WORKERS";

pub const CSV_HEADER: [&str; 17] = [
    "method",
    "rounder",
    "n",
    "p",
    "noise",
    "sigma_emp",
    "eta",
    "rep",
    "seed",
    "overlap",
    "min_true",
    "max_off",
    "margin",
    "diag_rel_err",
    "separated",
    "runtime_ms",
    "summary",
];

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub method: Method,
    pub rounder: Rounder,
    pub n: usize,
    pub p: Option<f64>,
    /// `s` for Erdős–Rényi, `σ` for Gaussian.
    pub noise: f64,
    pub sigma_emp: f64,
    pub eta: f64,
    pub rep: usize,
    pub seed: u64,
    pub overlap: f64,
    pub min_true: f64,
    pub max_off: f64,
    pub margin: f64,
    pub diag_rel_err: f64,
    pub separated: bool,
    /// Wall-clock time of similarity plus rounding; 0 unless timing is on.
    pub runtime_ms: u64,
}

impl TrialRecord {
    fn csv_row(&self) -> Vec<String> {
        vec![
            self.method.to_string(),
            self.rounder.to_string(),
            self.n.to_string(),
            opt(self.p),
            self.noise.to_string(),
            self.sigma_emp.to_string(),
            self.eta.to_string(),
            self.rep.to_string(),
            self.seed.to_string(),
            self.overlap.to_string(),
            self.min_true.to_string(),
            self.max_off.to_string(),
            self.margin.to_string(),
            self.diag_rel_err.to_string(),
            u8::from(self.separated).to_string(),
            self.runtime_ms.to_string(),
            "0".into(),
        ]
    }
}

/// Mean and sample standard deviation of the overlap for one
/// `(noise, method, rounder)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub rounder: Rounder,
    pub n: usize,
    pub p: Option<f64>,
    pub noise: f64,
    pub sigma_emp: f64,
    pub eta: f64,
    pub mean_overlap: f64,
    pub std_overlap: f64,
}

impl SummaryRow {
    fn csv_row(&self) -> Vec<String> {
        let mut row = vec![
            self.method.to_string(),
            self.rounder.to_string(),
            self.n.to_string(),
            opt(self.p),
            self.noise.to_string(),
            self.sigma_emp.to_string(),
            self.eta.to_string(),
            "-1".into(),
            String::new(),
            self.mean_overlap.to_string(),
            self.std_overlap.to_string(),
        ];
        row.extend(std::iter::repeat_n(String::new(), 5));
        row.push("1".into());
        row
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub trials: Vec<TrialRecord>,
    pub summaries: Vec<SummaryRow>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    /// Worker count requested on the command line.
    pub workers: Option<usize>,
    /// Record measured runtimes; makes the CSV run-dependent.
    pub timing: bool,
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: `base_seed` XOR a splitmix hash of the trial coordinates.
pub fn trial_seed(base_seed: u64, noise_idx: usize, rep: usize, method_idx: usize) -> u64 {
    let mut h = splitmix64(noise_idx as u64);
    h = splitmix64(h ^ rep as u64);
    h = splitmix64(h ^ method_idx as u64);
    base_seed ^ h
}

/// Worker count: environment override, then command line, then config, then
/// the number of available cores.
pub fn resolve_workers(cfg: &ExperimentConfig, requested: Option<usize>) -> CliResult<usize> {
    if let Ok(text) = std::env::var(WORKERS_ENV) {
        return match text.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(CliError::Config(format!(
                "{WORKERS_ENV} = `{text}` is not a positive integer"
            ))),
        };
    }
    Ok(requested
        .or(cfg.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

fn sigma_emp_for(cfg: &ExperimentConfig, noise: f64) -> f64 {
    match (cfg.model, cfg.p) {
        (ModelKind::ErdosRenyi, Some(p)) => noise_params(cfg.n, p, noise).sigma_emp,
        _ => noise,
    }
}

fn generate(cfg: &ExperimentConfig, noise: f64, seed: u64) -> CliResult<CorrelatedPair> {
    Ok(match cfg.model {
        ModelKind::ErdosRenyi => {
            let p = cfg
                .p
                .ok_or_else(|| CliError::Config("p is required".into()))?;
            gen_er_pair(cfg.n, p, noise, seed, cfg.truth_mode)?
        }
        ModelKind::Gaussian => gen_gaussian_pair(cfg.n, noise, seed, cfg.truth_mode)?,
    })
}

/// Runs one `(noise, rep, method)` trial; returns one record per rounder.
pub fn run_trial(
    cfg: &ExperimentConfig,
    noise_idx: usize,
    rep: usize,
    method_idx: usize,
    timing: bool,
) -> CliResult<Vec<TrialRecord>> {
    let noise = cfg.noise_grid[noise_idx];
    let method = cfg.methods[method_idx];
    let seed = trial_seed(cfg.base_seed, noise_idx, rep, method_idx);
    let pair = generate(cfg, noise, seed)?;

    let start = Instant::now();
    let x = similarity(method, &pair.a, &pair.b, cfg.eta)?;
    let build_ms = start.elapsed().as_millis() as u64;
    let report = dominance_report(&x, &pair.truth, pair.sigma_emp, method.is_row_constrained())?;

    let mut out = Vec::with_capacity(cfg.rounders.len());
    for &rounder in &cfg.rounders {
        let start = Instant::now();
        let matching = rounder.round(x.entries())?;
        let round_ms = start.elapsed().as_millis() as u64;
        out.push(TrialRecord {
            method,
            rounder,
            n: cfg.n,
            p: cfg.p,
            noise,
            sigma_emp: pair.sigma_emp,
            eta: cfg.eta,
            rep,
            seed,
            overlap: overlap(&matching, &pair.truth)?,
            min_true: report.min_true,
            max_off: report.max_off,
            margin: report.margin,
            diag_rel_err: report.diag_rel_err,
            separated: report.separated,
            runtime_ms: if timing { build_ms + round_ms } else { 0 },
        });
    }
    Ok(out)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn summarize(cfg: &ExperimentConfig, trials: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for &noise in &cfg.noise_grid {
        for &method in &cfg.methods {
            for &rounder in &cfg.rounders {
                let values: Vec<f64> = trials
                    .iter()
                    .filter(|t| t.noise == noise && t.method == method && t.rounder == rounder)
                    .map(|t| t.overlap)
                    .collect();
                if values.is_empty() {
                    continue;
                }
                let (mean, std) = mean_std(&values);
                rows.push(SummaryRow {
                    method,
                    rounder,
                    n: cfg.n,
                    p: cfg.p,
                    noise,
                    sigma_emp: sigma_emp_for(cfg, noise),
                    eta: cfg.eta,
                    mean_overlap: mean,
                    std_overlap: std,
                });
            }
        }
    }
    rows
}

/// Runs the full sweep, streaming CSV rows to `out` in canonical
/// `(noise, rep, method, rounder)` order. Rows are flushed after every batch
/// of trials, so an interrupted sweep leaves a valid prefix behind.
pub fn run_sweep<W: Write>(
    cfg: &ExperimentConfig,
    opts: SweepOptions,
    out: W,
) -> CliResult<SweepOutcome> {
    cfg.validate()?;
    let workers = resolve_workers(cfg, opts.workers)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;

    let mut tasks = Vec::new();
    for noise_idx in 0..cfg.noise_grid.len() {
        for rep in 0..cfg.reps {
            for method_idx in 0..cfg.methods.len() {
                tasks.push((noise_idx, rep, method_idx));
            }
        }
    }

    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    writer.flush().map_err(|e| CliError::io("<csv>", e))?;

    let mut trials = Vec::with_capacity(tasks.len() * cfg.rounders.len());
    for batch in tasks.chunks(workers) {
        let results: Vec<CliResult<Vec<TrialRecord>>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(ni, rep, mi)| run_trial(cfg, ni, rep, mi, opts.timing))
                .collect()
        });
        for result in results {
            for record in result? {
                writer.write_record(record.csv_row())?;
                trials.push(record);
            }
        }
        writer.flush().map_err(|e| CliError::io("<csv>", e))?;
    }

    let summaries = summarize(cfg, &trials);
    for row in &summaries {
        writer.write_record(row.csv_row())?;
    }
    writer.flush().map_err(|e| CliError::io("<csv>", e))?;
    Ok(SweepOutcome { trials, summaries })
}

/// Writes one `noise mean_overlap` file per `(method, rounder)` into `dir`.
pub fn write_plot_data(dir: &Path, summaries: &[SummaryRow]) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files: Vec<(String, String)> = Vec::new();
    for row in summaries {
        let name = format!("{}_{}.dat", row.method, row.rounder);
        let line = format!("{} {}\n", row.noise, row.mean_overlap);
        match files.iter_mut().find(|(n, _)| *n == name) {
            Some((_, body)) => body.push_str(&line),
            None => files.push((name, format!("# noise mean_overlap\n{line}"))),
        }
    }
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
