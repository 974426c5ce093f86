//! Experiment configuration: a JSON object or flat `key = value` lines with
//! exactly the fields of [`ExperimentConfig`]; unknown keys are rejected.

use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};
use specmatch_core::models::{ModelKind, TruthMode};
use specmatch_core::similarity::Method;

use crate::error::{CliError, CliResult};
use crate::pipeline::Rounder;

pub const DEFAULT_ETA: f64 = 0.2;
pub const DEFAULT_REPS: usize = 10;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: usize,
    p: Option<f64>,
    noise_grid: Vec<f64>,
    model: Option<String>,
    eta: Option<f64>,
    methods: Option<Vec<String>>,
    rounders: Option<Vec<String>>,
    reps: Option<usize>,
    base_seed: Option<u64>,
    truth_mode: Option<String>,
    workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Edge density; `None` for the Gaussian model.
    pub p: Option<f64>,
    /// Retention probabilities `s` (Erdős–Rényi) or noise levels `σ` (Gaussian).
    pub noise_grid: Vec<f64>,
    pub model: ModelKind,
    pub eta: f64,
    pub methods: Vec<Method>,
    pub rounders: Vec<Rounder>,
    pub reps: usize,
    pub base_seed: u64,
    pub truth_mode: TruthMode,
    /// `None` means one worker per available core.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let value = if text.trim_start().starts_with('{') {
            serde_json::from_str::<Value>(text).map_err(|e| CliError::Config(e.to_string()))?
        } else {
            parse_key_values(text)?
        };
        let raw: RawConfig =
            serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> CliResult<Self> {
        let model = match raw.model {
            Some(m) => m.parse().map_err(config_err)?,
            None => ModelKind::ErdosRenyi,
        };
        let methods = match raw.methods {
            Some(list) => list
                .iter()
                .map(|m| m.parse::<Method>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(config_err)?,
            None => vec![Method::Grampa, Method::RowQp],
        };
        let rounders = match raw.rounders {
            Some(list) => list
                .iter()
                .map(|r| r.parse::<Rounder>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(config_err)?,
            None => vec![Rounder::Lap],
        };
        let truth_mode = match raw.truth_mode {
            Some(t) => t.parse().map_err(config_err)?,
            None => TruthMode::Random,
        };
        let cfg = Self {
            n: raw.n,
            p: raw.p,
            noise_grid: raw.noise_grid,
            model,
            eta: raw.eta.unwrap_or(DEFAULT_ETA),
            methods,
            rounders,
            reps: raw.reps.unwrap_or(DEFAULT_REPS),
            base_seed: raw.base_seed.unwrap_or(0),
            truth_mode,
            workers: raw.workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n < 2 {
            return bad(format!("n = {} must be at least 2", self.n));
        }
        if self.noise_grid.is_empty() {
            return bad("noise_grid must not be empty".into());
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad(format!("eta = {} must be positive", self.eta));
        }
        if self.methods.is_empty() || self.rounders.is_empty() {
            return bad("methods and rounders must not be empty".into());
        }
        if let Some(m) = self
            .methods
            .iter()
            .find(|m| !matches!(m, Method::Grampa | Method::RowQp))
        {
            return bad(format!("method `{m}` is not available in sweeps"));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        match self.model {
            ModelKind::ErdosRenyi => {
                let Some(p) = self.p else {
                    return bad("p is required for the erdos_renyi model".into());
                };
                if !(p > 0.0 && p < 1.0) {
                    return bad(format!("p = {p} must lie in (0, 1)"));
                }
                for &s in &self.noise_grid {
                    // s < p would make the correlation deficit exceed 1.
                    if !(s >= p && s <= 1.0) {
                        return bad(format!("retention s = {s} must lie in [p, 1]"));
                    }
                }
            }
            ModelKind::Gaussian => {
                if self.p.is_some() {
                    return bad("p does not apply to the gaussian model".into());
                }
                for &sigma in &self.noise_grid {
                    if !(0.0..=1.0).contains(&sigma) {
                        return bad(format!("sigma = {sigma} must lie in [0, 1]"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn config_err(e: specmatch_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

const LIST_KEYS: [&str; 3] = ["noise_grid", "methods", "rounders"];

/// `key = value` lines; `#` starts a comment. Values are read as JSON when
/// possible and as bare strings otherwise; list fields also accept
/// comma-separated values.
fn parse_key_values(text: &str) -> CliResult<Value> {
    let mut map = Map::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {}: expected key = value",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let parsed = if LIST_KEYS.contains(&key) && !value.starts_with('[') {
            Value::Array(value.split(',').map(|v| scalar(v.trim())).collect())
        } else {
            scalar(value)
        };
        if map.insert(key.to_string(), parsed).is_some() {
            return Err(CliError::Config(format!("duplicate key `{key}`")));
        }
    }
    Ok(Value::Object(map))
}

fn scalar(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()))
}
