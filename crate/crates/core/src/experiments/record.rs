use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONFIG_SCHEMA: u32 = 1;

/// Law of the number of children in the coalescence process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZLaw {
    /// Poisson with rate `z_mean`, conditioned on `Z ≤ cap`.
    TruncatedPoisson { cap: usize },
    /// `P(Z = k) = (1 - q) q^k` with mean `z_mean`.
    Geometric,
}

/// Pre-registered acceptance gate on a summary scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateResult {
    pub gate: Gate,
    pub value: Option<f64>,
    pub pass: bool,
}

/// Versioned experiment configuration, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub name: String,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(rename = "N", default = "default_n_param")]
    pub n_param: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Kernel size for `kernel_expansion`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_k: Option<usize>,
    /// Use the `d`-regular degree sequence instead of sampled kernel degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular_degree: Option<usize>,
    /// Marked fraction for `coalesce`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_law: Option<ZLaw>,
    /// Mean initial component size for `coalesce`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_mean: Option<f64>,
    #[serde(default = "default_rate_min")]
    pub rate_min: f64,
    #[serde(default)]
    pub gates: Vec<Gate>,
}

fn default_c() -> f64 {
    2.0
}
fn default_n_param() -> usize {
    32
}
fn default_alpha() -> f64 {
    0.01
}
fn default_rate_min() -> f64 {
    crate::decompose::DEFAULT_RATE_MIN
}

impl ExperimentConfig {
    pub fn new(name: &str, sizes: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            schema: CONFIG_SCHEMA,
            name: name.to_string(),
            c: default_c(),
            sizes,
            n_param: default_n_param(),
            alpha: default_alpha(),
            eps: None,
            trials,
            seed,
            output: None,
            n_k: None,
            m_k: None,
            regular_degree: None,
            delta: None,
            z_mean: None,
            z_law: None,
            initial_mean: None,
            rate_min: default_rate_min(),
            gates: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.schema != CONFIG_SCHEMA {
            return bad(format!("unsupported config schema {}", self.schema));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sizes must be strictly increasing".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if let Some(eps) = self.eps {
            if !(eps > 0.0 && eps < 2.0) {
                return bad(format!("eps must lie in (0, 2), got {eps}"));
            }
        }
        if !self.c.is_finite() || self.c < 0.0 {
            return bad(format!("c must be finite and nonnegative, got {}", self.c));
        }
        Ok(())
    }
}

/// Measurements of one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub size: usize,
    pub trial: usize,
    pub seed: u64,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Summary of one metric at one size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub size: usize,
    pub metric: String,
    pub count: usize,
    pub mean: f64,
    pub stddev: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
    /// Derived scalars (ratio tables, pass fractions, reference values).
    pub scalars: BTreeMap<String, f64>,
    pub gates: Vec<GateResult>,
    pub wall_clock_seconds: f64,
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

/// Per-size statistics of every metric that appears in `trials`; non-finite
/// values are skipped.
pub fn summarize(trials: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, &str), Vec<f64>> = BTreeMap::new();
    for t in trials {
        for (k, &v) in &t.values {
            if v.is_finite() {
                groups.entry((t.size, k.as_str())).or_default().push(v);
            }
        }
    }
    groups
        .into_iter()
        .map(|((size, metric), mut xs)| {
            xs.sort_by(f64::total_cmp);
            let count = xs.len();
            let mean = xs.iter().sum::<f64>() / count as f64;
            let var = if count > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
            } else {
                0.0
            };
            SummaryRow {
                size,
                metric: metric.to_string(),
                count,
                mean,
                stddev: var.sqrt(),
                median: median(&xs),
                min: xs[0],
                max: xs[count - 1],
            }
        })
        .collect()
}

impl RunRecord {
    pub fn row(&self, size: usize, metric: &str) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.size == size && r.metric == metric)
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars.get(name).copied()
    }

    pub fn passed_gates(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }

    pub(crate) fn evaluate_gates(&mut self) {
        self.gates = self
            .config
            .gates
            .iter()
            .map(|gate| {
                let value = self.scalars.get(&gate.metric).copied();
                let pass = value.is_some_and(|v| {
                    gate.min.is_none_or(|lo| v >= lo) && gate.max.is_none_or(|hi| v <= hi)
                });
                GateResult {
                    gate: gate.clone(),
                    value,
                    pass,
                }
            })
            .collect();
    }

    /// The record without its wall-clock field, for determinism comparisons.
    pub fn to_json_without_clock(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_clock_seconds");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Columns `size,metric,count,mean,stddev,median,min,max`, then one
    /// `scalar,<name>,,<value>,,,,` line per derived scalar.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,metric,count,mean,stddev,median,min,max\n");
        for r in &self.summary {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.size, r.metric, r.count, r.mean, r.stddev, r.median, r.min, r.max
            );
        }
        for (k, v) in &self.scalars {
            let _ = writeln!(out, "scalar,{k},,{v},,,,");
        }
        out
    }

    /// Writes `<stem>.json` and `<stem>.csv`.
    pub fn write(&self, stem: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
        let stem = stem.as_ref();
        if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let json = stem.with_extension("json");
        let csv = stem.with_extension("csv");
        std::fs::write(&json, self.to_json()?)?;
        std::fs::write(&csv, self.to_csv())?;
        Ok((json, csv))
    }
}
