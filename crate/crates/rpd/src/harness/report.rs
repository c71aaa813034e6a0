//! Evaluation reports: a JSON-shaped container for AUC tables, score
//! histograms, confusion matrices, grid sweeps, and theory-check tables,
//! with a flat CSV export for plotting.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucRow {
    pub m: usize,
    pub d: usize,
    pub seed: u64,
    pub class: usize,
    pub method: String,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucSummary {
    pub class: usize,
    pub method: String,
    pub mean_auc: f64,
    pub var_auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionSummary {
    pub labels: Vec<usize>,
    /// Mean confusion coefficients over seeds, indexed like `labels`;
    /// diagonal entries are zero.
    pub mean_coefficients: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges; the first is the lower bound, the last the upper.
    pub edges: Vec<f64>,
    /// `bins` counts; they sum to the population size.
    pub counts: Vec<u64>,
}

/// Fixed-width histogram over `[lo, hi]`. Values at the upper edge fall in
/// the last bin, so the counts always sum to `values.len()`.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Histogram {
    assert!(bins >= 1, "histogram needs at least one bin");
    assert!(hi > lo, "histogram range must be nonempty");
    let edges: Vec<f64> = (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect();
    let mut counts = vec![0u64; bins];
    let width = (hi - lo) / bins as f64;
    for &v in values {
        let idx = ((v - lo) / width).floor();
        let idx = if idx < 0.0 {
            0
        } else if idx >= bins as f64 {
            bins - 1
        } else {
            idx as usize
        };
        counts[idx] += 1;
    }
    Histogram { edges, counts }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationHistogram {
    pub population: String,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreStats {
    pub population: String,
    pub seed: u64,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub m: usize,
    pub d: usize,
    pub seed: u64,
    pub class: usize,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub m: usize,
    pub d: usize,
    pub mean_auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCountRow {
    pub m: usize,
    pub seed: u64,
    pub vertices: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycenterRow {
    pub trial: u64,
    pub samples: usize,
    pub error_norm: f64,
    pub success: bool,
}

/// Wall-clock timings in seconds. These are the only fields that change
/// between identical runs, and they are kept apart from the data so that
/// byte comparisons can strip them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub fit_seconds: f64,
    pub score_seconds: f64,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: String,
    /// Full configuration echo (seeds included): every number in the report
    /// is reproducible from it.
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub auc_rows: Vec<AucRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub auc_summary: Vec<AucSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confusion: Option<ConfusionSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub histograms: Vec<PopulationHistogram>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub score_stats: Vec<ScoreStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid_rows: Vec<GridRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid_summary: Vec<GridCell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertex_counts: Vec<VertexCountRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub barycenter_trials: Vec<BarycenterRow>,
    pub timings: Timings,
}

impl EvalReport {
    pub fn new(protocol: impl Into<String>, config: serde_json::Value) -> Self {
        EvalReport {
            protocol: protocol.into(),
            config,
            auc_rows: Vec::new(),
            auc_summary: Vec::new(),
            confusion: None,
            histograms: Vec::new(),
            score_stats: Vec::new(),
            grid_rows: Vec::new(),
            grid_summary: Vec::new(),
            vertex_counts: Vec::new(),
            barycenter_trials: Vec::new(),
            timings: Timings::default(),
        }
    }

    /// JSON bytes with floats at 17 significant digits; identical runs
    /// produce identical bytes except for the `timings` field.
    pub fn to_json(&self) -> Vec<u8> {
        crate::json::to_vec_17(self)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, HarnessError> {
        serde_json::from_slice(bytes).map_err(|e| HarnessError::Parse(e.to_string()))
    }

    /// Flat CSV of the report's main table. Grid sweeps export
    /// `m,d,seed,class,auc`; AUC protocols add a method column; the theory
    /// checks and score statistics export their own row shapes.
    pub fn to_flat_csv(&self) -> String {
        let mut out = String::new();
        if !self.grid_rows.is_empty() {
            out.push_str("m,d,seed,class,auc\n");
            for r in &self.grid_rows {
                let _ = writeln!(out, "{},{},{},{},{}", r.m, r.d, r.seed, r.class, r.auc);
            }
        } else if !self.auc_rows.is_empty() {
            out.push_str("m,d,seed,class,method,auc\n");
            for r in &self.auc_rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.m, r.d, r.seed, r.class, r.method, r.auc
                );
            }
        } else if !self.vertex_counts.is_empty() {
            out.push_str("m,seed,vertices,ratio\n");
            for r in &self.vertex_counts {
                let _ = writeln!(out, "{},{},{},{}", r.m, r.seed, r.vertices, r.ratio);
            }
        } else if !self.barycenter_trials.is_empty() {
            out.push_str("trial,samples,error_norm,success\n");
            for r in &self.barycenter_trials {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.trial, r.samples, r.error_norm, r.success
                );
            }
        } else if !self.score_stats.is_empty() {
            out.push_str("population,seed,count,mean,variance\n");
            for r in &self.score_stats {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.population, r.seed, r.count, r.mean, r.variance
                );
            }
        }
        out
    }
}

/// Mean and population variance of a slice.
pub(crate) fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, variance)
}
