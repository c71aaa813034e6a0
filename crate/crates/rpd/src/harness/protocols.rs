//! The evaluation protocols: per-class separation against the
//! nearest-centroid baseline, anomaly detection on contaminated training
//! data, the (m, d) sensitivity grid, out-of-distribution scoring, and the
//! two theory checks (vertex counts, vertex-barycenter concentration).
//!
//! Runs are deterministic: all per-job randomness is derived from the
//! configured seeds, and parallel reductions preserve job order.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use super::report::{
    histogram, mean_and_variance, AucRow, AucSummary, BarycenterRow, ConfusionSummary,
    EvalReport, GridCell, GridRow, PopulationHistogram, ScoreStats, Timings, VertexCountRow,
};
use super::{contaminate, gen_gaussian_mixture, gen_sphere_uniform, HarnessError, MixtureComponent};
use crate::baselines::{auroc, fit_centroids};
use crate::data::LabeledDataset;
use crate::descriptor::{
    confusion_coefficient, fit_descriptor, fit_model, score, FitConfig, RpdModel,
};
use crate::geometry::{fit_rpd, CentralPointPolicy, DirectionSet, HPolytope};
use crate::linalg::distance;
use crate::lp::{enumerate_vertices, vertex_barycenter_estimate, DEFAULT_ENUMERATION_GUARD};
use crate::rng::derive_seed;

// Salt for the contamination draw inside one anomaly-detection run; the
// descriptor fit derives its own seeds from the same per-run seed.
const CONTAMINATION_SALT: u64 = 101;

fn policy_name(policy: CentralPointPolicy) -> String {
    policy.to_string()
}

/// Scaling distances from one polytope to every point of a dataset,
/// parallel over points with order preserved.
fn batch_scaling_distances(
    polytope: &HPolytope,
    data: &LabeledDataset,
) -> Result<Vec<f64>, HarnessError> {
    (0..data.len())
        .into_par_iter()
        .map(|i| {
            polytope
                .scaling_distance(data.point(i))
                .map_err(HarnessError::from)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Class separation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SeparationConfig {
    pub m: usize,
    pub ell: usize,
    pub policy: CentralPointPolicy,
    pub seeds: Vec<u64>,
    pub barycenter_samples: usize,
    /// Containment tolerance used for the confusion-coefficient matrix.
    pub tol: f64,
}

impl SeparationConfig {
    pub fn new(m: usize, ell: usize, policy: CentralPointPolicy, seeds: Vec<u64>) -> Self {
        SeparationConfig {
            m,
            ell,
            policy,
            seeds,
            barycenter_samples: 100,
            tol: crate::geometry::DEFAULT_CONTAINMENT_TOL,
        }
    }
}

/// For every class: fit its polytope (and the centroid baseline) on the
/// training split, score the whole test split, and report AUCs with
/// positives = points of the other classes. Also reports the mean
/// train-side confusion-coefficient matrix over seeds.
pub fn run_class_separation(
    train: &LabeledDataset,
    test: &LabeledDataset,
    cfg: &SeparationConfig,
) -> Result<EvalReport, HarnessError> {
    if train.dim() != test.dim() {
        return Err(HarnessError::InvalidArgument(format!(
            "train dimension {} does not match test dimension {}",
            train.dim(),
            test.dim()
        )));
    }
    if cfg.seeds.is_empty() {
        return Err(HarnessError::InvalidArgument("no seeds given".into()));
    }
    let total_timer = Instant::now();
    let d = train.dim();
    let labels = train.class_labels();
    let config = json!({
        "m": cfg.m,
        "d": d,
        "ell": cfg.ell,
        "policy": policy_name(cfg.policy),
        "seeds": cfg.seeds,
        "barycenter_samples": cfg.barycenter_samples,
        "tol": cfg.tol,
        "n_train": train.len(),
        "n_test": test.len(),
        "classes": labels,
        "train_source": train.source(),
        "test_source": test.source(),
    });
    let mut report = EvalReport::new("separation", config);

    let centroid_model = fit_centroids(train)?;
    let mut fit_seconds = 0.0;
    let mut score_seconds = 0.0;
    let mut confusion_acc = vec![vec![0.0f64; labels.len()]; labels.len()];
    for &seed in &cfg.seeds {
        let fit_timer = Instant::now();
        let model = fit_model(
            train,
            &FitConfig {
                m: cfg.m,
                ell: cfg.ell,
                policy: cfg.policy,
                seed,
                shared_directions: false,
                barycenter_samples: cfg.barycenter_samples,
            },
        )?;
        fit_seconds += fit_timer.elapsed().as_secs_f64();

        let score_timer = Instant::now();
        for class in model.classes() {
            let label = class.label();
            let positives: Vec<bool> = (0..test.len()).map(|i| test.label(i) != label).collect();
            let rpd_scores = batch_scaling_distances(class.polytope(), test)?;
            let rpd_auc = auroc(&rpd_scores, &positives)?;
            report.auc_rows.push(AucRow {
                m: cfg.m,
                d,
                seed,
                class: label,
                method: "rpd".into(),
                auc: rpd_auc,
            });
            let mean = centroid_model.mean_of(label).ok_or_else(|| {
                HarnessError::InvalidArgument(format!("class {label} missing from baseline"))
            })?;
            let centroid_scores: Vec<f64> = (0..test.len())
                .into_par_iter()
                .map(|i| distance(test.point(i), mean))
                .collect();
            let centroid_auc = auroc(&centroid_scores, &positives)?;
            report.auc_rows.push(AucRow {
                m: cfg.m,
                d,
                seed,
                class: label,
                method: "centroid".into(),
                auc: centroid_auc,
            });
        }
        for (a, &la) in labels.iter().enumerate() {
            for (b, &lb) in labels.iter().enumerate() {
                if a < b {
                    let gamma = confusion_coefficient(&model, train, la, lb, cfg.tol)?;
                    confusion_acc[a][b] += gamma;
                    confusion_acc[b][a] += gamma;
                }
            }
        }
        score_seconds += score_timer.elapsed().as_secs_f64();
    }
    for row in &mut confusion_acc {
        for v in row.iter_mut() {
            *v /= cfg.seeds.len() as f64;
        }
    }
    report.confusion = Some(ConfusionSummary {
        labels: labels.clone(),
        mean_coefficients: confusion_acc,
    });
    for &label in &labels {
        for method in ["rpd", "centroid"] {
            let values: Vec<f64> = report
                .auc_rows
                .iter()
                .filter(|r| r.class == label && r.method == method)
                .map(|r| r.auc)
                .collect();
            let (mean_auc, var_auc) = mean_and_variance(&values);
            report.auc_summary.push(AucSummary {
                class: label,
                method: method.into(),
                mean_auc,
                var_auc,
            });
        }
    }
    report.timings = Timings {
        fit_seconds,
        score_seconds,
        total_seconds: total_timer.elapsed().as_secs_f64(),
    };
    Ok(report)
}

// ---------------------------------------------------------------------------
// Anomaly detection on contaminated training data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AnomalyConfig {
    pub target_class: usize,
    /// Contamination level: `floor(p * n_k)` points from the other classes
    /// join the training cloud.
    pub p: f64,
    pub m: usize,
    pub ell: usize,
    pub policy: CentralPointPolicy,
    pub seeds: Vec<u64>,
    pub barycenter_samples: usize,
}

impl AnomalyConfig {
    /// The protocol defaults: `p = 0.02`, `ell = 2`.
    pub fn new(target_class: usize, m: usize, seeds: Vec<u64>) -> Self {
        AnomalyConfig {
            target_class,
            p: 0.02,
            m,
            ell: 2,
            policy: CentralPointPolicy::SampleMean,
            seeds,
            barycenter_samples: 100,
        }
    }
}

/// One contaminated-training anomaly run: contaminate the target class,
/// fit a single-class descriptor, score the full test split, and return
/// the AUC with positives = test points of other classes.
#[allow(clippy::too_many_arguments)]
pub fn anomaly_auc(
    train: &LabeledDataset,
    test: &LabeledDataset,
    target_class: usize,
    p: f64,
    m: usize,
    ell: usize,
    policy: CentralPointPolicy,
    barycenter_samples: usize,
    seed: u64,
) -> Result<f64, HarnessError> {
    let contaminated = contaminate(train, target_class, p, derive_seed(seed, CONTAMINATION_SALT))?;
    let class = fit_descriptor(
        &contaminated,
        &FitConfig {
            m,
            ell,
            policy,
            seed,
            shared_directions: false,
            barycenter_samples,
        },
    )?;
    let scores = batch_scaling_distances(class.polytope(), test)?;
    let positives: Vec<bool> = (0..test.len())
        .map(|i| test.label(i) != target_class)
        .collect();
    Ok(auroc(&scores, &positives)?)
}

pub fn run_anomaly_detection(
    train: &LabeledDataset,
    test: &LabeledDataset,
    cfg: &AnomalyConfig,
) -> Result<EvalReport, HarnessError> {
    if train.dim() != test.dim() {
        return Err(HarnessError::InvalidArgument(format!(
            "train dimension {} does not match test dimension {}",
            train.dim(),
            test.dim()
        )));
    }
    if cfg.seeds.is_empty() {
        return Err(HarnessError::InvalidArgument("no seeds given".into()));
    }
    let total_timer = Instant::now();
    let d = train.dim();
    let config = json!({
        "target_class": cfg.target_class,
        "p": cfg.p,
        "m": cfg.m,
        "d": d,
        "ell": cfg.ell,
        "policy": policy_name(cfg.policy),
        "seeds": cfg.seeds,
        "barycenter_samples": cfg.barycenter_samples,
        "n_train": train.len(),
        "n_test": test.len(),
        "train_source": train.source(),
        "test_source": test.source(),
    });
    let mut report = EvalReport::new("anomaly", config);
    for &seed in &cfg.seeds {
        let auc = anomaly_auc(
            train,
            test,
            cfg.target_class,
            cfg.p,
            cfg.m,
            cfg.ell,
            cfg.policy,
            cfg.barycenter_samples,
            seed,
        )?;
        report.auc_rows.push(AucRow {
            m: cfg.m,
            d,
            seed,
            class: cfg.target_class,
            method: "rpd".into(),
            auc,
        });
    }
    let values: Vec<f64> = report.auc_rows.iter().map(|r| r.auc).collect();
    let (mean_auc, var_auc) = mean_and_variance(&values);
    report.auc_summary.push(AucSummary {
        class: cfg.target_class,
        method: "rpd".into(),
        mean_auc,
        var_auc,
    });
    report.timings = Timings {
        fit_seconds: 0.0,
        score_seconds: 0.0,
        total_seconds: total_timer.elapsed().as_secs_f64(),
    };
    Ok(report)
}

// ---------------------------------------------------------------------------
// Sensitivity grid
// ---------------------------------------------------------------------------

/// One train/test pair for a grid column; the dimension is implied by the
/// datasets.
#[derive(Debug, Clone)]
pub struct GridDatasets {
    pub train: LabeledDataset,
    pub test: LabeledDataset,
}

#[derive(Debug, Clone)]
pub struct GridConfig {
    pub p: f64,
    pub ell: usize,
    pub m_values: Vec<usize>,
    pub policy: CentralPointPolicy,
    pub seeds: Vec<u64>,
    pub barycenter_samples: usize,
}

impl GridConfig {
    /// Protocol defaults: `p = 0.02`, `ell = 2`, `m` doubling over
    /// `160..=1280`.
    pub fn new(seeds: Vec<u64>) -> Self {
        GridConfig {
            p: 0.02,
            ell: 2,
            m_values: vec![160, 320, 640, 1280],
            policy: CentralPointPolicy::SampleMean,
            seeds,
            barycenter_samples: 100,
        }
    }
}

/// Runs the contaminated anomaly protocol at every `(m, d)` grid point, for
/// every class and seed, and reports per-cell mean AUCs. A one-point grid
/// reproduces `run_anomaly_detection` exactly (same seed derivations).
pub fn run_sensitivity_grid(
    datasets: &[GridDatasets],
    cfg: &GridConfig,
) -> Result<EvalReport, HarnessError> {
    if datasets.is_empty() || cfg.m_values.is_empty() || cfg.seeds.is_empty() {
        return Err(HarnessError::InvalidArgument(
            "grid needs datasets, m values, and seeds".into(),
        ));
    }
    let total_timer = Instant::now();
    let dims: Vec<usize> = datasets.iter().map(|g| g.train.dim()).collect();
    let config = json!({
        "p": cfg.p,
        "ell": cfg.ell,
        "m_values": cfg.m_values,
        "d_values": dims,
        "policy": policy_name(cfg.policy),
        "seeds": cfg.seeds,
        "barycenter_samples": cfg.barycenter_samples,
    });
    let mut report = EvalReport::new("grid", config);

    struct Job {
        dataset_index: usize,
        m: usize,
        class: usize,
        seed: u64,
    }
    let mut jobs = Vec::new();
    for (dataset_index, grid) in datasets.iter().enumerate() {
        if grid.train.dim() != grid.test.dim() {
            return Err(HarnessError::InvalidArgument(format!(
                "grid dataset {dataset_index}: train and test dimensions differ"
            )));
        }
        for &m in &cfg.m_values {
            for class in grid.train.class_labels() {
                for &seed in &cfg.seeds {
                    jobs.push(Job {
                        dataset_index,
                        m,
                        class,
                        seed,
                    });
                }
            }
        }
    }
    let rows: Vec<GridRow> = jobs
        .par_iter()
        .map(|job| {
            let grid = &datasets[job.dataset_index];
            let auc = anomaly_auc(
                &grid.train,
                &grid.test,
                job.class,
                cfg.p,
                job.m,
                cfg.ell,
                cfg.policy,
                cfg.barycenter_samples,
                job.seed,
            )?;
            Ok(GridRow {
                m: job.m,
                d: grid.train.dim(),
                seed: job.seed,
                class: job.class,
                auc,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    report.grid_rows = rows;
    for grid in datasets {
        let d = grid.train.dim();
        for &m in &cfg.m_values {
            let values: Vec<f64> = report
                .grid_rows
                .iter()
                .filter(|r| r.m == m && r.d == d)
                .map(|r| r.auc)
                .collect();
            let (mean_auc, _) = mean_and_variance(&values);
            report.grid_summary.push(GridCell { m, d, mean_auc });
        }
    }
    report.timings = Timings {
        fit_seconds: 0.0,
        score_seconds: 0.0,
        total_seconds: total_timer.elapsed().as_secs_f64(),
    };
    Ok(report)
}

// ---------------------------------------------------------------------------
// Out-of-distribution detection
// ---------------------------------------------------------------------------

/// Default direction count for out-of-distribution runs.
pub fn default_ood_m(d: usize) -> usize {
    640.max(40 * d)
}

#[derive(Debug, Clone)]
pub struct OodConfig {
    pub ell: usize,
    /// Direction count; `None` applies `max(640, 40 d)`.
    pub m_override: Option<usize>,
    pub policy: CentralPointPolicy,
    pub seeds: Vec<u64>,
    pub barycenter_samples: usize,
    pub bins: usize,
}

impl OodConfig {
    pub fn new(seeds: Vec<u64>) -> Self {
        OodConfig {
            ell: 1,
            m_override: None,
            policy: CentralPointPolicy::SampleMean,
            seeds,
            barycenter_samples: 100,
            bins: 50,
        }
    }
}

/// Fits per-class descriptors on the in-distribution training split and
/// reports the distribution of the minimum scaling distance for the
/// in-distribution test split and for the out-of-distribution split:
/// pooled histograms over seeds (shared bin edges) plus per-seed summary
/// statistics.
pub fn run_ood_detection(
    in_train: &LabeledDataset,
    in_test: &LabeledDataset,
    ood_test: &LabeledDataset,
    cfg: &OodConfig,
) -> Result<EvalReport, HarnessError> {
    let d = in_train.dim();
    if in_test.dim() != d || ood_test.dim() != d {
        return Err(HarnessError::InvalidArgument(
            "all three datasets must share a dimension".into(),
        ));
    }
    if cfg.seeds.is_empty() {
        return Err(HarnessError::InvalidArgument("no seeds given".into()));
    }
    let total_timer = Instant::now();
    let m = cfg.m_override.unwrap_or_else(|| default_ood_m(d));
    let config = json!({
        "m": m,
        "d": d,
        "ell": cfg.ell,
        "policy": policy_name(cfg.policy),
        "seeds": cfg.seeds,
        "barycenter_samples": cfg.barycenter_samples,
        "bins": cfg.bins,
        "n_train": in_train.len(),
        "n_test": in_test.len(),
        "n_ood": ood_test.len(),
        "train_source": in_train.source(),
        "test_source": in_test.source(),
        "ood_source": ood_test.source(),
    });
    let mut report = EvalReport::new("ood", config);
    let mut fit_seconds = 0.0;
    let mut score_seconds = 0.0;
    let mut pooled_in = Vec::new();
    let mut pooled_ood = Vec::new();
    for &seed in &cfg.seeds {
        let fit_timer = Instant::now();
        let model = fit_model(
            in_train,
            &FitConfig {
                m,
                ell: cfg.ell,
                policy: cfg.policy,
                seed,
                shared_directions: false,
                barycenter_samples: cfg.barycenter_samples,
            },
        )?;
        fit_seconds += fit_timer.elapsed().as_secs_f64();
        let score_timer = Instant::now();
        let deltas_in = batch_deltas(&model, in_test)?;
        let deltas_ood = batch_deltas(&model, ood_test)?;
        score_seconds += score_timer.elapsed().as_secs_f64();
        for (population, deltas) in [("in-distribution", &deltas_in), ("ood", &deltas_ood)] {
            let (mean, variance) = mean_and_variance(deltas);
            report.score_stats.push(ScoreStats {
                population: population.into(),
                seed,
                count: deltas.len(),
                mean,
                variance,
            });
        }
        pooled_in.extend_from_slice(&deltas_in);
        pooled_ood.extend_from_slice(&deltas_ood);
    }
    let max_delta = pooled_in
        .iter()
        .chain(&pooled_ood)
        .fold(0.0f64, |a, &b| a.max(b));
    let hi = max_delta.ceil().max(1.0);
    for (population, pooled) in [("in-distribution", &pooled_in), ("ood", &pooled_ood)] {
        report.histograms.push(PopulationHistogram {
            population: population.into(),
            histogram: histogram(pooled, 0.0, hi, cfg.bins),
        });
    }
    report.timings = Timings {
        fit_seconds,
        score_seconds,
        total_seconds: total_timer.elapsed().as_secs_f64(),
    };
    Ok(report)
}

/// Minimum scaling distance of every dataset point, parallel with order
/// preserved.
fn batch_deltas(model: &RpdModel, data: &LabeledDataset) -> Result<Vec<f64>, HarnessError> {
    (0..data.len())
        .into_par_iter()
        .map(|i| {
            score(model, data.point(i))
                .map(|s| s.delta)
                .map_err(HarnessError::from)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Theory checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexCountShape {
    /// Descriptor of a standard Gaussian cloud.
    GaussianRpd,
    /// The axis-aligned unit cube (exactly `2^d` vertices), as a
    /// calibration input for the enumerator.
    Cube,
}

#[derive(Debug, Clone)]
pub struct VertexCountConfig {
    pub d: usize,
    pub n: usize,
    pub ell: usize,
    pub m_values: Vec<usize>,
    pub seeds: Vec<u64>,
    pub shape: VertexCountShape,
}

/// Counts descriptor vertices per `(m, seed)` by exact enumeration. The
/// ratio column (count / m) makes linear growth visible directly.
pub fn run_vertex_count_check(cfg: &VertexCountConfig) -> Result<EvalReport, HarnessError> {
    if cfg.m_values.is_empty() || cfg.seeds.is_empty() {
        return Err(HarnessError::InvalidArgument(
            "need m values and seeds".into(),
        ));
    }
    let total_timer = Instant::now();
    let config = json!({
        "d": cfg.d,
        "n": cfg.n,
        "ell": cfg.ell,
        "m_values": cfg.m_values,
        "seeds": cfg.seeds,
        "shape": match cfg.shape {
            VertexCountShape::GaussianRpd => "gaussian-rpd",
            VertexCountShape::Cube => "cube",
        },
    });
    let mut report = EvalReport::new("vertex-count", config);
    let mut jobs: Vec<(usize, u64)> = Vec::new();
    for &m in &cfg.m_values {
        for &seed in &cfg.seeds {
            jobs.push((m, seed));
        }
    }
    let rows: Vec<VertexCountRow> = jobs
        .par_iter()
        .map(|&(m, seed)| {
            let polytope = match cfg.shape {
                VertexCountShape::Cube => {
                    let mut dirs = Vec::new();
                    for j in 0..cfg.d {
                        for sign in [1.0, -1.0] {
                            let mut v = vec![0.0; cfg.d];
                            v[j] = sign;
                            dirs.push(v);
                        }
                    }
                    HPolytope::new(DirectionSet::from_vectors(dirs)?, vec![1.0; 2 * cfg.d])?
                }
                VertexCountShape::GaussianRpd => {
                    let components =
                        vec![MixtureComponent::spherical(vec![0.0; cfg.d], 1.0)];
                    let data =
                        gen_gaussian_mixture(&components, cfg.n, derive_seed(seed, 1))?;
                    let dirs = DirectionSet::sample(m, cfg.d, derive_seed(seed, 2))?;
                    fit_rpd(&data.to_point_cloud(), &dirs, cfg.ell)?
                }
            };
            let vertices = enumerate_vertices(&polytope, DEFAULT_ENUMERATION_GUARD)?;
            Ok(VertexCountRow {
                m,
                seed,
                vertices: vertices.len(),
                ratio: vertices.len() as f64 / m as f64,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    report.vertex_counts = rows;
    report.timings = Timings {
        fit_seconds: 0.0,
        score_seconds: 0.0,
        total_seconds: total_timer.elapsed().as_secs_f64(),
    };
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct BarycenterConfig {
    pub d: usize,
    /// Points on the sphere the descriptor is fitted to.
    pub n: usize,
    /// Directions of the descriptor.
    pub m: usize,
    /// Random vertices averaged per trial.
    pub samples: usize,
    pub trials: usize,
    /// Success radius around the sphere center.
    pub epsilon: f64,
    pub center: Vec<f64>,
    pub radius: f64,
    pub seed: u64,
}

/// Vertex-barycenter concentration check: fit the tightest descriptor of a
/// uniform sphere sample, estimate the vertex barycenter from random
/// vertices, and record how far each trial's estimate lands from the sphere
/// center.
pub fn run_barycenter_check(cfg: &BarycenterConfig) -> Result<EvalReport, HarnessError> {
    if cfg.center.len() != cfg.d {
        return Err(HarnessError::InvalidArgument(format!(
            "center has dimension {}, expected {}",
            cfg.center.len(),
            cfg.d
        )));
    }
    if cfg.trials == 0 {
        return Err(HarnessError::InvalidArgument("need at least one trial".into()));
    }
    let total_timer = Instant::now();
    let config = json!({
        "d": cfg.d,
        "n": cfg.n,
        "m": cfg.m,
        "samples": cfg.samples,
        "trials": cfg.trials,
        "epsilon": cfg.epsilon,
        "center": cfg.center,
        "radius": cfg.radius,
        "seed": cfg.seed,
    });
    let mut report = EvalReport::new("barycenter", config);
    let rows: Vec<BarycenterRow> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = derive_seed(cfg.seed, trial);
            let cloud = gen_sphere_uniform(
                cfg.n,
                cfg.d,
                &cfg.center,
                cfg.radius,
                derive_seed(trial_seed, 0),
            )?;
            let dirs = DirectionSet::sample(cfg.m, cfg.d, derive_seed(trial_seed, 1))?;
            let polytope = fit_rpd(&cloud, &dirs, 1)?;
            let estimate =
                vertex_barycenter_estimate(&polytope, cfg.samples, derive_seed(trial_seed, 2))?;
            let error_norm = distance(&estimate, &cfg.center);
            Ok(BarycenterRow {
                trial,
                samples: cfg.samples,
                error_norm,
                success: error_norm <= cfg.epsilon,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let errors: Vec<f64> = rows.iter().map(|r| r.error_norm).collect();
    let (mean, variance) = mean_and_variance(&errors);
    report.score_stats.push(ScoreStats {
        population: "barycenter-error".into(),
        seed: cfg.seed,
        count: rows.len(),
        mean,
        variance,
    });
    report.barycenter_trials = rows;
    report.timings = Timings {
        fit_seconds: 0.0,
        score_seconds: 0.0,
        total_seconds: total_timer.elapsed().as_secs_f64(),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dual_bounding_body;

    fn separated_mixture(k: usize, d: usize, spacing: f64, n: usize, seed: u64) -> LabeledDataset {
        let components: Vec<MixtureComponent> = (0..k)
            .map(|i| {
                let mut mean = vec![0.0; d];
                mean[i % d] = spacing * (1.0 + (i / d) as f64);
                MixtureComponent::spherical(mean, 1.0)
            })
            .collect();
        gen_gaussian_mixture(&components, n, seed).unwrap()
    }

    #[test]
    fn separation_on_disjoint_clusters_is_perfect() {
        let train = separated_mixture(3, 4, 60.0, 80, 21);
        let test = separated_mixture(3, 4, 60.0, 40, 22);
        let cfg = SeparationConfig::new(32, 1, CentralPointPolicy::SampleMean, vec![1, 2]);
        let report = run_class_separation(&train, &test, &cfg).unwrap();
        assert_eq!(report.auc_rows.len(), 3 * 2 * 2);
        for row in &report.auc_rows {
            assert!(
                (row.auc - 1.0).abs() <= 1e-12,
                "{} class {} seed {}: {}",
                row.method,
                row.class,
                row.seed,
                row.auc
            );
        }
        let confusion = report.confusion.as_ref().unwrap();
        for (a, row) in confusion.mean_coefficients.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if a != b {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn separation_report_shape_matches_ten_classes() {
        let train = separated_mixture(10, 16, 40.0, 30, 31);
        let test = separated_mixture(10, 16, 40.0, 10, 32);
        let cfg = SeparationConfig::new(64, 1, CentralPointPolicy::SampleMean, vec![5]);
        let report = run_class_separation(&train, &test, &cfg).unwrap();
        // Ten AUC pairs, one per class.
        assert_eq!(report.auc_rows.len(), 20);
        assert_eq!(report.auc_summary.len(), 20);
    }

    #[test]
    fn anomaly_far_clusters_reach_auc_one() {
        let train = separated_mixture(3, 3, 80.0, 120, 41);
        let test = separated_mixture(3, 3, 80.0, 60, 42);
        // floor(p * n) = 1 contaminant, which ell = 2 discards along every
        // direction, so separation is perfect.
        let mut cfg = AnomalyConfig::new(0, 48, vec![1, 2, 3]);
        cfg.p = 0.01;
        let report = run_anomaly_detection(&train, &test, &cfg).unwrap();
        for row in &report.auc_rows {
            assert!(
                (row.auc - 1.0).abs() <= 1e-12,
                "seed {}: auc {}",
                row.seed,
                row.auc
            );
        }
        let rerun = run_anomaly_detection(&train, &test, &cfg).unwrap();
        assert_eq!(report.auc_rows, rerun.auc_rows);
    }

    #[test]
    fn contaminated_fit_nests_with_ell() {
        let train = separated_mixture(3, 3, 40.0, 100, 43);
        let contaminated = contaminate(&train, 0, 0.05, 9).unwrap();
        let fit = |ell: usize| {
            fit_descriptor(
                &contaminated,
                &FitConfig {
                    m: 32,
                    ell,
                    policy: CentralPointPolicy::Chebyshev,
                    seed: 5,
                    shared_directions: false,
                    barycenter_samples: 100,
                },
            )
            .unwrap()
        };
        let loose = fit(1);
        let tight = fit(2);
        assert_eq!(
            loose.polytope().directions().as_flat(),
            tight.polytope().directions().as_flat()
        );
        for (a, b) in tight
            .polytope()
            .offsets()
            .iter()
            .zip(loose.polytope().offsets())
        {
            assert!(a <= b);
        }
    }

    #[test]
    fn grid_single_cell_matches_direct_run() {
        let train = separated_mixture(2, 3, 30.0, 100, 51);
        let test = separated_mixture(2, 3, 30.0, 50, 52);
        let grid_cfg = GridConfig {
            p: 0.04,
            ell: 2,
            m_values: vec![24],
            policy: CentralPointPolicy::SampleMean,
            seeds: vec![7, 8],
            barycenter_samples: 100,
        };
        let report = run_sensitivity_grid(
            &[GridDatasets {
                train: train.clone(),
                test: test.clone(),
            }],
            &grid_cfg,
        )
        .unwrap();
        assert_eq!(report.grid_rows.len(), 2 * 2);
        for row in &report.grid_rows {
            let direct = anomaly_auc(
                &train,
                &test,
                row.class,
                0.04,
                24,
                2,
                CentralPointPolicy::SampleMean,
                100,
                row.seed,
            )
            .unwrap();
            assert_eq!(row.auc, direct);
        }
        assert_eq!(report.grid_summary.len(), 1);
    }

    #[test]
    fn ood_far_points_score_far_outside() {
        let train = separated_mixture(2, 3, 30.0, 150, 61);
        let test = separated_mixture(2, 3, 30.0, 50, 62);
        let far = LabeledDataset::from_rows(
            (0..40)
                .map(|i| {
                    let angle = i as f64;
                    (
                        vec![500.0 + angle.cos(), 500.0 + angle.sin(), 500.0],
                        0usize,
                    )
                })
                .collect(),
        )
        .unwrap();
        let mut cfg = OodConfig::new(vec![3]);
        cfg.m_override = Some(64);
        let report = run_ood_detection(&train, &test, &far, &cfg).unwrap();
        let ood_stats = report
            .score_stats
            .iter()
            .find(|s| s.population == "ood")
            .unwrap();
        assert!(ood_stats.mean > 5.0, "ood mean {}", ood_stats.mean);
        let in_stats = report
            .score_stats
            .iter()
            .find(|s| s.population == "in-distribution")
            .unwrap();
        assert!(in_stats.mean < 1.5, "in mean {}", in_stats.mean);
        for hist in &report.histograms {
            let total: u64 = hist.histogram.counts.iter().sum();
            let expected = if hist.population == "ood" { 40 } else { 100 };
            assert_eq!(total, expected);
        }
        // Training points of an ell = 1 fit always land inside the support.
        let model = fit_model(
            &train,
            &FitConfig {
                m: 64,
                ell: 1,
                policy: CentralPointPolicy::SampleMean,
                seed: 3,
                shared_directions: false,
                barycenter_samples: 100,
            },
        )
        .unwrap();
        for (point, _) in train.iter() {
            assert!(score(&model, point).unwrap().delta <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn ood_matching_distributions_overlap() {
        let train = separated_mixture(2, 4, 25.0, 200, 71);
        let test = separated_mixture(2, 4, 25.0, 100, 72);
        let same = separated_mixture(2, 4, 25.0, 100, 73);
        let mut cfg = OodConfig::new(vec![5]);
        cfg.m_override = Some(64);
        let report = run_ood_detection(&train, &test, &same, &cfg).unwrap();
        // Kolmogorov-Smirnov two-sample check at alpha = 0.01: the deltas of
        // the two populations come from the same distribution and must not
        // separate.
        let collect = |population: &str| -> Vec<f64> {
            let hist = report
                .histograms
                .iter()
                .find(|h| h.population == population)
                .unwrap();
            // Reconstruct approximate samples from the histogram midpoints.
            let mut values = Vec::new();
            for (i, &count) in hist.histogram.counts.iter().enumerate() {
                let mid = (hist.histogram.edges[i] + hist.histogram.edges[i + 1]) / 2.0;
                values.extend(std::iter::repeat_n(mid, count as usize));
            }
            values
        };
        let a = collect("in-distribution");
        let b = collect("ood");
        let mut d_stat = 0.0f64;
        for &edge in &report.histograms[0].histogram.edges {
            let fa = a.iter().filter(|&&v| v <= edge).count() as f64 / a.len() as f64;
            let fb = b.iter().filter(|&&v| v <= edge).count() as f64 / b.len() as f64;
            d_stat = d_stat.max((fa - fb).abs());
        }
        let critical =
            1.628 * ((a.len() + b.len()) as f64 / (a.len() * b.len()) as f64).sqrt();
        assert!(
            d_stat < critical,
            "KS statistic {d_stat} exceeds critical value {critical}"
        );
    }

    #[test]
    fn grid_defaults_cover_the_standard_ranges() {
        let cfg = GridConfig::new(vec![0]);
        assert_eq!(cfg.m_values, vec![160, 320, 640, 1280]);
        assert_eq!(cfg.p, 0.02);
        assert_eq!(cfg.ell, 2);
        let anomaly = AnomalyConfig::new(0, 640, vec![0]);
        assert_eq!(anomaly.p, 0.02);
        assert_eq!(anomaly.ell, 2);
        assert_eq!(default_ood_m(16), 640);
        assert_eq!(default_ood_m(256), 10_240);
    }

    #[test]
    fn vertex_count_cube_is_exact() {
        let cfg = VertexCountConfig {
            d: 3,
            n: 0,
            ell: 1,
            m_values: vec![6],
            seeds: vec![1],
            shape: VertexCountShape::Cube,
        };
        let report = run_vertex_count_check(&cfg).unwrap();
        assert_eq!(report.vertex_counts.len(), 1);
        assert_eq!(report.vertex_counts[0].vertices, 8);
    }

    #[test]
    fn vertex_count_gaussian_rows_have_shape() {
        let cfg = VertexCountConfig {
            d: 2,
            n: 100,
            ell: 1,
            m_values: vec![16, 32],
            seeds: vec![1, 2],
            shape: VertexCountShape::GaussianRpd,
        };
        let report = run_vertex_count_check(&cfg).unwrap();
        assert_eq!(report.vertex_counts.len(), 4);
        for row in &report.vertex_counts {
            assert!(row.vertices > 0 && row.vertices < row.m);
            assert_eq!(row.ratio, row.vertices as f64 / row.m as f64);
        }
    }

    #[test]
    fn barycenter_check_on_small_sphere_model() {
        let cfg = BarycenterConfig {
            d: 3,
            n: 200,
            m: 100,
            samples: 100,
            trials: 5,
            epsilon: 0.25,
            center: vec![0.0; 3],
            radius: 1.0,
            seed: 13,
        };
        let report = run_barycenter_check(&cfg).unwrap();
        assert_eq!(report.barycenter_trials.len(), 5);
        let successes = report
            .barycenter_trials
            .iter()
            .filter(|r| r.success)
            .count();
        assert!(successes >= 4, "{successes}/5 trials inside epsilon");
        // Sanity: the fitted body is the tightest outer bound, so the data
        // itself is inside it.
        let cloud = gen_sphere_uniform(50, 3, &[0.0; 3], 1.0, 1).unwrap();
        let dirs = DirectionSet::sample(64, 3, 2).unwrap();
        let p = dual_bounding_body(&cloud, &dirs).unwrap();
        for x in cloud.iter() {
            assert!(p.contains(x, 1e-9).unwrap());
        }
    }
}
