//! Synthetic data generators, contamination mixing, evaluation protocols,
//! and plot-ready reports.
//!
//! Every run in this module is fully determined by its inputs, its
//! configuration, and its seeds: re-running produces identical reports
//! (wall-clock timings live in a separate field).

mod protocols;
mod report;

pub use protocols::{
    anomaly_auc, default_ood_m, run_anomaly_detection, run_barycenter_check,
    run_class_separation, run_ood_detection, run_sensitivity_grid, run_vertex_count_check,
    AnomalyConfig, BarycenterConfig, GridConfig, GridDatasets, OodConfig, SeparationConfig,
    VertexCountConfig, VertexCountShape,
};
pub use report::{
    histogram, AucRow, AucSummary, BarycenterRow, ConfusionSummary, EvalReport, GridCell,
    GridRow, Histogram, PopulationHistogram, ScoreStats, Timings, VertexCountRow,
};

use crate::baselines::BaselineError;
use crate::data::{DataError, LabeledDataset};
use crate::descriptor::DescriptorError;
use crate::geometry::{GeometryError, HPolytope, PointCloud};
use crate::linalg::cholesky;
use crate::lp::{random_vertex, LpError};
use crate::rng::{derive_seed, fill_standard_normal, rng_from_seed, uniform_below};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("report parse error: {0}")]
    Parse(String),
}

impl HarnessError {
    /// Whether the error stems from numerical solver breakdown rather than
    /// user input.
    pub fn is_numerical(&self) -> bool {
        match self {
            HarnessError::Lp(LpError::SolverFailure(_)) => true,
            HarnessError::Descriptor(e) => e.is_numerical(),
            HarnessError::Geometry(GeometryError::Lp(LpError::SolverFailure(_))) => true,
            _ => false,
        }
    }
}

/// Class covariance for the Gaussian mixture generator. Values are
/// variances, not standard deviations.
#[derive(Debug, Clone)]
pub enum CovarianceSpec {
    Spherical(f64),
    Diagonal(Vec<f64>),
    /// Row-major symmetric positive definite matrix.
    Full(Vec<Vec<f64>>),
}

#[derive(Debug, Clone)]
pub struct MixtureComponent {
    pub mean: Vec<f64>,
    pub covariance: CovarianceSpec,
}

impl MixtureComponent {
    pub fn spherical(mean: Vec<f64>, variance: f64) -> Self {
        MixtureComponent {
            mean,
            covariance: CovarianceSpec::Spherical(variance),
        }
    }
}

enum Sampler {
    Spherical(f64),
    Diagonal(Vec<f64>),
    Full(Vec<f64>), // lower Cholesky factor, row-major
}

fn build_sampler(cov: &CovarianceSpec, d: usize, class: usize) -> Result<Sampler, HarnessError> {
    match cov {
        CovarianceSpec::Spherical(var) => {
            if *var <= 0.0 || !var.is_finite() {
                return Err(HarnessError::InvalidArgument(format!(
                    "class {class}: spherical variance must be positive, got {var}"
                )));
            }
            Ok(Sampler::Spherical(var.sqrt()))
        }
        CovarianceSpec::Diagonal(vars) => {
            if vars.len() != d {
                return Err(HarnessError::InvalidArgument(format!(
                    "class {class}: {} diagonal variances for dimension {d}",
                    vars.len()
                )));
            }
            if vars.iter().any(|v| *v <= 0.0 || !v.is_finite()) {
                return Err(HarnessError::InvalidArgument(format!(
                    "class {class}: diagonal variances must be positive"
                )));
            }
            Ok(Sampler::Diagonal(vars.iter().map(|v| v.sqrt()).collect()))
        }
        CovarianceSpec::Full(matrix) => {
            if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
                return Err(HarnessError::InvalidArgument(format!(
                    "class {class}: covariance must be {d}x{d}"
                )));
            }
            let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
            let factor = cholesky(&flat, d).ok_or_else(|| {
                HarnessError::InvalidArgument(format!(
                    "class {class}: covariance is not symmetric positive definite"
                ))
            })?;
            Ok(Sampler::Full(factor))
        }
    }
}

impl Sampler {
    fn draw(&self, rng: &mut crate::rng::Rng, mean: &[f64], z: &mut [f64], out: &mut Vec<f64>) {
        fill_standard_normal(rng, z);
        match self {
            Sampler::Spherical(sd) => {
                for (m, zv) in mean.iter().zip(z.iter()) {
                    out.push(m + sd * zv);
                }
            }
            Sampler::Diagonal(sds) => {
                for ((m, s), zv) in mean.iter().zip(sds).zip(z.iter()) {
                    out.push(m + s * zv);
                }
            }
            Sampler::Full(l) => {
                let d = mean.len();
                for i in 0..d {
                    let mut v = mean[i];
                    for (j, zv) in z.iter().enumerate().take(i + 1) {
                        v += l[i * d + j] * zv;
                    }
                    out.push(v);
                }
            }
        }
    }
}

/// Seeded Gaussian mixture with `n_per_class` points per component. Class
/// `k` is sampled from an RNG derived from `(seed, k)`, so the dataset does
/// not depend on evaluation order. Rows are grouped by class, label = the
/// component index.
pub fn gen_gaussian_mixture(
    components: &[MixtureComponent],
    n_per_class: usize,
    seed: u64,
) -> Result<LabeledDataset, HarnessError> {
    if components.is_empty() || n_per_class == 0 {
        return Err(HarnessError::InvalidArgument(
            "need at least one component and one point per class".into(),
        ));
    }
    let d = components[0].mean.len();
    if d == 0 {
        return Err(HarnessError::InvalidArgument(
            "mixture dimension must be >= 1".into(),
        ));
    }
    let mut features = Vec::with_capacity(components.len() * n_per_class * d);
    let mut labels = Vec::with_capacity(components.len() * n_per_class);
    let mut z = vec![0.0; d];
    for (k, component) in components.iter().enumerate() {
        if component.mean.len() != d {
            return Err(HarnessError::InvalidArgument(format!(
                "class {k}: mean has dimension {}, expected {d}",
                component.mean.len()
            )));
        }
        let sampler = build_sampler(&component.covariance, d, k)?;
        let mut rng = rng_from_seed(derive_seed(seed, k as u64));
        for _ in 0..n_per_class {
            sampler.draw(&mut rng, &component.mean, &mut z, &mut features);
            labels.push(k);
        }
    }
    Ok(LabeledDataset::new(d, features, labels, None)?)
}

/// `n` points uniform on the sphere of the given center and radius
/// (normalized Gaussians, scaled and translated).
pub fn gen_sphere_uniform(
    n: usize,
    d: usize,
    center: &[f64],
    radius: f64,
    seed: u64,
) -> Result<PointCloud, HarnessError> {
    if n == 0 || d == 0 {
        return Err(HarnessError::InvalidArgument(
            "need n >= 1 and d >= 1".into(),
        ));
    }
    if radius <= 0.0 || !radius.is_finite() {
        return Err(HarnessError::InvalidArgument(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if center.len() != d {
        return Err(HarnessError::InvalidArgument(format!(
            "center has dimension {}, expected {d}",
            center.len()
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let u = crate::rng::unit_vector(&mut rng, d);
        for (uv, c) in u.iter().zip(center) {
            data.push(c + radius * uv);
        }
    }
    Ok(PointCloud::from_flat(d, data)?)
}

/// A 3-D reference scenario: `n_inner` points from a unit Gaussian plus
/// `n_outer` wide outliers (standard deviation `outlier_scale`), all under
/// one label with the inner points first.
pub fn gen_gaussian_with_outliers(
    n_inner: usize,
    n_outer: usize,
    d: usize,
    outlier_scale: f64,
    seed: u64,
) -> Result<LabeledDataset, HarnessError> {
    if n_inner == 0 {
        return Err(HarnessError::InvalidArgument(
            "need at least one inner point".into(),
        ));
    }
    if outlier_scale <= 0.0 {
        return Err(HarnessError::InvalidArgument(
            "outlier scale must be positive".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mut features = Vec::with_capacity((n_inner + n_outer) * d);
    let mut point = vec![0.0; d];
    for i in 0..n_inner + n_outer {
        fill_standard_normal(&mut rng, &mut point);
        let scale = if i < n_inner { 1.0 } else { outlier_scale };
        features.extend(point.iter().map(|v| v * scale));
    }
    Ok(LabeledDataset::new(
        d,
        features,
        vec![0; n_inner + n_outer],
        None,
    )?)
}

/// The points of `target_class` plus `floor(p * n_k)` points drawn
/// uniformly without replacement from the other classes. Labels are
/// dropped: the result is an unsupervised training cloud.
pub fn contaminate(
    data: &LabeledDataset,
    target_class: usize,
    p: f64,
    seed: u64,
) -> Result<PointCloud, HarnessError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(HarnessError::InvalidArgument(format!(
            "contamination level must satisfy 0 < p < 1, got {p}"
        )));
    }
    let d = data.dim();
    let mut cloud = Vec::new();
    let mut donors: Vec<usize> = Vec::new();
    let mut n_target = 0usize;
    for (i, (point, label)) in data.iter().enumerate() {
        if label == target_class {
            cloud.extend_from_slice(point);
            n_target += 1;
        } else {
            donors.push(i);
        }
    }
    if n_target == 0 {
        return Err(HarnessError::InvalidArgument(format!(
            "class {target_class} is not present in the data"
        )));
    }
    let count = (p * n_target as f64).floor() as usize;
    if donors.len() < count {
        return Err(HarnessError::InvalidArgument(format!(
            "need {count} donor points but only {} are available",
            donors.len()
        )));
    }
    // Partial Fisher-Yates: the first `count` entries become the sample.
    let mut rng = rng_from_seed(seed);
    for i in 0..count {
        let j = i + uniform_below(&mut rng, donors.len() - i);
        donors.swap(i, j);
    }
    for &idx in &donors[..count] {
        cloud.extend_from_slice(data.point(idx));
    }
    Ok(PointCloud::from_flat(d, cloud)?)
}

/// `count` random vertices of a bounded polytope; every one has scaling
/// distance 1 from any strictly interior central point.
pub fn sample_boundary_points(
    p: &HPolytope,
    count: usize,
    seed: u64,
) -> Result<PointCloud, HarnessError> {
    if count == 0 {
        return Err(HarnessError::InvalidArgument(
            "need at least one boundary point".into(),
        ));
    }
    use rayon::prelude::*;
    let seeds: Vec<u64> = (0..count).map(|i| derive_seed(seed, i as u64)).collect();
    let rows: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&s| random_vertex(p, s))
        .collect::<Result<_, _>>()?;
    Ok(PointCloud::from_rows(rows)?)
}
