//! Multi-class descriptor models: one random polytope per class with an
//! interior central point, scored by the minimum scaling distance over
//! classes and classified with a geometric rejection threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::geometry::{
    fit_rpd, CentralPointPolicy, DirectionSet, GeometryError, HPolytope, PointCloud,
    DIRECTION_NORM_TOL,
};
use crate::linalg::dot;
use crate::lp::{chebyshev_center, vertex_barycenter_estimate, LpError};
use crate::rng::derive_seed;

/// On-disk model format version.
pub const MODEL_FORMAT_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DescriptorError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("class {label} has {n} points but ell = {ell} requires at least ell")]
    ClassTooSmall { label: usize, n: usize, ell: usize },
    #[error("class {label} has a degenerate descriptor (no strictly interior point)")]
    DegenerateClass { label: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("model parse error: {0}")]
    Parse(String),
    #[error("unsupported model version {found} (expected {MODEL_FORMAT_VERSION})")]
    UnsupportedVersion { found: u64 },
}

impl DescriptorError {
    /// Whether the error stems from numerical solver breakdown rather than
    /// user input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            DescriptorError::Lp(LpError::SolverFailure(_))
                | DescriptorError::Geometry(GeometryError::Lp(LpError::SolverFailure(_)))
        )
    }
}

/// How to fit a model.
#[derive(Debug, Clone, Copy)]
pub struct FitConfig {
    pub m: usize,
    pub ell: usize,
    pub policy: CentralPointPolicy,
    pub seed: u64,
    /// One direction set shared by all classes instead of a fresh draw per
    /// class. Per-class draws are the default construction; sharing is an
    /// optimization for experiments.
    pub shared_directions: bool,
    /// Sample count for the vertex-barycenter policy.
    pub barycenter_samples: usize,
}

impl FitConfig {
    pub fn new(m: usize, ell: usize, policy: CentralPointPolicy, seed: u64) -> Self {
        FitConfig {
            m,
            ell,
            policy,
            seed,
            shared_directions: false,
            barycenter_samples: 100,
        }
    }
}

// Seed salts: shared directions use salt 0; class k draws directions from
// salt 2k+1 and barycenter objectives from salt 2k+2.
fn shared_directions_seed(master: u64) -> u64 {
    derive_seed(master, 0)
}

fn class_directions_seed(master: u64, class_index: usize) -> u64 {
    derive_seed(master, 2 * class_index as u64 + 1)
}

fn class_barycenter_seed(master: u64, class_index: usize) -> u64 {
    derive_seed(master, 2 * class_index as u64 + 2)
}

/// One fitted class: polytope with central point attached.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDescriptor {
    label: usize,
    n: usize,
    polytope: HPolytope,
    fallback_applied: bool,
}

impl ClassDescriptor {
    /// Wraps an already-fitted polytope as a class descriptor. The polytope
    /// must carry a central point.
    pub fn new(label: usize, n: usize, polytope: HPolytope) -> Result<Self, DescriptorError> {
        if polytope.central_point().is_none() {
            return Err(DescriptorError::InvalidArgument(format!(
                "class {label} needs a central point"
            )));
        }
        Ok(ClassDescriptor {
            label,
            n,
            polytope,
            fallback_applied: false,
        })
    }

    pub fn label(&self) -> usize {
        self.label
    }

    /// Number of training points the class was fitted on.
    pub fn train_size(&self) -> usize {
        self.n
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }

    /// True when the requested central-point policy produced a point
    /// outside the polytope and the Chebyshev center was used instead.
    pub fn fallback_applied(&self) -> bool {
        self.fallback_applied
    }
}

/// Per-class random polytopes plus fitting metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct RpdModel {
    d: usize,
    m: usize,
    ell: usize,
    master_seed: u64,
    shared_directions: bool,
    classes: Vec<ClassDescriptor>,
}

impl RpdModel {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_directions(&self) -> usize {
        self.m
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn shared_directions(&self) -> bool {
        self.shared_directions
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassDescriptor] {
        &self.classes
    }

    pub fn class(&self, label: usize) -> Option<&ClassDescriptor> {
        self.classes.iter().find(|c| c.label == label)
    }

    /// Assembles a model from already-fitted parts, enforcing the model
    /// invariants (uniform shape, sorted labels, interior central points).
    pub fn from_parts(
        d: usize,
        m: usize,
        ell: usize,
        master_seed: u64,
        shared_directions: bool,
        classes: Vec<ClassDescriptor>,
    ) -> Result<Self, DescriptorError> {
        if classes.is_empty() {
            return Err(DescriptorError::InvalidArgument(
                "model needs at least one class".into(),
            ));
        }
        if d == 0 || m == 0 || ell == 0 {
            return Err(DescriptorError::InvalidArgument(
                "d, m, and ell must all be >= 1".into(),
            ));
        }
        for pair in classes.windows(2) {
            if pair[0].label >= pair[1].label {
                return Err(DescriptorError::InvalidArgument(
                    "class labels must be strictly increasing".into(),
                ));
            }
        }
        for class in &classes {
            if class.polytope.dim() != d {
                return Err(DescriptorError::DimensionMismatch {
                    expected: d,
                    got: class.polytope.dim(),
                });
            }
            if class.polytope.num_constraints() != m {
                return Err(DescriptorError::InvalidArgument(format!(
                    "class {} has {} constraints, expected m = {m}",
                    class.label,
                    class.polytope.num_constraints()
                )));
            }
            let central = class.polytope.central_point().ok_or_else(|| {
                DescriptorError::InvalidArgument(format!(
                    "class {} is missing a central point",
                    class.label
                ))
            })?;
            if !class.polytope.is_strictly_interior(&central.point)? {
                return Err(DescriptorError::DegenerateClass { label: class.label });
            }
        }
        Ok(RpdModel {
            d,
            m,
            ell,
            master_seed,
            shared_directions,
            classes,
        })
    }
}

/// Fits one class polytope and attaches a central point according to the
/// policy. Falls back to the Chebyshev center (recording the fallback) when
/// the requested point is not strictly interior, which can happen for the
/// sample mean once `ell > 1` discards extreme points.
pub fn fit_class_descriptor(
    label: usize,
    cloud: &PointCloud,
    dirs: &DirectionSet,
    ell: usize,
    policy: CentralPointPolicy,
    barycenter_seed: u64,
    barycenter_samples: usize,
) -> Result<ClassDescriptor, DescriptorError> {
    if ell > cloud.len() {
        return Err(DescriptorError::ClassTooSmall {
            label,
            n: cloud.len(),
            ell,
        });
    }
    let mut polytope = fit_rpd(cloud, dirs, ell)?;
    let (point, actual_policy, fallback_applied) = match policy {
        CentralPointPolicy::SampleMean => {
            let mean = cloud.mean();
            if polytope.is_strictly_interior(&mean)? {
                (mean, CentralPointPolicy::SampleMean, false)
            } else {
                (chebyshev_interior(&polytope, label)?, CentralPointPolicy::Chebyshev, true)
            }
        }
        CentralPointPolicy::Chebyshev => (
            chebyshev_interior(&polytope, label)?,
            CentralPointPolicy::Chebyshev,
            false,
        ),
        CentralPointPolicy::VertexBarycenter => {
            let estimate =
                vertex_barycenter_estimate(&polytope, barycenter_samples, barycenter_seed)?;
            if polytope.is_strictly_interior(&estimate)? {
                (estimate, CentralPointPolicy::VertexBarycenter, false)
            } else {
                (chebyshev_interior(&polytope, label)?, CentralPointPolicy::Chebyshev, true)
            }
        }
        CentralPointPolicy::UserSupplied => {
            return Err(DescriptorError::InvalidArgument(
                "user-supplied central points cannot be requested at fit time".into(),
            ))
        }
    };
    polytope.set_central_point(point, actual_policy)?;
    Ok(ClassDescriptor {
        label,
        n: cloud.len(),
        polytope,
        fallback_applied,
    })
}

fn chebyshev_interior(polytope: &HPolytope, label: usize) -> Result<Vec<f64>, DescriptorError> {
    let (center, radius) = chebyshev_center(polytope)?;
    if radius <= 0.0 {
        return Err(DescriptorError::DegenerateClass { label });
    }
    Ok(center)
}

/// Fits a single-cloud descriptor with seeds derived the same way as for
/// class index 0 of [`fit_model`].
pub fn fit_descriptor(
    cloud: &PointCloud,
    cfg: &FitConfig,
) -> Result<ClassDescriptor, DescriptorError> {
    let dirs = DirectionSet::sample(cfg.m, cloud.dim(), class_directions_seed(cfg.seed, 0))?;
    fit_class_descriptor(
        0,
        cloud,
        &dirs,
        cfg.ell,
        cfg.policy,
        class_barycenter_seed(cfg.seed, 0),
        cfg.barycenter_samples,
    )
}

/// Fits one polytope per class. Classes are processed independently with
/// seeds derived from `(master seed, class index)`, so the result does not
/// depend on thread count.
pub fn fit_model(data: &LabeledDataset, cfg: &FitConfig) -> Result<RpdModel, DescriptorError> {
    if cfg.m == 0 || cfg.ell == 0 {
        return Err(DescriptorError::InvalidArgument(
            "m and ell must be >= 1".into(),
        ));
    }
    let labels = data.class_labels();
    let d = data.dim();
    let shared = if cfg.shared_directions {
        Some(DirectionSet::sample(
            cfg.m,
            d,
            shared_directions_seed(cfg.seed),
        )?)
    } else {
        None
    };
    let clouds: Vec<(usize, PointCloud)> = labels
        .iter()
        .map(|&label| Ok((label, data.class_points(label)?)))
        .collect::<Result<_, GeometryError>>()?;
    for (label, cloud) in &clouds {
        if cloud.len() < cfg.ell {
            return Err(DescriptorError::ClassTooSmall {
                label: *label,
                n: cloud.len(),
                ell: cfg.ell,
            });
        }
    }
    let classes: Vec<ClassDescriptor> = clouds
        .par_iter()
        .enumerate()
        .map(|(k, (label, cloud))| {
            let dirs = match &shared {
                Some(dirs) => dirs.clone(),
                None => DirectionSet::sample(cfg.m, d, class_directions_seed(cfg.seed, k))?,
            };
            fit_class_descriptor(
                *label,
                cloud,
                &dirs,
                cfg.ell,
                cfg.policy,
                class_barycenter_seed(cfg.seed, k),
                cfg.barycenter_samples,
            )
        })
        .collect::<Result<_, _>>()?;
    RpdModel::from_parts(
        d,
        cfg.m,
        cfg.ell,
        cfg.seed,
        cfg.shared_directions,
        classes,
    )
}

/// Per-class scaling distances of one query plus their minimum.
#[derive(Debug, Clone)]
pub struct ScoreVector {
    /// Scaling distances aligned with the model's class order.
    pub per_class: Vec<f64>,
    /// Minimum of the per-class distances; above 1 means the query lies
    /// outside every class polytope.
    pub delta: f64,
    /// Label attaining the minimum; the smallest such label on ties.
    pub argmin_label: usize,
}

pub fn score(model: &RpdModel, x: &[f64]) -> Result<ScoreVector, DescriptorError> {
    if x.len() != model.d {
        return Err(DescriptorError::DimensionMismatch {
            expected: model.d,
            got: x.len(),
        });
    }
    let mut per_class = Vec::with_capacity(model.classes.len());
    let mut delta = f64::INFINITY;
    let mut argmin_label = model.classes[0].label;
    for class in &model.classes {
        let sd = class.polytope.scaling_distance(x)?;
        if sd < delta {
            delta = sd;
            argmin_label = class.label;
        }
        per_class.push(sd);
    }
    Ok(ScoreVector {
        per_class,
        delta,
        argmin_label,
    })
}

/// Outcome of classification with rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Assigned(usize),
    Reject,
}

/// Assigns the argmin class when `delta <= reject_threshold` (ties go to
/// assignment) and rejects otherwise. A threshold of `+inf` disables
/// rejection.
pub fn classify(
    model: &RpdModel,
    x: &[f64],
    reject_threshold: f64,
) -> Result<Classification, DescriptorError> {
    let s = score(model, x)?;
    if s.delta <= reject_threshold {
        Ok(Classification::Assigned(s.argmin_label))
    } else {
        Ok(Classification::Reject)
    }
}

/// Fraction of the two classes' points (in `data`) that land in the other
/// class's polytope: `(|X_k in P_j| + |X_j in P_k|) / (n_k + n_j)`.
/// Symmetric in `(k, j)` and always in `[0, 1]`.
pub fn confusion_coefficient(
    model: &RpdModel,
    data: &LabeledDataset,
    k: usize,
    j: usize,
    tol: f64,
) -> Result<f64, DescriptorError> {
    if k == j {
        return Err(DescriptorError::InvalidArgument(
            "confusion coefficient requires two distinct classes".into(),
        ));
    }
    let p_k = model
        .class(k)
        .ok_or_else(|| DescriptorError::InvalidArgument(format!("model has no class {k}")))?
        .polytope();
    let p_j = model
        .class(j)
        .ok_or_else(|| DescriptorError::InvalidArgument(format!("model has no class {j}")))?
        .polytope();
    let mut n_k = 0usize;
    let mut n_j = 0usize;
    let mut crossings = 0usize;
    for (point, label) in data.iter() {
        if label == k {
            n_k += 1;
            if p_j.contains(point, tol)? {
                crossings += 1;
            }
        } else if label == j {
            n_j += 1;
            if p_k.contains(point, tol)? {
                crossings += 1;
            }
        }
    }
    if n_k == 0 || n_j == 0 {
        return Err(DescriptorError::InvalidArgument(format!(
            "classes {k} and {j} must both be present in the data"
        )));
    }
    Ok(crossings as f64 / (n_k + n_j) as f64)
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u64,
    d: usize,
    m: usize,
    ell: usize,
    master_seed: u64,
    #[serde(rename = "shared_Y")]
    shared_y: bool,
    classes: Vec<ClassFile>,
}

#[derive(Serialize, Deserialize)]
struct ClassFile {
    label: usize,
    n: usize,
    /// m x d row-major direction matrix.
    directions: Vec<f64>,
    offsets: Vec<f64>,
    central_point: Vec<f64>,
    policy: CentralPointPolicy,
    fallback_applied: bool,
}

impl RpdModel {
    /// Serializes to the versioned JSON model format. Floats carry 17
    /// significant digits, so deserializing reproduces the model bit for
    /// bit.
    pub fn to_json(&self) -> Vec<u8> {
        let classes = self
            .classes
            .iter()
            .map(|class| {
                let central = class
                    .polytope
                    .central_point()
                    .expect("fitted classes always carry a central point");
                ClassFile {
                    label: class.label,
                    n: class.n,
                    directions: class.polytope.directions().as_flat().to_vec(),
                    offsets: class.polytope.offsets().to_vec(),
                    central_point: central.point.clone(),
                    policy: central.policy,
                    fallback_applied: class.fallback_applied,
                }
            })
            .collect();
        let file = ModelFile {
            version: MODEL_FORMAT_VERSION,
            d: self.d,
            m: self.m,
            ell: self.ell,
            master_seed: self.master_seed,
            shared_y: self.shared_directions,
            classes,
        };
        crate::json::to_vec_17(&file)
    }

    /// Parses and validates a serialized model. Fails without producing a
    /// partial model.
    pub fn from_json(bytes: &[u8]) -> Result<Self, DescriptorError> {
        let value: serde_json::Value = serde_json::from_slice(bytes)
            .map_err(|e| DescriptorError::Parse(format!("invalid JSON: {e}")))?;
        let version = value
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| DescriptorError::Parse("missing integer version field".into()))?;
        if version != MODEL_FORMAT_VERSION {
            return Err(DescriptorError::UnsupportedVersion { found: version });
        }
        let file: ModelFile = serde_json::from_value(value)
            .map_err(|e| DescriptorError::Parse(format!("malformed model payload: {e}")))?;
        let classes = file
            .classes
            .into_iter()
            .map(|class| {
                if class.directions.len() != file.m * file.d {
                    return Err(DescriptorError::Parse(format!(
                        "class {}: {} direction values, expected {}",
                        class.label,
                        class.directions.len(),
                        file.m * file.d
                    )));
                }
                for (i, row) in class.directions.chunks_exact(file.d).enumerate() {
                    let norm = dot(row, row).sqrt();
                    if (norm - 1.0).abs() > DIRECTION_NORM_TOL {
                        return Err(DescriptorError::Parse(format!(
                            "class {}: direction {i} has norm {norm}",
                            class.label
                        )));
                    }
                }
                if class.offsets.len() != file.m {
                    return Err(DescriptorError::Parse(format!(
                        "class {}: {} offsets, expected {}",
                        class.label,
                        class.offsets.len(),
                        file.m
                    )));
                }
                let dirs =
                    DirectionSet::from_flat_unchecked(file.d, file.m, class.directions);
                let mut polytope = HPolytope::new(dirs, class.offsets)?;
                polytope.set_central_point(class.central_point, class.policy)?;
                Ok(ClassDescriptor {
                    label: class.label,
                    n: class.n,
                    polytope,
                    fallback_applied: class.fallback_applied,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        RpdModel::from_parts(
            file.d,
            file.m,
            file.ell,
            file.master_seed,
            file.shared_y,
            classes,
        )
    }
}
