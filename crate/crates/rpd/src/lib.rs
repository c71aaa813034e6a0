//! Random polytope descriptors over labeled point clouds.
//!
//! The crate builds convex outer approximations of point clouds from
//! randomly sampled directions, scores queries by the scaling distance to
//! those polytopes, classifies with a geometric rejection threshold, and
//! ships an evaluation harness that compares the descriptors against a
//! nearest-centroid baseline on anomaly and out-of-distribution tasks.
//!
//! Module map:
//! - [`geometry`]: direction sets, H-polytopes, descriptor fitting,
//!   containment, scaling distance.
//! - [`lp`]: dense simplex solver and the polytope operations built on it
//!   (Chebyshev center, random vertices, vertex enumeration).
//! - [`descriptor`]: multi-class models, scoring, classification with
//!   rejection, confusion coefficients, model serialization.
//! - [`baselines`]: nearest-centroid scoring and AUROC.
//! - [`data`]: labeled datasets and their CSV format.
//! - [`harness`]: synthetic generators, contamination, the evaluation
//!   protocols, and plot-ready reports.
//! - [`rng`]: seeded ChaCha-based randomness, reproducible across platforms.

pub mod baselines;
pub mod data;
pub mod descriptor;
pub mod geometry;
pub mod harness;
pub mod json;
mod linalg;
pub mod lp;
pub mod rng;

pub use baselines::{auroc, centroid_score, fit_centroids, BaselineError, CentroidModel};
pub use data::{load_csv, save_csv, DataError, LabeledDataset};
pub use descriptor::{
    classify, confusion_coefficient, fit_descriptor, fit_model, score, ClassDescriptor,
    Classification, DescriptorError, FitConfig, RpdModel, ScoreVector,
};
pub use geometry::{
    dual_bounding_body, ell_max, fit_rpd, is_positively_spanning, CentralPoint,
    CentralPointPolicy, DirectionSet, GeometryError, HPolytope, PointCloud,
    DEFAULT_CONTAINMENT_TOL,
};
pub use lp::{
    chebyshev_center, enumerate_vertices, lp_solve, random_vertex, vertex_barycenter_estimate,
    LpError, LpProblem, LpSolution, LpStatus, SimplexOptions,
};
