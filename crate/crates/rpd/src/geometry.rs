//! Random-direction outer approximations of point clouds.
//!
//! A descriptor is an H-polytope: `m` unit directions `y_i` plus offsets
//! `b_i`, representing `{v : <v, y_i> <= b_i}`. Offsets come from the
//! `ell`-th largest scalar product of the data along each direction, so
//! `ell = 1` gives the tightest outer bound along the sampled directions and
//! larger `ell` discards extreme points. Dissimilarity of a query is
//! measured by the scaling distance: the smallest factor by which the
//! polytope must be inflated about an interior central point to capture the
//! query.

use serde::{Deserialize, Serialize};

use crate::linalg::dot;
use crate::lp::{self, LpError, LpProblem, LpStatus};
use crate::rng;

/// Default absolute tolerance on inequality slack for containment checks.
pub const DEFAULT_CONTAINMENT_TOL: f64 = 1e-9;

/// Unit-norm tolerance enforced on stored directions.
pub const DIRECTION_NORM_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polytope has no central point")]
    MissingCentralPoint,
    #[error("central point is not strictly interior: constraint {constraint} has slack {slack:e}")]
    CentralPointNotInterior { constraint: usize, slack: f64 },
    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
}

/// A set of `m` unit directions in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    d: usize,
    m: usize,
    data: Vec<f64>, // m x d row-major, every row of Euclidean norm 1
    seed: Option<u64>,
}

impl DirectionSet {
    /// Samples `m` directions i.i.d. uniformly on the unit sphere
    /// (normalized standard Gaussians), deterministically for a given seed.
    pub fn sample(m: usize, d: usize, seed: u64) -> Result<Self, GeometryError> {
        if m == 0 || d == 0 {
            return Err(GeometryError::InvalidArgument(format!(
                "direction set requires m >= 1 and d >= 1, got m={m}, d={d}"
            )));
        }
        let mut rng = rng::rng_from_seed(seed);
        let mut data = Vec::with_capacity(m * d);
        for _ in 0..m {
            data.extend_from_slice(&rng::unit_vector(&mut rng, d));
        }
        Ok(DirectionSet {
            d,
            m,
            data,
            seed: Some(seed),
        })
    }

    /// Builds a direction set from explicit vectors, validating unit norms.
    pub fn from_vectors(rows: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        if rows.is_empty() {
            return Err(GeometryError::InvalidArgument(
                "direction set must contain at least one direction".into(),
            ));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(GeometryError::InvalidArgument(
                "directions must have dimension >= 1".into(),
            ));
        }
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(GeometryError::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            let norm = dot(row, row).sqrt();
            if (norm - 1.0).abs() > DIRECTION_NORM_TOL {
                return Err(GeometryError::InvalidArgument(format!(
                    "direction {i} has norm {norm}, expected 1 within {DIRECTION_NORM_TOL:e}"
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(DirectionSet {
            d,
            m: rows.len(),
            data,
            seed: None,
        })
    }

    /// Internal constructor for data already validated (e.g. deserialized
    /// payloads re-checked by the caller).
    pub(crate) fn from_flat_unchecked(d: usize, m: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), m * d);
        DirectionSet {
            d,
            m,
            data,
            seed: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn direction(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// New set with `extra` directions appended (same dimension required).
    pub fn extended(&self, extra: &DirectionSet) -> Result<Self, GeometryError> {
        if extra.d != self.d {
            return Err(GeometryError::DimensionMismatch {
                expected: self.d,
                got: extra.d,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&extra.data);
        Ok(DirectionSet {
            d: self.d,
            m: self.m + extra.m,
            data,
            seed: None,
        })
    }
}

/// A finite point cloud in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    d: usize,
    n: usize,
    data: Vec<f64>, // n x d row-major
}

impl PointCloud {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        if rows.is_empty() {
            return Err(GeometryError::InvalidArgument(
                "point cloud must contain at least one point".into(),
            ));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(GeometryError::InvalidArgument(
                "points must have dimension >= 1".into(),
            ));
        }
        let mut data = Vec::with_capacity(rows.len() * d);
        for row in &rows {
            if row.len() != d {
                return Err(GeometryError::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(PointCloud {
            d,
            n: rows.len(),
            data,
        })
    }

    pub fn from_flat(d: usize, data: Vec<f64>) -> Result<Self, GeometryError> {
        if d == 0 || data.is_empty() || !data.len().is_multiple_of(d) {
            return Err(GeometryError::InvalidArgument(format!(
                "flat point data of length {} is not a nonempty multiple of d={d}",
                data.len()
            )));
        }
        Ok(PointCloud {
            d,
            n: data.len() / d,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Coordinate-wise arithmetic mean of the cloud.
    pub fn mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        for p in self.iter() {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        for o in &mut out {
            *o /= self.n as f64;
        }
        out
    }

    /// Cloud translated by `t`.
    pub fn translated(&self, t: &[f64]) -> Result<Self, GeometryError> {
        if t.len() != self.d {
            return Err(GeometryError::DimensionMismatch {
                expected: self.d,
                got: t.len(),
            });
        }
        let mut data = self.data.clone();
        for row in data.chunks_exact_mut(self.d) {
            for (v, tv) in row.iter_mut().zip(t) {
                *v += tv;
            }
        }
        Ok(PointCloud {
            d: self.d,
            n: self.n,
            data,
        })
    }
}

/// How a central point was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentralPointPolicy {
    SampleMean,
    Chebyshev,
    VertexBarycenter,
    UserSupplied,
}

impl std::fmt::Display for CentralPointPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CentralPointPolicy::SampleMean => "sample-mean",
            CentralPointPolicy::Chebyshev => "chebyshev",
            CentralPointPolicy::VertexBarycenter => "vertex-barycenter",
            CentralPointPolicy::UserSupplied => "user-supplied",
        };
        f.write_str(s)
    }
}

/// An interior reference point together with the policy that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralPoint {
    pub point: Vec<f64>,
    pub policy: CentralPointPolicy,
}

/// H-polytope `{v : <v, y_i> <= b_i for all i}` with an optional central
/// point for scaling-distance queries.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    directions: DirectionSet,
    offsets: Vec<f64>,
    central_point: Option<CentralPoint>,
}

impl HPolytope {
    pub fn new(directions: DirectionSet, offsets: Vec<f64>) -> Result<Self, GeometryError> {
        if offsets.len() != directions.len() {
            return Err(GeometryError::InvalidArgument(format!(
                "{} offsets for {} directions",
                offsets.len(),
                directions.len()
            )));
        }
        Ok(HPolytope {
            directions,
            offsets,
            central_point: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    pub fn num_constraints(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn central_point(&self) -> Option<&CentralPoint> {
        self.central_point.as_ref()
    }

    /// Attaches a central point. Dimension is validated here; strict
    /// interiority is checked where it matters (scaling distance).
    pub fn set_central_point(
        &mut self,
        point: Vec<f64>,
        policy: CentralPointPolicy,
    ) -> Result<(), GeometryError> {
        if point.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        self.central_point = Some(CentralPoint { point, policy });
        Ok(())
    }

    pub fn clear_central_point(&mut self) {
        self.central_point = None;
    }

    /// Slack `b_i - <c, y_i>` of a candidate central point against every
    /// constraint. All slacks strictly positive means strictly interior.
    pub fn slacks(&self, point: &[f64]) -> Result<Vec<f64>, GeometryError> {
        if point.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        Ok(self
            .directions
            .iter()
            .zip(&self.offsets)
            .map(|(y, b)| b - dot(point, y))
            .collect())
    }

    pub fn is_strictly_interior(&self, point: &[f64]) -> Result<bool, GeometryError> {
        Ok(self.slacks(point)?.iter().all(|&s| s > 0.0))
    }

    /// Membership test: `<x, y_i> <= b_i + tol` for every constraint.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool, GeometryError> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (y, b) in self.directions.iter().zip(&self.offsets) {
            if dot(x, y) > b + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Scaling distance of `x` from the stored central point: the smallest
    /// `alpha >= 0` with `x` inside the polytope inflated by `alpha` about
    /// the central point. At most `m` scalar products per query.
    pub fn scaling_distance(&self, x: &[f64]) -> Result<f64, GeometryError> {
        let cp = self
            .central_point
            .as_ref()
            .ok_or(GeometryError::MissingCentralPoint)?;
        self.scaling_distance_from(&cp.point, x)
    }

    /// Scaling distance with an explicit central point, which must be
    /// strictly interior.
    pub fn scaling_distance_from(&self, center: &[f64], x: &[f64]) -> Result<f64, GeometryError> {
        if center.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: center.len(),
            });
        }
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut best = 0.0f64;
        for (i, (y, b)) in self.directions.iter().zip(&self.offsets).enumerate() {
            let center_proj = dot(center, y);
            let slack = b - center_proj;
            if slack <= 0.0 {
                return Err(GeometryError::CentralPointNotInterior {
                    constraint: i,
                    slack,
                });
            }
            let ratio = (dot(x, y) - center_proj) / slack;
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best)
    }

    /// The polytope translated by `t`: offsets shift by `<t, y_i>` and the
    /// central point (when present) moves along.
    pub fn translated(&self, t: &[f64]) -> Result<Self, GeometryError> {
        if t.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: t.len(),
            });
        }
        let offsets = self
            .directions
            .iter()
            .zip(&self.offsets)
            .map(|(y, b)| b + dot(t, y))
            .collect();
        let central_point = self.central_point.as_ref().map(|cp| CentralPoint {
            point: cp.point.iter().zip(t).map(|(c, tv)| c + tv).collect(),
            policy: cp.policy,
        });
        Ok(HPolytope {
            directions: self.directions.clone(),
            offsets,
            central_point,
        })
    }
}

/// The `ell`-th largest value of `values`, counting duplicates.
pub fn ell_max(values: &[f64], ell: usize) -> Result<f64, GeometryError> {
    if ell == 0 || ell > values.len() {
        return Err(GeometryError::InvalidArgument(format!(
            "ell must satisfy 1 <= ell <= {}, got {ell}",
            values.len()
        )));
    }
    if ell == 1 {
        return Ok(values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, |a, b| if b > a { b } else { a }));
    }
    if ell <= 16 {
        // Running top-ell buffer, descending; avoids cloning long inputs.
        let mut top: Vec<f64> = Vec::with_capacity(ell);
        for &v in values {
            if top.len() < ell {
                let pos = top.partition_point(|&t| t >= v);
                top.insert(pos, v);
            } else if v > top[ell - 1] {
                top.pop();
                let pos = top.partition_point(|&t| t >= v);
                top.insert(pos, v);
            }
        }
        Ok(top[ell - 1])
    } else {
        let mut scratch = values.to_vec();
        let (_, kth, _) = scratch.select_nth_unstable_by(ell - 1, |a, b| b.total_cmp(a));
        Ok(*kth)
    }
}

/// Fits the random polytope descriptor of `points` over the directions `dirs`:
/// offset `b_i` is the `ell`-th largest of `<x, y_i>` over the cloud. With
/// `ell = 1` this is the tightest outer bound along the given directions and
/// contains every input point.
pub fn fit_rpd(
    points: &PointCloud,
    dirs: &DirectionSet,
    ell: usize,
) -> Result<HPolytope, GeometryError> {
    if points.dim() != dirs.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: dirs.dim(),
            got: points.dim(),
        });
    }
    if ell == 0 || ell > points.len() {
        return Err(GeometryError::InvalidArgument(format!(
            "ell must satisfy 1 <= ell <= n = {}, got {ell}",
            points.len()
        )));
    }
    use rayon::prelude::*;
    let offsets: Vec<f64> = (0..dirs.len())
        .into_par_iter()
        .map(|i| {
            let y = dirs.direction(i);
            let dots: Vec<f64> = points.iter().map(|x| dot(x, y)).collect();
            ell_max(&dots, ell).expect("ell validated against cloud size")
        })
        .collect();
    HPolytope::new(dirs.clone(), offsets)
}

/// Tightest outer bound of the cloud along the given directions
/// (`fit_rpd` with `ell = 1`).
pub fn dual_bounding_body(
    points: &PointCloud,
    dirs: &DirectionSet,
) -> Result<HPolytope, GeometryError> {
    fit_rpd(points, dirs, 1)
}

/// Whether the directions positively span `R^d`, i.e. their convex hull
/// contains the origin in its interior; equivalently every polytope built
/// on them is bounded.
///
/// Decided by 2d linear programs: maximize `+/- w_j` over
/// `{w : <y_i, w> <= 0, |w_j| <= 1}`. The set is positively spanning
/// exactly when all optima are zero.
pub fn is_positively_spanning(dirs: &DirectionSet) -> Result<bool, GeometryError> {
    let d = dirs.dim();
    for j in 0..d {
        for sign in [1.0, -1.0] {
            let mut objective = vec![0.0; d];
            objective[j] = sign;
            let mut problem = LpProblem::new(objective)?;
            for y in dirs.iter() {
                problem.add_constraint(y, 0.0)?;
            }
            let mut box_row = vec![0.0; d];
            box_row[j] = sign;
            problem.add_constraint(&box_row, 1.0)?;
            let solution = lp::lp_solve(&problem, &lp::SimplexOptions::default())?;
            match solution.status {
                LpStatus::Optimal => {
                    if solution.objective_value.unwrap_or(0.0) > 1e-9 {
                        return Ok(false);
                    }
                }
                // The box row bounds the objective and w = 0 is feasible,
                // so anything else is a solver breakdown.
                _ => {
                    return Err(GeometryError::Lp(LpError::SolverFailure(
                        "spanning-test LP must be feasible and bounded".into(),
                    )))
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{derive_seed, fill_standard_normal, rng_from_seed};

    fn gaussian_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
        let mut rng = rng_from_seed(seed);
        let mut data = vec![0.0; n * d];
        fill_standard_normal(&mut rng, &mut data);
        PointCloud::from_flat(d, data).unwrap()
    }

    fn axis_cross_2d() -> DirectionSet {
        DirectionSet::from_vectors(vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ])
        .unwrap()
    }

    fn unit_square() -> HPolytope {
        HPolytope::new(axis_cross_2d(), vec![1.0; 4]).unwrap()
    }

    #[test]
    fn sampled_directions_are_unit_and_deterministic() {
        let a = DirectionSet::sample(4, 2, 7).unwrap();
        for y in a.iter() {
            assert!((dot(y, y).sqrt() - 1.0).abs() <= 1e-12);
        }
        let b = DirectionSet::sample(4, 2, 7).unwrap();
        assert_eq!(a.as_flat(), b.as_flat());
        assert_ne!(
            a.as_flat(),
            DirectionSet::sample(4, 2, 8).unwrap().as_flat()
        );
    }

    #[test]
    fn one_dimensional_directions_are_signs() {
        let dirs = DirectionSet::sample(3, 1, 123).unwrap();
        for y in dirs.iter() {
            assert!(y[0] == 1.0 || y[0] == -1.0, "got {}", y[0]);
        }
    }

    #[test]
    fn sample_rejects_zero_sizes() {
        assert!(matches!(
            DirectionSet::sample(0, 2, 1),
            Err(GeometryError::InvalidArgument(_))
        ));
        assert!(matches!(
            DirectionSet::sample(2, 0, 1),
            Err(GeometryError::InvalidArgument(_))
        ));
    }

    #[test]
    fn from_vectors_validates_norms() {
        assert!(DirectionSet::from_vectors(vec![vec![0.5, 0.5]]).is_err());
        assert!(DirectionSet::from_vectors(vec![vec![1.0, 0.0]]).is_ok());
    }

    #[test]
    fn ell_max_cases() {
        assert_eq!(ell_max(&[3.0, 1.0, 2.0], 2).unwrap(), 2.0);
        assert_eq!(ell_max(&[5.0, 5.0, 1.0], 2).unwrap(), 5.0);
        assert_eq!(ell_max(&[3.0, 1.0, 2.0], 1).unwrap(), 3.0);
        assert!(ell_max(&[1.0, 2.0], 3).is_err());
        assert!(ell_max(&[1.0, 2.0], 0).is_err());
    }

    #[test]
    fn ell_max_matches_sorting_for_large_ell() {
        let mut rng = rng_from_seed(5);
        let mut values = vec![0.0; 200];
        fill_standard_normal(&mut rng, &mut values);
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        for ell in [1usize, 2, 16, 17, 50, 200] {
            assert_eq!(ell_max(&values, ell).unwrap(), sorted[ell - 1]);
        }
    }

    #[test]
    fn fit_rpd_on_square_corners() {
        let corners = PointCloud::from_rows(vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ])
        .unwrap();
        let p = fit_rpd(&corners, &axis_cross_2d(), 1).unwrap();
        assert_eq!(p.offsets(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn fit_rpd_outer_bound_holds() {
        let cloud = gaussian_cloud(60, 3, 11);
        let dirs = DirectionSet::sample(20, 3, 12).unwrap();
        let p = dual_bounding_body(&cloud, &dirs).unwrap();
        for x in cloud.iter() {
            assert!(p.contains(x, 1e-9).unwrap());
        }
    }

    #[test]
    fn fit_rpd_rejects_bad_arguments() {
        let cloud = gaussian_cloud(5, 3, 1);
        let dirs = DirectionSet::sample(4, 2, 1).unwrap();
        assert!(matches!(
            fit_rpd(&cloud, &dirs, 1),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        let dirs3 = DirectionSet::sample(4, 3, 1).unwrap();
        assert!(fit_rpd(&cloud, &dirs3, 6).is_err());
    }

    #[test]
    fn contains_on_unit_square() {
        let p = unit_square();
        assert!(p.contains(&[0.0, 0.0], 0.0).unwrap());
        assert!(!p.contains(&[2.0, 0.0], 0.0).unwrap());
        assert!(p.contains(&[1.0 + 1e-10, 0.0], 1e-9).unwrap());
        assert!(matches!(
            p.contains(&[0.0, 0.0, 0.0], 0.0),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scaling_distance_on_unit_square() {
        let mut p = unit_square();
        p.set_central_point(vec![0.0, 0.0], CentralPointPolicy::UserSupplied)
            .unwrap();
        assert_eq!(p.scaling_distance(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((p.scaling_distance(&[2.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((p.scaling_distance(&[1.0, 0.5]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_distance_requires_interior_center() {
        let mut p = unit_square();
        assert!(matches!(
            p.scaling_distance(&[0.0, 0.0]),
            Err(GeometryError::MissingCentralPoint)
        ));
        p.set_central_point(vec![1.0, 0.0], CentralPointPolicy::UserSupplied)
            .unwrap();
        assert!(matches!(
            p.scaling_distance(&[0.0, 0.0]),
            Err(GeometryError::CentralPointNotInterior { .. })
        ));
    }

    #[test]
    fn scaling_distance_matches_containment() {
        let cloud = gaussian_cloud(40, 3, 21);
        let dirs = DirectionSet::sample(24, 3, 22).unwrap();
        let p = fit_rpd(&cloud, &dirs, 1).unwrap();
        let c = cloud.mean();
        let mut rng = rng_from_seed(23);
        let mut q = vec![0.0; 3];
        for _ in 0..200 {
            fill_standard_normal(&mut rng, &mut q);
            for v in &mut q {
                *v *= 2.0;
            }
            let sd = p.scaling_distance_from(&c, &q).unwrap();
            let inside = p.contains(&q, 0.0).unwrap();
            if (sd - 1.0).abs() > 1e-9 {
                assert_eq!(sd <= 1.0, inside, "sd={sd}, inside={inside}");
            }
        }
    }

    #[test]
    fn ell_monotonicity_nests_offsets() {
        let cloud = gaussian_cloud(30, 2, 31);
        let dirs = DirectionSet::sample(16, 2, 32).unwrap();
        let mut prev = fit_rpd(&cloud, &dirs, 1).unwrap();
        for ell in 2..=5 {
            let next = fit_rpd(&cloud, &dirs, ell).unwrap();
            for (a, b) in next.offsets().iter().zip(prev.offsets()) {
                assert!(a <= b);
            }
            prev = next;
        }
    }

    #[test]
    fn positively_spanning_examples() {
        assert!(is_positively_spanning(&axis_cross_2d()).unwrap());
        let half = DirectionSet::from_vectors(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(!is_positively_spanning(&half).unwrap());
        // 50 random directions in R^3 positively span with overwhelming
        // probability.
        for seed in 0..3 {
            let dirs = DirectionSet::sample(50, 3, derive_seed(99, seed)).unwrap();
            assert!(is_positively_spanning(&dirs).unwrap());
        }
    }

    #[test]
    fn translated_polytope_shifts_offsets() {
        let mut p = unit_square();
        p.set_central_point(vec![0.0, 0.0], CentralPointPolicy::UserSupplied)
            .unwrap();
        let t = [3.0, -2.0];
        let q = p.translated(&t).unwrap();
        assert_eq!(q.offsets(), &[4.0, -2.0, -1.0, 3.0]);
        let sd_p = p.scaling_distance(&[0.5, 0.25]).unwrap();
        let sd_q = q.scaling_distance(&[3.5, -1.75]).unwrap();
        assert!((sd_p - sd_q).abs() < 1e-12);
    }
}
