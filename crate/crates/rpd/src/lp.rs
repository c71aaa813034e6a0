//! Dense linear programming over inequality systems, plus the polytope
//! operations built on it: Chebyshev centers, random vertices,
//! vertex-barycenter estimation, and brute-force vertex enumeration for
//! small dimensions.
//!
//! Problems have the form `maximize <c, x>` subject to `<a_i, x> <= b_i`
//! with `x` free. These systems have few variables and many constraints,
//! so the solver runs the two-phase simplex method on the standard-form
//! dual (`min <b, y>`, `A^T y = c`, `y >= 0`), whose basis has size `d`.
//! The multipliers of the optimal dual basis are the primal solution, and
//! they sit on exactly `d` active constraints, i.e. the solver natively
//! returns a vertex of the feasible region.

use rayon::prelude::*;

use crate::geometry::HPolytope;
use crate::linalg::{distance, dot, solve_in_place, Lu};
use crate::rng::{derive_seed, rng_from_seed, unit_vector};

/// Dimension cutoff for vertex enumeration; the scan solves `C(m, d)`
/// linear systems.
pub const DEFAULT_ENUMERATION_GUARD: usize = 4;

/// Vertices closer than this (Euclidean) are merged during enumeration.
pub const VERTEX_DEDUP_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polytope is not bounded")]
    NotBounded,
    #[error("feasible region is empty")]
    Empty,
    #[error("dimension {d} exceeds the enumeration guard {max_d}")]
    DimensionGuard { d: usize, max_d: usize },
    #[error("simplex failure: {0}")]
    SolverFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
}

/// Solver tolerances. `feasibility_tol` bounds constraint violation and
/// reduced-cost optimality; `pivot_tol` is the smallest acceptable pivot.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub pivot_tol: f64,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feasibility_tol: 1e-9,
            pivot_tol: 1e-10,
            max_iterations: 200_000,
        }
    }
}

/// `maximize <objective, x>` subject to `<a_i, x> <= b_i`, `x` free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<f64>, // m x d constraint normals, row-major
    rhs: Vec<f64>,
    d: usize,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Result<Self, LpError> {
        if objective.is_empty() {
            return Err(LpError::InvalidArgument(
                "objective must have dimension >= 1".into(),
            ));
        }
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::InvalidArgument(
                "objective coefficients must be finite".into(),
            ));
        }
        let d = objective.len();
        Ok(LpProblem {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
            d,
        })
    }

    pub fn add_constraint(&mut self, coeffs: &[f64], rhs: f64) -> Result<(), LpError> {
        if coeffs.len() != self.d {
            return Err(LpError::InvalidArgument(format!(
                "constraint has {} coefficients, expected {}",
                coeffs.len(),
                self.d
            )));
        }
        if coeffs.iter().any(|v| !v.is_finite()) || !rhs.is_finite() {
            return Err(LpError::InvalidArgument(
                "constraint coefficients must be finite".into(),
            ));
        }
        self.rows.extend_from_slice(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn from_polytope(p: &HPolytope, objective: Vec<f64>) -> Result<Self, LpError> {
        if objective.len() != p.dim() {
            return Err(LpError::InvalidArgument(format!(
                "objective dimension {} does not match polytope dimension {}",
                objective.len(),
                p.dim()
            )));
        }
        let mut problem = LpProblem::new(objective)?;
        problem.rows = p.directions().as_flat().to_vec();
        problem.rhs = p.offsets().to_vec();
        Ok(problem)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.d..(i + 1) * self.d]
    }
}

/// Solves the program. `Ok` covers all three regular statuses; `Err` is
/// reserved for invalid input and numerical breakdown.
pub fn lp_solve(problem: &LpProblem, opts: &SimplexOptions) -> Result<LpSolution, LpError> {
    solve_inner(problem, opts, true)
}

fn solve_inner(
    problem: &LpProblem,
    opts: &SimplexOptions,
    allow_feasibility_probe: bool,
) -> Result<LpSolution, LpError> {
    if problem.rhs.is_empty() {
        return Err(LpError::InvalidArgument(
            "problem must have at least one constraint".into(),
        ));
    }
    let mut simplex = DualSimplex::new(problem, opts);
    match simplex.run()? {
        DualOutcome::Optimal { point } => {
            let objective_value = dot(&problem.objective, &point);
            Ok(LpSolution {
                status: LpStatus::Optimal,
                point: Some(point),
                objective_value: Some(objective_value),
            })
        }
        DualOutcome::DualUnbounded => Ok(LpSolution {
            status: LpStatus::Infeasible,
            point: None,
            objective_value: None,
        }),
        DualOutcome::DualInfeasible => {
            // The objective is not expressible over the constraint normals:
            // the primal is unbounded if feasible at all. Distinguish with a
            // feasibility probe (max -t s.t. <a_i, x> - t <= b_i, t >= 0),
            // which is always feasible and bounded.
            if !allow_feasibility_probe {
                return Err(LpError::SolverFailure(
                    "nested feasibility probe did not resolve".into(),
                ));
            }
            let d = problem.d;
            let mut aux_objective = vec![0.0; d + 1];
            aux_objective[d] = -1.0;
            let mut aux = LpProblem::new(aux_objective)?;
            for i in 0..problem.num_constraints() {
                let mut row = Vec::with_capacity(d + 1);
                row.extend_from_slice(problem.row(i));
                row.push(-1.0);
                aux.add_constraint(&row, problem.rhs[i])?;
            }
            let mut t_row = vec![0.0; d + 1];
            t_row[d] = -1.0;
            aux.add_constraint(&t_row, 0.0)?;
            let probe = solve_inner(&aux, opts, false)?;
            match probe.status {
                LpStatus::Optimal => {
                    let violation = -probe.objective_value.unwrap_or(f64::INFINITY);
                    let scale = 1.0 + problem.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
                    if violation <= opts.feasibility_tol * scale {
                        Ok(LpSolution {
                            status: LpStatus::Unbounded,
                            point: None,
                            objective_value: None,
                        })
                    } else {
                        Ok(LpSolution {
                            status: LpStatus::Infeasible,
                            point: None,
                            objective_value: None,
                        })
                    }
                }
                _ => Err(LpError::SolverFailure(
                    "feasibility probe returned a non-optimal status".into(),
                )),
            }
        }
    }
}

enum DualOutcome {
    Optimal { point: Vec<f64> },
    /// Dual unbounded below, i.e. the primal is infeasible.
    DualUnbounded,
    /// Dual has no feasible point, i.e. the primal is unbounded or infeasible.
    DualInfeasible,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

const STALL_LIMIT: usize = 60;

/// Column `j` of the dual constraint matrix: a constraint normal for
/// `j < m`, a signed artificial unit column otherwise.
fn write_column(problem: &LpProblem, sigma: &[f64], j: usize, out: &mut [f64]) {
    let m = problem.num_constraints();
    if j < m {
        out.copy_from_slice(problem.row(j));
    } else {
        out.fill(0.0);
        out[j - m] = sigma[j - m];
    }
}

/// Two-phase primal simplex on the dual standard form. Columns `0..m` are
/// the constraint normals `a_i`; columns `m..m + d` are signed artificial
/// unit columns used to build the starting basis.
struct DualSimplex<'a> {
    problem: &'a LpProblem,
    opts: &'a SimplexOptions,
    d: usize,
    m: usize,
    sigma: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    // Scratch buffers reused across iterations.
    basis_matrix: Vec<f64>,
    y_basic: Vec<f64>,
    multipliers: Vec<f64>,
    direction: Vec<f64>,
    scratch: Vec<f64>,
    column: Vec<f64>,
}

impl<'a> DualSimplex<'a> {
    fn new(problem: &'a LpProblem, opts: &'a SimplexOptions) -> Self {
        let d = problem.d;
        let m = problem.num_constraints();
        let sigma: Vec<f64> = problem
            .objective
            .iter()
            .map(|&c| if c >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let basis: Vec<usize> = (m..m + d).collect();
        let mut in_basis = vec![false; m + d];
        for &j in &basis {
            in_basis[j] = true;
        }
        DualSimplex {
            problem,
            opts,
            d,
            m,
            sigma,
            basis,
            in_basis,
            basis_matrix: vec![0.0; d * d],
            y_basic: vec![0.0; d],
            multipliers: vec![0.0; d],
            direction: vec![0.0; d],
            scratch: vec![0.0; d],
            column: vec![0.0; d],
        }
    }

    fn cost(&self, j: usize, phase_one: bool) -> f64 {
        if phase_one {
            if j < self.m {
                0.0
            } else {
                1.0
            }
        } else if j < self.m {
            self.problem.rhs[j]
        } else {
            0.0
        }
    }

    fn factor_basis(&mut self) -> Result<Lu, LpError> {
        let d = self.d;
        for (k, &j) in self.basis.iter().enumerate() {
            write_column(self.problem, &self.sigma, j, &mut self.column);
            for r in 0..d {
                self.basis_matrix[r * d + k] = self.column[r];
            }
        }
        Lu::factor(self.basis_matrix.clone(), d, self.opts.pivot_tol).ok_or_else(|| {
            LpError::SolverFailure("basis matrix became numerically singular".into())
        })
    }

    /// Runs one simplex phase; returns whether it ended optimal or with an
    /// unbounded improving ray.
    fn run_phase(&mut self, phase_one: bool) -> Result<PhaseEnd, LpError> {
        let c_scale = 1.0
            + self
                .problem
                .objective
                .iter()
                .fold(0.0f64, |a, b| a.max(b.abs()));
        let mut bland = false;
        let mut stall = 0usize;
        let mut best_obj = f64::INFINITY;
        for _iter in 0..self.opts.max_iterations {
            let lu = self.factor_basis()?;
            lu.solve(&self.problem.objective, &mut self.y_basic);
            for v in &mut self.y_basic {
                if *v < 0.0 {
                    if *v < -1e-6 * c_scale {
                        return Err(LpError::SolverFailure(format!(
                            "basic solution lost feasibility (value {v:e})"
                        )));
                    }
                    *v = 0.0;
                }
            }
            let mut cost_basic = vec![0.0; self.d];
            for (k, &j) in self.basis.iter().enumerate() {
                cost_basic[k] = self.cost(j, phase_one);
            }

            // Anti-cycling: a long run of iterations without progress in the
            // phase objective switches pricing to Bland's rule.
            let obj: f64 = cost_basic
                .iter()
                .zip(&self.y_basic)
                .map(|(c, y)| c * y)
                .sum();
            if obj < best_obj - 1e-12 * (1.0 + best_obj.abs()) {
                best_obj = obj;
                stall = 0;
            } else {
                stall += 1;
                if stall > STALL_LIMIT {
                    bland = true;
                }
            }

            lu.solve_transpose(&cost_basic, &mut self.multipliers, &mut self.scratch);

            // Pricing over nonbasic real columns; artificials never enter.
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.m {
                if self.in_basis[j] {
                    continue;
                }
                let reduced =
                    self.cost(j, phase_one) - dot(&self.multipliers, self.problem.row(j));
                if reduced < -self.opts.feasibility_tol {
                    if bland {
                        entering = Some((j, reduced));
                        break;
                    }
                    match entering {
                        Some((_, best)) if reduced >= best => {}
                        _ => entering = Some((j, reduced)),
                    }
                }
            }
            let Some((enter, _)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            write_column(self.problem, &self.sigma, enter, &mut self.column);
            lu.solve(&self.column, &mut self.direction);

            // Ratio test.
            let mut theta = f64::INFINITY;
            let mut leave_slot: Option<usize> = None;
            for k in 0..self.d {
                let w = self.direction[k];
                if w > self.opts.pivot_tol {
                    let ratio = self.y_basic[k] / w;
                    let improves = match leave_slot {
                        None => true,
                        Some(slot) => {
                            if ratio < theta - 1e-12 * (1.0 + theta.abs()) {
                                true
                            } else if ratio <= theta + 1e-12 * (1.0 + theta.abs()) {
                                if bland {
                                    self.basis[k] < self.basis[slot]
                                } else {
                                    // Flush artificials first, then prefer the
                                    // larger pivot for stability.
                                    let k_art = self.basis[k] >= self.m;
                                    let s_art = self.basis[slot] >= self.m;
                                    k_art && !s_art
                                        || (k_art == s_art && w > self.direction[slot])
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if improves {
                        theta = ratio.min(theta);
                        leave_slot = Some(k);
                    }
                }
            }
            let Some(slot) = leave_slot else {
                return Ok(PhaseEnd::Unbounded);
            };

            let leaving = self.basis[slot];
            self.in_basis[leaving] = false;
            self.in_basis[enter] = true;
            self.basis[slot] = enter;
        }
        Err(LpError::SolverFailure(format!(
            "iteration limit {} exceeded",
            self.opts.max_iterations
        )))
    }

    fn run(&mut self) -> Result<DualOutcome, LpError> {
        let c_scale = 1.0
            + self
                .problem
                .objective
                .iter()
                .fold(0.0f64, |a, b| a.max(b.abs()));
        match self.run_phase(true)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(LpError::SolverFailure(
                    "phase one cannot be unbounded".into(),
                ))
            }
        }
        // Residual infeasibility = sum of artificial values at the phase-1
        // optimum.
        let lu = self.factor_basis()?;
        lu.solve(&self.problem.objective, &mut self.y_basic);
        let infeasibility: f64 = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &j)| j >= self.m)
            .map(|(k, _)| self.y_basic[k].max(0.0))
            .sum();
        if infeasibility > self.opts.feasibility_tol * c_scale {
            return Ok(DualOutcome::DualInfeasible);
        }
        self.drive_out_artificials()?;
        match self.run_phase(false)? {
            PhaseEnd::Optimal => {
                let lu = self.factor_basis()?;
                let mut cost_basic = vec![0.0; self.d];
                for (k, &j) in self.basis.iter().enumerate() {
                    cost_basic[k] = self.cost(j, false);
                }
                let mut point = vec![0.0; self.d];
                lu.solve_transpose(&cost_basic, &mut point, &mut self.scratch);
                Ok(DualOutcome::Optimal { point })
            }
            PhaseEnd::Unbounded => Ok(DualOutcome::DualUnbounded),
        }
    }

    /// Replaces basic artificials (at value zero after phase 1) with real
    /// columns where possible. An artificial with no admissible pivot sits
    /// on a redundant equality and stays in the basis at zero.
    fn drive_out_artificials(&mut self) -> Result<(), LpError> {
        let slots: Vec<usize> = (0..self.d).filter(|&k| self.basis[k] >= self.m).collect();
        if slots.is_empty() {
            return Ok(());
        }
        for slot in slots {
            let lu = self.factor_basis()?;
            let mut unit = vec![0.0; self.d];
            unit[slot] = 1.0;
            let mut row_map = vec![0.0; self.d];
            lu.solve_transpose(&unit, &mut row_map, &mut self.scratch);
            let mut replacement = None;
            for j in 0..self.m {
                if self.in_basis[j] {
                    continue;
                }
                if dot(&row_map, self.problem.row(j)).abs() > self.opts.pivot_tol * 10.0 {
                    replacement = Some(j);
                    break;
                }
            }
            if let Some(j) = replacement {
                let old = self.basis[slot];
                self.in_basis[old] = false;
                self.in_basis[j] = true;
                self.basis[slot] = j;
            }
        }
        Ok(())
    }
}

/// Center and radius of the largest inscribed ball: maximize `r` subject to
/// `<y_i, c> + r <= b_i` (valid since directions are unit) and `r >= 0`.
/// The center is strictly interior exactly when the radius is positive.
pub fn chebyshev_center(p: &HPolytope) -> Result<(Vec<f64>, f64), LpError> {
    let d = p.dim();
    let mut objective = vec![0.0; d + 1];
    objective[d] = 1.0;
    let mut problem = LpProblem::new(objective)?;
    let mut row = Vec::with_capacity(d + 1);
    for (y, b) in p.directions().iter().zip(p.offsets()) {
        row.clear();
        row.extend_from_slice(y);
        row.push(1.0);
        problem.add_constraint(&row, *b)?;
    }
    let mut nonneg = vec![0.0; d + 1];
    nonneg[d] = -1.0;
    problem.add_constraint(&nonneg, 0.0)?;
    let solution = lp_solve(&problem, &SimplexOptions::default())?;
    match solution.status {
        LpStatus::Optimal => {
            let z = solution.point.expect("optimal solutions carry a point");
            let radius = z[d];
            Ok((z[..d].to_vec(), radius))
        }
        LpStatus::Unbounded => Err(LpError::NotBounded),
        LpStatus::Infeasible => Err(LpError::Empty),
    }
}

/// One random vertex of a bounded polytope: the maximizer of a uniformly
/// random unit objective drawn from `seed`.
pub fn random_vertex(p: &HPolytope, seed: u64) -> Result<Vec<f64>, LpError> {
    let mut rng = rng_from_seed(seed);
    let objective = unit_vector(&mut rng, p.dim());
    let problem = LpProblem::from_polytope(p, objective)?;
    let solution = lp_solve(&problem, &SimplexOptions::default())?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.point.expect("optimal solutions carry a point")),
        LpStatus::Unbounded => Err(LpError::NotBounded),
        LpStatus::Infeasible => Err(LpError::Empty),
    }
}

/// Mean of `s` random vertices with independent objectives derived from
/// `seed`. Deterministic in `(p, s, seed)` regardless of thread count.
///
/// Concentration arguments put the sample size needed for accuracy `eps`
/// with failure probability `p` at the order of `log(1/p) / eps^2` times a
/// shape-dependent constant that is hard to estimate in practice, so `s`
/// stays a caller choice here.
pub fn vertex_barycenter_estimate(
    p: &HPolytope,
    s: usize,
    seed: u64,
) -> Result<Vec<f64>, LpError> {
    if s == 0 {
        return Err(LpError::InvalidArgument(
            "sample count s must be at least 1".into(),
        ));
    }
    let seeds: Vec<u64> = (0..s).map(|i| derive_seed(seed, i as u64)).collect();
    let vertices: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&vs| random_vertex(p, vs))
        .collect::<Result<_, _>>()?;
    let d = p.dim();
    let mut mean = vec![0.0; d];
    for v in &vertices {
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= s as f64;
    }
    Ok(mean)
}

/// All vertices of the polytope, by solving every `d`-subset of constraints
/// and keeping the solutions feasible for the full system. Refuses to run
/// above `max_d` since the subset count is `C(m, d)`. Points closer than
/// [`VERTEX_DEDUP_TOL`] are merged.
pub fn enumerate_vertices(p: &HPolytope, max_d: usize) -> Result<Vec<Vec<f64>>, LpError> {
    let d = p.dim();
    if d > max_d {
        return Err(LpError::DimensionGuard { d, max_d });
    }
    let m = p.num_constraints();
    if m < d {
        return Ok(Vec::new());
    }
    let feas_tol = 1e-9;
    let pivot_tol = 1e-10;
    let candidates: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .flat_map_iter(|first| SubsetScan::new(p, first, d, feas_tol, pivot_tol))
        .collect();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for cand in candidates {
        if !vertices
            .iter()
            .any(|v| distance(v, &cand) < VERTEX_DEDUP_TOL)
        {
            vertices.push(cand);
        }
    }
    Ok(vertices)
}

/// Iterator over feasible intersection points of constraint subsets that
/// start with a fixed first index.
struct SubsetScan<'a> {
    p: &'a HPolytope,
    idx: Vec<usize>,
    d: usize,
    m: usize,
    feas_tol: f64,
    pivot_tol: f64,
    mat: Vec<f64>,
    rhs: Vec<f64>,
    done: bool,
}

impl<'a> SubsetScan<'a> {
    fn new(p: &'a HPolytope, first: usize, d: usize, feas_tol: f64, pivot_tol: f64) -> Self {
        let m = p.num_constraints();
        let mut idx = vec![0usize; d];
        let mut done = false;
        for (k, slot) in idx.iter_mut().enumerate() {
            *slot = first + k;
            if *slot >= m && k > 0 {
                done = true;
            }
        }
        SubsetScan {
            p,
            idx,
            d,
            m,
            feas_tol,
            pivot_tol,
            mat: vec![0.0; d * d],
            rhs: vec![0.0; d],
            done,
        }
    }

    /// Advances indices 1.. lexicographically (index 0 is pinned).
    fn advance(&mut self) {
        if self.d == 1 {
            self.done = true;
            return;
        }
        let mut k = self.d - 1;
        loop {
            if self.idx[k] + (self.d - k) <= self.m {
                self.idx[k] += 1;
                if self.idx[k] + (self.d - 1 - k) < self.m {
                    for j in k + 1..self.d {
                        self.idx[j] = self.idx[j - 1] + 1;
                    }
                    return;
                }
            }
            if k == 1 {
                self.done = true;
                return;
            }
            k -= 1;
        }
    }
}

impl Iterator for SubsetScan<'_> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        while !self.done {
            let d = self.d;
            for (r, &ci) in self.idx.iter().enumerate() {
                self.mat[r * d..(r + 1) * d].copy_from_slice(self.p.directions().direction(ci));
                self.rhs[r] = self.p.offsets()[ci];
            }
            let solvable = solve_in_place(&mut self.mat, &mut self.rhs, d, self.pivot_tol);
            let candidate = if solvable {
                let x = &self.rhs;
                let feasible = self
                    .p
                    .directions()
                    .iter()
                    .zip(self.p.offsets())
                    .all(|(y, b)| dot(x, y) <= b + self.feas_tol);
                feasible.then(|| x.clone())
            } else {
                None
            };
            self.advance();
            if candidate.is_some() {
                return candidate;
            }
        }
        None
    }
}
