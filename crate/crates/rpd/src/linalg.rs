//! Small dense vector and matrix helpers shared by the geometry, LP, and
//! data-generation code. Everything here works on flat `f64` slices.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Solves the `n x n` system `A x = rhs` in place by Gaussian elimination
/// with partial pivoting. `a` is row-major scratch and gets destroyed; the
/// solution lands in `rhs`. Returns `false` when a pivot falls below
/// `pivot_tol` (singular up to tolerance).
pub(crate) fn solve_in_place(a: &mut [f64], rhs: &mut [f64], n: usize, pivot_tol: f64) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(rhs.len(), n);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= pivot_tol {
            return false;
        }
        if p != k {
            for j in k..n {
                a.swap(k * n + j, p * n + j);
            }
            rhs.swap(k, p);
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            a[i * n + k] = 0.0;
            for j in k + 1..n {
                a[i * n + j] -= f * a[k * n + j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for j in k + 1..n {
            s -= a[k * n + j] * rhs[j];
        }
        rhs[k] = s / a[k * n + k];
    }
    true
}

/// LU factorization with partial pivoting, supporting solves with the
/// matrix and with its transpose. Used by the simplex solver, where both
/// `B w = v` and `B^T pi = v` are needed against the same basis matrix.
pub(crate) struct Lu {
    n: usize,
    lu: Vec<f64>,        // combined L (unit diagonal) and U factors, row-major
    row_src: Vec<usize>, // row k of the factored matrix came from input row row_src[k]
}

impl Lu {
    pub(crate) fn factor(mut a: Vec<f64>, n: usize, pivot_tol: f64) -> Option<Lu> {
        debug_assert_eq!(a.len(), n * n);
        let mut row_src: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= pivot_tol {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                row_src.swap(k, p);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                if f == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        Some(Lu { n, lu: a, row_src })
    }

    /// Solves `A x = b`.
    #[allow(clippy::needless_range_loop)] // triangular solves read clearest indexed
    pub(crate) fn solve(&self, b: &[f64], x: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            let mut s = b[self.row_src[k]];
            for j in 0..k {
                s -= self.lu[k * n + j] * x[j];
            }
            x[k] = s;
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..n {
                s -= self.lu[k * n + j] * x[j];
            }
            x[k] = s / self.lu[k * n + k];
        }
    }

    /// Solves `A^T x = b` using `A^T = U^T L^T P`.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn solve_transpose(&self, b: &[f64], x: &mut [f64], scratch: &mut [f64]) {
        let n = self.n;
        // Forward: U^T z = b (U^T is lower triangular with U's diagonal).
        for k in 0..n {
            let mut s = b[k];
            for j in 0..k {
                s -= self.lu[j * n + k] * scratch[j];
            }
            scratch[k] = s / self.lu[k * n + k];
        }
        // Backward: L^T w = z (unit diagonal).
        for k in (0..n).rev() {
            let mut s = scratch[k];
            for j in k + 1..n {
                s -= self.lu[j * n + k] * scratch[j];
            }
            scratch[k] = s;
        }
        // Undo the row permutation: x = P^T w.
        for k in 0..n {
            x[self.row_src[k]] = scratch[k];
        }
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix, or `None` if the matrix is not SPD up to roundoff.
pub(crate) fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_in_place_recovers_known_solution() {
        // 2x + y = 5, x + 3y = 10 -> x = 1, y = 3
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        let mut b = vec![5.0, 10.0];
        assert!(solve_in_place(&mut a, &mut b, 2, 1e-12));
        assert!((b[0] - 1.0).abs() < 1e-12);
        assert!((b[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_in_place_detects_singular() {
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 2.0];
        assert!(!solve_in_place(&mut a, &mut b, 2, 1e-12));
    }

    #[test]
    fn lu_solves_both_orientations() {
        let a = vec![4.0, 1.0, 2.0, 0.5, 3.0, -1.0, 1.5, -2.0, 5.0];
        let lu = Lu::factor(a.clone(), 3, 1e-12).unwrap();
        let x_true = [1.0, -2.0, 0.5];
        let mut b = [0.0; 3];
        for i in 0..3 {
            b[i] = (0..3).map(|j| a[i * 3 + j] * x_true[j]).sum();
        }
        let mut x = [0.0; 3];
        lu.solve(&b, &mut x);
        for i in 0..3 {
            assert!((x[i] - x_true[i]).abs() < 1e-12);
        }
        let mut bt = [0.0; 3];
        for i in 0..3 {
            bt[i] = (0..3).map(|j| a[j * 3 + i] * x_true[j]).sum();
        }
        let mut scratch = [0.0; 3];
        lu.solve_transpose(&bt, &mut x, &mut scratch);
        for i in 0..3 {
            assert!((x[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_roundtrips() {
        // A = L L^T for L = [[2,0],[1,3]] -> A = [[4,2],[2,10]]
        let a = vec![4.0, 2.0, 2.0, 10.0];
        let l = cholesky(&a, 2).unwrap();
        assert!((l[0] - 2.0).abs() < 1e-12);
        assert!((l[2] - 1.0).abs() < 1e-12);
        assert!((l[3] - 3.0).abs() < 1e-12);
        let not_spd = vec![1.0, 2.0, 2.0, 1.0];
        assert!(cholesky(&not_spd, 2).is_none());
    }
}
