//! Leading eigenpairs of a dense matrix by orthogonal (subspace) iteration.

use nalgebra::{linalg::Schur, DMatrix};

use crate::matrix::{Matrix, SparseMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 200_000;
const RESIDUAL_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    /// Sorted by decreasing magnitude.
    pub values: Vec<f64>,
    /// n×l, column k is a unit eigenvector for `values[k]`.
    pub vectors: Matrix,
}

/// The `l` eigenpairs of `p` with largest-magnitude eigenvalues.
///
/// Iterates `Q ← orth(P Q)` until the invariant-subspace residual
/// `‖PQ − Q(QᵀPQ)‖` is negligible, then diagonalizes the small projected
/// matrix. Complex leading eigenvalues are reported as a failure.
pub fn leading_eigenvectors(p: &Matrix, l: usize) -> Result<Eigenpairs> {
    let n = p.rows();
    if p.cols() != n {
        return Err(Error::SizeMismatch(format!("matrix is {}x{}", n, p.cols())));
    }
    if l > n {
        return Err(Error::SizeMismatch(format!(
            "requested {l} eigenpairs of a {n}x{n} matrix"
        )));
    }
    if l == 0 {
        return Ok(Eigenpairs {
            values: Vec::new(),
            vectors: Matrix::zeros(n, 0),
        });
    }
    let sparse = SparseMatrix::from_dense(p);
    let scale = p.max_abs().max(1.0);

    let mut q = start_block(n, l);
    orthonormalize(&mut q, 0);
    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let z = sparse.mul_dense(&q);
        let h = q.transpose().matmul(&z);
        let resid = z.max_abs_diff(&q.matmul(&h));
        if resid <= RESIDUAL_TOL * scale {
            converged = true;
            break;
        }
        q = z;
        orthonormalize(&mut q, sweep as u64 + 1);
    }
    if !converged {
        return Err(Error::EigensolverFailure(format!(
            "subspace iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let h = q.transpose().matmul(&sparse.mul_dense(&q));
    let (values, small) = small_eigen(&h, scale)?;
    let mut vectors = q.matmul(&small);

    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    let values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    vectors = vectors.select(&(0..n).collect::<Vec<_>>(), &order);
    for k in 0..l {
        normalize_column(&mut vectors, k);
    }
    // a Jordan block perturbed by rounding splits into nearly equal
    // eigenvalues whose eigenvectors are nearly parallel
    for a in 0..l {
        for b in a + 1..l {
            let cos: f64 = (0..n).map(|i| vectors[(i, a)] * vectors[(i, b)]).sum();
            if cos.abs() > 1.0 - 1e-8 {
                return Err(Error::DefectiveMatrix(values[a]));
            }
        }
    }
    Ok(Eigenpairs { values, vectors })
}

/// First column is the all-ones direction (the Perron vector of any
/// stochastic matrix); the rest are fixed pseudo-random columns.
fn start_block(n: usize, l: usize) -> Matrix {
    let mut q = Matrix::zeros(n, l);
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    for i in 0..n {
        q[(i, 0)] = 1.0;
        for k in 1..l {
            q[(i, k)] = splitmix(&mut state);
        }
    }
    q
}

fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Columns that
/// collapse are replaced by fresh pseudo-random directions.
fn orthonormalize(q: &mut Matrix, salt: u64) {
    let (n, l) = (q.rows(), q.cols());
    let mut state = salt.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ 0x2545_F491_4F6C_DD1D;
    for k in 0..l {
        let mut attempts = 0;
        loop {
            for _ in 0..2 {
                for j in 0..k {
                    let dot: f64 = (0..n).map(|i| q[(i, j)] * q[(i, k)]).sum();
                    for i in 0..n {
                        q[(i, k)] -= dot * q[(i, j)];
                    }
                }
            }
            let norm = (0..n).map(|i| q[(i, k)].powi(2)).sum::<f64>().sqrt();
            if norm > 1e-200 && attempts < 8 {
                for i in 0..n {
                    q[(i, k)] /= norm;
                }
                break;
            }
            attempts += 1;
            for i in 0..n {
                q[(i, k)] = splitmix(&mut state);
            }
        }
    }
}

fn normalize_column(m: &mut Matrix, k: usize) {
    let n = m.rows();
    let norm = (0..n).map(|i| m[(i, k)].powi(2)).sum::<f64>().sqrt();
    let pivot = (0..n)
        .map(|i| m[(i, k)])
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    let s = if pivot < 0.0 { -norm } else { norm };
    if s != 0.0 {
        for i in 0..n {
            m[(i, k)] /= s;
        }
    }
}

/// Eigen-decomposition of a small real matrix with real spectrum, via the
/// real Schur form and back-substitution on the triangular factor.
fn small_eigen(h: &Matrix, scale: f64) -> Result<(Vec<f64>, Matrix)> {
    let l = h.rows();
    let dm = DMatrix::from_row_slice(l, l, h.as_slice());
    // the projected matrix is only accurate to the subspace residual, and a
    // tighter deflation test stalls on clustered eigenvalues
    let schur = Schur::try_new(dm, RESIDUAL_TOL, 10_000)
        .ok_or_else(|| Error::EigensolverFailure("Schur decomposition did not converge".into()))?;
    let (u, t) = schur.unpack();
    for k in 0..l.saturating_sub(1) {
        if t[(k + 1, k)].abs() > 1e-12 * scale {
            let (a, b, c, d) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
            let disc = ((a - d) / 2.0).powi(2) + b * c;
            // a rounding-split Jordan block shows up as a nearly real pair
            if disc < 0.0 && (-disc).sqrt() <= 1e-6 * scale {
                return Err(Error::DefectiveMatrix((a + d) / 2.0));
            }
            return Err(Error::EigensolverFailure(
                "leading eigenvalues are complex".into(),
            ));
        }
    }
    let values: Vec<f64> = (0..l).map(|k| t[(k, k)]).collect();
    let sep = 1e-9 * scale;
    let mut v = Matrix::zeros(l, l);
    for k in 0..l {
        let lambda = values[k];
        v[(k, k)] = 1.0;
        for j in (0..k).rev() {
            let rhs: f64 = (j + 1..=k).map(|c| t[(j, c)] * v[(c, k)]).sum();
            let d = t[(j, j)] - lambda;
            if d.abs() > sep {
                v[(j, k)] = -rhs / d;
            } else if rhs.abs() <= sep {
                v[(j, k)] = 0.0;
            } else {
                return Err(Error::DefectiveMatrix(lambda));
            }
        }
    }
    let mut um = Matrix::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            um[(i, j)] = u[(i, j)];
        }
    }
    Ok((values, um.matmul(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(p: &Matrix, e: &Eigenpairs) -> f64 {
        let pv = p.matmul(&e.vectors);
        let mut worst: f64 = 0.0;
        for k in 0..e.values.len() {
            for i in 0..p.rows() {
                worst = worst.max((pv[(i, k)] - e.values[k] * e.vectors[(i, k)]).abs());
            }
        }
        worst
    }

    #[test]
    fn identity() {
        let e = leading_eigenvectors(&Matrix::identity(2), 2).unwrap();
        for v in &e.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn swap_matrix_perron_vector() {
        let p = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let e = leading_eigenvectors(&p, 1).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        let h = 1.0 / 2f64.sqrt();
        assert!((e.vectors[(0, 0)] - h).abs() < 1e-12);
        assert!((e.vectors[(1, 0)] - h).abs() < 1e-12);
    }

    #[test]
    fn absorbing_path_has_double_unit_eigenvalue() {
        // path A–u–B, labeled first: P = [[1,0,0],[0,1,0],[½,½,0]];
        // characteristic polynomial (1−λ)²(−λ) gives eigenvalues 1, 1, 0
        let p = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.5, 0.5, 0.0]]);
        let e = leading_eigenvectors(&p, 2).unwrap();
        for v in &e.values {
            assert!((v - 1.0).abs() <= 1e-8);
        }
        assert!(residual(&p, &e) < 1e-10);
        let all = leading_eigenvectors(&p, 3).unwrap();
        assert!(all.values[2].abs() < 1e-10);
    }

    #[test]
    fn sorted_by_magnitude() {
        let p = Matrix::from_rows(&[[0.5, 0.0, 0.0], [0.0, -0.9, 0.0], [0.0, 0.0, 0.1]]);
        let e = leading_eigenvectors(&p, 3).unwrap();
        assert!((e.values[0] + 0.9).abs() < 1e-10);
        assert!((e.values[1] - 0.5).abs() < 1e-10);
        assert!((e.values[2] - 0.1).abs() < 1e-10);
        assert!(residual(&p, &e) < 1e-10);
    }

    #[test]
    fn jordan_block_is_defective() {
        let p = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(
            leading_eigenvectors(&p, 2),
            Err(Error::DefectiveMatrix(_))
        ));
    }

    #[test]
    fn rotation_is_complex() {
        let p = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        assert!(matches!(
            leading_eigenvectors(&p, 2),
            Err(Error::EigensolverFailure(_))
        ));
    }
}
