//! Cyclic Jacobi eigenvalue iteration for real symmetric matrices.

use crate::matrix::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues and orthonormal eigenvectors (as columns) of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix<f64>,
}

/// Diagonalizes `a = V diag(values) V^T` by plane rotations. Only the
/// symmetric part of `a` is used. Eigenvalues come back unsorted.
pub fn symmetric_eigen(a: &Matrix<f64>) -> SymmetricEigen {
    let n = a.n();
    let mut m = Matrix::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = Matrix::<f64>::identity(n);
    let scale = m.entries().map(|x| x * x).sum::<f64>();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off <= f64::EPSILON * f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate_columns(&mut m, p, q, c, s);
                rotate_rows(&mut m, p, q, c, s);
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                rotate_columns(&mut v, p, q, c, s);
            }
        }
    }

    SymmetricEigen { values: m.diag(), vectors: v }
}

fn rotate_columns(m: &mut Matrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.n() {
        let (kp, kq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * kp - s * kq;
        m[(k, q)] = s * kp + c * kq;
    }
}

fn rotate_rows(m: &mut Matrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..m.n() {
        let (pk, qk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * pk - s * qk;
        m[(q, k)] = s * pk + c * qk;
    }
}
