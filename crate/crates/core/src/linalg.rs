//! Determinants, solves, QR and pivot-based conditioning proxies.
//!
//! Floats go through LU with partial pivoting. Rationals use fraction-free
//! (Bareiss) elimination for determinants and exact Gauss-Jordan for solves.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::tol;

/// `det(A)` using the backend's algorithm.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> T {
    T::determinant(a)
}

/// `X` with `A X = B`.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    T::solve(a, b)
}

/// Determinant of the top-left `k x k` block, `1 <= k <= n`.
pub fn leading_principal_minor<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<T> {
    if k == 0 || k > a.n() {
        return Err(Error::IndexOutOfRange { index: k, n: a.n() });
    }
    Ok(T::determinant(&a.leading(k)))
}

struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuFactors {
    fn pivot(&self, k: usize) -> f64 {
        self.lu[k * self.n + k]
    }
}

// Columns with an all-zero remainder are skipped, leaving a zero pivot.
fn lu_factor(a: &Matrix<f64>) -> LuFactors {
    let n = a.n();
    let mut lu: Vec<f64> = a.entries().copied().collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    for k in 0..n {
        let (p, max) = (k..n)
            .map(|i| (i, lu[i * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if max == 0.0 {
            continue;
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            swaps += 1;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let factor = lu[i * n + k] / pivot;
            lu[i * n + k] = factor;
            if factor != 0.0 {
                for j in k + 1..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }
    }
    LuFactors { n, lu, perm, swaps }
}

pub(crate) fn lu_determinant(a: &Matrix<f64>) -> f64 {
    let f = lu_factor(a);
    let sign = if f.swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    (0..f.n).map(|k| f.pivot(k)).product::<f64>() * sign
}

pub(crate) fn lu_solve(a: &Matrix<f64>, b: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = a.n();
    let threshold = tol::PIVOT_REL * a.max_abs();
    let f = lu_factor(a);
    // NaN pivots count as singular.
    if (0..n).any(|k| f.pivot(k).is_nan() || f.pivot(k).abs() <= threshold) {
        return Err(Error::SingularMatrix);
    }
    let mut x = Matrix::zeros(n);
    for col in 0..n {
        let mut y: Vec<f64> = f.perm.iter().map(|&p| b[(p, col)]).collect();
        for i in 0..n {
            for k in 0..i {
                y[i] -= f.lu[i * n + k] * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= f.lu[i * n + k] * y[k];
            }
            y[i] /= f.pivot(i);
        }
        for i in 0..n {
            x[(i, col)] = y[i];
        }
    }
    Ok(x)
}

/// Smallest absolute LU pivot divided by `n`: a cheap stand-in for the
/// smallest singular value, used only for threshold decisions.
pub fn min_singular_proxy(a: &Matrix<f64>) -> f64 {
    let n = a.n();
    if n == 0 {
        return f64::INFINITY;
    }
    let f = lu_factor(a);
    (0..n).map(|k| f.pivot(k).abs()).fold(f64::INFINITY, f64::min) / n as f64
}

pub(crate) fn bareiss_determinant(a: &Matrix<Rational>) -> Rational {
    let n = a.n();
    if n == 0 {
        return Rational::one();
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(p) => {
                    for j in 0..n {
                        let tmp = m[(k, j)].clone();
                        m[(k, j)] = m[(p, j)].clone();
                        m[(p, j)] = tmp;
                    }
                    negate = !negate;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = Rational::zero();
        }
        prev = m[(k, k)].clone();
    }
    let det = m[(n - 1, n - 1)].clone();
    if negate {
        -det
    } else {
        det
    }
}

pub(crate) fn exact_solve(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<Matrix<Rational>> {
    let n = a.n();
    let mut lhs = a.clone();
    let mut rhs = b.clone();
    for k in 0..n {
        let p = (k..n).find(|&i| !lhs[(i, k)].is_zero()).ok_or(Error::SingularMatrix)?;
        if p != k {
            for j in 0..n {
                let t = lhs[(k, j)].clone();
                lhs[(k, j)] = lhs[(p, j)].clone();
                lhs[(p, j)] = t;
                let t = rhs[(k, j)].clone();
                rhs[(k, j)] = rhs[(p, j)].clone();
                rhs[(p, j)] = t;
            }
        }
        let inv = lhs[(k, k)].recip();
        for j in 0..n {
            lhs[(k, j)] = &lhs[(k, j)] * &inv;
            rhs[(k, j)] = &rhs[(k, j)] * &inv;
        }
        for i in 0..n {
            if i == k || lhs[(i, k)].is_zero() {
                continue;
            }
            let factor = lhs[(i, k)].clone();
            for j in 0..n {
                let l = &lhs[(i, j)] - &factor * &lhs[(k, j)];
                lhs[(i, j)] = l;
                let r = &rhs[(i, j)] - &factor * &rhs[(k, j)];
                rhs[(i, j)] = r;
            }
        }
    }
    Ok(rhs)
}

/// Exact rank by Gaussian elimination.
pub fn rank(a: &Matrix<Rational>) -> usize {
    let n = a.n();
    let mut m = a.clone();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        for j in 0..n {
            let t = m[(rank, j)].clone();
            m[(rank, j)] = m[(p, j)].clone();
            m[(p, j)] = t;
        }
        for i in rank + 1..n {
            if m[(i, col)].is_zero() {
                continue;
            }
            let factor = &m[(i, col)] / &m[(rank, col)];
            for j in col..n {
                let v = &m[(i, j)] - &factor * &m[(rank, j)];
                m[(i, j)] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// `Q` from a Householder QR of `A`, with columns signed so that `R` has a
/// positive diagonal. That normalization makes `Q` unique, and Haar
/// distributed when `A` has i.i.d. standard Gaussian entries.
pub fn qr_orthonormalize(a: &Matrix<f64>) -> Result<Matrix<f64>> {
    let n = a.n();
    let threshold = tol::PIVOT_REL * a.max_abs();
    let mut r = a.clone();
    let mut q = Matrix::<f64>::identity(n);
    for k in 0..n {
        let norm = (k..n).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= threshold {
            return Err(Error::SingularMatrix);
        }
        if k + 1 == n {
            // A one-entry reflection only flips a sign; the final
            // normalization below does that exactly.
            break;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // R <- H R, Q <- Q H with H = I - 2 v v^T / (v^T v)
        for j in 0..n {
            let dot: f64 = (k..n).map(|i| v[i - k] * r[(i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                r[(i, j)] -= f * v[i - k];
            }
        }
        for i in 0..n {
            let dot: f64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum();
            let f = 2.0 * dot / vnorm2;
            for j in k..n {
                q[(i, j)] -= f * v[j - k];
            }
        }
    }
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    Ok(q)
}
