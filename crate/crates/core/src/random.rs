//! Seeded generators for test and demo inputs.
//!
//! All generators draw from ChaCha8 seeded with a `u64`, so a `(n, seed)`
//! pair always reproduces the same matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, qr_orthonormalize};
use crate::matrix::{Matrix, SkewSymmetric};
use crate::scalar::{Rational, Scalar};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<f64> {
    Matrix::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal matrix (either determinant sign).
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<f64> {
    loop {
        // A Gaussian matrix is singular with probability zero; redraw if hit.
        if let Ok(q) = qr_orthonormalize(&gaussian_matrix(n, rng)) {
            return q;
        }
    }
}

fn with_determinant_sign(mut q: Matrix<f64>, positive: bool) -> Matrix<f64> {
    if (q.determinant() > 0.0) != positive {
        for i in 0..q.n() {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// Haar rotation: a Haar orthogonal matrix with its first column negated
/// when needed to make the determinant `+1`.
pub fn haar_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<f64> {
    with_determinant_sign(haar_orthogonal(n, rng), true)
}

/// Haar orthogonal matrix forced to determinant `-1` by one column flip.
pub fn haar_improper<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<f64> {
    with_determinant_sign(haar_orthogonal(n, rng), false)
}

pub fn gen_haar_rotation(n: usize, seed: u64) -> Matrix<f64> {
    haar_rotation(n, &mut rng_from_seed(seed))
}

pub fn gen_haar_improper(n: usize, seed: u64) -> Matrix<f64> {
    haar_improper(n, &mut rng_from_seed(seed))
}

/// Skew matrix with independent standard Gaussian upper entries.
pub fn gaussian_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SkewSymmetric<f64> {
    let upper: Vec<f64> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.sample(StandardNormal)).collect();
    SkewSymmetric::from_upper(n, &upper).expect("length matches")
}

/// Integer matrix with entries uniform in `lo..=hi`.
pub fn integer_matrix<T: Scalar, R: Rng + ?Sized>(n: usize, lo: i64, hi: i64, rng: &mut R) -> Matrix<T> {
    Matrix::from_fn(n, |_, _| T::from_i64(rng.random_range(lo..=hi)))
}

/// Nonzero rational `p/q` with `1 <= |p| <= max_num`, `1 <= q <= max_den`.
pub fn nonzero_rational<R: Rng + ?Sized>(max_num: i64, max_den: i64, rng: &mut R) -> Rational {
    let p = rng.random_range(1..=max_num);
    let q = rng.random_range(1..=max_den);
    let v = Rational::from_i64(p) / Rational::from_i64(q);
    if rng.random_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Integer matrix of exact rank `rank < n`, formed as the product of random
/// `n x rank` and `rank x n` integer factors (entries in `-3..=3`) and
/// redrawn until the exact rank matches.
pub fn singular_matrix<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<Matrix<Rational>> {
    if rank >= n {
        return Err(Error::BadRank { rank, n });
    }
    loop {
        let left: Vec<Vec<i64>> = (0..n).map(|_| (0..rank).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let right: Vec<Vec<i64>> = (0..rank).map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let m = Matrix::from_fn(n, |i, j| Rational::from_i64((0..rank).map(|k| left[i][k] * right[k][j]).sum()));
        if linalg::rank(&m) == rank {
            return Ok(m);
        }
    }
}

pub fn gen_singular(n: usize, rank: usize, seed: u64) -> Result<Matrix<Rational>> {
    singular_matrix(n, rank, &mut rng_from_seed(seed))
}

/// Two integer matrices that agree everywhere except in one random column.
/// Returns `(A, B, column)`.
pub fn one_column_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Matrix<Rational>, Matrix<Rational>, usize) {
    let a: Matrix<Rational> = integer_matrix(n, -5, 5, rng);
    let column = rng.random_range(0..n);
    let mut b = a.clone();
    for i in 0..n {
        b[(i, column)] = Rational::from_i64(rng.random_range(-5..=5));
    }
    (a, b, column)
}
