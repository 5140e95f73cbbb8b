//! Dense square matrices and the constrained types built on them.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::tol;

/// Dense `n x n` matrix stored row-major.
#[derive(Clone, Debug)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from rows, rejecting anything that is not square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, entries) in rows.into_iter().enumerate() {
            if entries.len() != n {
                return Err(Error::NonSquare { rows: n, row, cols: entries.len() });
            }
            data.extend(entries);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Integer entries, convenient for tests and generators.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(values: &[T]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i].clone() } else { T::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Top-left `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k <= self.n);
        Self::from_fn(k, |i, j| self.get(i, j).clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|v| v.clone() * factor.clone())
    }

    /// Multiplies row `i` by `diag[i]`, i.e. computes `diag(d) * self`.
    pub fn scale_rows(&self, diag: &[T]) -> Self {
        assert_eq!(diag.len(), self.n);
        Self::from_fn(self.n, |i, j| diag[i].clone() * self.get(i, j).clone())
    }

    /// `max |a_ij|` as a float, for tolerance scaling.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// `max |a_ij - b_ij|` as a float.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn is_identity_within(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let expected = if i == j { T::one() } else { T::zero() };
                (self.get(i, j).clone() - expected).is_negligible(tol)
            })
        })
    }

    /// `max |R^T R - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        (&self.transpose() * self).max_abs_diff(&Self::identity(self.n))
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|v| v.is_negligible(tol))
    }

    pub fn determinant(&self) -> T {
        T::determinant(self)
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl Matrix<Rational> {
    /// Exact copy of a float matrix (every finite `f64` is a dyadic rational).
    pub fn from_f64_exact(m: &Matrix<f64>) -> Option<Self> {
        let data = m
            .data
            .iter()
            .map(|&v| crate::scalar::rational_from_f64(v))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix { n: m.n, data })
    }
}

/// Exact equality is only meaningful for the rational backend; float
/// matrices are compared with [`Matrix::max_abs_diff`] against a tolerance.
impl PartialEq for Matrix<Rational> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.data == other.data
    }
}

impl Eq for Matrix<Rational> {}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix addition");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix subtraction");
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + self.get(i, k).clone() * rhs.get(k, j).clone();
            }
            acc
        })
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A matrix with `S^T = -S` and an exactly zero diagonal.
#[derive(Clone, Debug)]
pub struct SkewSymmetric<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> SkewSymmetric<T> {
    /// Validates skew-symmetry (exactly on rationals, within [`tol::SKEW`] on
    /// floats) and stores the exactly skew projection `(M - M^T) / 2`.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        let deviation = (&m + &m.transpose()).max_abs();
        let exact_ok = (&m + &m.transpose()).is_zero_within(tol::SKEW);
        if !exact_ok {
            return Err(Error::InvalidSkew { deviation });
        }
        Ok(Self::project(&m))
    }

    /// Skew part `(M - M^T) / 2` of an arbitrary matrix.
    pub fn project(m: &Matrix<T>) -> Self {
        let two = T::from_i64(2);
        let n = m.n();
        let inner = Matrix::from_fn(n, |i, j| {
            if i == j {
                T::zero()
            } else {
                (m.get(i, j).clone() - m.get(j, i).clone()) / two.clone()
            }
        });
        SkewSymmetric { inner }
    }

    /// Builds a skew matrix from its strict upper triangle, row by row.
    pub fn from_upper(n: usize, upper: &[T]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: upper.len() });
        }
        let mut m = Matrix::zeros(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().unwrap().clone();
                m.set(j, i, -v.clone());
                m.set(i, j, v);
            }
        }
        Ok(SkewSymmetric { inner: m })
    }

    pub fn zero(n: usize) -> Self {
        SkewSymmetric { inner: Matrix::zeros(n) }
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn apply<T: Scalar>(self, v: T) -> T {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A vector of `+1`/`-1` entries: the diagonal of a sign matrix `E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn all_plus(n: usize) -> Self {
        SignVector(vec![Sign::Plus; n])
    }

    /// From integers; anything other than `1` or `-1` is rejected.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        values
            .iter()
            .map(|&v| match v {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(Error::Parse(format!("sign entry must be +1 or -1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }

    /// `E_k`: entry `i` (0-based) is `-1` iff bit `i` of `k` is set, so `k`
    /// written in binary as `k_n ... k_1` controls position `i + 1` by `k_{i+1}`.
    pub fn from_index(k: u64, n: usize) -> Self {
        SignVector((0..n).map(|i| if (k >> i) & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect())
    }

    /// Inverse of [`SignVector::from_index`].
    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .map(|(i, _)| 1u64 << i)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn to_ints(&self) -> Vec<i64> {
        self.0.iter().map(|s| s.value()).collect()
    }

    /// Number of `-1` entries.
    pub fn flips(&self) -> usize {
        self.0.iter().filter(|s| **s == Sign::Minus).count()
    }

    /// 0-based positions where `self` and `other` disagree.
    pub fn differing_positions(&self, other: &SignVector) -> Vec<usize> {
        assert_eq!(self.len(), other.len());
        (0..self.len()).filter(|&i| self.0[i] != other.0[i]).collect()
    }

    pub fn as_diagonal<T: Scalar>(&self) -> Matrix<T> {
        Matrix::diagonal(&self.0.iter().map(|s| T::from_i64(s.value())).collect::<Vec<_>>())
    }

    /// `E * M` without forming `E`.
    pub fn left_multiply<T: Scalar>(&self, m: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.len(), m.n());
        Matrix::from_fn(m.n(), |i, j| self.0[i].apply(m.get(i, j).clone()))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Sign::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `E = diag(eps_1 c_1, ..., eps_n c_n)` with every `c_i` nonzero.
#[derive(Debug, Clone)]
pub struct DiagonalPerturbation<T> {
    magnitudes: Vec<T>,
    signs: SignVector,
}

impl<T: Scalar> DiagonalPerturbation<T> {
    pub fn new(magnitudes: Vec<T>, signs: SignVector) -> Result<Self> {
        if magnitudes.len() != signs.len() {
            return Err(Error::DimensionMismatch { expected: magnitudes.len(), found: signs.len() });
        }
        check_nonzero(&magnitudes)?;
        Ok(DiagonalPerturbation { magnitudes, signs })
    }

    pub fn magnitudes(&self) -> &[T] {
        &self.magnitudes
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    pub fn matrix(&self) -> Matrix<T> {
        let entries: Vec<T> = self
            .magnitudes
            .iter()
            .zip(self.signs.signs())
            .map(|(c, s)| s.apply(c.clone()))
            .collect();
        Matrix::diagonal(&entries)
    }
}

pub(crate) fn check_nonzero<T: Scalar>(values: &[T]) -> Result<()> {
    match values.iter().position(|c| c.is_zero()) {
        Some(index) => Err(Error::ZeroPerturbation { index }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[[i64; 2]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = Matrix::<f64>::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert_eq!(err, Error::NonSquare { rows: 2, row: 1, cols: 1 });
    }

    #[test]
    fn product_and_transpose() {
        let a = q(&[[1, 2], [3, 4]]);
        let b = q(&[[0, 1], [1, 0]]);
        assert_eq!(&a * &b, q(&[[2, 1], [4, 3]]));
        assert_eq!(a.transpose(), q(&[[1, 3], [2, 4]]));
        assert_eq!(a.leading(1), Matrix::from_i64_rows(&[[1]]).unwrap());
    }

    #[test]
    fn skew_validation() {
        let ok = Matrix::<f64>::from_rows(vec![vec![0.0, -2.0], vec![2.0, 0.0]]).unwrap();
        assert!(SkewSymmetric::new(ok).is_ok());
        let bad = Matrix::<f64>::from_rows(vec![vec![0.0, -2.0], vec![2.1, 0.0]]).unwrap();
        assert!(matches!(SkewSymmetric::new(bad), Err(Error::InvalidSkew { .. })));
        let diag = Matrix::<Rational>::from_i64_rows(&[[1, 0], [0, 0]]).unwrap();
        assert!(SkewSymmetric::new(diag).is_err());
    }

    #[test]
    fn skew_projection_has_zero_diagonal() {
        let noisy = Matrix::<f64>::from_rows(vec![vec![1e-14, -1.0], vec![1.0 + 1e-14, 0.0]]).unwrap();
        let s = SkewSymmetric::new(noisy).unwrap();
        let m = s.as_matrix();
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(m[(0, 1)], -m[(1, 0)]);
    }

    #[test]
    fn sign_vector_indexing_follows_binary_digits() {
        assert_eq!(SignVector::from_index(0, 3).to_ints(), vec![1, 1, 1]);
        assert_eq!(SignVector::from_index(1, 3).to_ints(), vec![-1, 1, 1]);
        assert_eq!(SignVector::from_index(6, 3).to_ints(), vec![1, -1, -1]);
        assert_eq!(SignVector::from_index(7, 3).to_ints(), vec![-1, -1, -1]);
        for k in 0..16 {
            assert_eq!(SignVector::from_index(k, 4).index(), k);
        }
    }

    #[test]
    fn sign_matrix_squares_to_identity() {
        let e = SignVector::from_ints(&[1, -1, -1]).unwrap();
        let m: Matrix<Rational> = e.as_diagonal();
        assert_eq!(&m * &m, Matrix::identity(3));
        assert!(SignVector::from_ints(&[1, 0]).is_err());
    }

    #[test]
    fn perturbation_rejects_zero_magnitudes() {
        let err = DiagonalPerturbation::new(vec![1.0, 0.0], SignVector::all_plus(2)).unwrap_err();
        assert_eq!(err, Error::ZeroPerturbation { index: 1 });
        let p = DiagonalPerturbation::new(vec![2.0, 3.0], SignVector::from_ints(&[1, -1]).unwrap()).unwrap();
        assert_eq!(p.matrix().diag(), vec![2.0, -3.0]);
    }
}
