//! Making `E + A` invertible by choosing the signs of a diagonal perturbation.
//!
//! For nonzero magnitudes `c_1, ..., c_n` there is always a choice of signs
//! `eps_i` with `det(A + diag(eps_i c_i)) != 0`. [`sign_assign`] finds one by
//! walking the leading principal minors: the `k`-th minor is affine in the
//! `k`-th diagonal entry,
//!
//! ```text
//! d_k = q_k + eps_k * c_k * d_{k-1}
//! ```
//!
//! where `q_k` is the minor with the `(k, k)` perturbation left out. Since
//! `d_{k-1} != 0` and `c_k != 0`, the two candidates differ by
//! `2 c_k d_{k-1} != 0`, so at least one of them is nonzero.
//!
//! The rest of the module covers the related exhaustive argument over all
//! `2^n` sign matrices `E_k`: enumeration, the column-multilinearity
//! identity, and the fact that the `E_k` sum to zero.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{check_nonzero, Matrix, Sign, SignVector};
use crate::poly::Polynomial;
use crate::scalar::{Backend, Rational, Scalar};
use crate::tol;

/// Largest `n` accepted by the `2^n` enumerations.
pub const ENUMERATION_BOUND: usize = 16;

/// Largest `n` accepted by [`perturbation_polynomial`] (it sums `n!` terms).
pub const SYMBOLIC_BOUND: usize = 7;

/// How [`sign_assign`] picks between two admissible signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TieBreak {
    /// `+1` whenever it yields a nonzero minor.
    PreferPlus,
    /// The sign giving the larger `|d_k|`, `+1` on ties.
    MaxMagnitude,
}

impl TieBreak {
    /// Rationals prefer `+1`; floats maximize `|d_k|` for conditioning.
    pub fn default_for<T: Scalar>() -> Self {
        match T::BACKEND {
            Backend::Rational => TieBreak::PreferPlus,
            Backend::Float => TieBreak::MaxMagnitude,
        }
    }

    fn opposite(self) -> Self {
        match self {
            TieBreak::PreferPlus => TieBreak::MaxMagnitude,
            TieBreak::MaxMagnitude => TieBreak::PreferPlus,
        }
    }
}

/// Result of [`sign_assign`].
#[derive(Debug, Clone)]
pub struct SignSearchReport<T> {
    pub signs: SignVector,
    /// Accepted leading minors `det_k(E + A)` for `k = 1..=n`.
    pub minor_values: Vec<T>,
    pub flips: usize,
}

impl<T: Scalar> SignSearchReport<T> {
    /// `det(E + A)`; the empty product `1` when `n = 0`.
    pub fn determinant(&self) -> T {
        self.minor_values.last().cloned().unwrap_or_else(T::one)
    }

    /// Only exact arithmetic certifies that the minors are nonzero.
    pub fn certified(&self) -> bool {
        T::BACKEND == Backend::Rational
    }
}

/// Chooses `eps` so that `E + A` is invertible, `E = diag(eps_i c_i)`.
pub fn sign_assign<T: Scalar>(a: &Matrix<T>, c: &[T]) -> Result<SignSearchReport<T>> {
    sign_assign_with(a, c, TieBreak::default_for::<T>())
}

pub fn sign_assign_with<T: Scalar>(a: &Matrix<T>, c: &[T], tie: TieBreak) -> Result<SignSearchReport<T>> {
    let n = a.n();
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    check_nonzero(c)?;

    let mut work = a.clone();
    let mut signs = Vec::with_capacity(n);
    let mut minors: Vec<T> = Vec::with_capacity(n);
    let mut prev = T::one();
    for k in 0..n {
        // work already carries eps_i c_i for i < k; (k, k) is still bare.
        let q = T::determinant(&work.leading(k + 1));
        let step = c[k].clone() * prev.clone();
        let plus = q.clone() + step.clone();
        let minus = q - step;
        let sign = match tie {
            TieBreak::PreferPlus => {
                if plus.is_zero() {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            }
            TieBreak::MaxMagnitude => {
                if plus.abs_f64() >= minus.abs_f64() {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            }
        };
        let (accepted, offset) = match sign {
            Sign::Plus => (plus, c[k].clone()),
            Sign::Minus => (minus, -c[k].clone()),
        };
        work[(k, k)] = work[(k, k)].clone() + offset;
        signs.push(sign);
        minors.push(accepted.clone());
        prev = accepted;
    }

    let signs = SignVector::new(signs);
    let flips = signs.flips();
    Ok(SignSearchReport { signs, minor_values: minors, flips })
}

/// Signs `E` with `I + E A` invertible.
///
/// `E^2 = I` gives `I + E A = E (E + A)`, so this is [`sign_assign`] with
/// unit magnitudes. On floats, a result whose `|det(E + A)|` falls below
/// `1e-12 (1 + max|a_ij|)^n` is retried with the other tie-break and the
/// better of the two is kept.
pub fn fact_e<T: Scalar>(a: &Matrix<T>) -> SignVector {
    let ones = vec![T::one(); a.n()];
    let tie = TieBreak::default_for::<T>();
    let first = sign_assign_with(a, &ones, tie).expect("unit magnitudes are nonzero");
    if T::BACKEND == Backend::Rational {
        return first.signs;
    }
    let threshold = fact_e_threshold(a);
    if first.determinant().abs_f64() >= threshold {
        return first.signs;
    }
    let second = sign_assign_with(a, &ones, tie.opposite()).expect("unit magnitudes are nonzero");
    if second.determinant().abs_f64() > first.determinant().abs_f64() {
        second.signs
    } else {
        first.signs
    }
}

fn fact_e_threshold<T: Scalar>(a: &Matrix<T>) -> f64 {
    tol::FACT_E * (1.0 + a.max_abs()).powi(a.n() as i32)
}

fn check_enumerable(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        Err(Error::DimensionTooLarge { n, bound })
    } else {
        Ok(())
    }
}

/// Every `E_k` (ascending `k`) with `det(I + E_k A) != 0`.
///
/// Entry `i` of `E_k` is `-1` exactly when bit `i` of `k` is set. Never
/// empty: if all `2^n` determinants vanished, multilinearity would force
/// `det(2^n I) = 0`.
pub fn kahan_enumerate<T: Scalar>(a: &Matrix<T>) -> Result<Vec<SignVector>> {
    kahan_enumerate_bounded(a, ENUMERATION_BOUND)
}

pub fn kahan_enumerate_bounded<T: Scalar>(a: &Matrix<T>, bound: usize) -> Result<Vec<SignVector>> {
    let n = a.n();
    check_enumerable(n, bound.min(63))?;
    let eye = Matrix::identity(n);
    let threshold = fact_e_threshold(a);
    Ok((0..1u64 << n)
        .map(|k| SignVector::from_index(k, n))
        .filter(|e| !T::determinant(&(&eye + &e.left_multiply(a))).is_negligible(threshold))
        .collect())
}

/// Every sign vector (ascending `E_k` order) with `det(A + diag(eps_i c_i)) != 0`:
/// the brute-force oracle for [`sign_assign`] with arbitrary magnitudes.
pub fn surviving_signs<T: Scalar>(a: &Matrix<T>, c: &[T], bound: usize) -> Result<Vec<SignVector>> {
    let n = a.n();
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    check_nonzero(c)?;
    check_enumerable(n, bound.min(63))?;
    let threshold = fact_e_threshold(a);
    Ok((0..1u64 << n)
        .map(|k| SignVector::from_index(k, n))
        .filter(|e| {
            let mut m = a.clone();
            for (i, s) in e.signs().iter().enumerate() {
                m[(i, i)] = m[(i, i)].clone() + s.apply(c[i].clone());
            }
            !T::determinant(&m).is_negligible(threshold)
        })
        .collect())
}

/// `(det(A + B), 2^{n-1} (det A + det B))` for `A`, `B` that agree outside
/// column `column` (0-based). The two values always coincide.
pub fn kahan_identity_check<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, column: usize) -> Result<(T, T)> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.n() });
    }
    if column >= n {
        return Err(Error::IndexOutOfRange { index: column + 1, n });
    }
    if let Some(found) = (0..n).filter(|&j| j != column).find(|&j| a.column(j) != b.column(j)) {
        return Err(Error::ColumnsMismatch { column, found });
    }
    let two = T::from_i64(2);
    let factor = (1..n).fold(T::one(), |acc, _| acc * two.clone());
    let lhs = T::determinant(&(a + b));
    let rhs = factor * (T::determinant(a) + T::determinant(b));
    Ok((lhs, rhs))
}

/// `E_0 + E_1 + ... + E_{2^n - 1}`, which is the zero matrix.
pub fn sign_matrix_sum_check<T: Scalar>(n: usize) -> Result<Matrix<T>> {
    check_enumerable(n, ENUMERATION_BOUND)?;
    let mut totals = vec![0i64; n];
    for k in 0..1u64 << n {
        for (total, v) in totals.iter_mut().zip(SignVector::from_index(k, n).to_ints()) {
            *total += v;
        }
    }
    Ok(Matrix::diagonal(&totals.into_iter().map(T::from_i64).collect::<Vec<_>>()))
}

/// `E_0, ..., E_{2^n - 1}` in binary order.
pub fn adjacent_flip_chain(n: usize) -> Result<Vec<SignVector>> {
    check_enumerable(n, ENUMERATION_BOUND)?;
    Ok((0..1u64 << n).map(|k| SignVector::from_index(k, n)).collect())
}

/// The pairing the telescoping argument relies on: for each level `l`, every
/// aligned block of `2^(l+1)` consecutive entries splits into two halves
/// whose corresponding entries differ in position `l` only.
///
/// Level 0 is the statement that `E_{2i}` and `E_{2i+1}` differ in one
/// position. Plain consecutive pairs such as `E_1`, `E_2` are not covered and
/// do differ in two positions.
pub fn verify_block_pairing(chain: &[SignVector]) -> bool {
    let len = chain.len();
    if !len.is_power_of_two() {
        return false;
    }
    let n = len.trailing_zeros() as usize;
    if chain.iter().any(|e| e.len() != n) {
        return false;
    }
    (0..n).all(|level| {
        let half = 1usize << level;
        (0..len).step_by(2 * half).all(|start| {
            (0..half).all(|o| chain[start + o].differing_positions(&chain[start + half + o]) == vec![level])
        })
    })
}

/// `det(C + A)` as a polynomial in the formal diagonal entries `c_1..c_n`,
/// expanded over all permutations.
pub fn perturbation_polynomial(a: &Matrix<Rational>) -> Result<Polynomial> {
    let n = a.n();
    check_enumerable(n, SYMBOLIC_BOUND)?;
    let entry = |i: usize, j: usize| {
        let base = Polynomial::constant(n, a[(i, j)].clone());
        if i == j {
            base.add(&Polynomial::variable(n, i))
        } else {
            base
        }
    };
    let mut total = Polynomial::zero(n);
    for (perm, odd) in permutations(n) {
        let mut term = Polynomial::constant(n, Rational::one());
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&entry(i, j));
            if term.is_zero() {
                break;
            }
        }
        if odd {
            term = term.scale(&-Rational::one());
        }
        total = total.add(&term);
    }
    Ok(total)
}

// All permutations of 0..n with their parity (true = odd).
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            out.push((prefix.clone(), inversions % 2 == 1));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// `det(I + E A)` for a given sign vector; convenience for callers that
/// check a single candidate.
pub fn signed_determinant<T: Scalar>(a: &Matrix<T>, signs: &SignVector) -> T {
    T::determinant(&(&Matrix::identity(a.n()) + &signs.left_multiply(a)))
}
