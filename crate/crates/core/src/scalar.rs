//! The two scalar backends: binary floating point and exact rationals.

use std::fmt;
use std::ops::{Div, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Float,
    Rational,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Rational => "rational",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A field the matrix routines can run over.
///
/// Besides arithmetic, each backend picks its own determinant and solve
/// algorithm and its own notion of "zero": exact for rationals, thresholded
/// for floats.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn parse_token(token: &str) -> Result<Self>;

    /// Exactly zero on rationals; `|x| <= tol` on floats.
    fn is_negligible(&self, tol: f64) -> bool;

    fn determinant(a: &Matrix<Self>) -> Self;

    fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Result<Matrix<Self>>;

    /// Quantity whose vanishing certifies singularity: the exact determinant
    /// on rationals, `min_singular_proxy` on floats.
    fn singularity_witness(a: &Matrix<Self>) -> Self;

    fn witness_is_singular(&self, threshold: f64) -> bool;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_token(token: &str) -> Result<Self> {
        if token.contains('/') {
            return Ok(Scalar::to_f64(&parse_rational(token)?));
        }
        token
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Parse(format!("invalid number {token:?}")))
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn determinant(a: &Matrix<Self>) -> Self {
        linalg::lu_determinant(a)
    }

    fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Result<Matrix<Self>> {
        linalg::lu_solve(a, b)
    }

    fn singularity_witness(a: &Matrix<Self>) -> Self {
        linalg::min_singular_proxy(a)
    }

    fn witness_is_singular(&self, threshold: f64) -> bool {
        *self < threshold
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_token(token: &str) -> Result<Self> {
        parse_rational(token)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn determinant(a: &Matrix<Self>) -> Self {
        linalg::bareiss_determinant(a)
    }

    fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Result<Matrix<Self>> {
        linalg::exact_solve(a, b)
    }

    fn singularity_witness(a: &Matrix<Self>) -> Self {
        linalg::bareiss_determinant(a)
    }

    fn witness_is_singular(&self, _threshold: f64) -> bool {
        self.is_zero()
    }

    fn abs_f64(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

/// Parses `p/q`, integers, and decimals with optional exponent (`-1.25e-3`)
/// into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {token:?}"));
    let token = token.trim();
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {token:?}")));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = token[pos + 1..].parse().map_err(|_| bad())?;
            (&token[..pos], exp)
        }
        None => (token, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact rational with the same value as a finite `f64`.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// `p/q` with `q > 0`; integers print without a denominator.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
