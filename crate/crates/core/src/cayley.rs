//! The classical Cayley correspondence `S -> (I - S)(I + S)^{-1}` between
//! skew-symmetric matrices and rotations without eigenvalue `-1`.
//!
//! `I - S` and `(I + S)^{-1}` commute, so the transform is evaluated with a
//! single solve of `(I + S) X = I - S`. The same holds for the inverse map.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{Matrix, SkewSymmetric};
use crate::scalar::Scalar;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionKind {
    None,
    MinusOneEigenvalue,
}

/// Outcome of testing whether `R` admits the eigenvalue `-1`.
///
/// `witness` is `det(I + R)` on the rational backend and
/// `min_singular_proxy(I + R)` on floats.
#[derive(Debug, Clone)]
pub struct CayleyObstruction<T> {
    pub kind: ObstructionKind,
    pub witness: T,
}

impl<T> CayleyObstruction<T> {
    pub fn is_obstructed(&self) -> bool {
        self.kind == ObstructionKind::MinusOneEigenvalue
    }
}

/// `R = (I - S)(I + S)^{-1}`; always a rotation without eigenvalue `-1`.
pub fn cayley_transform<T: Scalar>(s: &SkewSymmetric<T>) -> Result<Matrix<T>> {
    let n = s.n();
    let eye = Matrix::identity(n);
    let sm = s.as_matrix();
    // I + S has singular values >= 1 for exactly skew S; a failure here
    // means the float input drifted away from skew-symmetry.
    linalg::solve(&(&eye + sm), &(&eye - sm)).map_err(|err| match err {
        Error::SingularMatrix => Error::InvalidSkew { deviation: (sm + &sm.transpose()).max_abs() },
        other => other,
    })
}

/// `S = (I - R)(I + R)^{-1}`, the unique skew matrix with `cayley_transform(S) = R`.
pub fn inverse_cayley<T: Scalar>(r: &Matrix<T>) -> Result<SkewSymmetric<T>> {
    inverse_cayley_with(r, &Tolerances::default())
}

pub fn inverse_cayley_with<T: Scalar>(r: &Matrix<T>, tol: &Tolerances) -> Result<SkewSymmetric<T>> {
    let obstruction = obstruction_check_with(r, tol)?;
    if obstruction.is_obstructed() {
        return Err(Error::MinusOneEigenvalue);
    }
    let eye = Matrix::identity(r.n());
    let x = linalg::solve(&(&eye + r), &(&eye - r)).map_err(|err| match err {
        Error::SingularMatrix => Error::MinusOneEigenvalue,
        other => other,
    })?;
    Ok(SkewSymmetric::project(&x))
}

/// Classifies `R` as obstructed when `I + R` is singular: exactly on
/// rationals, or when its singular-value proxy drops below `tol.cayley`.
pub fn obstruction_check<T: Scalar>(r: &Matrix<T>) -> Result<CayleyObstruction<T>> {
    obstruction_check_with(r, &Tolerances::default())
}

pub fn obstruction_check_with<T: Scalar>(r: &Matrix<T>, tol: &Tolerances) -> Result<CayleyObstruction<T>> {
    check_orthogonal(r, tol)?;
    let witness = T::singularity_witness(&(&Matrix::identity(r.n()) + r));
    let kind = if witness.witness_is_singular(tol.cayley) {
        ObstructionKind::MinusOneEigenvalue
    } else {
        ObstructionKind::None
    };
    Ok(CayleyObstruction { kind, witness })
}

/// `R^T R = I` exactly (rationals) or within `tol.orth` (floats).
pub fn check_orthogonal<T: Scalar>(r: &Matrix<T>, tol: &Tolerances) -> Result<()> {
    let gram = &r.transpose() * r;
    if gram.is_identity_within(tol.orth) {
        Ok(())
    } else {
        Err(Error::NotOrthogonal { residual: gram.max_abs_diff(&Matrix::identity(r.n())) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn r(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    fn rot(theta: f64) -> Matrix<f64> {
        Matrix::from_rows(vec![vec![theta.cos(), -theta.sin()], vec![theta.sin(), theta.cos()]]).unwrap()
    }

    // Closed form for S = [[0, -t], [t, 0]]: (1/(1+t^2)) [[1-t^2, 2t], [-2t, 1-t^2]].
    fn two_by_two_oracle(t: Rational) -> Matrix<Rational> {
        let one = Rational::from_i64(1);
        let two = Rational::from_i64(2);
        let d = one.clone() + t.clone() * t.clone();
        let a = (one - t.clone() * t.clone()) / d.clone();
        let b = two * t / d;
        Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![-b, a]]).unwrap()
    }

    fn skew2(t: Rational) -> SkewSymmetric<Rational> {
        SkewSymmetric::new(Matrix::from_rows(vec![vec![r(0, 1), -t.clone()], vec![t, r(0, 1)]]).unwrap()).unwrap()
    }

    #[test]
    fn zero_maps_to_identity() {
        let out = cayley_transform(&SkewSymmetric::<Rational>::zero(3)).unwrap();
        assert_eq!(out, Matrix::identity(3));
    }

    #[test]
    fn two_by_two_examples() {
        let out = cayley_transform(&skew2(r(1, 1))).unwrap();
        assert_eq!(out, Matrix::from_i64_rows(&[[0, 1], [-1, 0]]).unwrap());
        assert_eq!(out, two_by_two_oracle(r(1, 1)));

        let half = cayley_transform(&skew2(r(1, 2))).unwrap();
        assert_eq!(half, two_by_two_oracle(r(1, 2)));
        assert_eq!(half, Matrix::from_rows(vec![vec![r(3, 5), r(4, 5)], vec![r(-4, 5), r(3, 5)]]).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let s = inverse_cayley(&Matrix::<Rational>::identity(3)).unwrap();
        assert_eq!(s.as_matrix(), &Matrix::zeros(3));

        let r35 = Matrix::from_rows(vec![vec![r(3, 5), r(4, 5)], vec![r(-4, 5), r(3, 5)]]).unwrap();
        let s = inverse_cayley(&r35).unwrap();
        assert_eq!(s.as_matrix(), skew2(r(1, 2)).as_matrix());

        let minus = -&Matrix::<Rational>::identity(2);
        assert_eq!(inverse_cayley(&minus).unwrap_err(), Error::MinusOneEigenvalue);
        assert_eq!(inverse_cayley(&-&Matrix::<f64>::identity(2)).unwrap_err(), Error::MinusOneEigenvalue);
    }

    #[test]
    fn orthogonality_is_checked_before_obstruction() {
        let not_orth = Matrix::<Rational>::from_i64_rows(&[[-1, 0], [0, -2]]).unwrap();
        assert!(matches!(inverse_cayley(&not_orth), Err(Error::NotOrthogonal { .. })));
        assert!(matches!(obstruction_check(&not_orth), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn obstruction_examples() {
        let id = obstruction_check(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(id.kind, ObstructionKind::None);
        let minus = obstruction_check(&-&Matrix::<Rational>::identity(2)).unwrap();
        assert_eq!(minus.kind, ObstructionKind::MinusOneEigenvalue);
        assert_eq!(minus.witness, r(0, 1));
        let pi = obstruction_check(&rot(std::f64::consts::PI)).unwrap();
        assert_eq!(pi.kind, ObstructionKind::MinusOneEigenvalue);
        let half_pi = obstruction_check(&rot(std::f64::consts::FRAC_PI_2)).unwrap();
        assert_eq!(half_pi.kind, ObstructionKind::None);
    }

    fn rational_skew(max_n: usize) -> impl Strategy<Value = SkewSymmetric<Rational>> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((-5i64..=5, 1i64..=4), n * (n - 1) / 2).prop_map(move |v| {
                let upper: Vec<Rational> = v.iter().map(|&(p, q)| r(p, q)).collect();
                SkewSymmetric::from_upper(n, &upper).unwrap()
            })
        })
    }

    fn float_skew(max_n: usize) -> impl Strategy<Value = SkewSymmetric<f64>> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(-2.0f64..2.0, n * (n - 1) / 2)
                .prop_map(move |v| SkewSymmetric::from_upper(n, &v).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_round_trip_and_rotation(s in rational_skew(5)) {
            let n = s.n();
            let rot = cayley_transform(&s).unwrap();
            prop_assert_eq!(&rot.transpose() * &rot, Matrix::identity(n));
            prop_assert_eq!(rot.determinant(), Rational::from_i64(1));
            prop_assert!(!(&Matrix::identity(n) + &rot).determinant().is_zero());
            let back = inverse_cayley(&rot).unwrap();
            prop_assert_eq!(back.as_matrix(), s.as_matrix());
        }

        #[test]
        fn factors_commute_exactly(s in rational_skew(5)) {
            let n = s.n();
            let eye = Matrix::identity(n);
            let minus = &eye - s.as_matrix();
            let inv = linalg::solve(&(&eye + s.as_matrix()), &eye).unwrap();
            prop_assert_eq!(&minus * &inv, &inv * &minus);
            prop_assert_eq!(&minus * &inv, cayley_transform(&s).unwrap());
        }

        #[test]
        fn float_round_trip(s in float_skew(30)) {
            let rot = cayley_transform(&s).unwrap();
            prop_assert!(rot.orthogonality_residual() <= 1e-10);
            prop_assert!((rot.determinant() - 1.0).abs() <= 1e-10);
            let back = inverse_cayley(&rot).unwrap();
            prop_assert!(back.as_matrix().max_abs_diff(s.as_matrix()) <= 1e-9);
        }
    }
}
