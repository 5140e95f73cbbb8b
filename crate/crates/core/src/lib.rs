//! Cayley-style parameterizations of orthogonal matrices and sign-chosen
//! diagonal perturbations, over floating-point and exact rational scalars.
//!
//! * [`cayley`]: `S -> (I - S)(I + S)^{-1}`, its inverse, and detection of the
//!   `-1` eigenvalue that the plain transform cannot reach.
//! * [`normal_form`]: `R = P D P^T`, rotation square roots, and the squared,
//!   two-factor and sign-flipped representations that cover all of `SO(n)`
//!   and `O(n)`.
//! * [`sign_perturb`]: choosing signs `eps_i` so that
//!   `A + diag(eps_i c_i)` is invertible for any nonzero magnitudes, plus the
//!   exhaustive `2^n` enumeration and its supporting determinant identities.
//!
//! Every claim that a determinant is nonzero can be checked exactly by
//! running the same code over [`Rational`].
//!
//! ```
//! use cayley_core::{cayley, Matrix, Rational};
//!
//! let r: Matrix<Rational> = Matrix::from_rows(vec![
//!     vec!["3/5".parse().unwrap(), "4/5".parse().unwrap()],
//!     vec!["-4/5".parse().unwrap(), "3/5".parse().unwrap()],
//! ]).unwrap();
//! let s = cayley::inverse_cayley(&r).unwrap();
//! assert_eq!(cayley::cayley_transform(&s).unwrap(), r);
//! ```

pub mod cayley;
pub mod error;
pub mod io;
pub mod jacobi;
pub mod linalg;
pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod sign_perturb;
pub mod tol;

pub use error::{Error, Result};
pub use matrix::{DiagonalPerturbation, Matrix, Sign, SignVector, SkewSymmetric};
pub use scalar::{Backend, Rational, Scalar};
