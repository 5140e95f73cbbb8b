//! Numerical thresholds for the floating-point backend.
//!
//! The rational backend never consults these: its zero tests are exact.

/// Entrywise bound on `|S + S^T|` accepted as skew-symmetric.
pub const SKEW: f64 = 1e-12;

/// Relative pivot threshold: a float pivot below `PIVOT_REL * max|A|` is singular.
pub const PIVOT_REL: f64 = 1e-13;

/// Relative residual bound for linear solves.
pub const SOLVE: f64 = 1e-10;

/// `min_singular_proxy(I + R)` below this marks a -1 eigenvalue.
pub const CAYLEY: f64 = 1e-9;

/// Entrywise bound on `|R^T R - I|` accepted as orthogonal.
pub const ORTH: f64 = 1e-8;

/// Reconstruction bound for normal forms and representations.
pub const NORMAL_FORM: f64 = 1e-9;

/// Scale factor for the float acceptance test in `fact_e`.
pub const FACT_E: f64 = 1e-12;

/// Radius for grouping eigenvalues `cos(theta)` of the symmetric part.
pub const CLUSTER_RADIUS: f64 = 1e-7;

/// Rotation strength `sin(theta)` below which a direction inside the +1 or -1
/// cluster is treated as fixed (eigenvalue exactly +1 or -1).
pub const PLANE_STRENGTH: f64 = 1e-10;

/// Tolerances that callers may override (the CLI's `--tol`, `--force`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub orth: f64,
    pub cayley: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { orth: ORTH, cayley: CAYLEY }
    }
}
