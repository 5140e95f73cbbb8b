use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows but row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("matrix is not skew-symmetric (max |S + S^T| = {deviation:e})")]
    InvalidSkew { deviation: f64 },

    #[error("matrix is not orthogonal (max |R^T R - I| = {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("orthogonal matrix has determinant -1, a rotation was required")]
    NotSpecialOrthogonal,

    #[error("matrix admits -1 as an eigenvalue (I + R is singular)")]
    MinusOneEigenvalue,

    #[error("perturbation magnitude c[{index}] is zero")]
    ZeroPerturbation { index: usize },

    #[error("dimension {n} exceeds the enumeration bound {bound}")]
    DimensionTooLarge { n: usize, bound: usize },

    #[error("matrices differ outside column {column} (first difference in column {found})")]
    ColumnsMismatch { column: usize, found: usize },

    #[error("rank {rank} is not below dimension {n}")]
    BadRank { rank: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
