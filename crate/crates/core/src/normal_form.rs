//! Block normal form `R = P D P^T` of an orthogonal matrix, rotation square
//! roots, and the extended Cayley representations built from them.
//!
//! `D` is block diagonal with `1`, `-1` and 2x2 blocks
//! `[[cos t, -sin t], [sin t, cos t]]`, `0 < t <= pi`. The eigenstructure comes
//! from Jacobi iteration on the symmetric part `(R + R^T) / 2`, whose
//! eigenvalues are the `cos t`. Inside each eigenvalue cluster the skew part
//! `(R - R^T) / 2` pairs directions into invariant planes, oriented so that
//! `sin t >= 0`, and angles are read off with `atan2` from the restriction of
//! `R` to each plane.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::Serialize;

use crate::cayley::{cayley_transform, check_orthogonal, inverse_cayley_with, obstruction_check_with};
use crate::error::{Error, Result};
use crate::jacobi::symmetric_eigen;
use crate::matrix::{Matrix, SignVector, SkewSymmetric};
use crate::scalar::{Rational, Scalar};
use crate::sign_perturb::fact_e;
use crate::tol::{self, Tolerances};

/// One diagonal block of the normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CanonicalBlock {
    PlusOne,
    MinusOne,
    /// Plane rotation by an angle in `(0, pi]`.
    Rotation(f64),
}

impl CanonicalBlock {
    pub fn dim(&self) -> usize {
        match self {
            CanonicalBlock::Rotation(_) => 2,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            CanonicalBlock::Rotation(t) => Some(*t),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Matrix<f64> {
        match *self {
            CanonicalBlock::PlusOne => Matrix::identity(1),
            CanonicalBlock::MinusOne => Matrix::diagonal(&[-1.0]),
            CanonicalBlock::Rotation(t) => plane_rotation(t),
        }
    }

    fn order_key(&self) -> (u8, f64) {
        match *self {
            CanonicalBlock::PlusOne => (0, 0.0),
            CanonicalBlock::Rotation(t) => (1, t),
            CanonicalBlock::MinusOne => (2, 0.0),
        }
    }
}

/// `[[cos t, -sin t], [sin t, cos t]]`.
pub fn plane_rotation(t: f64) -> Matrix<f64> {
    let (s, c) = t.sin_cos();
    Matrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) | (1, 1) => c,
        (0, 1) => -s,
        _ => s,
    })
}

/// `R = P D P^T` with `D` assembled from `blocks` in order.
#[derive(Debug, Clone)]
pub struct NormalForm {
    p: Matrix<f64>,
    blocks: Vec<CanonicalBlock>,
    paired_minus_ones: bool,
    minus_one_multiplicity: usize,
}

impl NormalForm {
    pub fn p(&self) -> &Matrix<f64> {
        &self.p
    }

    /// PlusOne blocks, then rotations by increasing angle, then MinusOne.
    pub fn blocks(&self) -> &[CanonicalBlock] {
        &self.blocks
    }

    pub fn paired_minus_ones(&self) -> bool {
        self.paired_minus_ones
    }

    /// Number of `-1` eigenvalues before any pairing into `pi` rotations.
    pub fn minus_one_multiplicity(&self) -> usize {
        self.minus_one_multiplicity
    }

    pub fn block_diagonal(&self) -> Matrix<f64> {
        block_diagonal(&self.blocks)
    }

    pub fn reconstruct(&self) -> Matrix<f64> {
        conjugate(&self.p, &self.block_diagonal())
    }
}

pub fn block_diagonal(blocks: &[CanonicalBlock]) -> Matrix<f64> {
    let n = blocks.iter().map(CanonicalBlock::dim).sum();
    let mut d = Matrix::zeros(n);
    let mut offset = 0;
    for b in blocks {
        let m = b.matrix();
        for i in 0..m.n() {
            for j in 0..m.n() {
                d[(offset + i, offset + j)] = m[(i, j)];
            }
        }
        offset += m.n();
    }
    d
}

/// `P D P^T`.
fn conjugate(p: &Matrix<f64>, d: &Matrix<f64>) -> Matrix<f64> {
    &(p * d) * &p.transpose()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn apply(m: &Matrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.n()).map(|i| (0..m.n()).map(|j| m[(i, j)] * v[j]).sum()).collect()
}

// Subtracts the components along each (orthonormal) vector in `basis`, twice
// for stability.
fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let d = dot(v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let len = norm(&v);
    v.iter_mut().for_each(|x| *x /= len);
    v
}

struct Piece {
    block: CanonicalBlock,
    columns: Vec<Vec<f64>>,
}

/// Computes `R = P D P^T`. With `pair_minus_ones`, `-1` eigenvalues are grouped
/// two at a time into `Rotation(pi)` blocks; an odd one out stays `MinusOne`.
pub fn normal_form(r: &Matrix<f64>, pair_minus_ones: bool) -> Result<NormalForm> {
    normal_form_with(r, pair_minus_ones, &Tolerances::default())
}

pub fn normal_form_with(r: &Matrix<f64>, pair_minus_ones: bool, tol: &Tolerances) -> Result<NormalForm> {
    check_orthogonal(r, tol)?;
    let n = r.n();
    let eig = symmetric_eigen(r);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));

    // Chain clustering of cos(t) values, largest first.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(c) if eig.values[*c.last().unwrap()] - eig.values[idx] <= tol::CLUSTER_RADIUS => c.push(idx),
            _ => clusters.push(vec![idx]),
        }
    }

    let mut pieces = Vec::with_capacity(n);
    for cluster in &clusters {
        let basis: Vec<Vec<f64>> = cluster.iter().map(|&j| eig.vectors.column(j)).collect();
        split_cluster(r, &basis, &mut pieces);
    }

    let minus_one_multiplicity = pieces.iter().filter(|p| p.block == CanonicalBlock::MinusOne).count();
    if pair_minus_ones {
        let (minus, mut rest): (Vec<Piece>, Vec<Piece>) =
            pieces.into_iter().partition(|p| p.block == CanonicalBlock::MinusOne);
        let mut minus = minus.into_iter();
        while let Some(first) = minus.next() {
            match minus.next() {
                Some(second) => rest.push(Piece {
                    block: CanonicalBlock::Rotation(PI),
                    columns: vec![first.columns[0].clone(), second.columns[0].clone()],
                }),
                None => rest.push(first),
            }
        }
        pieces = rest;
    }

    pieces.sort_by(|a, b| {
        let (ka, ta) = a.block.order_key();
        let (kb, tb) = b.block.order_key();
        ka.cmp(&kb).then(ta.partial_cmp(&tb).unwrap_or(Ordering::Equal))
    });

    let columns: Vec<&Vec<f64>> = pieces.iter().flat_map(|p| p.columns.iter()).collect();
    let p = Matrix::from_fn(n, |i, j| columns[j][i]);
    Ok(NormalForm {
        p,
        blocks: pieces.into_iter().map(|p| p.block).collect(),
        paired_minus_ones: pair_minus_ones,
        minus_one_multiplicity,
    })
}

// Splits one eigenvalue cluster of the symmetric part (orthonormal columns in
// `basis`) into invariant planes and fixed directions.
fn split_cluster(r: &Matrix<f64>, basis: &[Vec<f64>], out: &mut Vec<Piece>) {
    let d = basis.len();
    let lift = |coords: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; r.n()];
        for (b, &c) in basis.iter().zip(coords) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        x
    };
    // Restriction of R to the cluster, and its skew part.
    let rb: Vec<Vec<f64>> = basis.iter().map(|b| apply(r, b)).collect();
    let m = Matrix::from_fn(d, |i, j| dot(&basis[i], &rb[j]));
    let k = Matrix::from_fn(d, |i, j| 0.5 * (m[(i, j)] - m[(j, i)]));
    // k^T k has eigenvalues sin^2(t), each rotation plane contributing a pair.
    let strength = symmetric_eigen(&(&k.transpose() * &k));
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| strength.values[b].total_cmp(&strength.values[a]));
    let mut rotating: Vec<usize> =
        idx.iter().copied().filter(|&i| strength.values[i].max(0.0).sqrt() > tol::PLANE_STRENGTH).collect();
    if rotating.len() % 2 == 1 {
        rotating.pop();
    }
    let fixed: Vec<usize> = idx.iter().copied().filter(|i| !rotating.contains(i)).collect();

    let mut used: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut candidates: Vec<Vec<f64>> = rotating.iter().map(|&i| strength.vectors.column(i)).collect();
    for _ in 0..rotating.len() / 2 {
        let (best, _) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut v = c.clone();
                project_out(&mut v, &used);
                (i, norm(&v))
            })
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let mut v = candidates.swap_remove(best);
        project_out(&mut v, &used);
        let v = normalized(v);
        let mut w = apply(&k, &v);
        project_out(&mut w, &used);
        project_out(&mut w, std::slice::from_ref(&v));
        let w = normalized(w);
        let mv = apply(&m, &v);
        let angle = dot(&w, &mv).max(0.0).atan2(dot(&v, &mv));
        out.push(Piece { block: CanonicalBlock::Rotation(angle), columns: vec![lift(&v), lift(&w)] });
        used.push(v);
        used.push(w);
    }

    for i in fixed {
        let mut v = strength.vectors.column(i);
        project_out(&mut v, &used);
        let v = normalized(v);
        let block = if dot(&v, &apply(&m, &v)) >= 0.0 { CanonicalBlock::PlusOne } else { CanonicalBlock::MinusOne };
        out.push(Piece { block, columns: vec![lift(&v)] });
        used.push(v);
    }
}

fn require_special<T: Scalar>(r: &Matrix<T>) -> Result<()> {
    if r.determinant().to_f64() < 0.0 {
        Err(Error::NotSpecialOrthogonal)
    } else {
        Ok(())
    }
}

/// `R^{1/2} = P D^{1/2} P^T`, halving every rotation angle. The result never
/// has eigenvalue `-1` since all its angles lie in `(0, pi/2]`.
pub fn rotation_sqrt(r: &Matrix<f64>) -> Result<Matrix<f64>> {
    rotation_sqrt_with(r, &Tolerances::default())
}

pub fn rotation_sqrt_with(r: &Matrix<f64>, tol: &Tolerances) -> Result<Matrix<f64>> {
    check_orthogonal(r, tol)?;
    require_special(r)?;
    let nf = normal_form_with(r, true, tol)?;
    if nf.blocks.contains(&CanonicalBlock::MinusOne) {
        return Err(Error::NotSpecialOrthogonal);
    }
    let halves: Vec<CanonicalBlock> = nf
        .blocks
        .iter()
        .map(|b| match *b {
            CanonicalBlock::Rotation(t) => CanonicalBlock::Rotation(t / 2.0),
            other => other,
        })
        .collect();
    Ok(conjugate(&nf.p, &block_diagonal(&halves)))
}

/// Which Cayley-style formula a representation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepresentationKind {
    PlainCayley,
    SquaredCayley,
    TwoFactor,
    SignedCayley,
}

impl RepresentationKind {
    pub fn formula(self) -> &'static str {
        match self {
            RepresentationKind::PlainCayley => "R = (I - S)(I + S)^-1",
            RepresentationKind::SquaredCayley => "R = ((I - S)(I + S)^-1)^2",
            RepresentationKind::TwoFactor => "R = (I - S1)(I + S1)^-1 (I - S2)(I + S2)^-1",
            RepresentationKind::SignedCayley => "R = E (I - S)(I + S)^-1",
        }
    }
}

/// A skew-symmetric parameterization of an orthogonal matrix.
#[derive(Debug, Clone)]
pub enum OrthRepresentation<T> {
    PlainCayley(SkewSymmetric<T>),
    SquaredCayley(SkewSymmetric<T>),
    TwoFactor(SkewSymmetric<T>, SkewSymmetric<T>),
    SignedCayley { signs: SignVector, skew: SkewSymmetric<T> },
}

impl<T: Scalar> OrthRepresentation<T> {
    pub fn kind(&self) -> RepresentationKind {
        match self {
            OrthRepresentation::PlainCayley(_) => RepresentationKind::PlainCayley,
            OrthRepresentation::SquaredCayley(_) => RepresentationKind::SquaredCayley,
            OrthRepresentation::TwoFactor(..) => RepresentationKind::TwoFactor,
            OrthRepresentation::SignedCayley { .. } => RepresentationKind::SignedCayley,
        }
    }

    /// Evaluates the defining formula.
    pub fn evaluate(&self) -> Result<Matrix<T>> {
        match self {
            OrthRepresentation::PlainCayley(s) => cayley_transform(s),
            OrthRepresentation::SquaredCayley(s) => {
                let c = cayley_transform(s)?;
                Ok(&c * &c)
            }
            OrthRepresentation::TwoFactor(s1, s2) => Ok(&cayley_transform(s1)? * &cayley_transform(s2)?),
            OrthRepresentation::SignedCayley { signs, skew } => Ok(signs.left_multiply(&cayley_transform(skew)?)),
        }
    }
}

/// `S` with `(Cayley(S))^2 = R`, taken as the inverse Cayley transform of
/// [`rotation_sqrt`].
pub fn squared_cayley_rep(r: &Matrix<f64>) -> Result<OrthRepresentation<f64>> {
    squared_cayley_rep_with(r, &Tolerances::default())
}

pub fn squared_cayley_rep_with(r: &Matrix<f64>, tol: &Tolerances) -> Result<OrthRepresentation<f64>> {
    let root = rotation_sqrt_with(r, tol)?;
    // The root is orthogonal to working precision regardless of how loosely
    // `r` passed the gate.
    let s = inverse_cayley_with(&root, &Tolerances { orth: tol.orth.max(tol::ORTH), ..*tol })?;
    Ok(OrthRepresentation::SquaredCayley(s))
}

/// Two Cayley factors whose product is `R`. Both factors are the `S` from
/// [`squared_cayley_rep`].
pub fn weyl_two_factor(r: &Matrix<f64>) -> Result<OrthRepresentation<f64>> {
    weyl_two_factor_with(r, &Tolerances::default())
}

pub fn weyl_two_factor_with(r: &Matrix<f64>, tol: &Tolerances) -> Result<OrthRepresentation<f64>> {
    match squared_cayley_rep_with(r, tol)? {
        OrthRepresentation::SquaredCayley(s) => Ok(OrthRepresentation::TwoFactor(s.clone(), s)),
        _ => unreachable!("squared_cayley_rep returns SquaredCayley"),
    }
}

/// `(E, S)` with `R = E Cayley(S)`, for any orthogonal `R`.
///
/// `E` comes from [`fact_e`] applied to `R`, so `I + E R` is invertible and
/// `S = inverse_cayley(E R)`; `E^2 = I` then gives `E Cayley(S) = R`. If the
/// float obstruction test still rejects `E R`, single sign flips are tried
/// greedily, keeping the one that most improves the obstruction witness.
pub fn signed_cayley_rep<T: Scalar>(r: &Matrix<T>) -> Result<OrthRepresentation<T>> {
    signed_cayley_rep_with(r, &Tolerances::default())
}

pub fn signed_cayley_rep_with<T: Scalar>(r: &Matrix<T>, tol: &Tolerances) -> Result<OrthRepresentation<T>> {
    check_orthogonal(r, tol)?;
    let mut signs = fact_e(r);
    let witness = |e: &SignVector| -> Result<f64> {
        Ok(obstruction_check_with(&e.left_multiply(r), tol)?.witness.abs_f64())
    };
    let mut best = witness(&signs)?;
    while obstruction_check_with(&signs.left_multiply(r), tol)?.is_obstructed() {
        let mut improved = None;
        for i in 0..signs.len() {
            let mut flipped = signs.signs().to_vec();
            flipped[i] = flipped[i].flip();
            let candidate = SignVector::new(flipped);
            let w = witness(&candidate)?;
            if w > best {
                best = w;
                improved = Some(candidate);
            }
        }
        match improved {
            Some(c) => signs = c,
            None => return Err(Error::MinusOneEigenvalue),
        }
    }
    let skew = inverse_cayley_with(&signs.left_multiply(r), tol)?;
    Ok(OrthRepresentation::SignedCayley { signs, skew })
}

/// Picks a representation for an orthogonal float matrix:
/// `PlainCayley` for rotations without eigenvalue `-1`, `SquaredCayley` for
/// the remaining rotations, `SignedCayley` for determinant `-1`.
pub fn represent(r: &Matrix<f64>) -> Result<OrthRepresentation<f64>> {
    represent_with(r, &Tolerances::default())
}

pub fn represent_with(r: &Matrix<f64>, tol: &Tolerances) -> Result<OrthRepresentation<f64>> {
    let obstruction = obstruction_check_with(r, tol)?;
    if r.determinant() < 0.0 {
        signed_cayley_rep_with(r, tol)
    } else if obstruction.is_obstructed() {
        squared_cayley_rep_with(r, tol)
    } else {
        Ok(OrthRepresentation::PlainCayley(inverse_cayley_with(r, tol)?))
    }
}

/// Exact counterpart of [`represent`]. Square roots of rational rotations
/// are generally irrational, so obstructed rotations are represented with
/// `SignedCayley` instead of `SquaredCayley`.
pub fn represent_exact(r: &Matrix<Rational>) -> Result<OrthRepresentation<Rational>> {
    let tol = Tolerances::default();
    let obstruction = obstruction_check_with(r, &tol)?;
    if r.determinant() == Rational::from_i64(1) && !obstruction.is_obstructed() {
        Ok(OrthRepresentation::PlainCayley(inverse_cayley_with(r, &tol)?))
    } else {
        signed_cayley_rep_with(r, &tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::obstruction_check;
    use crate::random::{gen_haar_improper, gen_haar_rotation};

    fn direct_sum(parts: &[Matrix<f64>]) -> Matrix<f64> {
        let n = parts.iter().map(Matrix::n).sum();
        let mut m = Matrix::zeros(n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.n() {
                for j in 0..p.n() {
                    m[(off + i, off + j)] = p[(i, j)];
                }
            }
            off += p.n();
        }
        m
    }

    fn fi<R: AsRef<[i64]>>(rows: &[R]) -> Matrix<f64> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn identity_normal_form() {
        let nf = normal_form(&Matrix::identity(3), false).unwrap();
        assert_eq!(nf.blocks(), &[CanonicalBlock::PlusOne; 3]);
        assert!(nf.p().max_abs_diff(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn minus_identity_pairs_into_pi() {
        let minus = -&Matrix::<f64>::identity(2);
        let nf = normal_form(&minus, true).unwrap();
        assert_eq!(nf.blocks(), &[CanonicalBlock::Rotation(PI)]);
        assert_eq!(nf.minus_one_multiplicity(), 2);
        let unpaired = normal_form(&minus, false).unwrap();
        assert_eq!(unpaired.blocks(), &[CanonicalBlock::MinusOne; 2]);
    }

    #[test]
    fn recovers_known_angle() {
        let r = direct_sum(&[Matrix::identity(1), plane_rotation(PI / 3.0)]);
        let nf = normal_form(&r, true).unwrap();
        assert_eq!(nf.blocks().len(), 2);
        assert_eq!(nf.blocks()[0], CanonicalBlock::PlusOne);
        let t = nf.blocks()[1].angle().unwrap();
        assert!((t - PI / 3.0).abs() < 1e-9);
        assert!(nf.reconstruct().max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn clockwise_plane_is_reoriented() {
        // Rotation by -pi/3 has the same normal form angle with a flipped basis.
        let r = plane_rotation(-PI / 3.0);
        let nf = normal_form(&r, true).unwrap();
        assert!((nf.blocks()[0].angle().unwrap() - PI / 3.0).abs() < 1e-12);
        assert!(nf.reconstruct().max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn blocks_are_canonically_ordered() {
        let r = direct_sum(&[
            Matrix::diagonal(&[-1.0]),
            plane_rotation(2.0),
            Matrix::identity(1),
            plane_rotation(0.5),
        ]);
        let nf = normal_form(&r, true).unwrap();
        let kinds: Vec<CanonicalBlock> = nf.blocks().to_vec();
        assert_eq!(kinds[0], CanonicalBlock::PlusOne);
        assert!((kinds[1].angle().unwrap() - 0.5).abs() < 1e-12);
        assert!((kinds[2].angle().unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(kinds[3], CanonicalBlock::MinusOne);
        assert!(nf.reconstruct().max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn repeated_angles_split_into_planes() {
        let r = direct_sum(&[plane_rotation(1.0), plane_rotation(1.0), plane_rotation(PI), plane_rotation(PI)]);
        let nf = normal_form(&r, true).unwrap();
        assert_eq!(nf.blocks().len(), 4);
        assert!(nf.reconstruct().max_abs_diff(&r) < 1e-12);
        assert!(nf.p().orthogonality_residual() < 1e-12);
    }

    #[test]
    fn tiny_angle_is_not_mistaken_for_identity() {
        let r = direct_sum(&[plane_rotation(1e-5), Matrix::identity(2)]);
        let nf = normal_form(&r, true).unwrap();
        assert!(nf.reconstruct().max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn rejects_non_orthogonal() {
        assert!(matches!(normal_form(&fi(&[[1, 1], [0, 1]]), true), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn sqrt_examples() {
        let id = rotation_sqrt(&Matrix::identity(3)).unwrap();
        assert!(id.max_abs_diff(&Matrix::identity(3)) < 1e-15);
        let half = rotation_sqrt(&-&Matrix::<f64>::identity(2)).unwrap();
        assert!(half.max_abs_diff(&fi(&[[0, -1], [1, 0]])) < 1e-15);
        let r = plane_rotation(2.0 * PI / 3.0);
        let root = rotation_sqrt(&r).unwrap();
        assert!(root.max_abs_diff(&plane_rotation(PI / 3.0)) < 1e-12);
        assert!((&root * &root).max_abs_diff(&r) < 1e-10);
        assert_eq!(rotation_sqrt(&fi(&[[1, 0], [0, -1]])).unwrap_err(), Error::NotSpecialOrthogonal);
    }

    #[test]
    fn sqrt_is_never_obstructed() {
        for n in (2..=12).step_by(2) {
            let minus = -&Matrix::<f64>::identity(n);
            let root = rotation_sqrt(&minus).unwrap();
            assert!(!obstruction_check(&root).unwrap().is_obstructed());
            assert!((&root * &root).max_abs_diff(&minus) < 1e-12);
        }
    }

    #[test]
    fn squared_cayley_examples() {
        let rep = squared_cayley_rep(&Matrix::identity(3)).unwrap();
        match &rep {
            OrthRepresentation::SquaredCayley(s) => assert!(s.as_matrix().max_abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let minus = -&Matrix::<f64>::identity(2);
        let rep = squared_cayley_rep(&minus).unwrap();
        let OrthRepresentation::SquaredCayley(s) = &rep else { panic!() };
        // Cayley([[0, 1], [-1, 0]]) = [[0, -1], [1, 0]], the square root of -I.
        assert!(s.as_matrix().max_abs_diff(&fi(&[[0, 1], [-1, 0]])) < 1e-15);
        assert!(rep.evaluate().unwrap().max_abs_diff(&minus) < 1e-15);

        let r = gen_haar_rotation(6, 7);
        let rep = squared_cayley_rep(&r).unwrap();
        assert!(rep.evaluate().unwrap().max_abs_diff(&r) < 1e-9);
    }

    #[test]
    fn two_factor_examples() {
        let rep = weyl_two_factor(&Matrix::identity(2)).unwrap();
        let OrthRepresentation::TwoFactor(a, b) = &rep else { panic!() };
        assert!(a.as_matrix().max_abs() < 1e-15 && b.as_matrix().max_abs() < 1e-15);

        let r = direct_sum(&[plane_rotation(PI), plane_rotation(PI)]);
        let rep = weyl_two_factor(&r).unwrap();
        let OrthRepresentation::TwoFactor(a, b) = &rep else { panic!() };
        assert!(a.as_matrix().max_abs_diff(b.as_matrix()) == 0.0);
        assert!(rep.evaluate().unwrap().max_abs_diff(&r) < 1e-9);
    }

    #[test]
    fn signed_cayley_examples() {
        let rep = signed_cayley_rep(&Matrix::<Rational>::identity(3)).unwrap();
        let OrthRepresentation::SignedCayley { signs, skew } = &rep else { panic!() };
        assert_eq!(signs.to_ints(), vec![1, 1, 1]);
        assert_eq!(skew.as_matrix(), &Matrix::zeros(3));

        let minus = -&Matrix::<Rational>::identity(2);
        let rep = signed_cayley_rep(&minus).unwrap();
        let OrthRepresentation::SignedCayley { signs, skew } = &rep else { panic!() };
        assert_eq!(signs.to_ints(), vec![-1, -1]);
        assert_eq!(skew.as_matrix(), &Matrix::zeros(2));
        assert_eq!(rep.evaluate().unwrap(), minus);

        let reflect = Matrix::<Rational>::from_i64_rows(&[[1, 0], [0, -1]]).unwrap();
        let rep = signed_cayley_rep(&reflect).unwrap();
        let OrthRepresentation::SignedCayley { signs, skew } = &rep else { panic!() };
        assert_eq!(signs.to_ints(), vec![1, -1]);
        assert_eq!(skew.as_matrix(), &Matrix::zeros(2));
    }

    #[test]
    fn dispatcher_examples() {
        assert_eq!(represent(&plane_rotation(PI / 2.0)).unwrap().kind(), RepresentationKind::PlainCayley);
        assert_eq!(represent(&-&Matrix::<f64>::identity(2)).unwrap().kind(), RepresentationKind::SquaredCayley);
        assert_eq!(represent(&fi(&[[1, 0], [0, -1]])).unwrap().kind(), RepresentationKind::SignedCayley);
        let minus = -&Matrix::<Rational>::identity(2);
        assert_eq!(represent_exact(&minus).unwrap().kind(), RepresentationKind::SignedCayley);
    }

    #[test]
    fn haar_round_trips() {
        for seed in 0..40 {
            let n = 2 + (seed as usize % 11);
            let r = gen_haar_rotation(n, seed);
            let nf = normal_form(&r, true).unwrap();
            assert!(nf.reconstruct().max_abs_diff(&r) <= 1e-9, "seed {seed}");
            assert!(nf.p().orthogonality_residual() <= 1e-10);
            assert_eq!(nf.minus_one_multiplicity() % 2, 0);
            let m = gen_haar_improper(n, seed);
            let rep = signed_cayley_rep(&m).unwrap();
            assert!(rep.evaluate().unwrap().max_abs_diff(&m) <= 1e-9, "seed {seed}");
        }
    }
}
