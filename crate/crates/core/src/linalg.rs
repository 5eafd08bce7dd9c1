//! Dense linear-algebra helpers over `nalgebra`, plus projective comparisons.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.abs() > m || v.is_nan() { v.abs() } else { m })
}

pub fn mat_max_abs(m: &Mat) -> f64 {
    max_abs(m.iter().copied())
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending and
/// eigenvectors as the matching columns.
pub fn sym_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    if m.nrows() == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = Mat::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).clone_owned();
        // Deterministic sign: largest-magnitude component positive.
        let (imax, _) = col.iter().enumerate().fold((0, 0.0), |(bi, bv), (i, v)| {
            if v.abs() > bv + 1e-12 { (i, v.abs()) } else { (bi, bv) }
        });
        if col[imax] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// Singular values, descending.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above the dead band `[τ/10, 10τ]`; a value
/// inside the band is reported as ambiguity instead of being rounded.
pub fn numeric_rank(spectrum: &[f64], tau: f64) -> Result<usize> {
    if spectrum.iter().any(|&s| s >= tau / 10.0 && s <= 10.0 * tau) {
        return Err(Error::RankAmbiguity { spectrum: spectrum.to_vec() });
    }
    Ok(spectrum.iter().filter(|&&s| s > 10.0 * tau).count())
}

/// Rank of a set of vectors relative to the largest singular value.
pub fn linear_rank(vectors: &[Vec<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = rows_to_mat(vectors);
    let sv = singular_values(&m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

pub fn rows_to_mat(rows: &[Vec<f64>]) -> Mat {
    let nc = rows.first().map_or(0, Vec::len);
    Mat::from_fn(rows.len(), nc, |i, j| rows[i][j])
}

pub fn condition_number(m: &Mat) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Solves `a x = b` by LU, rejecting singular or badly conditioned systems.
pub fn solve(a: &Mat, b: &Mat, max_condition: f64) -> Result<Mat> {
    let cond = condition_number(a);
    if !(cond < max_condition) {
        return Err(Error::Conditioning { condition: cond });
    }
    a.clone().lu().solve(b).ok_or(Error::Conditioning { condition: cond })
}

/// Least-squares solution of `a x = b` with the max-abs residual.
pub fn lstsq(a: &Mat, b: &Mat, max_condition: f64) -> Result<(Mat, f64)> {
    let cond = condition_number(a);
    if !(cond < max_condition) {
        return Err(Error::Conditioning { condition: cond });
    }
    let svd = a.clone().svd(true, true);
    let x = svd.solve(b, 0.0).map_err(|_| Error::Conditioning { condition: cond })?;
    let res = mat_max_abs(&(a * &x - b));
    Ok((x, res))
}

/// Orthonormal basis (columns) of the kernel of `m`, using a relative
/// singular-value threshold.
pub fn null_space(m: &Mat, rel_tol: f64) -> Mat {
    let ncols = m.ncols();
    // Pad to square so the full right singular basis is returned.
    let mut padded = Mat::zeros(m.nrows().max(ncols), ncols);
    padded.rows_mut(0, m.nrows()).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<Vector> = (0..ncols)
        .filter(|&k| svd.singular_values[k] <= rel_tol * top.max(1e-300))
        .map(|k| v_t.row(k).transpose())
        .collect();
    if cols.is_empty() {
        return Mat::zeros(ncols, 0);
    }
    Mat::from_columns(&cols)
}

pub fn determinant(m: &Mat) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    m.clone().lu().determinant()
}

/// Unit Euclidean norm with the first component of magnitude above
/// `1e-12` made positive.
pub fn projective_normalize(v: &[f64]) -> Result<Vec<f64>> {
    let n = norm(v);
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidPoint);
    }
    let sign = v.iter().find(|x| x.abs() > 1e-12 * n).map_or(1.0, |x| x.signum());
    Ok(v.iter().map(|x| sign * x / n).collect())
}

/// Distance between two projective points: the smaller of `‖â − b̂‖` and
/// `‖â + b̂‖` for the unit representatives.
pub fn projective_distance(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x / na, y / nb);
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    sqrt(minus.min(plus))
}

/// Euclidean orthogonal projector onto the span of the given vectors.
pub fn span_projector(vectors: &[Vec<f64>], rel_tol: f64) -> Mat {
    let dim = vectors.first().map_or(0, Vec::len);
    if vectors.is_empty() {
        return Mat::zeros(dim, dim);
    }
    let m = rows_to_mat(vectors).transpose();
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested u");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut p = Mat::zeros(dim, dim);
    for k in 0..svd.singular_values.len() {
        if svd.singular_values[k] > rel_tol * top {
            let c = u.column(k);
            p += c * c.transpose();
        }
    }
    p
}

/// Largest entry of the difference of the projectors onto two spans.
pub fn subspace_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    mat_max_abs(&(span_projector(a, 1e-10) - span_projector(b, 1e-10)))
}
