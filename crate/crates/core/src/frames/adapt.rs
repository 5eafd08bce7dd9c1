use alloc::vec;
use alloc::vec::Vec;

use super::MovingFrame;
use crate::ambient::{AmbientForm, TAU_QUADRIC};
use crate::lightlike::ConformalImmersion;
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Gram-pattern tolerance for adapted frames.
pub const TAU_GRAM: f64 = 1e-9;
/// Singular-value threshold separating tangent directions from noise; the
/// dead band is `[τ/10, 10τ]`.
pub const TAU_RANK: f64 = 1e-6;

/// Adapted frame of a hypersurface on the quadric in the `E_∞` gauge.
pub fn adapt_frame(immersion: &dyn ConformalImmersion, u: &[f64]) -> Result<MovingFrame> {
    adapt_frame_with_gauge(immersion, u, None)
}

/// Adapted frame with gauge `(A_n, E) = 0`; `None` means `E = e_{n+1}`.
pub fn adapt_frame_with_gauge(
    immersion: &dyn ConformalImmersion,
    u: &[f64],
    gauge: Option<&[f64]>,
) -> Result<MovingFrame> {
    let n = immersion.n();
    let form = AmbientForm::new(n)?;
    let base = tangent_data(&form, immersion, u)?;
    if base.rank != immersion.param_dim() || base.rank != n - 1 {
        return Err(Error::ImmersionRank { singular_values: base.singular_values });
    }
    let e = gauge_vector(&form, gauge)?;
    let normals = normal_basis(&form, &base, &e)?;
    let mut a_n = normals[0].clone();
    // Orientation: det[A_0; ∂A_0; A_n; E] > 0. For Euclidean lifts this is
    // det[f_1 … f_{n-1}, N] > 0.
    let mut rows = vec![base.a0.clone()];
    rows.extend(base.tangents.iter().cloned());
    rows.push(a_n.clone());
    rows.push(e.clone());
    if linalg::determinant(&linalg::rows_to_mat(&rows)) < 0.0 {
        a_n.iter_mut().for_each(|x| *x = -*x);
    }
    let mut spacelike = base.orthonormal.clone();
    spacelike.push(a_n);
    assemble(&form, base.a0, spacelike, &e, u)
}

/// First-order data of an immersion at one parameter point.
pub(crate) struct TangentData {
    pub a0: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
    pub orthonormal: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

pub(crate) fn tangent_data(form: &AmbientForm, immersion: &dyn ConformalImmersion, u: &[f64]) -> Result<TangentData> {
    let n = form.n();
    if immersion.n() != n {
        return Err(Error::Shape { expected: n, found: immersion.n() });
    }
    let a0 = immersion.point(u);
    if a0.len() != n + 2 {
        return Err(Error::Shape { expected: n + 2, found: a0.len() });
    }
    let q = form.dot(&a0, &a0);
    let scale = linalg::dot(&a0, &a0);
    if !(q.abs() <= TAU_QUADRIC * scale) {
        return Err(Error::NotOnQuadric { value: q });
    }
    let tangents = immersion.tangents(u);
    let d = tangents.len();
    let gram = Mat::from_fn(d, d, |a, b| form.dot(&tangents[a], &tangents[b]));
    let (eig, _) = linalg::sym_eigen(&gram);
    let mut singular_values: Vec<f64> = eig.iter().rev().map(|&l| linalg::sqrt(l.max(0.0))).collect();
    singular_values.truncate(d);
    let rank = linalg::numeric_rank(&singular_values, TAU_RANK)?;
    let orthonormal = if rank == d { gram_schmidt(form, &tangents)? } else { Vec::new() };
    Ok(TangentData { a0, tangents, orthonormal, singular_values, rank })
}

/// Gram–Schmidt with respect to the ambient form; inputs must span a
/// spacelike subspace.
pub(crate) fn gram_schmidt(form: &AmbientForm, vectors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = form.dot(&w, e);
                w.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
            }
        }
        let q = form.dot(&w, &w);
        if !(q > 1e-20) {
            return Err(Error::FrameDegenerate { deviation: q });
        }
        let s = linalg::sqrt(q);
        out.push(w.into_iter().map(|x| x / s).collect());
    }
    Ok(out)
}

pub(crate) fn gauge_vector(form: &AmbientForm, gauge: Option<&[f64]>) -> Result<Vec<f64>> {
    match gauge {
        None => Ok(form.infinity()),
        Some(e) if e.len() == form.n() + 2 => Ok(e.to_vec()),
        Some(e) => Err(Error::Shape { expected: form.n() + 2, found: e.len() }),
    }
}

/// G-orthonormal basis of the vectors orthogonal to `A_0`, the tangents and
/// the gauge vector. These span the generator space modulo `A_0`.
pub(crate) fn normal_basis(form: &AmbientForm, base: &TangentData, e: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = form.n();
    let pairing = form.dot(&base.a0, e);
    if pairing.abs() <= 1e-12 * linalg::norm(&base.a0) * linalg::norm(e) {
        return Err(Error::Gauge { suggestion: suggest_gauge(form, &base.a0) });
    }
    let mut constraints = vec![base.a0.clone()];
    constraints.extend(base.tangents.iter().cloned());
    constraints.push(e.to_vec());
    let rows: Vec<Vec<f64>> = constraints
        .iter()
        .map(|v| {
            let gv = form.lower(v);
            let s = linalg::norm(&gv);
            gv.into_iter().map(|x| x / s).collect()
        })
        .collect();
    let c = linalg::rows_to_mat(&rows);
    let mut padded = Mat::zeros(n + 2, n + 2);
    padded.rows_mut(0, c.nrows()).copy_from(&c);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let mut order: Vec<usize> = (0..n + 2).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kept = c.nrows();
    if svd.singular_values[order[kept - 1]] < 1e-8 {
        return Err(Error::Gauge { suggestion: suggest_gauge(form, &base.a0) });
    }
    let kernel: Vec<Vec<f64>> = order[kept..].iter().map(|&k| v_t.row(k).iter().copied().collect()).collect();
    gram_schmidt(form, &kernel)
}

fn suggest_gauge(form: &AmbientForm, a0: &[f64]) -> Vec<f64> {
    let dim = form.n() + 2;
    let best = (0..dim)
        .max_by(|&a, &b| {
            let pa = form.dot(a0, &unit(dim, a)).abs();
            let pb = form.dot(a0, &unit(dim, b)).abs();
            pa.total_cmp(&pb)
        })
        .unwrap_or(0);
    unit(dim, best)
}

fn unit(dim: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[k] = 1.0;
    e
}

/// The null vector `A_{n+1}` with `(A_0, A_{n+1}) = -1`, orthogonal to the
/// given orthonormal spacelike vectors; `reference` fixes the 2-plane
/// component and must pair nontrivially with `A_0`.
pub fn complete_null_partner(form: &AmbientForm, a0: &[f64], spacelike: &[Vec<f64>], reference: &[f64]) -> Vec<f64> {
    let mut w = reference.to_vec();
    for b in spacelike {
        let c = form.dot(&w, b);
        w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    let aw = form.dot(a0, &w);
    let alpha = -1.0 / aw;
    let beta = -alpha * form.dot(&w, &w) / (2.0 * aw);
    w.iter().zip(a0).map(|(x, y)| alpha * x + beta * y).collect()
}

/// Frame from `A_0`, the ordered spacelike vectors `A_1 … A_n` and the
/// reference used for `A_{n+1}`; verifies the Gram pattern.
pub(crate) fn assemble(
    form: &AmbientForm,
    a0: Vec<f64>,
    spacelike: Vec<Vec<f64>>,
    reference: &[f64],
    u: &[f64],
) -> Result<MovingFrame> {
    let n = form.n();
    let a_inf = complete_null_partner(form, &a0, &spacelike, reference);
    let mut vectors = Vec::with_capacity(n + 2);
    vectors.push(a0);
    vectors.extend(spacelike);
    vectors.push(a_inf);
    let frame = MovingFrame::from_vectors(n, &vectors, u.to_vec())?;
    let dev = frame.gram_deviation(form);
    let big = linalg::mat_max_abs(frame.matrix());
    let scale = 1.0 + big * big;
    if !(dev <= TAU_GRAM * scale) {
        return Err(Error::FrameDegenerate { deviation: dev });
    }
    Ok(frame)
}
