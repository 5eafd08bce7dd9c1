use alloc::vec::Vec;

use super::second_order::{first_order, lambda_at, second_order, SecondOrderData};
use crate::ambient::AmbientForm;
use crate::frames::Chart;
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// `|det a_ij|` (relative to `(1 + |λ|)^{n−1}`) below which the
/// normalization is undefined.
pub const TAU_DET: f64 = 1e-8;

const SLOT_MEAN: u32 = 0x4d4e;

/// Invariant second-order data at a point: the traceless tensor `a_ij`, the
/// harmonic pole `C = A_n + λ A_0` and the central cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Invariants {
    pub second: SecondOrderData,
    pub harmonic_pole: Vec<f64>,
    /// Central cone form `a_ij w^i w^j` pulled back to coordinate directions.
    pub central_cone: Mat,
    /// `|tr a|`.
    pub apolarity: f64,
    /// `max |(∂_a∂_b A_0, C) − (Pᵀ a P)_ab|`, second derivatives by FD.
    pub central_cone_residual: f64,
}

pub fn invariants(chart: &Chart<'_>) -> Result<Invariants> {
    let n = chart.n();
    let k = chart.origin();
    let second = second_order(chart)?;
    let frame = chart.frame(&k)?;
    let fo = first_order(&chart.omega(&k)?);
    let s = second.lambda_mean;
    let harmonic_pole: Vec<f64> = (0..n + 2).map(|c| frame.matrix()[(n, c)] + s * frame.matrix()[(0, c)]).collect();
    let central_cone = fo.omega0.transpose() * &second.a * &fo.omega0;
    let apolarity = second.a.trace().abs();
    let form = AmbientForm::new(n)?;
    let d = chart.dim();
    let mut residual: f64 = 0.0;
    for a in 0..d {
        for b in a..d {
            let hess = chart.derivative(&k, a, |p| chart.derivative(p, b, |q| Ok(chart.frame(q)?.vector(0))))?;
            residual = residual.max((form.dot(&hess, &harmonic_pole) - central_cone[(a, b)]).abs());
        }
    }
    Ok(Invariants { second, harmonic_pole, central_cone, apolarity, central_cone_residual: residual })
}

/// Invariant normalization: harmonic pole, points `C_i` and the screen `ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationData {
    pub invariants: Invariants,
    /// `λ_k` from `λ_k ω_0^k = dλ + λ ω_0^0 + ω_n^0`.
    pub lambda_k: Vec<f64>,
    /// `C_i = λ_i A_0 − a_i^j A_j`.
    pub points: Vec<Vec<f64>>,
    /// Projective dimension of `ζ = span{C_i}`.
    pub screen_dim: usize,
    /// `A_0 ∉ ζ` by rank.
    pub excludes_origin: bool,
    pub det_a: f64,
    /// `λ_ijk` flattened `(i, j, k)`, when requested.
    pub lambda_ijk: Option<Vec<f64>>,
    /// `max |λ_ijk − λ_σ(ijk)|` over transpositions.
    pub lambda_ijk_asymmetry: Option<f64>,
    /// `max |λ_k − (1/(n−1)) Σ_i λ_iik|`.
    pub lambda_k_consistency: Option<f64>,
}

fn lambda_mean_at(chart: &Chart<'_>, p: &[i32]) -> Result<f64> {
    let n = chart.n();
    Ok(chart.cached(SLOT_MEAN, p, || Ok(alloc::vec![lambda_at(chart, p)?.trace() / (n - 1) as f64]))?[0])
}

fn lambda_sym_at(chart: &Chart<'_>, p: &[i32]) -> Result<Vec<f64>> {
    let l = lambda_at(chart, p)?;
    Ok(((&l + l.transpose()) * 0.5).iter().copied().collect())
}

/// `λ_k` from `λ_k ω_0^k = dλ + λ ω_0^0 + ω_n^0` on coordinate directions.
fn lambda_vector(chart: &Chart<'_>, lbar: f64) -> Result<Vec<f64>> {
    let k = chart.origin();
    let fo = first_order(&chart.omega(&k)?);
    let grad = chart.gradient(&k, |p| lambda_mean_at(chart, p))?;
    let rhs = Mat::from_fn(1, fo.omega0.ncols(), |_, c| grad[c] + lbar * fo.omega00[c] + fo.omega_n0[c]);
    let p_inv = fo.omega0.clone().try_inverse().ok_or(Error::Conditioning { condition: f64::INFINITY })?;
    Ok((&rhs * &p_inv).iter().copied().collect())
}

fn check_nondegenerate(second: &SecondOrderData) -> Result<f64> {
    let det_a = linalg::determinant(&second.a);
    let scale = libm::pow(1.0 + second.lambda_mean.abs(), second.a.nrows() as f64);
    if !(det_a.abs() >= TAU_DET * scale) {
        return Err(Error::NormalizationUndefined { det: det_a });
    }
    Ok(det_a)
}

/// Shift `x` with `A_i + x_i A_0 ∈ ζ`, i.e. `x = −a⁻¹ λ_·`.
pub fn screen_shift(chart: &Chart<'_>) -> Result<Vec<f64>> {
    let second = second_order(chart)?;
    check_nondegenerate(&second)?;
    let lk = lambda_vector(chart, second.lambda_mean)?;
    let rhs = Mat::from_column_slice(lk.len(), 1, &lk);
    Ok(linalg::solve(&second.a, &rhs, 1e10)?.iter().map(|v| -v).collect())
}

pub fn normalization(chart: &Chart<'_>, with_prolongation: bool) -> Result<NormalizationData> {
    let n = chart.n();
    let m = n - 1;
    let k = chart.origin();
    let inv = invariants(chart)?;
    let a = &inv.second.a;
    let det_a = check_nondegenerate(&inv.second)?;
    let w = chart.omega(&k)?;
    let fo = first_order(&w);
    let p_inv = fo.omega0.clone().try_inverse().ok_or(Error::Conditioning { condition: f64::INFINITY })?;
    let lambda_k = lambda_vector(chart, inv.second.lambda_mean)?;
    let frame = chart.frame(&k)?;
    let points: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..n + 2)
                .map(|c| {
                    let mut v = lambda_k[i] * frame.matrix()[(0, c)];
                    for j in 0..m {
                        v -= a[(i, j)] * frame.matrix()[(j + 1, c)];
                    }
                    v
                })
                .collect()
        })
        .collect();
    let rank = linalg::linear_rank(&points, 1e-8);
    let mut with_origin = points.clone();
    with_origin.push(frame.vector(0));
    let excludes_origin = linalg::linear_rank(&with_origin, 1e-8) == rank + 1;

    let (mut lambda_ijk, mut asym, mut consistency) = (None, None, None);
    if with_prolongation {
        let d = chart.dim();
        let dl: Vec<Vec<f64>> = (0..d).map(|ax| chart.derivative(&k, ax, |p| lambda_sym_at(chart, p))).collect::<Result<_>>()?;
        let lam = &inv.second.lambda;
        let mut t = alloc::vec![0.0; m * m * m];
        for i in 0..m {
            for j in 0..m {
                let e = Mat::from_fn(1, d, |_, ax| {
                    let wa = &w.dirs[ax];
                    let mut v = dl[ax][i + j * m];
                    for kk in 0..m {
                        v -= lam[(i, kk)] * wa[(j + 1, kk + 1)] + lam[(kk, j)] * wa[(i + 1, kk + 1)];
                    }
                    v + lam[(i, j)] * fo.omega00[ax] + if i == j { fo.omega_n0[ax] } else { 0.0 }
                });
                let row = &e * &p_inv;
                for kk in 0..m {
                    t[(i * m + j) * m + kk] = row[kk];
                }
            }
        }
        let at = |i: usize, j: usize, kk: usize| t[(i * m + j) * m + kk];
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                for kk in 0..m {
                    worst = worst.max((at(i, j, kk) - at(j, i, kk)).abs()).max((at(i, j, kk) - at(i, kk, j)).abs());
                }
            }
        }
        let cons = linalg::max_abs((0..m).map(|kk| lambda_k[kk] - (0..m).map(|i| at(i, i, kk)).sum::<f64>() / m as f64));
        lambda_ijk = Some(t);
        asym = Some(worst);
        consistency = Some(cons);
    }
    let mut inv = inv;
    inv.second.lambda_k = Some(lambda_k.clone());
    inv.second.lambda_ijk = lambda_ijk.clone();
    Ok(NormalizationData {
        invariants: inv,
        lambda_k,
        points,
        screen_dim: rank.saturating_sub(1),
        excludes_origin,
        det_a,
        lambda_ijk,
        lambda_ijk_asymmetry: asym,
        lambda_k_consistency: consistency,
    })
}

/// Cross-ratio `(a, b; c, d) = ((c−a)(d−b)) / ((c−b)(d−a))` of points on a
/// line chart; infinite arguments are taken as the point at infinity.
pub fn cross_ratio(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let diff = |x: f64, y: f64| if x.is_infinite() || y.is_infinite() { None } else { Some(x - y) };
    let num = [diff(c, a), diff(d, b)];
    let den = [diff(c, b), diff(d, a)];
    let prod = |v: [Option<f64>; 2]| v.iter().flatten().product::<f64>();
    prod(num) / prod(den)
}
