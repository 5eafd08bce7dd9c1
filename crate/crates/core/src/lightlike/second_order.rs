use alloc::vec::Vec;

use crate::frames::{Chart, ConnectionMatrix, TAU_RANK};
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Bound on `|tr a|` (apolarity).
pub const TAU_APOLAR: f64 = 1e-10;

const SLOT_LAMBDA: u32 = 0x4c41;

/// Coordinate readouts of the first-order forms at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder {
    /// `ω_0^i(e_a)`, rows `i = 1 … n−1`.
    pub omega0: Mat,
    /// `ω_n^i(e_a)`.
    pub omega_n: Mat,
    /// `ω_i^n(e_a)`.
    pub omega_in: Mat,
    /// `ω_i^{n+1}(e_a)`.
    pub omega_i_inf: Mat,
    /// `ω_0^0(e_a)`.
    pub omega00: Vec<f64>,
    /// `ω_n^0(e_a)`.
    pub omega_n0: Vec<f64>,
}

pub fn first_order(w: &ConnectionMatrix) -> FirstOrder {
    let n = w.n;
    let d = w.dim();
    let block = |f: &dyn Fn(usize) -> (usize, usize)| Mat::from_fn(n - 1, d, |i, a| w.get(a, f(i + 1).0, f(i + 1).1));
    FirstOrder {
        omega0: block(&|i| (0, i)),
        omega_n: block(&|i| (n, i)),
        omega_in: block(&|i| (i, n)),
        omega_i_inf: block(&|i| (i, n + 1)),
        omega00: w.form(0, 0),
        omega_n0: w.form(n, 0),
    }
}

/// Rank of the `A_0` tangent map read from `ω_0^i`, with the dead band.
fn tangent_rank(fo: &FirstOrder) -> Result<usize> {
    linalg::numeric_rank(&linalg::singular_values(&fo.omega0), TAU_RANK)
}

/// Solves `M = X P` for `X` with `P` square (the Cartan-lemma readouts).
fn right_divide(m: &Mat, p: &Mat) -> Result<Mat> {
    Ok(linalg::solve(&p.transpose(), &m.transpose(), 1e10)?.transpose())
}

/// `λ_ij` at a lattice offset, from `ω_i^n = λ_ij ω_0^j` (unsymmetrized).
pub fn lambda_at(chart: &Chart<'_>, k: &[i32]) -> Result<Mat> {
    let n = chart.n();
    let v = chart.cached(SLOT_LAMBDA, k, || {
        let fo = first_order(&chart.omega(k)?);
        if fo.omega0.ncols() != n - 1 {
            return Err(Error::Precondition("maximal-rank data needs n-1 parameters"));
        }
        let rank = tangent_rank(&fo)?;
        if rank < n - 1 {
            return Err(Error::ReducedRank { rank });
        }
        Ok(right_divide(&fo.omega_in, &fo.omega0)?.iter().copied().collect())
    })?;
    Ok(Mat::from_column_slice(n - 1, n - 1, &v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForms {
    /// Tangent metric, the identity by frame convention.
    pub g: Mat,
    /// `ν_ij` from `ω_i^{n+1} = ν_ij ω_n^j`.
    pub nu: Mat,
    pub nu_asymmetry: f64,
    /// First fundamental form `g_ij ω_n^i ω_n^j` on coordinate directions.
    pub first_form: Mat,
    /// Deviation from `(∂_a A_n, ∂_b A_n)` computed directly.
    pub first_form_deviation: f64,
    /// Second fundamental form `ν_ij ω_n^i ω_n^j` on coordinate directions.
    pub second_form: Mat,
}

/// Fundamental forms of `U^n` at the chart center.
///
/// A degenerate `ω_0^i` block signals the reduced branch; a degenerate
/// `ω_n^i` block with full `ω_0^i` means `A_n` is a focus.
pub fn fundamental_forms(chart: &Chart<'_>) -> Result<FundamentalForms> {
    let n = chart.n();
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let fo = first_order(&w);
    let rank = tangent_rank(&fo)?;
    if rank < n - 1 {
        return Err(Error::ReducedRank { rank });
    }
    let cond = linalg::condition_number(&fo.omega_n);
    if !(cond < 1e8) {
        return Err(Error::SingularGauge { det: linalg::determinant(&fo.omega_n) });
    }
    let nu = right_divide(&fo.omega_i_inf, &fo.omega_n)?;
    let nu_asymmetry = linalg::mat_max_abs(&(&nu - nu.transpose()));
    let first_form = fo.omega_n.transpose() * &fo.omega_n;
    let second_form = fo.omega_n.transpose() * &nu * &fo.omega_n;
    let form = crate::ambient::AmbientForm::new(n)?;
    let d = chart.dim();
    let mut tangents = Vec::with_capacity(d);
    for a in 0..d {
        tangents.push(chart.derivative(&k, a, |p| Ok(chart.frame(p)?.vector(n)))?);
    }
    let direct = Mat::from_fn(d, d, |a, b| form.dot(&tangents[a], &tangents[b]));
    let first_form_deviation = linalg::mat_max_abs(&(&direct - &first_form));
    Ok(FundamentalForms {
        g: Mat::identity(n - 1, n - 1),
        nu,
        nu_asymmetry,
        first_form,
        first_form_deviation,
        second_form,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaForm {
    /// Symmetrized `λ_ij`.
    pub lambda: Mat,
    pub asymmetry: f64,
    pub det: f64,
    /// `max |ν + λ⁻¹|` when both sides exist.
    pub nu_consistency: Option<f64>,
}

/// `λ_ij` from `ω_i^n = λ_ij ω_0^j` and the check `ν = −λ⁻¹`.
pub fn lambda_form(chart: &Chart<'_>) -> Result<LambdaForm> {
    let raw = lambda_at(chart, &chart.origin())?;
    let lambda = (&raw + raw.transpose()) * 0.5;
    let asymmetry = linalg::mat_max_abs(&(&raw - raw.transpose()));
    let det = linalg::determinant(&lambda);
    let nu_consistency = match (fundamental_forms(chart), lambda.clone().try_inverse()) {
        (Ok(ff), Some(inv)) if linalg::condition_number(&lambda) < 1e8 => Some(linalg::mat_max_abs(&(ff.nu + inv))),
        _ => None,
    };
    Ok(LambdaForm { lambda, asymmetry, det, nu_consistency })
}

/// Second-order tensors of `U^n` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderData {
    pub g: Mat,
    /// `ν_ij`; absent when `A_n` is a focus.
    pub nu: Option<Mat>,
    pub lambda: Mat,
    /// `λ = tr λ_ij / (n−1)`, the arithmetic mean of the foci.
    pub lambda_mean: f64,
    /// `a_ij = λ_ij − λ g_ij`.
    pub a: Mat,
    /// `a^i_j = g^{ik} a_kj` (equal to `a` for the identity metric).
    pub affinor: Mat,
    /// `λ_k` when the normalization was computed.
    pub lambda_k: Option<Vec<f64>>,
    /// `λ_ijk` (flattened `i, j, k`) when requested.
    pub lambda_ijk: Option<Vec<f64>>,
}

pub fn second_order(chart: &Chart<'_>) -> Result<SecondOrderData> {
    let n = chart.n();
    let lf = lambda_form(chart)?;
    let nu = fundamental_forms(chart).ok().map(|f| f.nu);
    let lambda_mean = lf.lambda.trace() / (n - 1) as f64;
    let a = &lf.lambda - Mat::identity(n - 1, n - 1) * lambda_mean;
    Ok(SecondOrderData {
        g: Mat::identity(n - 1, n - 1),
        nu,
        lambda: lf.lambda,
        lambda_mean,
        affinor: a.clone(),
        a,
        lambda_k: None,
        lambda_ijk: None,
    })
}
