//! Lightlike hypersurfaces of reduced rank `r < n−1`.
//!
//! Frame layout: `A_0`, then the generator-plane directions `A_a`
//! (`a = 1 … m`, rows `1 … m`), then the tangent directions `A_p` of `V^r`
//! (rows `m+1 … n−1`), then `A_n`, `A_{n+1}`. Greek indices `α` run over
//! `a = 1 … m` followed by `n`; arrays indexed by `α` store `n` last.

use alloc::vec;
use alloc::vec::Vec;

use crate::ambient::AmbientForm;
use crate::frames::{
    adapt_frame_with_gauge, exterior_derivative, origin_rotation, Chart, FdScheme, FrameSource, MovingFrame,
    TAU_RANK,
};
use crate::frames::adapt::{assemble, gauge_vector, normal_basis, tangent_data};
use crate::lightlike::ConformalImmersion;
use crate::linalg::{self, Mat};
use crate::polynomial::{self, Polynomial};
use crate::{Error, Result};

const SLOT_REDUCED_LAMBDA: u32 = 0x524c;
const SLOT_RELATIVE: u32 = 0x5241;

/// Rank `r` of the submanifold `V` at `u`, with the dead-band rule.
pub fn detect_rank(immersion: &dyn ConformalImmersion, u: &[f64]) -> Result<usize> {
    let form = AmbientForm::new(immersion.n())?;
    Ok(tangent_data(&form, immersion, u)?.rank)
}

/// Adapted frame of a reduced-rank configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFrame {
    pub frame: MovingFrame,
    pub r: usize,
    pub m: usize,
    /// Singular values of the tangent map of `A_0`.
    pub spectrum: Vec<f64>,
}

impl ReducedFrame {
    /// Block metric `g_αβ` (identity by orthonormalization).
    pub fn block_metric(&self) -> Mat {
        Mat::identity(self.m + 1, self.m + 1)
    }
}

/// Projects `v` onto the `G`-orthogonal complement of `span(basis)`.
fn project_out(form: &AmbientForm, basis: &[Vec<f64>], v: &[f64]) -> Result<Vec<f64>> {
    let k = basis.len();
    let gram = Mat::from_fn(k, k, |i, j| form.dot(&basis[i], &basis[j]));
    let rhs = Mat::from_fn(k, 1, |i, _| form.dot(&basis[i], v));
    let c = linalg::solve(&gram, &rhs, 1e12)?;
    let mut out = v.to_vec();
    for (i, b) in basis.iter().enumerate() {
        out.iter_mut().zip(b).for_each(|(x, y)| *x -= c[i] * y);
    }
    Ok(out)
}

fn adapt_with_reference(
    immersion: &dyn ConformalImmersion,
    u: &[f64],
    reference: Option<&[Vec<f64>]>,
    gauge: &[f64],
    allow_maximal: bool,
) -> Result<ReducedFrame> {
    let n = immersion.n();
    let form = AmbientForm::new(n)?;
    let base = tangent_data(&form, immersion, u)?;
    let r = base.rank;
    if r != immersion.param_dim() {
        return Err(Error::ImmersionRank { singular_values: base.singular_values });
    }
    if r == n - 1 {
        if !allow_maximal {
            return Err(Error::MaximalRank);
        }
        let frame = adapt_frame_with_gauge(immersion, u, Some(gauge))?;
        return Ok(ReducedFrame { frame, r, m: 0, spectrum: base.singular_values });
    }
    let m = n - 1 - r;
    let normals = match reference {
        None => normal_basis(&form, &base, gauge)?,
        Some(refs) => {
            let mut constraints = vec![base.a0.clone()];
            constraints.extend(base.tangents.iter().cloned());
            constraints.push(gauge.to_vec());
            let projected: Vec<Vec<f64>> =
                refs.iter().map(|v| project_out(&form, &constraints, v)).collect::<Result<_>>()?;
            crate::frames::adapt::gram_schmidt(&form, &projected)?
        }
    };
    if normals.len() != m + 1 {
        return Err(Error::Shape { expected: m + 1, found: normals.len() });
    }
    // A_n is the first normal, A_a the rest.
    let mut spacelike: Vec<Vec<f64>> = normals[1..].to_vec();
    spacelike.extend(base.orthonormal.iter().cloned());
    spacelike.push(normals[0].clone());
    let frame = assemble(&form, base.a0, spacelike, gauge, u)?;
    Ok(ReducedFrame { frame, r, m, spectrum: base.singular_values })
}

/// Reduced frame at `u`; the generator-plane basis is taken from the
/// normal space at `u` itself.
pub fn adapt_reduced_frame(immersion: &dyn ConformalImmersion, u: &[f64]) -> Result<ReducedFrame> {
    let form = AmbientForm::new(immersion.n())?;
    adapt_with_reference(immersion, u, None, &gauge_vector(&form, None)?, false)
}

/// Smooth reduced frame field: the normal basis fixed at a reference point
/// is projected onto the normal space at each `u`.
pub struct ReducedFrames<I> {
    pub immersion: I,
    reference: Vec<Vec<f64>>,
    gauge: Vec<f64>,
    allow_maximal: bool,
}

impl<I: ConformalImmersion> ReducedFrames<I> {
    pub fn new(immersion: I, reference_point: &[f64]) -> Result<Self> {
        let form = AmbientForm::new(immersion.n())?;
        let gauge = gauge_vector(&form, None)?;
        let f = adapt_with_reference(&immersion, reference_point, None, &gauge, false)?;
        Ok(Self::from_frame(immersion, &f, gauge, false))
    }

    /// Also accepts maximal-rank input (`m = 0`), where the frame coincides
    /// with the maximal-rank adapted frame.
    pub fn forced(immersion: I, reference_point: &[f64]) -> Result<Self> {
        let form = AmbientForm::new(immersion.n())?;
        let gauge = gauge_vector(&form, None)?;
        let f = adapt_with_reference(&immersion, reference_point, None, &gauge, true)?;
        Ok(Self::from_frame(immersion, &f, gauge, true))
    }

    fn from_frame(immersion: I, f: &ReducedFrame, gauge: Vec<f64>, allow_maximal: bool) -> Self {
        let n = f.frame.n();
        let mut reference = vec![f.frame.vector(n)];
        reference.extend((1..=f.m).map(|a| f.frame.vector(a)));
        Self { immersion, reference, gauge, allow_maximal }
    }

    pub fn reduced_frame(&self, u: &[f64]) -> Result<ReducedFrame> {
        adapt_with_reference(&self.immersion, u, Some(&self.reference), &self.gauge, self.allow_maximal)
    }
}

impl<I: ConformalImmersion> FrameSource for ReducedFrames<I> {
    fn n(&self) -> usize {
        self.immersion.n()
    }
    fn param_dim(&self) -> usize {
        self.immersion.param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        Ok(self.reduced_frame(u)?.frame)
    }
}

/// Block sizes `(r, m)` of a chart over reduced frames.
fn blocks(chart: &Chart<'_>) -> Result<(usize, usize)> {
    let r = chart.dim();
    let n = chart.n();
    if r > n - 1 {
        return Err(Error::Shape { expected: n - 1, found: r });
    }
    Ok((r, n - 1 - r))
}

/// Frame row of the Greek index `α` (`a` rows first, then `n`).
fn alpha_row(alpha: usize, m: usize, n: usize) -> usize {
    if alpha < m {
        alpha + 1
    } else {
        n
    }
}

/// `P[p][c] = ω_0^p(e_c)`.
fn basis_block(w: &crate::frames::ConnectionMatrix, m: usize, r: usize) -> Mat {
    Mat::from_fn(r, r, |p, c| w.get(c, 0, m + 1 + p))
}

fn invert_basis(p: &Mat) -> Result<Mat> {
    let cond = linalg::condition_number(p);
    if !(cond < 1e10) {
        return Err(Error::Conditioning { condition: cond });
    }
    p.clone().try_inverse().ok_or(Error::Conditioning { condition: cond })
}

/// `λ^α_pq` at a lattice offset (unsymmetrized), `α` in storage order.
fn reduced_lambda_at(chart: &Chart<'_>, k: &[i32]) -> Result<Vec<Mat>> {
    let (r, m) = blocks(chart)?;
    let n = chart.n();
    let flat = chart.cached(SLOT_REDUCED_LAMBDA, k, || {
        let w = chart.omega(k)?;
        let p_inv = invert_basis(&basis_block(&w, m, r))?;
        let mut out = Vec::with_capacity((m + 1) * r * r);
        for alpha in 0..=m {
            let row = alpha_row(alpha, m, n);
            let q = Mat::from_fn(r, r, |p, c| w.get(c, m + 1 + p, row));
            out.extend((q * &p_inv).iter().copied());
        }
        Ok(out)
    })?;
    Ok((0..=m).map(|alpha| Mat::from_column_slice(r, r, &flat[alpha * r * r..(alpha + 1) * r * r])).collect())
}

fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSecondOrder {
    pub r: usize,
    pub m: usize,
    /// `λ^a_pq` for `a = 1 … m`, symmetrized.
    pub lambda_a: Vec<Mat>,
    /// `λ^n_pq`, symmetrized.
    pub lambda_n: Mat,
    pub asymmetry: f64,
    /// `max |ω_0^α|` on coordinate directions.
    pub plane_residual: f64,
    /// `max |ω_a^p + λ^a_ps ω_0^s|`.
    pub cross_residual: f64,
}

impl ReducedSecondOrder {
    /// `λ^α_pq` in storage order (`a` first, then `n`).
    pub fn lambda(&self, alpha: usize) -> &Mat {
        if alpha < self.m {
            &self.lambda_a[alpha]
        } else {
            &self.lambda_n
        }
    }
}

pub fn reduced_second_order(chart: &Chart<'_>) -> Result<ReducedSecondOrder> {
    let (r, m) = blocks(chart)?;
    let n = chart.n();
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let raw = reduced_lambda_at(chart, &k)?;
    let asymmetry = raw.iter().map(|l| linalg::mat_max_abs(&(l - l.transpose()))).fold(0.0, f64::max);
    let sym: Vec<Mat> = raw.iter().map(symmetrize).collect();
    let plane_residual = linalg::max_abs((0..r).flat_map(|c| (0..=m).map(move |alpha| (c, alpha))).map(|(c, alpha)| {
        w.get(c, 0, alpha_row(alpha, m, n))
    }));
    let p = basis_block(&w, m, r);
    let mut cross: f64 = 0.0;
    for a in 0..m {
        let predicted = -(&sym[a] * &p);
        for q in 0..r {
            for c in 0..r {
                cross = cross.max((w.get(c, a + 1, m + 1 + q) - predicted[(q, c)]).abs());
            }
        }
    }
    let lambda_n = sym[m].clone();
    let lambda_a = sym[..m].to_vec();
    Ok(ReducedSecondOrder { r, m, lambda_a, lambda_n, asymmetry, plane_residual, cross_residual: cross })
}

/// The plane generator `L = A_0 ∧ A_a ∧ A_n` with its certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPlane {
    /// `A_0, A_1 … A_m, A_n`.
    pub basis: Vec<Vec<f64>>,
    /// Eigenvalues of the ambient form restricted to `L` (ascending).
    pub restricted: Vec<f64>,
    /// Pole of the tangent hyperplane `η` (equals `A_0`).
    pub pole: Vec<f64>,
    /// Sample points `z ∈ L` used for the sweep.
    pub samples: Vec<Vec<f64>>,
    /// Largest projective distance between the pole of the tangent
    /// hyperplane at a sample and `A_0`.
    pub hyperplane_variation: f64,
    /// `max(|(P,P)|, |(P, z)|)` for the sampled poles `P`.
    pub tangency_residual: f64,
    /// Samples rejected as focal.
    pub rejected: usize,
}

const PLANE_SAMPLES: [(f64, f64); 8] =
    [(0.0, 0.0), (0.5, 0.3), (-0.7, 1.1), (1.3, -0.4), (0.2, -1.7), (-1.1, -0.6), (2.1, 0.9), (-0.3, 2.4)];

pub fn plane_generator(chart: &Chart<'_>) -> Result<GeneratorPlane> {
    let (r, m) = blocks(chart)?;
    let n = chart.n();
    let form = AmbientForm::new(n)?;
    let k = chart.origin();
    let frame = chart.frame(&k)?;
    let rows: Vec<usize> = core::iter::once(0).chain(1..=m).chain(core::iter::once(n)).collect();
    let basis: Vec<Vec<f64>> = rows.iter().map(|&i| frame.vector(i)).collect();
    let gram = Mat::from_fn(basis.len(), basis.len(), |i, j| form.dot(&basis[i], &basis[j]));
    let (restricted, _) = linalg::sym_eigen(&gram);
    let derivs: Vec<Vec<Vec<f64>>> = (0..r)
        .map(|c| rows.iter().map(|&i| chart.derivative(&k, c, |p| Ok(chart.frame(p)?.vector(i)))).collect())
        .collect::<Result<_>>()?;
    let a0 = frame.vector(0);
    let mut samples = Vec::new();
    let mut variation: f64 = 0.0;
    let mut tangency: f64 = 0.0;
    let mut rejected = 0;
    for &(t, s) in PLANE_SAMPLES.iter() {
        // z = s A_0 + t Σ_a A_a / √m + A_n.
        let mut coef = vec![0.0; rows.len()];
        coef[0] = s;
        for a in 0..m {
            coef[1 + a] = t / linalg::sqrt(m as f64);
        }
        coef[m + 1] = 1.0;
        let combine = |vs: &[Vec<f64>]| -> Vec<f64> {
            (0..n + 2).map(|x| vs.iter().zip(&coef).map(|(v, c)| c * v[x]).sum()).collect()
        };
        let z = combine(&basis);
        let mut span: Vec<Vec<f64>> = basis.clone();
        for d in &derivs {
            span.push(combine(d));
        }
        let lowered: Vec<Vec<f64>> = span.iter().map(|v| form.lower(v)).collect();
        let kernel = linalg::null_space(&linalg::rows_to_mat(&lowered), 1e-8);
        if kernel.ncols() != 1 {
            rejected += 1;
            continue;
        }
        let pole: Vec<f64> = kernel.column(0).iter().copied().collect();
        variation = variation.max(linalg::projective_distance(&pole, &a0));
        let pn = linalg::norm(&pole);
        let zn = linalg::norm(&z);
        tangency = tangency.max((form.dot(&pole, &pole) / (pn * pn)).abs()).max((form.dot(&pole, &z) / (pn * zn)).abs());
        samples.push(z);
    }
    if samples.is_empty() {
        return Err(Error::Precondition("every plane sample is focal"));
    }
    Ok(GeneratorPlane {
        basis,
        restricted,
        pole: linalg::projective_normalize(&a0)?,
        samples,
        hyperplane_variation: variation,
        tangency_residual: tangency,
        rejected,
    })
}

/// `det N^p_q(z)` with `N^p_q(z) = δ^p_q z^0 − λ^a_pq z^a − λ^n_pq z^n`.
/// Variables: `z^0, z^1 … z^m, z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalPolynomial {
    pub r: usize,
    pub m: usize,
    /// `λ^α_pq` in storage order.
    pub lambda: Vec<Mat>,
    pub det: Polynomial,
}

impl FocalPolynomial {
    pub fn new(second: &ReducedSecondOrder) -> Self {
        let (r, m) = (second.r, second.m);
        let lambda: Vec<Mat> = (0..=m).map(|alpha| second.lambda(alpha).clone()).collect();
        let nv = m + 2;
        let entries: Vec<Vec<Polynomial>> = (0..r)
            .map(|p| {
                (0..r)
                    .map(|q| {
                        let mut e = if p == q { Polynomial::var(nv, 0) } else { Polynomial::zero(nv) };
                        for (alpha, l) in lambda.iter().enumerate() {
                            e = e.add(&Polynomial::var(nv, alpha + 1).scale(-l[(p, q)]));
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let det = polynomial::determinant(&entries, nv);
        Self { r, m, lambda, det }
    }

    /// `N(z)` at `z = (z^0, z^a…, z^n)`.
    pub fn matrix(&self, z: &[f64]) -> Mat {
        let mut out = Mat::identity(self.r, self.r) * z[0];
        for (alpha, l) in self.lambda.iter().enumerate() {
            out -= l * z[alpha + 1];
        }
        out
    }

    pub fn degree_z0(&self) -> u32 {
        self.det.degree_in(0)
    }

    /// Roots in `z^0` on the line `A_0 ∨ (z^a A_a + z^n A_n)`, from the
    /// polynomial; `zt = (z^a…, z^n)`.
    pub fn line_roots(&self, zt: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0];
        x.extend_from_slice(zt);
        polynomial::real_roots(&self.det.univariate(0, &x), 1e-6)
    }

    /// The same roots as eigenvalues of `Σ_α λ^α z^α`.
    pub fn line_roots_spectral(&self, zt: &[f64]) -> Vec<f64> {
        let mut mtx = Mat::zeros(self.r, self.r);
        for (alpha, l) in self.lambda.iter().enumerate() {
            mtx += l * zt[alpha];
        }
        linalg::sym_eigen(&mtx).0
    }

    /// `|Σ roots − r (λ_a z^a + λ^n z^n)|` with the root sum read from the
    /// `(z^0)^{r−1}` coefficient.
    pub fn vieta_residual(&self, zt: &[f64], polar: &HarmonicPolar) -> f64 {
        let mut x = vec![0.0];
        x.extend_from_slice(zt);
        let c = self.det.univariate(0, &x);
        let sum = -c[self.r - 1] / c[self.r];
        let mean: f64 = polar.means.iter().zip(zt).map(|(l, z)| l * z).sum();
        (sum - self.r as f64 * mean).abs()
    }
}

/// Harmonic polar `z^0 − λ_a z^a − λ^n z^n = 0` of `A_0` in `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPolar {
    /// `λ^α = (1/r) g^{pq} λ^α_pq`, storage order.
    pub means: Vec<f64>,
    /// Coefficients of the polar in `(z^0, z^a…, z^n)`.
    pub coefficients: Vec<f64>,
}

impl HarmonicPolar {
    pub fn new(second: &ReducedSecondOrder) -> Self {
        let r = second.r as f64;
        let means: Vec<f64> = (0..=second.m).map(|alpha| second.lambda(alpha).trace() / r).collect();
        let mut coefficients = vec![1.0];
        coefficients.extend(means.iter().map(|l| -l));
        Self { means, coefficients }
    }

    pub fn evaluate(&self, z: &[f64]) -> f64 {
        self.coefficients.iter().zip(z).map(|(c, x)| c * x).sum()
    }

    /// `|(1/r) tr N(z) − polar(z)|`.
    pub fn trace_residual(&self, poly: &FocalPolynomial, z: &[f64]) -> f64 {
        (poly.matrix(z).trace() / poly.r as f64 - self.evaluate(z)).abs()
    }
}

pub fn harmonic_polar(chart: &Chart<'_>) -> Result<HarmonicPolar> {
    Ok(HarmonicPolar::new(&reduced_second_order(chart)?))
}

pub fn focal_polynomial(chart: &Chart<'_>) -> Result<FocalPolynomial> {
    Ok(FocalPolynomial::new(&reduced_second_order(chart)?))
}

/// Invariant tensors built from `a^α_pq = λ^α_pq − λ^α g_pq`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedInvariants {
    /// `a^α_pq`, storage order.
    pub a: Vec<Mat>,
    /// `max_α |g^{pq} a^α_pq|`.
    pub apolarity: f64,
    /// `a^{αβ} = g^{pq} g^{st} a^α_ps a^β_qt`.
    pub a_upper: Mat,
    /// `a^α_β = g_βγ a^{γα}`.
    pub a_mixed: Mat,
    /// Singular values of the matrix `A = (a^α_pq)`, columns `p ≤ q`.
    pub spectrum: Vec<f64>,
    pub rho: usize,
    /// Sum of the principal `ρ`-minors of `a^α_β`.
    pub relative_invariant: f64,
}

/// Sum of the principal minors of order `k`.
pub fn principal_minor_sum(m: &Mat, k: usize) -> f64 {
    let n = m.nrows();
    if k == 0 {
        return 1.0;
    }
    if k > 4 {
        // Elementary symmetric polynomial of the spectrum.
        let (eig, _) = linalg::sym_eigen(&symmetrize(m));
        let mut e = vec![0.0; n + 1];
        e[0] = 1.0;
        for &l in &eig {
            for j in (1..=n).rev() {
                e[j] += l * e[j - 1];
            }
        }
        return e[k];
    }
    let mut total = 0.0;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let sub = Mat::from_fn(k, k, |i, j| m[(idx[i], idx[j])]);
        total += linalg::determinant(&sub);
        // Next k-combination of 0..n.
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return total;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn invariant_tensors(second: &ReducedSecondOrder) -> Result<ReducedInvariants> {
    let (r, m) = (second.r, second.m);
    let a: Vec<Mat> = (0..=m)
        .map(|alpha| {
            let l = second.lambda(alpha);
            l - Mat::identity(r, r) * (l.trace() / r as f64)
        })
        .collect();
    let apolarity = linalg::max_abs(a.iter().map(|x| x.trace()));
    let cols: Vec<(usize, usize)> = (0..r).flat_map(|p| (p..r).map(move |q| (p, q))).collect();
    let big = Mat::from_fn(m + 1, cols.len(), |alpha, c| a[alpha][cols[c]]);
    let spectrum = linalg::singular_values(&big);
    let rho = linalg::numeric_rank(&spectrum, TAU_RANK)?;
    let a_upper = Mat::from_fn(m + 1, m + 1, |x, y| a[x].component_mul(&a[y]).sum());
    let a_mixed = a_upper.transpose();
    let relative_invariant = principal_minor_sum(&a_mixed, rho);
    Ok(ReducedInvariants { a, apolarity, a_upper, a_mixed, spectrum, rho, relative_invariant })
}

pub fn reduced_invariant_tensors(chart: &Chart<'_>) -> Result<ReducedInvariants> {
    invariant_tensors(&reduced_second_order(chart)?)
}

/// `a` at a lattice offset with the order `ρ` fixed at the chart center.
fn relative_invariant_at(chart: &Chart<'_>, k: &[i32], rho: usize) -> Result<f64> {
    let v = chart.cached(SLOT_RELATIVE, k, || {
        let (r, m) = blocks(chart)?;
        let raw = reduced_lambda_at(chart, k)?;
        let a: Vec<Mat> = raw
            .iter()
            .map(|l| {
                let l = symmetrize(l);
                &l - Mat::identity(r, r) * (l.trace() / r as f64)
            })
            .collect();
        let upper = Mat::from_fn(m + 1, m + 1, |x, y| a[x].component_mul(&a[y]).sum());
        Ok(vec![principal_minor_sum(&upper, rho)])
    })?;
    Ok(v[0])
}

/// Screen construction from the relative invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct MuScreen {
    pub rho: usize,
    pub relative_invariant: f64,
    /// `μ_p` from `da/(2ρa) + ω_0^0 = μ_p ω_0^p`.
    pub mu: Vec<f64>,
    /// `C_p = A_p + μ_p A_0`.
    pub points: Vec<Vec<f64>>,
    /// `C_α = A_α + λ_α A_0`, storage order.
    pub plane_points: Vec<Vec<f64>>,
}

/// Smallest `|a|` accepted by [`mu_screen`].
pub const TAU_RELATIVE: f64 = 1e-10;

pub fn mu_screen(chart: &Chart<'_>) -> Result<MuScreen> {
    let (r, m) = blocks(chart)?;
    let n = chart.n();
    let second = reduced_second_order(chart)?;
    let inv = invariant_tensors(&second)?;
    let a = inv.relative_invariant;
    if inv.rho == 0 || !(a.abs() > TAU_RELATIVE) {
        return Err(Error::ScreenUndefined { invariant: if inv.rho == 0 { 0.0 } else { a } });
    }
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let p_inv = invert_basis(&basis_block(&w, m, r))?;
    let rho = inv.rho;
    let grad = chart.gradient(&k, |p| relative_invariant_at(chart, p, rho))?;
    let lhs = Mat::from_fn(1, r, |_, c| grad[c] / (2.0 * rho as f64 * a) + w.get(c, 0, 0));
    let mu: Vec<f64> = (&lhs * &p_inv).iter().copied().collect();
    let frame = chart.frame(&k)?;
    let a0 = frame.vector(0);
    let shift = |row: usize, t: f64| -> Vec<f64> { frame.vector(row).iter().zip(&a0).map(|(x, y)| x + t * y).collect() };
    let points = (0..r).map(|p| shift(m + 1 + p, mu[p])).collect();
    let polar = HarmonicPolar::new(&second);
    let plane_points = (0..=m).map(|alpha| shift(alpha_row(alpha, m, n), polar.means[alpha])).collect();
    Ok(MuScreen { rho, relative_invariant: a, mu, points, plane_points })
}

/// Frames moved into the invariant normalization: `A_α → A_α + λ_α A_0`,
/// `A_p → A_p + μ_p A_0`.
pub struct ReducedScreenFrames<S> {
    pub inner: S,
    pub inner_fd: FdScheme,
}

impl<S: FrameSource> ReducedScreenFrames<S> {
    pub fn new(inner: S, inner_fd: FdScheme) -> Self {
        Self { inner, inner_fd }
    }
}

impl<S: FrameSource> FrameSource for ReducedScreenFrames<S> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn param_dim(&self) -> usize {
        self.inner.param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        let chart = Chart::new(&self.inner, u, self.inner_fd);
        let (r, m) = blocks(&chart)?;
        let n = self.n();
        let screen = mu_screen(&chart)?;
        let polar = harmonic_polar(&chart)?;
        let mut t = vec![0.0; n];
        for alpha in 0..=m {
            t[alpha_row(alpha, m, n) - 1] = polar.means[alpha];
        }
        for p in 0..r {
            t[m + p] = screen.mu[p];
        }
        let mut f = chart.frame(&chart.origin())?.transformed(&origin_rotation(n, &t));
        f.u = u.to_vec();
        Ok(f)
    }
}

/// Torsion-free connection `θ^p_q = ω^p_q − δ^p_q ω_0^0` on the fibration of
/// plane generators, read at the center of a chart over
/// [`ReducedScreenFrames`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedConnection {
    /// `c_pq` from `ω_p^0 = c_pq ω_0^q`.
    pub c: Mat,
    pub c_asymmetry: f64,
    /// `μ_p` recomputed in the adapted frame (ideally zero).
    pub mu_residual: f64,
    /// `max |dω_0^0|`.
    pub closed_dilation: f64,
    /// `max |dω_0^p − ω_0^q ∧ θ_q^p|`.
    pub torsion_residual: f64,
    /// `R^p_qst` by FD, flattened `(p, q, s, t)`.
    pub curvature_fd: Vec<f64>,
    /// `R^p_qst` from the closed form.
    pub curvature: Vec<f64>,
    pub curvature_deviation: f64,
    /// `R_pq = R^s_pqs` of the FD tensor.
    pub ricci: Mat,
    pub ricci_asymmetry: f64,
    /// The closed-form Ricci tensor.
    pub ricci_closed: Mat,
}

/// Closed-form curvature `−a^α_q[s a^α_t]p + c_q[s δ^p_t] + δ_q[s c_t]p`.
pub fn closed_curvature(a: &[Mat], c: &Mat) -> Vec<f64> {
    let r = c.nrows();
    let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    let mut out = vec![0.0; r * r * r * r];
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    let aa: f64 = a.iter().map(|x| x[(q, s)] * x[(t, p)] - x[(q, t)] * x[(s, p)]).sum();
                    let v = -0.5 * aa
                        + 0.5 * (c[(q, s)] * d(p, t) - c[(q, t)] * d(p, s))
                        + 0.5 * (d(q, s) * c[(t, p)] - d(q, t) * c[(s, p)]);
                    out[((p * r + q) * r + s) * r + t] = v;
                }
            }
        }
    }
    out
}

fn ricci_of(curv: &[f64], r: usize) -> Mat {
    Mat::from_fn(r, r, |p, q| (0..r).map(|s| curv[((s * r + p) * r + q) * r + s]).sum())
}

pub fn reduced_connection(chart: &Chart<'_>) -> Result<ReducedConnection> {
    let (r, m) = blocks(chart)?;
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let pmat = basis_block(&w, m, r);
    let p_inv = invert_basis(&pmat)?;
    let q = Mat::from_fn(r, r, |p, c| w.get(c, m + 1 + p, 0));
    let c = &q * &p_inv;
    let c_asymmetry = linalg::mat_max_abs(&(&c - c.transpose()));
    let c_sym = symmetrize(&c);
    let mu_residual = match mu_screen(chart) {
        Ok(s) => linalg::max_abs(s.mu.iter().copied()),
        Err(e) => return Err(e),
    };
    let second = reduced_second_order(chart)?;
    let a: Vec<Mat> = invariant_tensors(&second)?.a;

    let row = |p: usize| m + 1 + p;
    let mut closed_dilation: f64 = 0.0;
    let mut torsion: f64 = 0.0;
    // Curvature 2-forms on coordinate planes, [p][q] → r×r antisymmetric.
    let mut forms = vec![Mat::zeros(r, r); r * r];
    for x in 0..r {
        for y in x + 1..r {
            let dw = exterior_derivative(chart, &k, x, y)?;
            let (wx, wy) = (&w.dirs[x], &w.dirs[y]);
            let theta = |wm: &Mat, qq: usize, pp: usize| wm[(row(qq), row(pp))] - if pp == qq { wm[(0, 0)] } else { 0.0 };
            closed_dilation = closed_dilation.max(dw[(0, 0)].abs());
            for p in 0..r {
                let wedge: f64 = (0..r).map(|qq| wx[(0, row(qq))] * theta(wy, qq, p) - wy[(0, row(qq))] * theta(wx, qq, p)).sum();
                torsion = torsion.max((dw[(0, row(p))] - wedge).abs());
                for qq in 0..r {
                    let dtheta = dw[(row(qq), row(p))] - if p == qq { dw[(0, 0)] } else { 0.0 };
                    let tt: f64 = (0..r).map(|s| theta(wx, qq, s) * theta(wy, s, p) - theta(wy, qq, s) * theta(wx, s, p)).sum();
                    let v = dtheta - tt;
                    forms[p * r + qq][(x, y)] = v;
                    forms[p * r + qq][(y, x)] = -v;
                }
            }
        }
    }
    // Θ[c][s] = ω_0^s(e_c) = Pᵀ; K = Θ⁻¹ D Θ⁻ᵀ, R_st = K_st / 2.
    let theta_inv = p_inv.transpose();
    let mut curvature_fd = vec![0.0; r * r * r * r];
    for p in 0..r {
        for qq in 0..r {
            let kmat = &theta_inv * &forms[p * r + qq] * theta_inv.transpose() * 0.5;
            for s in 0..r {
                for t in 0..r {
                    curvature_fd[((p * r + qq) * r + s) * r + t] = kmat[(s, t)];
                }
            }
        }
    }
    let curvature = closed_curvature(&a, &c_sym);
    let curvature_deviation = linalg::max_abs(curvature.iter().zip(&curvature_fd).map(|(x, y)| x - y));
    let ricci = ricci_of(&curvature_fd, r);
    let ricci_asymmetry = linalg::mat_max_abs(&(&ricci - ricci.transpose()));
    let ricci_closed = ricci_of(&curvature, r);
    Ok(ReducedConnection {
        c,
        c_asymmetry,
        mu_residual,
        closed_dilation,
        torsion_residual: torsion,
        curvature_fd,
        curvature,
        curvature_deviation,
        ricci,
        ricci_asymmetry,
        ricci_closed,
    })
}

/// Structural verdict for the degenerate cases.
#[derive(Debug, Clone, PartialEq)]
pub enum DegenerateVerdict {
    /// `ρ = 0`, `r ≥ 2`: a cone with an `m`-dimensional vertex.
    Cone {
        /// Spanning points `C_α` of the vertex at the first chart.
        vertex: Vec<Vec<f64>>,
        /// Largest distance between vertex subspaces across the region.
        variation: f64,
        /// Linear rank of the sampled `A_0` and tangent vectors `A_p`; `r + 2`
        /// for an `r`-sphere.
        support_rank: usize,
        spherical: bool,
    },
    /// `r = 1`: envelope of isotropic hyperplanes tangent along a curve.
    Envelope,
    /// `r = 0`: the isotropic hyperplane tangent to the quadric at `A_0`.
    Hyperplane,
    Nondegenerate { rho: usize },
}

impl DegenerateVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Cone { .. } => "cone",
            Self::Envelope => "envelope",
            Self::Hyperplane => "hyperplane",
            Self::Nondegenerate { .. } => "nondegenerate",
        }
    }
}

pub fn degenerate_detect(charts: &[Chart<'_>]) -> Result<DegenerateVerdict> {
    let first = charts.first().ok_or(Error::Precondition("empty region"))?;
    let (r, _) = blocks(first)?;
    if r == 0 {
        return Ok(DegenerateVerdict::Hyperplane);
    }
    if r == 1 {
        return Ok(DegenerateVerdict::Envelope);
    }
    let mut vertices: Vec<Vec<Vec<f64>>> = Vec::with_capacity(charts.len());
    let mut support = Vec::with_capacity(charts.len());
    for chart in charts {
        let second = reduced_second_order(chart)?;
        let inv = invariant_tensors(&second)?;
        if inv.rho > 0 {
            return Ok(DegenerateVerdict::Nondegenerate { rho: inv.rho });
        }
        let (_, m) = blocks(chart)?;
        let n = chart.n();
        let polar = HarmonicPolar::new(&second);
        let frame = chart.frame(&chart.origin())?;
        let a0 = frame.vector(0);
        vertices.push(
            (0..=m)
                .map(|alpha| {
                    frame.vector(alpha_row(alpha, m, n)).iter().zip(&a0).map(|(x, y)| x + polar.means[alpha] * y).collect()
                })
                .collect(),
        );
        support.extend((0..r).map(|p| frame.vector(m + 1 + p)));
        support.push(a0);
    }
    let variation = vertices.iter().map(|v| linalg::subspace_distance(&vertices[0], v)).fold(0.0, f64::max);
    let support_rank = linalg::linear_rank(&support, 1e-8);
    Ok(DegenerateVerdict::Cone {
        vertex: vertices.swap_remove(0),
        variation,
        support_rank,
        spherical: support_rank == r + 2,
    })
}
