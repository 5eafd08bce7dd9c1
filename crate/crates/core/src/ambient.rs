//! The ambient projective space with its invariant quadric: the bilinear
//! form, causal classification of points and lines, and numerical checks of
//! the constant-curvature structure of the exterior domain `S^{n+1}_1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::frames::{exterior_derivative, Chart, MovingFrame};
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Relative band around zero in which `(x,x)` counts as on the quadric.
pub const TAU_QUADRIC: f64 = 1e-10;
/// Discriminant band for lightlike lines.
pub const TAU_DISC: f64 = 1e-9;

/// Bilinear form `(x,y) = Σ_{i=1}^{n} x^i y^i − x^0 y^{n+1} − x^{n+1} y^0`
/// on `R^{n+2}`, signature `(n+1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientForm {
    n: usize,
    g: Mat,
}

impl AmbientForm {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { n });
        }
        let mut g = Mat::zeros(n + 2, n + 2);
        for i in 1..=n {
            g[(i, i)] = 1.0;
        }
        g[(0, n + 1)] = -1.0;
        g[(n + 1, 0)] = -1.0;
        Ok(Self { n, g })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 2
    }

    pub fn matrix(&self) -> &Mat {
        &self.g
    }

    /// Unchecked scalar product.
    #[inline]
    pub fn dot(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 1..=n {
            s += x[i] * y[i];
        }
        s - x[0] * y[n + 1] - x[n + 1] * y[0]
    }

    /// Scalar product with length checks.
    pub fn product(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        for v in [x, y] {
            if v.len() != self.dim() {
                return Err(Error::Shape { expected: self.dim(), found: v.len() });
            }
        }
        Ok(self.dot(x, y))
    }

    /// `G x`, the covector of `x`.
    pub fn lower(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = x.to_vec();
        out[0] = -x[n + 1];
        out[n + 1] = -x[0];
        out
    }

    /// The gauge vector `E_∞ = e_{n+1}`, the lift of the point at infinity.
    pub fn infinity(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim()];
        e[self.n + 1] = 1.0;
        e
    }

    /// Numbers of positive and negative eigenvalues of `G`.
    pub fn signature(&self) -> (usize, usize) {
        let (vals, _) = linalg::sym_eigen(&self.g);
        (vals.iter().filter(|&&v| v > 0.0).count(), vals.iter().filter(|&&v| v < 0.0).count())
    }

    pub fn classify_point(&self, x: &[f64]) -> Result<CausalClass> {
        if x.len() != self.dim() {
            return Err(Error::Shape { expected: self.dim(), found: x.len() });
        }
        let scale = linalg::dot(x, x);
        if scale == 0.0 {
            return Err(Error::InvalidPoint);
        }
        let q = self.dot(x, x);
        Ok(if q.abs() < TAU_QUADRIC * scale {
            CausalClass::OnQuadric
        } else if q > 0.0 {
            CausalClass::DeSitterExterior
        } else {
            CausalClass::HyperbolicInterior
        })
    }

    /// Classifies the line through `x` and `y` by the real roots of
    /// `(x+ty, x+ty) = 0`, computed on a Euclidean-orthonormal basis of the
    /// line so the discriminant is scale free.
    pub fn classify_line(&self, x: &[f64], y: &[f64]) -> Result<CausalClass> {
        for v in [x, y] {
            if v.len() != self.dim() {
                return Err(Error::Shape { expected: self.dim(), found: v.len() });
            }
        }
        let nx = linalg::norm(x);
        if nx == 0.0 {
            return Err(Error::DegenerateLine);
        }
        let e1: Vec<f64> = x.iter().map(|v| v / nx).collect();
        let c = linalg::dot(y, &e1);
        let mut e2: Vec<f64> = y.iter().zip(&e1).map(|(v, w)| v - c * w).collect();
        let ny = linalg::norm(&e2);
        if ny <= 1e-12 * linalg::norm(y).max(1e-300) {
            return Err(Error::DegenerateLine);
        }
        e2.iter_mut().for_each(|v| *v /= ny);
        let (a, b, d) = (self.dot(&e1, &e1), self.dot(&e1, &e2), self.dot(&e2, &e2));
        let disc = b * b - a * d;
        Ok(if disc.abs() < TAU_DISC {
            CausalClass::Lightlike
        } else if disc > 0.0 {
            CausalClass::Timelike
        } else {
            CausalClass::Spacelike
        })
    }
}

/// Point of `P^{n+1}` in homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoint {
    coords: Vec<f64>,
}

impl HomogeneousPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().all(|&c| c == 0.0) || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint);
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Unit Euclidean representative with the first significant coordinate positive.
    pub fn normalized(&self) -> Vec<f64> {
        linalg::projective_normalize(&self.coords).expect("nonzero by construction")
    }

    /// Projective distance between normalized representatives.
    pub fn distance(&self, other: &Self) -> f64 {
        linalg::projective_distance(&self.coords, &other.coords)
    }

    pub fn same_point(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// Causal type of a point (relative to the quadric) or of a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    OnQuadric,
    DeSitterExterior,
    HyperbolicInterior,
    Spacelike,
    Timelike,
    Lightlike,
}

impl CausalClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::OnQuadric => "on_quadric",
            Self::DeSitterExterior => "de_sitter_exterior",
            Self::HyperbolicInterior => "hyperbolic_interior",
            Self::Spacelike => "spacelike",
            Self::Timelike => "timelike",
            Self::Lightlike => "lightlike",
        }
    }
}

/// Positions of the frame indices `0, 1 … n−1, n+1` used by the coframe
/// `ω_n^u` of `T(S^{n+1}_1)`.
pub fn coframe_indices(n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.push(n + 1);
    idx
}

/// Curvature tensor `R^r_{suv}` of `S^{n+1}_1` in the frame coframe, indices
/// over `{0, 1 … n−1, n+1}` (stored by position).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    pub n: usize,
    components: Vec<f64>,
    pub ricci: Mat,
}

impl CurvatureTensor {
    fn size(&self) -> usize {
        self.n + 1
    }

    /// Component `R^r_{suv}` by coframe positions.
    pub fn get(&self, r: usize, s: usize, u: usize, v: usize) -> f64 {
        let m = self.size();
        self.components[((r * m + s) * m + u) * m + v]
    }

    /// Largest `|R^r_{suv} + R^r_{svu}|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let m = self.size();
        let mut worst: f64 = 0.0;
        for r in 0..m {
            for s in 0..m {
                for u in 0..m {
                    for v in 0..m {
                        worst = worst.max((self.get(r, s, u, v) + self.get(r, s, v, u)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Metric of `T(S^{n+1}_1)` on the coframe positions (the form with the `n`-th
/// row and column deleted).
pub fn coframe_metric(n: usize) -> Mat {
    let m = n + 1;
    let mut g = Mat::zeros(m, m);
    for i in 1..n {
        g[(i, i)] = 1.0;
    }
    g[(0, n)] = -1.0;
    g[(n, 0)] = -1.0;
    g
}

/// The constant-curvature target `δ^r_u g_{sv} − δ^r_v g_{su}`.
pub fn constant_curvature_component(g: &Mat, r: usize, s: usize, u: usize, v: usize) -> f64 {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    d(r, u) * g[(s, v)] - d(r, v) * g[(s, u)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub tensor: CurvatureTensor,
    /// `max |R^r_{suv} − (δ^r_u g_{sv} − δ^r_v g_{su})|`.
    pub max_deviation: f64,
    /// `max |R_{sv} − n g_{sv}|`.
    pub ricci_deviation: f64,
}

/// Assembles the curvature tensor from finite-difference curvature forms
/// `Ω_s^r = dω_s^r − ω_s^t ∧ ω_t^r = ½ R^r_{suv} ω_n^u ∧ ω_n^v`.
///
/// The chart must have `n+1` parameters whose images under the coframe
/// `ω_n^u` are independent (see [`crate::frames::Extended`]).
pub fn ambient_curvature_check(chart: &Chart<'_>, k: &[i32]) -> Result<CurvatureReport> {
    let n = chart.n();
    let m = n + 1;
    if chart.dim() != m {
        return Err(Error::Precondition("curvature check needs n+1 independent parameter directions"));
    }
    let idx = coframe_indices(n);
    let w = chart.omega(k)?;
    // Θ[a][u] = ω_n^u(e_a).
    let theta = Mat::from_fn(m, m, |a, u| w.get(a, n, idx[u]));
    let theta_inv = theta.clone().try_inverse().ok_or(Error::Conditioning { condition: f64::INFINITY })?;
    let cond = linalg::condition_number(&theta);
    if cond > 1e8 {
        return Err(Error::Conditioning { condition: cond });
    }
    // Ω_s^r(e_a, e_b) for every (s, r) as matrices over (a, b).
    let mut omega_ab: Vec<Vec<Mat>> = vec![vec![Mat::zeros(m, m); m]; m];
    for a in 0..m {
        for b in (a + 1)..m {
            let dw = exterior_derivative(chart, k, a, b)?;
            let (wa, wb) = (&w.dirs[a], &w.dirs[b]);
            for s in 0..m {
                for r in 0..m {
                    let mut val = dw[(idx[s], idx[r])];
                    for &t in &idx {
                        val -= wa[(idx[s], t)] * wb[(t, idx[r])] - wb[(idx[s], t)] * wa[(t, idx[r])];
                    }
                    omega_ab[s][r][(a, b)] = val;
                    omega_ab[s][r][(b, a)] = -val;
                }
            }
        }
    }
    // Ω(e_a,e_b) = R_{uv} Θ[a][u] Θ[b][v]  ⇒  R = Θ⁻¹ Ω Θ⁻ᵀ.
    let mut components = vec![0.0; m * m * m * m];
    for r in 0..m {
        for s in 0..m {
            let rr = &theta_inv * &omega_ab[s][r] * theta_inv.transpose();
            for u in 0..m {
                for v in 0..m {
                    components[((r * m + s) * m + u) * m + v] = rr[(u, v)];
                }
            }
        }
    }
    let g = coframe_metric(n);
    let mut ricci = Mat::zeros(m, m);
    for s in 0..m {
        for v in 0..m {
            ricci[(s, v)] = (0..m).map(|r| components[((r * m + s) * m + r) * m + v]).sum();
        }
    }
    let tensor = CurvatureTensor { n, components, ricci };
    let mut max_deviation: f64 = 0.0;
    for r in 0..m {
        for s in 0..m {
            for u in 0..m {
                for v in 0..m {
                    let target = constant_curvature_component(&g, r, s, u, v);
                    max_deviation = max_deviation.max((tensor.get(r, s, u, v) - target).abs());
                }
            }
        }
    }
    let ricci_deviation = linalg::mat_max_abs(&(&tensor.ricci - &g * n as f64));
    Ok(CurvatureReport { tensor, max_deviation, ricci_deviation })
}

/// Frame along a curve of exterior points with `A_n = x/√(x,x)`.
///
/// `choice` lists the candidate basis vectors used for the spacelike
/// completion; fixing it per curve keeps the frames continuous.
fn curve_frame(form: &AmbientForm, x: &[f64], choice: &[Vec<f64>]) -> Result<MovingFrame> {
    let n = form.n();
    let q = form.dot(x, x);
    if !(q > 0.0) {
        return Err(Error::InvalidGeodesic("curve leaves the exterior domain"));
    }
    let a_n: Vec<f64> = x.iter().map(|v| v / linalg::sqrt(q)).collect();
    let project = |v: &[f64], basis: &[Vec<f64>]| {
        let mut w = v.to_vec();
        for b in basis {
            let c = form.dot(&w, b) / form.dot(b, b);
            w.iter_mut().zip(b).for_each(|(p, e)| *p -= c * e);
        }
        w
    };
    let mut timelike = vec![0.0; n + 2];
    timelike[0] = core::f64::consts::FRAC_1_SQRT_2;
    timelike[n + 1] = core::f64::consts::FRAC_1_SQRT_2;
    let t = project(&timelike, &[a_n.clone()]);
    let tt = form.dot(&t, &t);
    let t: Vec<f64> = t.iter().map(|v| v / linalg::sqrt(-tt)).collect();
    let mut basis = vec![a_n.clone(), t.clone()];
    let mut spacelike: Vec<Vec<f64>> = Vec::new();
    for cand in choice {
        let w = project(cand, &basis);
        let ww = form.dot(&w, &w);
        if !(ww > 1e-6) {
            return Err(Error::InvalidGeodesic("curve frame completion degenerates"));
        }
        let w: Vec<f64> = w.iter().map(|v| v / linalg::sqrt(ww)).collect();
        basis.push(w.clone());
        spacelike.push(w);
    }
    let s_last = spacelike.pop().expect("n spacelike vectors");
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let a0: Vec<f64> = t.iter().zip(&s_last).map(|(a, b)| h * (a + b)).collect();
    let a_inf: Vec<f64> = t.iter().zip(&s_last).map(|(a, b)| h * (a - b)).collect();
    let mut rows = vec![a0];
    rows.extend(spacelike);
    rows.push(a_n);
    rows.push(a_inf);
    MovingFrame::from_vectors(n, &rows, Vec::new())
}

fn curve_candidates(form: &AmbientForm, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = form.n();
    let dim = n + 2;
    let q = form.dot(x, x);
    if !(q > 0.0) {
        return Err(Error::InvalidGeodesic("curve leaves the exterior domain"));
    }
    let mut cands: Vec<Vec<f64>> = (1..=n)
        .map(|k| {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            e
        })
        .collect();
    let mut minus = vec![0.0; dim];
    minus[0] = core::f64::consts::FRAC_1_SQRT_2;
    minus[n + 1] = -core::f64::consts::FRAC_1_SQRT_2;
    cands.push(minus);
    // Greedily keep the n candidates that stay most spacelike after projection.
    let a_n: Vec<f64> = x.iter().map(|v| v / linalg::sqrt(q)).collect();
    let mut plus = vec![0.0; dim];
    plus[0] = core::f64::consts::FRAC_1_SQRT_2;
    plus[n + 1] = core::f64::consts::FRAC_1_SQRT_2;
    let mut basis = vec![a_n];
    let t = {
        let mut w = plus.clone();
        let c = form.dot(&w, &basis[0]);
        w.iter_mut().zip(&basis[0]).for_each(|(p, e)| *p -= c * e);
        w
    };
    basis.push(t);
    let mut chosen = Vec::new();
    while chosen.len() < n {
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for (k, c) in cands.iter().enumerate() {
            let mut w = c.clone();
            for b in &basis {
                let cc = form.dot(&w, b) / form.dot(b, b);
                w.iter_mut().zip(b).for_each(|(p, e)| *p -= cc * e);
            }
            let ww = form.dot(&w, &w);
            if best.as_ref().map_or(true, |bb| ww > bb.1) {
                best = Some((k, ww, w));
            }
        }
        let (k, ww, w) = best.ok_or(Error::InvalidGeodesic("no frame completion"))?;
        if !(ww > 1e-6) {
            return Err(Error::InvalidGeodesic("no frame completion"));
        }
        chosen.push(cands.remove(k));
        basis.push(w);
    }
    Ok(chosen)
}

/// Result of the geodesic test along a sampled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicReport {
    /// Max over interior nodes of `‖dξ/dt + ξ ω − α ξ‖` after the
    /// least-squares fit of `α`.
    pub residual: f64,
    /// Fitted `α` per evaluated node (a nuisance parameter).
    pub alpha: Vec<f64>,
}

/// Evaluates `dξ^u/dt + ξ^v ω_v^u = α ξ^u` along a curve sampled with
/// uniform parameter step, with frames `A_n = x(t)` built along the samples
/// and connection values by central differences.
pub fn geodesic_residual(form: &AmbientForm, samples: &[Vec<f64>], step: f64) -> Result<GeodesicReport> {
    let n = form.n();
    if samples.len() < 5 {
        return Err(Error::InvalidGeodesic("need at least 5 samples"));
    }
    if let Some(bad) = samples.iter().find(|s| s.len() != n + 2) {
        return Err(Error::Shape { expected: n + 2, found: bad.len() });
    }
    let choice = curve_candidates(form, &samples[samples.len() / 2])?;
    let mut frames = samples.iter().map(|x| curve_frame(form, x, &choice)).collect::<Result<Vec<_>>>()?;
    for k in 1..frames.len() {
        let prev = frames[k - 1].clone();
        frames[k].align_to(&prev);
    }
    let idx = coframe_indices(n);
    // ω(∂_t) at nodes 1 … N−2.
    let mut omegas: Vec<Option<Mat>> = vec![None; frames.len()];
    for k in 1..frames.len() - 1 {
        let df = (frames[k + 1].matrix() - frames[k - 1].matrix()) / (2.0 * step);
        let f = frames[k].matrix();
        let w = f
            .transpose()
            .lu()
            .solve(&df.transpose())
            .ok_or(Error::FrameDegenerate { deviation: 0.0 })?
            .transpose();
        omegas[k] = Some(w);
    }
    let xi = |k: usize| -> Vec<f64> {
        let w = omegas[k].as_ref().expect("interior node");
        idx.iter().map(|&u| w[(n, u)]).collect()
    };
    let mut residual: f64 = 0.0;
    let mut alpha = Vec::new();
    for k in 2..frames.len() - 2 {
        let w = omegas[k].as_ref().expect("interior node");
        let x0 = xi(k);
        let speed = linalg::norm(&x0);
        if speed < 1e-12 {
            return Err(Error::InvalidGeodesic("stationary curve"));
        }
        let (xp, xm) = (xi(k + 1), xi(k - 1));
        let b: Vec<f64> = (0..idx.len())
            .map(|u| {
                let dxi = (xp[u] - xm[u]) / (2.0 * step);
                let transport: f64 = (0..idx.len()).map(|v| x0[v] * w[(idx[v], idx[u])]).sum();
                dxi + transport
            })
            .collect();
        let a = linalg::dot(&x0, &b) / linalg::dot(&x0, &x0);
        let r: Vec<f64> = b.iter().zip(&x0).map(|(bb, xx)| bb - a * xx).collect();
        residual = residual.max(linalg::norm(&r));
        alpha.push(a);
    }
    Ok(GeodesicReport { residual, alpha })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; n + 2];
        v[k] = 1.0;
        v
    }

    #[test]
    fn form_pattern_n3() {
        let g = AmbientForm::new(3).unwrap();
        let m = g.matrix();
        assert_eq!(m[(0, 4)], -1.0);
        assert_eq!(m[(4, 0)], -1.0);
        assert_eq!(m[(3, 3)], 1.0);
        assert_eq!(m[(1, 1)], 1.0);
        assert_eq!(m[(2, 2)], 1.0);
        assert_eq!(m.iter().filter(|&&x| x != 0.0).count(), 5);
        assert_eq!(m, &m.transpose());
        assert_eq!(g.signature(), (4, 1));
        assert_eq!(AmbientForm::new(1), Err(Error::Dimension { n: 1 }));
    }

    #[test]
    fn basis_products() {
        let g = AmbientForm::new(3).unwrap();
        assert_eq!(g.product(&e(3, 0), &e(3, 4)), Ok(-1.0));
        assert_eq!(g.product(&e(3, 3), &e(3, 3)), Ok(1.0));
        assert_eq!(g.product(&e(3, 1), &e(3, 1)), Ok(1.0));
        assert!(matches!(g.product(&[1.0], &e(3, 1)), Err(Error::Shape { .. })));
    }

    #[test]
    fn point_classes() {
        let g = AmbientForm::new(3).unwrap();
        assert_eq!(g.classify_point(&e(3, 3)), Ok(CausalClass::DeSitterExterior));
        assert_eq!(g.classify_point(&e(3, 0)), Ok(CausalClass::OnQuadric));
        let mut x = e(3, 0);
        x[4] = 1.0;
        assert_eq!(g.classify_point(&x), Ok(CausalClass::HyperbolicInterior));
        assert_eq!(g.classify_point(&[0.0; 5]), Err(Error::InvalidPoint));
    }

    #[test]
    fn line_classes() {
        let g = AmbientForm::new(3).unwrap();
        assert_eq!(g.classify_line(&e(3, 3), &e(3, 1)), Ok(CausalClass::Spacelike));
        assert_eq!(g.classify_line(&e(3, 0), &e(3, 4)), Ok(CausalClass::Timelike));
        assert_eq!(g.classify_line(&e(3, 3), &e(3, 0)), Ok(CausalClass::Lightlike));
        assert_eq!(g.classify_line(&e(3, 3), &e(3, 3)), Err(Error::DegenerateLine));
    }

    #[test]
    fn coframe_metric_contracts_to_ricci_target() {
        // R^r_{srv} of the constant-curvature tensor equals n g_{sv}.
        for n in 2..6 {
            let g = coframe_metric(n);
            let m = n + 1;
            for s in 0..m {
                for v in 0..m {
                    let ric: f64 = (0..m).map(|r| constant_curvature_component(&g, r, s, r, v)).sum();
                    assert_eq!(ric, n as f64 * g[(s, v)]);
                }
            }
        }
    }

    fn line_samples(h: f64, count: usize, reparam: bool) -> Vec<Vec<f64>> {
        (0..count)
            .map(|k| {
                let t = -0.3 + k as f64 * h;
                let t = if reparam { t + 0.4 * t * t } else { t };
                vec![0.2, 0.5 + t, -0.3 * t, 1.0, 0.1 + 0.2 * t]
            })
            .collect()
    }

    #[test]
    fn straight_lines_are_geodesics() {
        let g = AmbientForm::new(3).unwrap();
        for &h in &[1e-2, 5e-3] {
            let r = geodesic_residual(&g, &line_samples(h, 40, false), h).unwrap();
            assert!(r.residual < 10.0 * h * h, "h={h}: {}", r.residual);
            let r = geodesic_residual(&g, &line_samples(h, 40, true), h).unwrap();
            assert!(r.residual < 10.0 * h * h, "reparametrized h={h}: {}", r.residual);
        }
    }

    #[test]
    fn conic_is_not_a_geodesic() {
        let g = AmbientForm::new(3).unwrap();
        for &h in &[1e-2, 5e-3, 2.5e-3] {
            let samples: Vec<Vec<f64>> = (0..30)
                .map(|k| {
                    let t = k as f64 * h;
                    vec![0.0, libm::cos(t), libm::sin(t), 1.0, 0.0]
                })
                .collect();
            let r = geodesic_residual(&g, &samples, h).unwrap();
            assert!(r.residual > 100.0 * h * h, "h={h}: {}", r.residual);
        }
    }

    #[test]
    fn geodesic_input_checks() {
        let g = AmbientForm::new(3).unwrap();
        assert!(matches!(geodesic_residual(&g, &line_samples(0.1, 4, false), 0.1), Err(Error::InvalidGeodesic(_))));
        let still = vec![vec![0.0, 0.0, 0.0, 1.0, 0.0]; 8];
        assert!(matches!(geodesic_residual(&g, &still, 0.1), Err(Error::InvalidGeodesic(_))));
    }
}
