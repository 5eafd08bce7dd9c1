//! Screen distribution and induced affine connection on `U^n`.
//!
//! Work happens on the screen frame field over `(u, s)`: the point of `U^n`
//! is `A_n + s A_0`, and the tangent vectors `A_i` are moved into the
//! normalizing subspace `ζ` by a null rotation about `A_0`. In these frames
//! the coframe of `U^n` is `θ^i = ω_n^i`, `θ^0 = ω_n^0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::frames::{exterior_derivative, origin_rotation, Chart, ConnectionMatrix, FdScheme, FrameSource, MovingFrame};
use crate::lightlike::screen_shift;
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Integrability tolerance on unit-scaled domains.
pub const TAU_INTEGRABLE: f64 = 1e-6;

/// Frames adapted to the invariant normalization, parametrized by `(u, s)`.
pub struct ScreenFrames<S> {
    pub inner: S,
    /// Scheme of the inner charts computing the normalization at each `u`.
    pub inner_fd: FdScheme,
}

impl<S: FrameSource> ScreenFrames<S> {
    pub fn new(inner: S, inner_fd: FdScheme) -> Self {
        Self { inner, inner_fd }
    }
}

impl<S: FrameSource> FrameSource for ScreenFrames<S> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn param_dim(&self) -> usize {
        self.inner.param_dim() + 1
    }
    fn frame(&self, us: &[f64]) -> Result<MovingFrame> {
        let d = self.inner.param_dim();
        let (u, s) = (&us[..d], us[d]);
        let chart = Chart::new(&self.inner, u, self.inner_fd);
        let mut t = screen_shift(&chart)?;
        t.push(s);
        let mut f = chart.frame(&chart.origin())?.transformed(&origin_rotation(self.n(), &t));
        f.u = us.to_vec();
        Ok(f)
    }
}

/// `Θ[a][c]`: coframe `(θ^1 … θ^{n−1}, θ^0)` on coordinate directions.
fn coframe(w: &ConnectionMatrix) -> Mat {
    let n = w.n;
    Mat::from_fn(w.dim(), n, |a, c| if c + 1 < n { w.get(a, n, c + 1) } else { w.get(a, n, 0) })
}

fn require_screen_chart(chart: &Chart<'_>) -> Result<()> {
    if chart.dim() != chart.n() {
        return Err(Error::Shape { expected: chart.n(), found: chart.dim() });
    }
    Ok(())
}

/// Fits `ω_i^0 = μ_ij ω_n^j + μ_i ω_n^0` (and the same for `ω_i^{n+1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenData {
    pub mu: Mat,
    pub mu_vec: Vec<f64>,
    /// `ν_ij` of the screen frame, `ω_i^{n+1} = ν_ij ω_n^j`.
    pub nu: Mat,
    /// Least-squares residual of the `μ` fit.
    pub residual: f64,
    /// `max |μ_ij − μ_ji|`.
    pub antisymmetry: f64,
    /// `F_ij` with `dω_n^0 ∧ ω_n^0 = Σ_{i<j} F_ij θ^i ∧ θ^j ∧ θ^0`.
    pub frobenius: Mat,
    pub frobenius_residual: f64,
    pub integrable: bool,
}

/// Screen forms at the center of a chart over [`ScreenFrames`].
pub fn screen_forms(chart: &Chart<'_>) -> Result<ScreenData> {
    require_screen_chart(chart)?;
    let n = chart.n();
    let m = n - 1;
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let theta = coframe(&w);
    let cond = linalg::condition_number(&theta);
    if !(cond < 1e8) {
        return Err(Error::Conditioning { condition: cond });
    }
    let rhs0 = Mat::from_fn(n, m, |a, i| w.get(a, i + 1, 0));
    let (x, residual) = linalg::lstsq(&theta, &rhs0, 1e8)?;
    let mu = Mat::from_fn(m, m, |i, j| x[(j, i)]);
    let mu_vec = (0..m).map(|i| x[(m, i)]).collect();
    let rhs_inf = Mat::from_fn(n, m, |a, i| w.get(a, i + 1, n + 1));
    let (y, _) = linalg::lstsq(&theta, &rhs_inf, 1e8)?;
    let nu = Mat::from_fn(m, m, |i, j| y[(j, i)]);
    let antisymmetry = linalg::mat_max_abs(&(&mu - mu.transpose()));

    // dω_n^0 on coordinate planes, pulled back to the coframe.
    let mut d = Mat::zeros(n, n);
    for a in 0..n {
        for b in a + 1..n {
            let v = exterior_derivative(chart, &k, a, b)?[(n, 0)];
            d[(a, b)] = v;
            d[(b, a)] = -v;
        }
    }
    let t_inv = theta.clone().try_inverse().ok_or(Error::Conditioning { condition: cond })?;
    let kmat = &t_inv * d * t_inv.transpose();
    let frobenius = Mat::from_fn(m, m, |i, j| kmat[(i, j)]);
    let frobenius_residual = linalg::mat_max_abs(&frobenius);
    let integrable = antisymmetry < TAU_INTEGRABLE && frobenius_residual < TAU_INTEGRABLE;
    Ok(ScreenData { mu, mu_vec, nu, residual, antisymmetry, frobenius, frobenius_residual, integrable })
}

/// Two-way integrability verdict over a region.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityReport {
    pub antisymmetry: Vec<f64>,
    pub frobenius: Vec<f64>,
    pub max_antisymmetry: f64,
    pub max_frobenius: f64,
    pub integrable: bool,
}

/// `μ`-symmetry and Frobenius tests on every chart; their verdicts must agree.
pub fn screen_integrability(charts: &[Chart<'_>]) -> Result<IntegrabilityReport> {
    let mut antisymmetry = Vec::with_capacity(charts.len());
    let mut frobenius = Vec::with_capacity(charts.len());
    for chart in charts {
        let sd = screen_forms(chart)?;
        antisymmetry.push(sd.antisymmetry);
        frobenius.push(sd.frobenius_residual);
    }
    let max_antisymmetry = linalg::max_abs(antisymmetry.iter().copied());
    let max_frobenius = linalg::max_abs(frobenius.iter().copied());
    let by_mu = max_antisymmetry < TAU_INTEGRABLE;
    let by_frobenius = max_frobenius < TAU_INTEGRABLE;
    if by_mu != by_frobenius {
        return Err(Error::Consistency { antisymmetric: max_antisymmetry, frobenius: max_frobenius });
    }
    Ok(IntegrabilityReport { antisymmetry, frobenius, max_antisymmetry, max_frobenius, integrable: by_mu })
}

/// Curvature of the connection `(ω_0^0, ω_i^0; ω_0^i, ω_j^i)` on `U^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedConnection {
    pub screen: ScreenData,
    /// Connection matrix of the induced connection on each coordinate
    /// direction, indices `(0, 1 … n−1)`.
    pub coefficients: Vec<Mat>,
    /// `max |Ω_0^0|`, `max |Ω_0^i|` (torsion-free statement).
    pub torsion_free: [f64; 2],
    /// `max |Ω_i^0 + ω_n^i ∧ ω_n^0|`.
    pub omega_i0_deviation: f64,
    /// `max |Ω_j^i + ω_n^j ∧ ω_n^i|` (full de Sitter curvature form).
    pub omega_ji_deviation: f64,
    /// `R^0_{ij0}`.
    pub r0_ij0: Mat,
    /// `R^i_{jkl}` flattened `(i, j, k, l)`.
    pub r_ijkl: Vec<f64>,
    /// `R^i_{j0l}` flattened `(i, j, l)`.
    pub r_ij0l: Vec<f64>,
    /// `max` deviation of `R^i_{jkl}`, `R^i_{j0l}` read off the reduced
    /// curvature `dω_j^i − ω_j^k ∧ ω_k^i` by FD from the closed forms.
    pub component_deviation: f64,
}

impl InducedConnection {
    pub fn r_ijkl(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let m = self.r0_ij0.nrows();
        self.r_ijkl[((i * m + j) * m + k) * m + l]
    }

    pub fn r_ij0l(&self, i: usize, j: usize, l: usize) -> f64 {
        let m = self.r0_ij0.nrows();
        self.r_ij0l[(i * m + j) * m + l]
    }
}

/// Closed-form components. The 2-form `Σ_{k,l} C_kl θ^k ∧ θ^l` is stored as
/// `R_kl = (C_kl − C_lk)/2`.
fn closed_form(mu: &Mat, mu_vec: &[f64], nu: &Mat) -> (Vec<f64>, Vec<f64>) {
    let m = mu.nrows();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut r = vec![0.0; m * m * m * m];
    let mut r0 = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    r[((i * m + j) * m + k) * m + l] = 0.5
                        * (delta(j, l) * delta(i, k) - delta(j, k) * delta(i, l) + mu[(j, k)] * nu[(i, l)]
                            - mu[(j, l)] * nu[(i, k)]
                            + nu[(j, k)] * mu[(i, l)]
                            - nu[(j, l)] * mu[(i, k)]);
                }
                r0[(i * m + j) * m + k] = 0.5 * (mu_vec[j] * nu[(i, k)] - mu_vec[i] * nu[(j, k)]);
            }
        }
    }
    (r, r0)
}

/// Induced connection and its curvature at the center of a chart over
/// [`ScreenFrames`].
pub fn induced_connection(chart: &Chart<'_>) -> Result<InducedConnection> {
    let screen = screen_forms(chart)?;
    let n = chart.n();
    let m = n - 1;
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let theta = coframe(&w);
    let t_inv = theta.clone().try_inverse().ok_or(Error::Conditioning { condition: f64::INFINITY })?;
    let coefficients = w.dirs.iter().map(|wa| wa.view((0, 0), (n, n)).into_owned()).collect();

    // Reduced curvature on coordinate planes.
    let mut torsion_free = [0.0f64; 2];
    let mut omega_i0: f64 = 0.0;
    let mut omega_ji: f64 = 0.0;
    // tilde[i][j] as antisymmetric n×n matrices over coordinate planes.
    let mut tilde = vec![Mat::zeros(n, n); m * m];
    for a in 0..n {
        for b in a + 1..n {
            let dw = exterior_derivative(chart, &k, a, b)?;
            let (wa, wb) = (&w.dirs[a], &w.dirs[b]);
            let wedge = |x: (usize, usize), y: (usize, usize)| wa[x] * wb[y] - wb[x] * wa[y];
            let sum = |xi: usize, eta: usize, range: core::ops::Range<usize>| -> f64 {
                range.map(|z| wedge((xi, z), (z, eta))).sum()
            };
            torsion_free[0] = torsion_free[0].max((dw[(0, 0)] - sum(0, 0, 1..n)).abs());
            for i in 1..n {
                let r = dw[(0, i)] - wedge((0, 0), (0, i)) - sum(0, i, 1..n);
                torsion_free[1] = torsion_free[1].max(r.abs());
                let r = dw[(i, 0)] - wedge((i, 0), (0, 0)) - sum(i, 0, 1..n) + wedge((n, i), (n, 0));
                omega_i0 = omega_i0.max(r.abs());
                for j in 1..n {
                    let red = dw[(j, i)] - sum(j, i, 1..n);
                    let full = red - wedge((j, 0), (0, i)) - wedge((j, n + 1), (n + 1, i)) + wedge((n, j), (n, i));
                    omega_ji = omega_ji.max(full.abs());
                    tilde[(i - 1) * m + (j - 1)][(a, b)] = red;
                    tilde[(i - 1) * m + (j - 1)][(b, a)] = -red;
                }
            }
        }
    }
    let (r_ijkl, r_ij0l) = closed_form(&screen.mu, &screen.mu_vec, &screen.nu);
    let mut deviation: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            // Coefficients in the basis (θ^1 … θ^{n−1}, θ^0); Ω = Σ R_kl θ^k ∧ θ^l
            // evaluates to 2 R_kl on basis pairs.
            let kmat = &t_inv * &tilde[i * m + j] * t_inv.transpose() * 0.5;
            for kk in 0..m {
                for l in 0..m {
                    deviation = deviation.max((kmat[(kk, l)] - r_ijkl[((i * m + j) * m + kk) * m + l]).abs());
                }
                deviation = deviation.max((kmat[(m, kk)] - r_ij0l[(i * m + j) * m + kk]).abs());
            }
        }
    }
    Ok(InducedConnection {
        screen,
        coefficients,
        torsion_free,
        omega_i0_deviation: omega_i0,
        omega_ji_deviation: omega_ji,
        r0_ij0: Mat::identity(m, m) * -0.5,
        r_ijkl,
        r_ij0l,
        component_deviation: deviation,
    })
}
