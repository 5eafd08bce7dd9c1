//! Euclidean immersions used as inputs, and a classical principal-curvature
//! routine that serves as an independent oracle for the focal computations.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Step of the fourth-order finite-difference fallback for derivatives.
pub const INNER_STEP: f64 = 1e-3;

/// Immersion of a `d`-dimensional parameter domain into `R^n`.
pub trait EuclideanImmersion: Sync {
    fn ambient_dim(&self) -> usize;
    fn param_dim(&self) -> usize;
    fn point(&self, u: &[f64]) -> Vec<f64>;

    /// `∂_a f`, one vector per parameter.
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        fd_jacobian(self, u)
    }

    /// `∂_a ∂_b f`.
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        fd_hessian(self, u)
    }

    fn analytic(&self) -> bool {
        false
    }
}

impl<T: EuclideanImmersion + ?Sized> EuclideanImmersion for &T {
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        (**self).point(u)
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (**self).jacobian(u)
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        (**self).hessian(u)
    }
    fn analytic(&self) -> bool {
        (**self).analytic()
    }
}

impl<T: EuclideanImmersion + ?Sized> EuclideanImmersion for alloc::boxed::Box<T> {
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        (**self).point(u)
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (**self).jacobian(u)
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        (**self).hessian(u)
    }
    fn analytic(&self) -> bool {
        (**self).analytic()
    }
}

/// Fourth-order central difference of a vector function along one axis.
pub fn fd4(f: &dyn Fn(&[f64]) -> Vec<f64>, u: &[f64], axis: usize, h: f64) -> Vec<f64> {
    let at = |k: f64| {
        let mut p = u.to_vec();
        p[axis] += k * h;
        f(&p)
    };
    let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
    (0..p1.len()).map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h)).collect()
}

pub fn fd_jacobian<S: EuclideanImmersion + ?Sized>(s: &S, u: &[f64]) -> Vec<Vec<f64>> {
    (0..s.param_dim()).map(|a| fd4(&|p| s.point(p), u, a, INNER_STEP)).collect()
}

pub fn fd_hessian<S: EuclideanImmersion + ?Sized>(s: &S, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let d = s.param_dim();
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|a| fd4(&|p| s.jacobian(p).into_iter().flatten().collect(), u, a, INNER_STEP))
        .collect();
    let n = s.ambient_dim();
    (0..d)
        .map(|a| (0..d).map(|b| cols[a][b * n..(b + 1) * n].to_vec()).collect())
        .collect()
}

#[derive(Clone, Copy)]
enum Factor {
    One,
    Sin,
    Cos,
}

fn factor(kind: Factor, order: usize, t: f64) -> f64 {
    let (s, c) = (libm::sin(t), libm::cos(t));
    match (kind, order % 4) {
        (Factor::One, 0) => 1.0,
        (Factor::One, _) => 0.0,
        (Factor::Sin, 0) => s,
        (Factor::Sin, 1) => c,
        (Factor::Sin, 2) => -s,
        (Factor::Sin, _) => -c,
        (Factor::Cos, 0) => c,
        (Factor::Cos, 1) => -s,
        (Factor::Cos, 2) => -c,
        (Factor::Cos, _) => s,
    }
}

/// Round `r`-sphere in `R^n` lying in the affine span of the first `r+1`
/// coordinate directions through `center`, in hyperspherical angles. With
/// `r = n−1` it is a hypersphere; with `r = 1` a circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub n: usize,
    pub r: usize,
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Sphere {
    pub fn unit(n: usize) -> Self {
        Self { n, r: n - 1, center: vec![0.0; n], radius: 1.0 }
    }

    pub fn circle(n: usize, radius: f64) -> Self {
        Self { n, r: 1, center: vec![0.0; n], radius }
    }

    fn kind(&self, k: usize, j: usize) -> Factor {
        if j < k {
            Factor::Sin
        } else if j == k && k < self.r {
            Factor::Cos
        } else {
            Factor::One
        }
    }

    fn coordinate(&self, u: &[f64], k: usize, orders: &[usize]) -> f64 {
        let mut v = self.radius;
        for j in 0..self.r {
            v *= factor(self.kind(k, j), orders[j], u[j]);
        }
        v
    }

    fn derivative(&self, u: &[f64], orders: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for k in 0..=self.r {
            out[k] = self.coordinate(u, k, orders);
        }
        out
    }
}

impl EuclideanImmersion for Sphere {
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn param_dim(&self) -> usize {
        self.r
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        let mut p = self.derivative(u, &vec![0; self.r]);
        p.iter_mut().zip(&self.center).for_each(|(x, c)| *x += c);
        p
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (0..self.r)
            .map(|a| {
                let mut o = vec![0; self.r];
                o[a] = 1;
                self.derivative(u, &o)
            })
            .collect()
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        (0..self.r)
            .map(|a| {
                (0..self.r)
                    .map(|b| {
                        let mut o = vec![0; self.r];
                        o[a] += 1;
                        o[b] += 1;
                        self.derivative(u, &o)
                    })
                    .collect()
            })
            .collect()
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// `(a sinθ cosφ, b sinθ sinφ, c cosθ)` in parameters `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Ellipsoid {
    fn eval(&self, u: &[f64], ot: usize, op: usize) -> Vec<f64> {
        let (t, p) = (u[0], u[1]);
        vec![
            self.a * factor(Factor::Sin, ot, t) * factor(Factor::Cos, op, p),
            self.b * factor(Factor::Sin, ot, t) * factor(Factor::Sin, op, p),
            self.c * factor(Factor::Cos, ot, t) * factor(Factor::One, op, p),
        ]
    }
}

impl EuclideanImmersion for Ellipsoid {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        self.eval(u, 0, 0)
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        vec![self.eval(u, 1, 0), self.eval(u, 0, 1)]
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        vec![vec![self.eval(u, 2, 0), self.eval(u, 1, 1)], vec![self.eval(u, 1, 1), self.eval(u, 0, 2)]]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// `((R + r cosθ) cosφ, (R + r cosθ) sinφ, r sinθ)` in parameters `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    pub major: f64,
    pub minor: f64,
}

impl Torus {
    fn eval(&self, u: &[f64], ot: usize, op: usize) -> Vec<f64> {
        let (t, p) = (u[0], u[1]);
        let rho = if ot == 0 { self.major + self.minor * libm::cos(t) } else { self.minor * factor(Factor::Cos, ot, t) };
        vec![
            rho * factor(Factor::Cos, op, p),
            rho * factor(Factor::Sin, op, p),
            self.minor * factor(Factor::Sin, ot, t) * factor(Factor::One, op, p),
        ]
    }
}

impl EuclideanImmersion for Torus {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        self.eval(u, 0, 0)
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        vec![self.eval(u, 1, 0), self.eval(u, 0, 1)]
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        vec![vec![self.eval(u, 2, 0), self.eval(u, 1, 1)], vec![self.eval(u, 1, 1), self.eval(u, 0, 2)]]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// Surface of revolution with meridian `(ρ(t), z(t)) = (a + b cos t, c t)`
/// in parameters `(t, φ)`; these are curvature-line coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revolution {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Revolution {
    fn eval(&self, u: &[f64], ot: usize, op: usize) -> Vec<f64> {
        let (t, p) = (u[0], u[1]);
        let rho = if ot == 0 { self.a + self.b * libm::cos(t) } else { self.b * factor(Factor::Cos, ot, t) };
        let z = match (ot, op) {
            (0, 0) => self.c * t,
            (1, 0) => self.c,
            _ => 0.0,
        };
        vec![rho * factor(Factor::Cos, op, p), rho * factor(Factor::Sin, op, p), z]
    }
}

impl EuclideanImmersion for Revolution {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        self.eval(u, 0, 0)
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        vec![self.eval(u, 1, 0), self.eval(u, 0, 1)]
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        vec![vec![self.eval(u, 2, 0), self.eval(u, 1, 1)], vec![self.eval(u, 1, 1), self.eval(u, 0, 2)]]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// `(ρ cosφ, ρ sinφ, z)` in parameters `(φ, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylinder {
    pub radius: f64,
}

impl EuclideanImmersion for Cylinder {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        vec![self.radius * libm::cos(u[0]), self.radius * libm::sin(u[0]), u[1]]
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![-self.radius * libm::sin(u[0]), self.radius * libm::cos(u[0]), 0.0], vec![0.0, 0.0, 1.0]]
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let z = vec![0.0; 3];
        vec![
            vec![vec![-self.radius * libm::cos(u[0]), -self.radius * libm::sin(u[0]), 0.0], z.clone()],
            vec![z.clone(), z],
        ]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// The hyperplane `x^n = 0` of `R^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub n: usize,
}

impl EuclideanImmersion for Plane {
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn param_dim(&self) -> usize {
        self.n - 1
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        let mut p = u.to_vec();
        p.push(0.0);
        p
    }
    fn jacobian(&self, _u: &[f64]) -> Vec<Vec<f64>> {
        (0..self.n - 1)
            .map(|a| {
                let mut e = vec![0.0; self.n];
                e[a] = 1.0;
                e
            })
            .collect()
    }
    fn hessian(&self, _u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        vec![vec![vec![0.0; self.n]; self.n - 1]; self.n - 1]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// Graph `z = Σ c_{ij} x^i y^j` over the `(x, y)` plane; derivatives by
/// finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    /// Monomials `(i, j, c_ij)`.
    pub terms: Vec<(u32, u32, f64)>,
}

impl EuclideanImmersion for Graph {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        let z = self.terms.iter().map(|&(i, j, c)| c * libm::pow(u[0], i as f64) * libm::pow(u[1], j as f64)).sum();
        vec![u[0], u[1], z]
    }
}

/// One smooth radial mode `amp · cos(kθ θ + α) · cos(kφ φ + β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub amplitude: f64,
    pub k_theta: f64,
    pub k_phi: f64,
    pub phase_theta: f64,
    pub phase_phi: f64,
}

/// Ellipsoid with a radial bump `(1 + β(θ,φ)) E(θ,φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedEllipsoid {
    pub base: Ellipsoid,
    pub modes: Vec<Mode>,
}

impl PerturbedEllipsoid {
    /// `β` and its partial derivatives up to second order.
    fn bump(&self, u: &[f64]) -> (f64, [f64; 2], [[f64; 2]; 2]) {
        let mut v = 0.0;
        let mut d = [0.0; 2];
        let mut dd = [[0.0; 2]; 2];
        for m in &self.modes {
            let (at, ap) = (m.k_theta * u[0] + m.phase_theta, m.k_phi * u[1] + m.phase_phi);
            let (ct, st, cp, sp) = (libm::cos(at), libm::sin(at), libm::cos(ap), libm::sin(ap));
            v += m.amplitude * ct * cp;
            d[0] -= m.amplitude * m.k_theta * st * cp;
            d[1] -= m.amplitude * m.k_phi * ct * sp;
            dd[0][0] -= m.amplitude * m.k_theta * m.k_theta * ct * cp;
            dd[1][1] -= m.amplitude * m.k_phi * m.k_phi * ct * cp;
            dd[0][1] += m.amplitude * m.k_theta * m.k_phi * st * sp;
        }
        dd[1][0] = dd[0][1];
        (v, d, dd)
    }
}

impl EuclideanImmersion for PerturbedEllipsoid {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        let (b, _, _) = self.bump(u);
        self.base.point(u).into_iter().map(|x| (1.0 + b) * x).collect()
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let (b, d, _) = self.bump(u);
        let e = self.base.point(u);
        let j = self.base.jacobian(u);
        (0..2).map(|a| (0..3).map(|k| d[a] * e[k] + (1.0 + b) * j[a][k]).collect()).collect()
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let (b, d, dd) = self.bump(u);
        let e = self.base.point(u);
        let j = self.base.jacobian(u);
        let h = self.base.hessian(u);
        (0..2)
            .map(|a| {
                (0..2)
                    .map(|c| {
                        (0..3)
                            .map(|k| dd[a][c] * e[k] + d[a] * j[c][k] + d[c] * j[a][k] + (1.0 + b) * h[a][c][k])
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// Helix `(a cos t, a sin t, b t)`, a non-planar curve in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Helix {
    pub a: f64,
    pub b: f64,
}

impl EuclideanImmersion for Helix {
    fn ambient_dim(&self) -> usize {
        3
    }
    fn param_dim(&self) -> usize {
        1
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        vec![self.a * libm::cos(u[0]), self.a * libm::sin(u[0]), self.b * u[0]]
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![-self.a * libm::sin(u[0]), self.a * libm::cos(u[0]), self.b]]
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        vec![vec![vec![-self.a * libm::cos(u[0]), -self.a * libm::sin(u[0]), 0.0]]]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// Surface in `R^4`: `(u, v, α(u²−v²)/2 + γ u³, β u v + δ v³)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceR4 {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl EuclideanImmersion for SurfaceR4 {
    fn ambient_dim(&self) -> usize {
        4
    }
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, w: &[f64]) -> Vec<f64> {
        let (u, v) = (w[0], w[1]);
        vec![
            u,
            v,
            0.5 * self.alpha * (u * u - v * v) + self.gamma * u * u * u,
            self.beta * u * v + self.delta * v * v * v,
        ]
    }
    fn jacobian(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let (u, v) = (w[0], w[1]);
        vec![
            vec![1.0, 0.0, self.alpha * u + 3.0 * self.gamma * u * u, self.beta * v],
            vec![0.0, 1.0, -self.alpha * v, self.beta * u + 3.0 * self.delta * v * v],
        ]
    }
    fn hessian(&self, w: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let (u, v) = (w[0], w[1]);
        vec![
            vec![vec![0.0, 0.0, self.alpha + 6.0 * self.gamma * u, 0.0], vec![0.0, 0.0, 0.0, self.beta]],
            vec![vec![0.0, 0.0, 0.0, self.beta], vec![0.0, 0.0, -self.alpha, 6.0 * self.delta * v]],
        ]
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// A single point of `R^n` (zero-dimensional immersion).
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub position: Vec<f64>,
}

impl EuclideanImmersion for Point {
    fn ambient_dim(&self) -> usize {
        self.position.len()
    }
    fn param_dim(&self) -> usize {
        0
    }
    fn point(&self, _u: &[f64]) -> Vec<f64> {
        self.position.clone()
    }
    fn jacobian(&self, _u: &[f64]) -> Vec<Vec<f64>> {
        Vec::new()
    }
    fn hessian(&self, _u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        Vec::new()
    }
    fn analytic(&self) -> bool {
        true
    }
}

/// Classical second-order data of a hypersurface of `R^n` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalData {
    pub point: Vec<f64>,
    /// Unit normal with `det[f_1 … f_{n-1}, N] > 0`.
    pub normal: Vec<f64>,
    /// Principal curvatures w.r.t. `normal` (`h = κ g` on directions),
    /// ascending.
    pub curvatures: Vec<f64>,
    /// Principal directions in parameter coordinates, `g`-orthonormal.
    pub directions: Vec<Vec<f64>>,
}

/// Principal curvatures from the first and second fundamental forms,
/// `h_ab = f_ab · N`, `h v = κ g v`.
pub fn principal_curvatures(surface: &dyn EuclideanImmersion, u: &[f64]) -> Result<PrincipalData> {
    let n = surface.ambient_dim();
    let d = surface.param_dim();
    if d + 1 != n {
        return Err(Error::Precondition("principal curvatures need a hypersurface"));
    }
    let p = surface.point(u);
    let jac = surface.jacobian(u);
    let hess = surface.hessian(u);
    let j = linalg::rows_to_mat(&jac);
    let kernel = linalg::null_space(&j, 1e-10);
    if kernel.ncols() != 1 {
        return Err(Error::ImmersionRank { singular_values: linalg::singular_values(&j) });
    }
    let mut normal: Vec<f64> = kernel.column(0).iter().copied().collect();
    let mut rows = jac.clone();
    rows.push(normal.clone());
    if linalg::determinant(&linalg::rows_to_mat(&rows)) < 0.0 {
        normal.iter_mut().for_each(|x| *x = -*x);
    }
    let g = Mat::from_fn(d, d, |a, b| linalg::dot(&jac[a], &jac[b]));
    let h = Mat::from_fn(d, d, |a, b| linalg::dot(&hess[a][b], &normal));
    let chol = g.clone().cholesky().ok_or(Error::ImmersionRank { singular_values: vec![] })?;
    let l_inv = chol.l().try_inverse().ok_or(Error::ImmersionRank { singular_values: vec![] })?;
    let reduced = &l_inv * &h * l_inv.transpose();
    let (curvatures, vecs) = linalg::sym_eigen(&reduced);
    let dirs = l_inv.transpose() * vecs;
    let directions = (0..d).map(|k| dirs.column(k).iter().copied().collect()).collect();
    Ok(PrincipalData { point: p, normal, curvatures, directions })
}

/// Curvature and principal normal of a curve (Frenet data).
pub fn curve_curvature(curve: &dyn EuclideanImmersion, u: &[f64]) -> Result<(f64, Vec<f64>)> {
    if curve.param_dim() != 1 {
        return Err(Error::Precondition("curve curvature needs a curve"));
    }
    let t = curve.jacobian(u).remove(0);
    let a = curve.hessian(u).remove(0).remove(0);
    let speed2 = linalg::dot(&t, &t);
    let along = linalg::dot(&a, &t) / speed2;
    let normal_acc: Vec<f64> = a.iter().zip(&t).map(|(x, y)| x - along * y).collect();
    let kappa = linalg::norm(&normal_acc) / speed2;
    let nrm = linalg::norm(&normal_acc);
    let normal = if nrm > 0.0 { normal_acc.iter().map(|x| x / nrm).collect() } else { vec![0.0; t.len()] };
    Ok((kappa, normal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_derivatives(s: &dyn EuclideanImmersion, u: &[f64]) {
        let jac = s.jacobian(u);
        let fd = fd_jacobian(s, u);
        for (a, b) in jac.iter().flatten().zip(fd.iter().flatten()) {
            assert!((a - b).abs() < 1e-9, "jacobian {a} vs {b}");
        }
        let hess = s.hessian(u);
        let d = s.param_dim();
        for a in 0..d {
            let col = fd4(&|p| s.jacobian(p)[a].clone(), u, a, 1e-3);
            for (x, y) in hess[a][a].iter().zip(&col) {
                assert!((x - y).abs() < 1e-8, "hessian {x} vs {y}");
            }
            for b in 0..d {
                for (x, y) in hess[a][b].iter().zip(&hess[b][a]) {
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_fd() {
        let u2 = [0.7, 0.4];
        check_derivatives(&Sphere::unit(3), &u2);
        check_derivatives(&Sphere { n: 4, r: 2, center: vec![0.1, 0.2, 0.3, 0.4], radius: 1.5 }, &u2);
        check_derivatives(&Sphere::unit(4), &[0.7, 0.4, 1.1]);
        check_derivatives(&Ellipsoid { a: 1.0, b: 2.0, c: 3.0 }, &u2);
        check_derivatives(&Torus { major: 2.0, minor: 1.0 }, &u2);
        check_derivatives(&Revolution { a: 2.0, b: 0.5, c: 1.0 }, &u2);
        check_derivatives(&Cylinder { radius: 1.0 }, &u2);
        check_derivatives(&Helix { a: 1.0, b: 0.5 }, &[0.3]);
        check_derivatives(&SurfaceR4 { alpha: 0.8, beta: 0.5, gamma: 0.3, delta: -0.2 }, &u2);
        let bumpy = PerturbedEllipsoid {
            base: Ellipsoid { a: 1.0, b: 2.0, c: 3.0 },
            modes: vec![Mode { amplitude: 0.01, k_theta: 2.0, k_phi: 3.0, phase_theta: 0.1, phase_phi: 0.7 }],
        };
        check_derivatives(&bumpy, &u2);
    }

    #[test]
    fn parametrization_values() {
        let t = Torus { major: 2.0, minor: 1.0 }.point(&[0.0, 0.0]);
        assert_eq!(t, vec![3.0, 0.0, 0.0]);
        let e = Ellipsoid { a: 1.0, b: 2.0, c: 3.0 }.point(&[core::f64::consts::FRAC_PI_2, 0.0]);
        assert!((e[0] - 1.0).abs() < 1e-15 && e[1].abs() < 1e-15 && e[2].abs() < 1e-15);
        let c = Sphere::circle(3, 1.0).point(&[0.3]);
        assert!((c[0] - libm::cos(0.3)).abs() < 1e-15 && (c[1] - libm::sin(0.3)).abs() < 1e-15 && c[2] == 0.0);
    }

    #[test]
    fn oracle_torus_and_ellipsoid_vertex() {
        let torus = Torus { major: 2.0, minor: 1.0 };
        let pd = principal_curvatures(&torus, &[0.0, 0.0]).unwrap();
        let mut radii: Vec<f64> = pd.curvatures.iter().map(|k| 1.0 / k.abs()).collect();
        radii.sort_by(f64::total_cmp);
        assert!((radii[0] - 1.0).abs() < 1e-12 && (radii[1] - 3.0).abs() < 1e-12, "{radii:?}");
        let ell = Ellipsoid { a: 1.0, b: 2.0, c: 3.0 };
        let pd = principal_curvatures(&ell, &[core::f64::consts::FRAC_PI_2, 0.0]).unwrap();
        let mut radii: Vec<f64> = pd.curvatures.iter().map(|k| 1.0 / k.abs()).collect();
        radii.sort_by(f64::total_cmp);
        assert!((radii[0] - 4.0).abs() < 1e-12 && (radii[1] - 9.0).abs() < 1e-12, "{radii:?}");
    }

    #[test]
    fn circle_curvature() {
        let (k, nrm) = curve_curvature(&Sphere::circle(3, 2.0), &[0.4]).unwrap();
        assert!((k - 0.5).abs() < 1e-14);
        assert!((nrm[0] + libm::cos(0.4)).abs() < 1e-14);
    }
}
