use alloc::vec::Vec;

use crate::ambient::AmbientForm;
use crate::frames::{adapt_frame, FrameSource, MovingFrame};
use crate::linalg;
use crate::surfaces::{fd4, EuclideanImmersion, INNER_STEP};
use crate::Result;

/// Map `u ↦ A_0(u)` from a parameter domain to the Darboux quadric.
pub trait ConformalImmersion: Sync {
    /// Conformal dimension (`A_0` has `n+2` coordinates).
    fn n(&self) -> usize;
    fn param_dim(&self) -> usize;
    fn point(&self, u: &[f64]) -> Vec<f64>;

    /// `∂_a A_0`; fourth-order differences unless overridden.
    fn tangents(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (0..self.param_dim()).map(|a| fd4(&|p| self.point(p), u, a, INNER_STEP)).collect()
    }

    /// `∂_a ∂_b A_0`.
    fn second_derivatives(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let d = self.param_dim();
        let dim = self.n() + 2;
        let cols: Vec<Vec<f64>> = (0..d)
            .map(|a| fd4(&|p| self.tangents(p).into_iter().flatten().collect(), u, a, INNER_STEP))
            .collect();
        (0..d).map(|a| (0..d).map(|b| cols[a][b * dim..(b + 1) * dim].to_vec()).collect()).collect()
    }
}

impl<T: ConformalImmersion + ?Sized> ConformalImmersion for &T {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        (**self).point(u)
    }
    fn tangents(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (**self).tangents(u)
    }
    fn second_derivatives(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        (**self).second_derivatives(u)
    }
}

impl<T: ConformalImmersion + ?Sized> ConformalImmersion for alloc::boxed::Box<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        (**self).point(u)
    }
    fn tangents(&self, u: &[f64]) -> Vec<Vec<f64>> {
        (**self).tangents(u)
    }
    fn second_derivatives(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        (**self).second_derivatives(u)
    }
}

/// Canonical lift `A_0 = (1, f, |f|²/2)` of a Euclidean immersion.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanLift<S> {
    pub surface: S,
}

pub fn lift_euclidean<S: EuclideanImmersion>(surface: S) -> EuclideanLift<S> {
    EuclideanLift { surface }
}

/// `(1, p, |p|²/2)`.
pub fn lift_point(p: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(p.len() + 2);
    v.push(1.0);
    v.extend_from_slice(p);
    v.push(0.5 * linalg::dot(p, p));
    v
}

/// Hypersphere with center `c` and radius `ρ` as the unit exterior vector
/// `(1, c, (|c|²−ρ²)/2)/ρ`.
pub fn hypersphere(center: &[f64], radius: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(center.len() + 2);
    v.push(1.0 / radius);
    v.extend(center.iter().map(|c| c / radius));
    v.push(0.5 * (linalg::dot(center, center) - radius * radius) / radius);
    v
}

/// Hyperplane through `p` with unit normal `N`: `(0, N, N·p)`.
pub fn hyperplane(normal: &[f64], p: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(normal.len() + 2);
    v.push(0.0);
    v.extend_from_slice(normal);
    v.push(linalg::dot(normal, p));
    v
}

impl<S: EuclideanImmersion> ConformalImmersion for EuclideanLift<S> {
    fn n(&self) -> usize {
        self.surface.ambient_dim()
    }
    fn param_dim(&self) -> usize {
        self.surface.param_dim()
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        lift_point(&self.surface.point(u))
    }
    fn tangents(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let f = self.surface.point(u);
        self.surface
            .jacobian(u)
            .into_iter()
            .map(|fa| {
                let mut v = Vec::with_capacity(f.len() + 2);
                v.push(0.0);
                v.extend_from_slice(&fa);
                v.push(linalg::dot(&f, &fa));
                v
            })
            .collect()
    }
    fn second_derivatives(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let f = self.surface.point(u);
        let jac = self.surface.jacobian(u);
        let hess = self.surface.hessian(u);
        hess.iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .enumerate()
                    .map(|(b, fab)| {
                        let mut v = Vec::with_capacity(f.len() + 2);
                        v.push(0.0);
                        v.extend_from_slice(fab);
                        v.push(linalg::dot(&jac[a], &jac[b]) + linalg::dot(&f, fab));
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// The isotropic generator `A_0 A_n` at `u`.
pub fn generator_line(immersion: &dyn ConformalImmersion, u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = adapt_frame(immersion, u)?;
    Ok((f.vector(0), f.vector(f.n())))
}

/// Point `z = A_n + s A_0` of `U^n` with its tangent hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct LightlikePoint {
    pub u: Vec<f64>,
    pub s: f64,
    pub z: Vec<f64>,
    /// Pole of the tangent hyperplane; the hyperplane is `{x : (x, A_0) = 0}`
    /// for every point of the generator, so the pole is `A_0`.
    pub tangent_pole: Vec<f64>,
}

impl LightlikePoint {
    pub fn new(frame: &MovingFrame, s: f64) -> Self {
        let n = frame.n();
        let a0 = frame.vector(0);
        let z = frame.vector(n).iter().zip(&a0).map(|(x, y)| x + s * y).collect();
        Self { u: frame.u.clone(), s, z, tangent_pole: a0 }
    }

    pub fn square(&self, form: &AmbientForm) -> f64 {
        form.dot(&self.z, &self.z)
    }
}

impl<S: EuclideanImmersion> FrameSource for EuclideanLift<S> {
    fn n(&self) -> usize {
        ConformalImmersion::n(self)
    }
    fn param_dim(&self) -> usize {
        ConformalImmersion::param_dim(self)
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        adapt_frame(self, u)
    }
}
