use alloc::vec::Vec;

use super::{adapt_frame_with_gauge, infinity_rotation, origin_rotation, FrameSource, MovingFrame};
use crate::lightlike::ConformalImmersion;
use crate::Result;

/// Adapted frames of a hypersurface on the quadric (maximal-rank branch).
pub struct LiftFrames<I> {
    pub immersion: I,
    /// Gauge vector `E` with `(A_n, E) = 0`; `None` selects `E_∞ = e_{n+1}`.
    pub gauge: Option<Vec<f64>>,
}

impl<I: ConformalImmersion> LiftFrames<I> {
    pub fn new(immersion: I) -> Self {
        Self { immersion, gauge: None }
    }
}

impl<I: ConformalImmersion> FrameSource for LiftFrames<I> {
    fn n(&self) -> usize {
        self.immersion.n()
    }
    fn param_dim(&self) -> usize {
        self.immersion.param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        adapt_frame_with_gauge(&self.immersion, u, self.gauge.as_deref())
    }
}

/// Constant gauge shift `A_n → A_n + s A_0` of another field.
pub struct GaugeShifted<S> {
    pub inner: S,
    pub s: f64,
}

impl<S: FrameSource> FrameSource for GaugeShifted<S> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn param_dim(&self) -> usize {
        self.inner.param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        Ok(self.inner.frame(u)?.gauge_shift(self.s))
    }
}

/// Renormalization `A_0 → c A_0`, `A_{n+1} → A_{n+1}/c`.
pub struct Rescaled<S> {
    pub inner: S,
    pub c: f64,
}

impl<S: FrameSource> FrameSource for Rescaled<S> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn param_dim(&self) -> usize {
        self.inner.param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        Ok(self.inner.frame(u)?.rescaled(self.c))
    }
}

/// Parameter-dependent null rotation of another field.
pub struct NullRotated<'f, S> {
    pub inner: S,
    /// `u ↦ (t_1 … t_n)`.
    pub t: &'f (dyn Fn(&[f64]) -> Vec<f64> + Sync),
    /// Rotate about `A_{n+1}` instead of `A_0`.
    pub about_infinity: bool,
}

impl<S: FrameSource> FrameSource for NullRotated<'_, S> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn param_dim(&self) -> usize {
        self.inner.param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        let t = (self.t)(u);
        let m = if self.about_infinity { infinity_rotation(self.n(), &t) } else { origin_rotation(self.n(), &t) };
        Ok(self.inner.frame(u)?.transformed(&m))
    }
}

/// Extends a hypersurface frame field by the two generator-pair
/// directions: `(u, s, t) ↦ M_t N_s F(u)` where `N_s` is the gauge shift and
/// `M_t` moves `A_n` towards `A_{n+1}`. The coframe `ω_n^u` then spans all
/// `n+1` directions of `T(S^{n+1}_1)`, which the full curvature tensor needs.
pub struct Extended<S> {
    pub inner: S,
}

impl<S: FrameSource> FrameSource for Extended<S> {
    fn n(&self) -> usize {
        self.inner.n()
    }
    fn param_dim(&self) -> usize {
        self.inner.param_dim() + 2
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        let d = self.inner.param_dim();
        let n = self.n();
        let base = self.inner.frame(&u[..d])?.gauge_shift(u[d]);
        let mut t = alloc::vec![0.0; n];
        t[n - 1] = u[d + 1];
        let mut f = base.transformed(&infinity_rotation(n, &t));
        f.u = u.to_vec();
        Ok(f)
    }
}

/// The same frame at every parameter value.
pub struct ConstantFrames {
    pub frame: MovingFrame,
    pub dim: usize,
}

impl FrameSource for ConstantFrames {
    fn n(&self) -> usize {
        self.frame.n()
    }
    fn param_dim(&self) -> usize {
        self.dim
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        let mut f = self.frame.clone();
        f.u = u.to_vec();
        Ok(f)
    }
}
