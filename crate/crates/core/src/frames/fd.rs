use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::{maurer_cartan::connection_from_derivatives, ConnectionMatrix, FrameSource, MovingFrame};
use crate::linalg::Mat;
use crate::{Error, Result};

/// Central-difference scheme with optional Richardson extrapolation.
///
/// With `levels = L` the derivative combines central quotients at steps
/// `h, h/2, …, h/2^L`; the error is `O(h^{2L+2})`. All evaluation points lie
/// on an integer lattice of spacing `h/2^L` around the chart center, which
/// lets nested derivatives share memoized values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdScheme {
    pub step: f64,
    pub richardson: u32,
}

impl FdScheme {
    pub const fn central(step: f64) -> Self {
        Self { step, richardson: 0 }
    }

    pub const fn richardson(step: f64, levels: u32) -> Self {
        Self { step, richardson: levels }
    }

    /// Lattice spacing.
    pub fn unit(&self) -> f64 {
        self.step / (1u64 << self.richardson) as f64
    }

    /// Largest lattice offset touched by one derivative.
    pub fn reach(&self) -> i32 {
        1 << self.richardson
    }

    /// Lattice offsets with weights; the derivative is `Σ w f(k + o)/unit`.
    pub fn stencil(&self) -> Vec<(i32, f64)> {
        let levels = self.richardson as usize;
        // Richardson table on coefficient vectors over D_0 … D_L.
        let mut table: Vec<Vec<f64>> = (0..=levels)
            .map(|k| {
                let mut e = vec![0.0; levels + 1];
                e[k] = 1.0;
                e
            })
            .collect();
        for j in 1..=levels {
            let factor = libm::pow(4.0, j as f64);
            for k in (j..=levels).rev() {
                let combined: Vec<f64> = table[k]
                    .iter()
                    .zip(&table[k - 1])
                    .map(|(a, b)| (factor * a - b) / (factor - 1.0))
                    .collect();
                table[k] = combined;
            }
        }
        let coeffs = &table[levels];
        let mut out = Vec::new();
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let off = 1i32 << (levels - k);
            let w = c / (2.0 * off as f64);
            out.push((off, w));
            out.push((-off, -w));
        }
        out
    }
}

impl Default for FdScheme {
    fn default() -> Self {
        Self::central(1e-4)
    }
}

/// Memoized finite-difference neighbourhood of one parameter point.
///
/// Frames, connection matrices and arbitrary derived fields are cached per
/// lattice offset, so nested derivatives (connection forms of connection
/// forms, derivatives of invariants) cost one evaluation per lattice point.
/// A chart is single-threaded; parallel sweeps build one chart per node.
pub struct Chart<'a> {
    source: &'a dyn FrameSource,
    center: Vec<f64>,
    fd: FdScheme,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    reference: RefCell<Option<MovingFrame>>,
    frames: RefCell<BTreeMap<Vec<i32>, MovingFrame>>,
    omegas: RefCell<BTreeMap<Vec<i32>, ConnectionMatrix>>,
    fields: RefCell<BTreeMap<(u32, Vec<i32>), Vec<f64>>>,
}

impl<'a> Chart<'a> {
    pub fn new(source: &'a dyn FrameSource, center: &[f64], fd: FdScheme) -> Self {
        Self {
            source,
            center: center.to_vec(),
            fd,
            lower: None,
            upper: None,
            reference: RefCell::new(None),
            frames: RefCell::new(BTreeMap::new()),
            omegas: RefCell::new(BTreeMap::new()),
            fields: RefCell::new(BTreeMap::new()),
        }
    }

    /// Restricts evaluation to a box; leaving it raises a stencil error.
    pub fn with_bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        self.lower = Some(lower);
        self.upper = Some(upper);
        self
    }

    /// Sign reference for all frames of the chart (default: the center frame).
    pub fn with_reference(self, frame: MovingFrame) -> Self {
        *self.reference.borrow_mut() = Some(frame);
        self
    }

    pub fn source(&self) -> &'a dyn FrameSource {
        self.source
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn fd(&self) -> FdScheme {
        self.fd
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn origin(&self) -> Vec<i32> {
        vec![0; self.dim()]
    }

    pub fn point(&self, k: &[i32]) -> Vec<f64> {
        let unit = self.fd.unit();
        self.center.iter().zip(k).map(|(c, &o)| c + unit * o as f64).collect()
    }

    fn check_bounds(&self, u: &[f64]) -> Result<()> {
        if let (Some(lo), Some(hi)) = (&self.lower, &self.upper) {
            let slack = 1e-12;
            for (axis, x) in u.iter().enumerate() {
                if *x < lo[axis] - slack || *x > hi[axis] + slack {
                    return Err(Error::Stencil { axis });
                }
            }
        }
        Ok(())
    }

    fn reference_frame(&self) -> Result<MovingFrame> {
        if let Some(f) = self.reference.borrow().as_ref() {
            return Ok(f.clone());
        }
        self.check_bounds(&self.center)?;
        let f = self.source.frame(&self.center)?;
        *self.reference.borrow_mut() = Some(f.clone());
        Ok(f)
    }

    /// Frame at a lattice offset, sign-aligned to the chart reference.
    pub fn frame(&self, k: &[i32]) -> Result<MovingFrame> {
        if let Some(f) = self.frames.borrow().get(k) {
            return Ok(f.clone());
        }
        let reference = self.reference_frame()?;
        let u = self.point(k);
        self.check_bounds(&u)?;
        let mut f = if k.iter().all(|&o| o == 0) { reference.clone() } else { self.source.frame(&u)? };
        f.align_to(&reference);
        self.frames.borrow_mut().insert(k.to_vec(), f.clone());
        Ok(f)
    }

    /// Derivative along `axis` of a vector-valued lattice function.
    pub fn derivative(
        &self,
        k: &[i32],
        axis: usize,
        mut f: impl FnMut(&[i32]) -> Result<Vec<f64>>,
    ) -> Result<Vec<f64>> {
        let unit = self.fd.unit();
        let mut acc: Option<Vec<f64>> = None;
        let mut at = k.to_vec();
        for (off, w) in self.fd.stencil() {
            at[axis] = k[axis] + off;
            let v = f(&at)?;
            let acc = acc.get_or_insert_with(|| vec![0.0; v.len()]);
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += w * x / unit;
            }
        }
        Ok(acc.unwrap_or_default())
    }

    /// Gradient of a scalar lattice function.
    pub fn gradient(&self, k: &[i32], mut f: impl FnMut(&[i32]) -> Result<f64>) -> Result<Vec<f64>> {
        (0..self.dim()).map(|a| Ok(self.derivative(k, a, |p| Ok(vec![f(p)?]))?[0])).collect()
    }

    /// Maurer–Cartan matrix at a lattice offset.
    pub fn omega(&self, k: &[i32]) -> Result<ConnectionMatrix> {
        if let Some(w) = self.omegas.borrow().get(k) {
            return Ok(w.clone());
        }
        let frame = self.frame(k)?;
        let size = frame.n() + 2;
        let mut derivatives = Vec::with_capacity(self.dim());
        for axis in 0..self.dim() {
            let flat = self.derivative(k, axis, |p| Ok(self.frame(p)?.matrix().iter().copied().collect()))?;
            derivatives.push(Mat::from_column_slice(size, size, &flat));
        }
        let w = connection_from_derivatives(&frame, &derivatives)?;
        self.omegas.borrow_mut().insert(k.to_vec(), w.clone());
        Ok(w)
    }

    /// Memoized derived field stored under `slot`; slots are private
    /// constants of the computing module.
    pub fn cached(&self, slot: u32, k: &[i32], f: impl FnOnce() -> Result<Vec<f64>>) -> Result<Vec<f64>> {
        let key = (slot, k.to_vec());
        if let Some(v) = self.fields.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.fields.borrow_mut().insert(key, v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(s: &FdScheme, f: impl Fn(f64) -> f64, x: f64) -> f64 {
        s.stencil().iter().map(|&(o, w)| w * f(x + o as f64 * s.unit())).sum::<f64>() / s.unit()
    }

    #[test]
    fn stencils_are_antisymmetric_and_consistent() {
        for levels in 0..3 {
            let s = FdScheme::richardson(0.1, levels);
            let total: f64 = s.stencil().iter().map(|&(o, w)| w * o as f64).sum();
            assert!((total - 1.0).abs() < 1e-14, "first moment {total}");
        }
    }

    #[test]
    fn richardson_raises_order() {
        let f = libm::sin;
        let exact = libm::cos(0.3);
        let e0 = (apply(&FdScheme::central(0.1), f, 0.3) - exact).abs();
        let e1 = (apply(&FdScheme::richardson(0.1, 1), f, 0.3) - exact).abs();
        let e2 = (apply(&FdScheme::richardson(0.1, 2), f, 0.3) - exact).abs();
        assert!(e0 > 1e-4 && e1 < 1e-6 && e2 < 1e-9, "{e0} {e1} {e2}");
    }
}
