//! Adapted moving frames, finite-difference charts and Maurer–Cartan forms.

pub(crate) mod adapt;
mod fd;
mod field;
mod maurer_cartan;
mod sources;

pub use adapt::{adapt_frame, adapt_frame_with_gauge, complete_null_partner, TAU_GRAM, TAU_RANK};
pub use fd::{Chart, FdScheme};
pub use field::{FrameField, GridAxis};
pub use maurer_cartan::{
    exterior_derivative, maurer_cartan, pfaffian_residual, structure_residual, transform_connection,
    ConnectionMatrix, PfaffianRelation, PfaffianResidual, StructureResidual,
};
pub use sources::{ConstantFrames, Extended, GaugeShifted, LiftFrames, NullRotated, Rescaled};

use alloc::vec::Vec;

use crate::ambient::AmbientForm;
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Projective frame `{A_0, …, A_{n+1}}` stored as matrix rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MovingFrame {
    n: usize,
    rows: Mat,
    /// Base parameter of the frame.
    pub u: Vec<f64>,
}

impl MovingFrame {
    pub fn from_rows(n: usize, rows: Mat, u: Vec<f64>) -> Result<Self> {
        if rows.nrows() != n + 2 || rows.ncols() != n + 2 {
            return Err(Error::Shape { expected: n + 2, found: rows.nrows() });
        }
        Ok(Self { n, rows, u })
    }

    pub fn from_vectors(n: usize, vectors: &[Vec<f64>], u: Vec<f64>) -> Result<Self> {
        if vectors.len() != n + 2 || vectors.iter().any(|v| v.len() != n + 2) {
            return Err(Error::Shape { expected: n + 2, found: vectors.len() });
        }
        Self::from_rows(n, linalg::rows_to_mat(vectors), u)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.rows
    }

    pub fn vector(&self, xi: usize) -> Vec<f64> {
        self.rows.row(xi).iter().copied().collect()
    }

    /// Matrix of scalar products `(A_ξ, A_η)`.
    pub fn gram(&self, form: &AmbientForm) -> Mat {
        &self.rows * form.matrix() * self.rows.transpose()
    }

    /// Largest deviation of the Gram matrix from the standard pattern.
    pub fn gram_deviation(&self, form: &AmbientForm) -> f64 {
        linalg::mat_max_abs(&(self.gram(form) - form.matrix()))
    }

    /// Frame transformed by `T`: `Â_ξ = T_ξ^η A_η`.
    pub fn transformed(&self, t: &Mat) -> Self {
        Self { n: self.n, rows: t * &self.rows, u: self.u.clone() }
    }

    /// Gauge shift `Â_n = A_n + s A_0`, completed so the Gram pattern holds
    /// (`Â_{n+1} = A_{n+1} + s A_n + s²/2 A_0`).
    pub fn gauge_shift(&self, s: f64) -> Self {
        let mut t = alloc::vec![0.0; self.n];
        t[self.n - 1] = s;
        self.transformed(&origin_rotation(self.n, &t))
    }

    /// Renormalization `A_0 → c A_0`, `A_{n+1} → A_{n+1}/c`.
    pub fn rescaled(&self, c: f64) -> Self {
        let mut rows = self.rows.clone();
        rows.row_mut(0).scale_mut(c);
        rows.row_mut(self.n + 1).scale_mut(1.0 / c);
        Self { n: self.n, rows, u: self.u.clone() }
    }

    /// Flips vectors whose overlap with `reference` is negative. `A_0` and
    /// `A_{n+1}` flip together to keep `(A_0, A_{n+1}) = -1`. Returns the
    /// smallest absolute cosine between matched vectors.
    pub fn align_to(&mut self, reference: &MovingFrame) -> f64 {
        let n = self.n;
        let cos = |a: &Self, b: &Self, k: usize| {
            let (x, y) = (a.rows.row(k), b.rows.row(k));
            x.dot(&y) / (x.norm() * y.norm()).max(1e-300)
        };
        let mut min_overlap = f64::INFINITY;
        let c0 = cos(self, reference, 0);
        let cinf = cos(self, reference, n + 1);
        min_overlap = min_overlap.min(c0.abs()).min(cinf.abs());
        if c0 < 0.0 {
            self.rows.row_mut(0).neg_mut();
            self.rows.row_mut(n + 1).neg_mut();
        }
        for k in 1..=n {
            let c = cos(self, reference, k);
            min_overlap = min_overlap.min(c.abs());
            if c < 0.0 {
                self.rows.row_mut(k).neg_mut();
            }
        }
        min_overlap
    }
}

/// Null rotation about `A_0` with parameters `t_1 … t_n`:
/// `Â_k = A_k + t_k A_0`, `Â_{n+1} = A_{n+1} + t_k A_k + |t|²/2 A_0`.
/// These form the abelian fiber group acting on frames with fixed `A_0`.
pub fn origin_rotation(n: usize, t: &[f64]) -> Mat {
    debug_assert_eq!(t.len(), n);
    let mut m = Mat::identity(n + 2, n + 2);
    let half_sq = 0.5 * linalg::dot(t, t);
    for k in 1..=n {
        m[(k, 0)] = t[k - 1];
        m[(n + 1, k)] = t[k - 1];
    }
    m[(n + 1, 0)] = half_sq;
    m
}

/// Partial derivative of [`origin_rotation`] with respect to `t_k` (1-based `k`).
pub fn origin_rotation_derivative(n: usize, t: &[f64], k: usize) -> Mat {
    let mut m = Mat::zeros(n + 2, n + 2);
    m[(k, 0)] = 1.0;
    m[(n + 1, k)] = 1.0;
    m[(n + 1, 0)] = t[k - 1];
    m
}

/// Null rotation about `A_{n+1}`:
/// `Â_0 = A_0 + t_k A_k + |t|²/2 A_{n+1}`, `Â_k = A_k + t_k A_{n+1}`.
pub fn infinity_rotation(n: usize, t: &[f64]) -> Mat {
    debug_assert_eq!(t.len(), n);
    let mut m = Mat::identity(n + 2, n + 2);
    for k in 1..=n {
        m[(0, k)] = t[k - 1];
        m[(k, n + 1)] = t[k - 1];
    }
    m[(0, n + 1)] = 0.5 * linalg::dot(t, t);
    m
}

/// A smooth assignment `u ↦ frame`, the input of every finite-difference
/// operation.
pub trait FrameSource: Sync {
    /// Conformal dimension `n`; frames have `n+2` vectors.
    fn n(&self) -> usize;
    /// Number of parameters.
    fn param_dim(&self) -> usize;
    fn frame(&self, u: &[f64]) -> Result<MovingFrame>;
}

impl<T: FrameSource + ?Sized> FrameSource for &T {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        (**self).frame(u)
    }
}

impl<T: FrameSource + ?Sized> FrameSource for alloc::boxed::Box<T> {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn frame(&self, u: &[f64]) -> Result<MovingFrame> {
        (**self).frame(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn random_frame(n: usize) -> MovingFrame {
        let rows = Mat::identity(n + 2, n + 2);
        let f = MovingFrame::from_rows(n, rows, vec![]).unwrap();
        f.transformed(&origin_rotation(n, &vec![0.3; n])).transformed(&infinity_rotation(n, &vec![-0.2; n]))
    }

    #[test]
    fn null_rotations_preserve_gram() {
        for n in 2..6 {
            let form = AmbientForm::new(n).unwrap();
            let f = random_frame(n);
            assert!(f.gram_deviation(&form) < 1e-14);
            assert!(f.gauge_shift(0.7).gram_deviation(&form) < 1e-14);
            assert!(f.rescaled(2.5).gram_deviation(&form) < 1e-14);
        }
    }

    #[test]
    fn gauge_shift_moves_only_the_generator_pair() {
        let f = random_frame(3);
        let g = f.gauge_shift(0.37);
        let expected: Vec<f64> = (0..5).map(|k| f.matrix()[(3, k)] + 0.37 * f.matrix()[(0, k)]).collect();
        assert_eq!(g.vector(3), expected);
        assert_eq!(g.vector(0), f.vector(0));
        assert_eq!(g.vector(1), f.vector(1));
        assert_eq!(f.gauge_shift(0.0), f);
    }

    #[test]
    fn alignment_flips_paired_vectors() {
        let f = random_frame(3);
        let mut g = f.clone();
        let mut rows = g.matrix().clone();
        rows.row_mut(0).neg_mut();
        rows.row_mut(4).neg_mut();
        rows.row_mut(2).neg_mut();
        g = MovingFrame::from_rows(3, rows, vec![]).unwrap();
        let overlap = g.align_to(&f);
        assert!(overlap > 0.99);
        assert_eq!(g, f);
    }
}
