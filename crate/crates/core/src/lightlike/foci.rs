use alloc::vec;
use alloc::vec::Vec;

use super::second_order::{first_order, lambda_at};
use crate::ambient::{AmbientForm, CausalClass};
use crate::frames::{Chart, FrameField, MovingFrame};
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// `|s_derivative|` above `TAU_FOLD · (1+|s|)` labels a fold.
pub const TAU_FOLD: f64 = 1e-3;
/// `|s_derivative|` below `TAU_CONIC · (1+|s|)` labels a conic point.
pub const TAU_CONIC: f64 = 1e-5;
/// Sign relating pencil roots to classical principal curvatures in the
/// `E_∞` gauge: `s_h = ROOT_CURVATURE_SIGN · κ_h`, with `κ_h` taken w.r.t. the
/// normal `N` satisfying `det[f_1 … f_{n-1}, N] > 0`. Calibrated on the unit
/// sphere (outward normal, `κ = −1`, root `−1`).
pub const ROOT_CURVATURE_SIGN: f64 = 1.0;

/// Multiplicity grouping gap.
pub fn tau_mult(s: f64) -> f64 {
    1e-6 * (1.0 + s.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FocusLabel {
    Fold,
    Conic,
    Unresolved,
}

impl FocusLabel {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fold => "fold",
            Self::Conic => "conic",
            Self::Unresolved => "unresolved",
        }
    }
}

/// One focus `B_h = A_n + s_h A_0` of a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Focus {
    pub s: f64,
    pub multiplicity: usize,
    pub point: Vec<f64>,
    /// Orthonormal principal directions in the tangent frame `A_1 … A_{n−1}`.
    pub directions: Vec<Vec<f64>>,
    pub label: Option<FocusLabel>,
    /// `s_hh = D_X s_h + s_h ω_0^0(X) + ω_n^0(X)` along the principal
    /// direction `X` (simple roots).
    pub s_derivative: Option<f64>,
    /// Root gap below `10 τ_mult`; classification suppressed.
    pub near_umbilic: bool,
    /// `max |ds_0 + s_0 ω_0^0 + ω_n^0|` along the eigenspace (multiple roots).
    pub cluster_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocusSet {
    pub foci: Vec<Focus>,
    /// All `n−1` roots, ascending, repeated by multiplicity.
    pub roots: Vec<f64>,
}

impl FocusSet {
    pub fn labels(&self) -> Vec<Option<FocusLabel>> {
        self.foci.iter().map(|f| f.label).collect()
    }
}

/// Roots of `det(λ − s g) = 0` by congruence to a standard symmetric
/// eigenproblem, grouped into foci.
pub fn foci(lambda: &Mat, g: &Mat, frame: &MovingFrame) -> Result<FocusSet> {
    let m = lambda.nrows();
    let chol = g.clone().cholesky().ok_or(Error::Precondition("metric must be positive definite"))?;
    let l_inv = chol.l().try_inverse().ok_or(Error::Precondition("metric must be positive definite"))?;
    let reduced = &l_inv * lambda * l_inv.transpose();
    let (roots, vecs) = linalg::sym_eigen(&reduced);
    let dirs = l_inv.transpose() * vecs;
    let n = frame.n();
    let a0 = frame.vector(0);
    let an = frame.vector(n);
    let mut out = Vec::new();
    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && roots[end] - roots[end - 1] < tau_mult(roots[end - 1]) {
            end += 1;
        }
        let s = roots[start..end].iter().sum::<f64>() / (end - start) as f64;
        let point = an.iter().zip(&a0).map(|(x, y)| x + s * y).collect();
        let directions = (start..end).map(|k| dirs.column(k).iter().copied().collect()).collect();
        let gap = |j: usize| -> f64 {
            let mut best = f64::INFINITY;
            if j > 0 {
                best = best.min(roots[j] - roots[j - 1]);
            }
            if j + 1 < m {
                best = best.min(roots[j + 1] - roots[j]);
            }
            best
        };
        let near_umbilic = end - start == 1 && gap(start) < 10.0 * tau_mult(s);
        out.push(Focus {
            s,
            multiplicity: end - start,
            point,
            directions,
            label: None,
            s_derivative: None,
            near_umbilic,
            cluster_residual: None,
        });
        start = end;
    }
    Ok(FocusSet { foci: out, roots })
}

/// Root field at a lattice offset continuing the focus whose principal
/// directions at the center are the columns of `basis`.
fn tracked_root(chart: &Chart<'_>, p: &[i32], basis: &Mat) -> Result<f64> {
    let lambda = lambda_at(chart, p)?;
    let (roots, vecs) = linalg::sym_eigen(&((&lambda + lambda.transpose()) * 0.5));
    let m = basis.ncols();
    if m == 1 {
        let v = basis.column(0);
        let (j, overlap) = (0..roots.len())
            .map(|j| (j, vecs.column(j).dot(&v).abs()))
            .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
        if overlap < 0.7 {
            return Err(Error::Tracking { overlap });
        }
        let s = roots[j];
        let collides = (0..roots.len()).any(|i| i != j && (roots[i] - s).abs() < tau_mult(s));
        if collides {
            return Err(Error::MultiplicityChange);
        }
        Ok(s)
    } else {
        let mut weights: Vec<(usize, f64)> =
            (0..roots.len()).map(|j| (j, (basis.transpose() * vecs.column(j)).norm_squared())).collect();
        weights.sort_by(|a, b| b.1.total_cmp(&a.1));
        Ok(weights[..m].iter().map(|&(j, _)| roots[j]).sum::<f64>() / m as f64)
    }
}

/// Labels each focus fold / conic / unresolved from the derivative of its
/// root along its principal direction.
pub fn classify_foci(chart: &Chart<'_>, set: &mut FocusSet) -> Result<()> {
    let k = chart.origin();
    let w = chart.omega(&k)?;
    let fo = first_order(&w);
    let p_inv = fo.omega0.clone().try_inverse().ok_or(Error::Conditioning { condition: f64::INFINITY })?;
    for focus in &mut set.foci {
        let basis = linalg::rows_to_mat(&focus.directions).transpose();
        // Gauge-corrected derivative along X with ω_0(X) = v.
        let grad = chart.gradient(&k, |p| tracked_root(chart, p, &basis))?;
        let along = |v: &[f64]| -> f64 {
            let x = &p_inv * linalg::Vector::from_column_slice(v);
            let ds: f64 = grad.iter().zip(x.iter()).map(|(g, xa)| g * xa).sum();
            let w00: f64 = fo.omega00.iter().zip(x.iter()).map(|(g, xa)| g * xa).sum();
            let wn0: f64 = fo.omega_n0.iter().zip(x.iter()).map(|(g, xa)| g * xa).sum();
            ds + focus.s * w00 + wn0
        };
        if focus.multiplicity >= 2 {
            focus.cluster_residual = Some(linalg::max_abs(focus.directions.iter().map(|v| along(v))));
            focus.label = Some(FocusLabel::Conic);
            continue;
        }
        let sd = along(&focus.directions[0]);
        focus.s_derivative = Some(sd);
        if focus.near_umbilic {
            continue;
        }
        let scale = 1.0 + focus.s.abs();
        focus.label = Some(if sd.abs() > TAU_FOLD * scale {
            FocusLabel::Fold
        } else if sd.abs() < TAU_CONIC * scale {
            FocusLabel::Conic
        } else {
            FocusLabel::Unresolved
        });
    }
    Ok(())
}

/// Sampled focal manifold of one focus with local rank and causal data.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalSample {
    pub nodes: Vec<usize>,
    /// Normalized `B_h` per node; `None` marks a gap.
    pub points: Vec<Option<Vec<f64>>>,
    /// Rank of the differential of `u ↦ B_h(u)` (projective).
    pub ranks: Vec<Option<usize>>,
    pub causal: Vec<Option<CausalClass>>,
}

impl FocalSample {
    /// Most frequent rank over the sampled nodes.
    pub fn dominant_rank(&self) -> Option<usize> {
        let mut counts = vec![0usize; 16];
        for r in self.ranks.iter().flatten() {
            if *r < counts.len() {
                counts[*r] += 1;
            }
        }
        let (best, count) = counts.iter().enumerate().max_by_key(|&(_, c)| *c)?;
        (*count > 0).then_some(best)
    }
}

fn focal_point_data(chart: &Chart<'_>, h: usize, form: &AmbientForm) -> Result<(Vec<f64>, usize, CausalClass)> {
    let k = chart.origin();
    let frame = chart.frame(&k)?;
    let lambda = lambda_at(chart, &k)?;
    let set = foci(&((&lambda + lambda.transpose()) * 0.5), &Mat::identity(lambda.nrows(), lambda.nrows()), &frame)?;
    let focus = set.foci.get(h).ok_or(Error::Precondition("focus index out of range"))?;
    let basis = linalg::rows_to_mat(&focus.directions).transpose();
    let n = chart.n();
    let b_at = |p: &[i32]| -> Result<Vec<f64>> {
        let s = tracked_root(chart, p, &basis)?;
        let f = chart.frame(p)?;
        Ok((0..n + 2).map(|c| f.matrix()[(n, c)] + s * f.matrix()[(0, c)]).collect())
    };
    let b = b_at(&k)?;
    let mut rows = vec![b.clone()];
    for a in 0..chart.dim() {
        rows.push(chart.derivative(&k, a, &b_at)?);
    }
    let rank = linalg::linear_rank(&rows, 1e-5).saturating_sub(1);
    // Restricted form on the projective tangent space span{B, ∂B}.
    let m = linalg::rows_to_mat(&rows).transpose();
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested u");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let basis_vecs: Vec<Vec<f64>> = (0..svd.singular_values.len())
        .filter(|&c| svd.singular_values[c] > 1e-5 * top)
        .map(|c| u.column(c).iter().copied().collect())
        .collect();
    let gram = Mat::from_fn(basis_vecs.len(), basis_vecs.len(), |i, j| form.dot(&basis_vecs[i], &basis_vecs[j]));
    let (eig, _) = linalg::sym_eigen(&gram);
    let tol = 1e-6 * linalg::max_abs(eig.iter().copied()).max(1e-300);
    let causal = if eig.iter().all(|&e| e > tol) {
        CausalClass::Spacelike
    } else if eig.iter().any(|&e| e < -tol) {
        CausalClass::Timelike
    } else {
        CausalClass::Lightlike
    };
    Ok((linalg::projective_normalize(&b)?, rank, causal))
}

/// Samples the focal manifold of focus `h` (index into the ascending focus
/// list) over the given nodes.
pub fn focal_manifold_sample(field: &FrameField<'_>, h: usize, nodes: &[usize]) -> FocalSample {
    let mut points = Vec::with_capacity(nodes.len());
    let mut ranks = Vec::with_capacity(nodes.len());
    let mut causal = Vec::with_capacity(nodes.len());
    let form = AmbientForm::new(field.source().n()).ok();
    for &node in nodes {
        let res = match (&form, field.chart(node)) {
            (Some(form), Ok(chart)) => focal_point_data(&chart, h, form),
            (_, Err(e)) => Err(e),
            (None, _) => Err(Error::Dimension { n: field.source().n() }),
        };
        match res {
            Ok((p, r, c)) => {
                points.push(Some(p));
                ranks.push(Some(r));
                causal.push(Some(c));
            }
            Err(_) => {
                points.push(None);
                ranks.push(None);
                causal.push(None);
            }
        }
    }
    FocalSample { nodes: nodes.to_vec(), points, ranks, causal }
}
