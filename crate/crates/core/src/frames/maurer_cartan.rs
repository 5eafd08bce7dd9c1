use alloc::vec::Vec;

use super::{Chart, MovingFrame};
use crate::linalg::{self, Mat};
use crate::{Error, Result};

/// Values `ω_ξ^η(∂/∂u^a)` of the Maurer–Cartan forms, one matrix per
/// coordinate direction, row `ξ` and column `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    pub n: usize,
    pub dirs: Vec<Mat>,
    /// Relative residual of the linear solves `dF = W F`.
    pub solve_residual: f64,
}

impl ConnectionMatrix {
    pub fn zero(n: usize, dim: usize) -> Self {
        Self { n, dirs: (0..dim).map(|_| Mat::zeros(n + 2, n + 2)).collect(), solve_residual: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    /// `ω_ξ^η(e_a)`.
    pub fn get(&self, a: usize, xi: usize, eta: usize) -> f64 {
        self.dirs[a][(xi, eta)]
    }

    /// The 1-form `ω_ξ^η` as its values on the coordinate directions.
    pub fn form(&self, xi: usize, eta: usize) -> Vec<f64> {
        self.dirs.iter().map(|m| m[(xi, eta)]).collect()
    }

    /// Matrix `M[i][a] = ω_{xi(i)}^{eta(i)}(e_a)` for lists of index pairs.
    pub fn block(&self, pairs: &[(usize, usize)]) -> Mat {
        Mat::from_fn(pairs.len(), self.dim(), |i, a| self.get(a, pairs[i].0, pairs[i].1))
    }
}

/// Solves `dF_a = W_a F` for each direction.
pub(crate) fn connection_from_derivatives(frame: &MovingFrame, derivatives: &[Mat]) -> Result<ConnectionMatrix> {
    let f = frame.matrix();
    let lu = f.transpose().lu();
    let det = lu.determinant();
    if !(det.abs() > 1e-14) {
        return Err(Error::FrameDegenerate { deviation: det });
    }
    let mut dirs = Vec::with_capacity(derivatives.len());
    let mut residual: f64 = 0.0;
    for df in derivatives {
        let w_t = lu.solve(&df.transpose()).ok_or(Error::FrameDegenerate { deviation: det })?;
        let w = w_t.transpose();
        let scale = linalg::mat_max_abs(df).max(1e-300);
        residual = residual.max(linalg::mat_max_abs(&(&w * f - df)) / scale);
        dirs.push(w);
    }
    Ok(ConnectionMatrix { n: frame.n(), dirs, solve_residual: residual })
}

/// Maurer–Cartan forms at a lattice offset of the chart.
pub fn maurer_cartan(chart: &Chart<'_>, k: &[i32]) -> Result<ConnectionMatrix> {
    chart.omega(k)
}

/// `dω(e_a, e_b) = ∂_a ω(e_b) − ∂_b ω(e_a)` for every entry of the frame
/// connection at offset `k`.
pub fn exterior_derivative(chart: &Chart<'_>, k: &[i32], a: usize, b: usize) -> Result<Mat> {
    let size = chart.n() + 2;
    let da = chart.derivative(k, a, |p| Ok(chart.omega(p)?.dirs[b].iter().copied().collect()))?;
    let db = chart.derivative(k, b, |p| Ok(chart.omega(p)?.dirs[a].iter().copied().collect()))?;
    let da = Mat::from_column_slice(size, size, &da);
    let db = Mat::from_column_slice(size, size, &db);
    Ok(da - db)
}

/// Gauge transformation of connection values: for `Â = T A`,
/// `ω̂(X) = (X(T) + T ω(X)) T⁻¹`.
pub fn transform_connection(w: &Mat, t: &Mat, dt: &Mat) -> Result<Mat> {
    let t_inv = t.clone().try_inverse().ok_or(Error::FrameDegenerate { deviation: 0.0 })?;
    Ok((dt + t * w) * t_inv)
}

/// Relations of the Pfaffian system satisfied by an adapted frame with
/// identity tangent metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PfaffianRelation {
    /// `ω_0^{n+1} = 0`
    ZeroToInfinity,
    /// `ω_{n+1}^0 = 0`
    InfinityToZero,
    /// `ω_0^0 + ω_{n+1}^{n+1} = 0`
    Dilation,
    /// `ω_i^{n+1} = ω_0^i`
    TangentInfinity,
    /// `ω_i^0 = ω_{n+1}^i`
    TangentZero,
    /// `ω_n^{n+1} = ω_0^n`
    NormalInfinity,
    /// `ω_n^0 = ω_{n+1}^n`
    NormalZero,
    /// `ω_n^i + ω_i^n = 0`
    NormalTangent,
    /// `ω_n^n = 0`
    NormalNormal,
    /// `ω_i^j + ω_j^i = 0`, the `dg_ij = 0` relation
    Metric,
}

impl PfaffianRelation {
    pub const ALL: [PfaffianRelation; 10] = [
        Self::ZeroToInfinity,
        Self::InfinityToZero,
        Self::Dilation,
        Self::TangentInfinity,
        Self::TangentZero,
        Self::NormalInfinity,
        Self::NormalZero,
        Self::NormalTangent,
        Self::NormalNormal,
        Self::Metric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ZeroToInfinity => "omega_0^{n+1}",
            Self::InfinityToZero => "omega_{n+1}^0",
            Self::Dilation => "omega_0^0+omega_{n+1}^{n+1}",
            Self::TangentInfinity => "omega_i^{n+1}-omega_0^i",
            Self::TangentZero => "omega_i^0-omega_{n+1}^i",
            Self::NormalInfinity => "omega_n^{n+1}-omega_0^n",
            Self::NormalZero => "omega_n^0-omega_{n+1}^n",
            Self::NormalTangent => "omega_n^i+omega_i^n",
            Self::NormalNormal => "omega_n^n",
            Self::Metric => "omega_i^j+omega_j^i",
        }
    }
}

/// Max-abs residual per Pfaffian relation over all directions.
#[derive(Debug, Clone, PartialEq)]
pub struct PfaffianResidual {
    pub entries: Vec<(PfaffianRelation, f64)>,
}

impl PfaffianResidual {
    pub fn get(&self, rel: PfaffianRelation) -> f64 {
        self.entries.iter().find(|(r, _)| *r == rel).map_or(0.0, |e| e.1)
    }

    pub fn max(&self) -> f64 {
        linalg::max_abs(self.entries.iter().map(|e| e.1))
    }
}

pub fn pfaffian_residual(w: &ConnectionMatrix) -> PfaffianResidual {
    let n = w.n;
    let inf = n + 1;
    let entries = PfaffianRelation::ALL
        .iter()
        .map(|&rel| {
            let mut worst: f64 = 0.0;
            for m in &w.dirs {
                let mut upd = |v: f64| worst = worst.max(v.abs());
                match rel {
                    PfaffianRelation::ZeroToInfinity => upd(m[(0, inf)]),
                    PfaffianRelation::InfinityToZero => upd(m[(inf, 0)]),
                    PfaffianRelation::Dilation => upd(m[(0, 0)] + m[(inf, inf)]),
                    PfaffianRelation::TangentInfinity => (1..n).for_each(|i| upd(m[(i, inf)] - m[(0, i)])),
                    PfaffianRelation::TangentZero => (1..n).for_each(|i| upd(m[(i, 0)] - m[(inf, i)])),
                    PfaffianRelation::NormalInfinity => upd(m[(n, inf)] - m[(0, n)]),
                    PfaffianRelation::NormalZero => upd(m[(n, 0)] - m[(inf, n)]),
                    PfaffianRelation::NormalTangent => (1..n).for_each(|i| upd(m[(n, i)] + m[(i, n)])),
                    PfaffianRelation::NormalNormal => upd(m[(n, n)]),
                    PfaffianRelation::Metric => {
                        for i in 1..n {
                            for j in 1..n {
                                upd(m[(i, j)] + m[(j, i)]);
                            }
                        }
                    }
                }
            }
            (rel, worst)
        })
        .collect();
    PfaffianResidual { entries }
}

/// Deviation from `dω = ω ∧ ω` on one coordinate plane.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureResidual {
    /// Per-entry deviation `dω_ξ^η(e_a,e_b) − (ω_ξ^ζ ∧ ω_ζ^η)(e_a,e_b)`.
    pub deviation: Mat,
    pub max: f64,
    /// The three coframe rows `dω_n^0`, `dω_n^i`, `dω_n^{n+1}` in their
    /// reduced form (terms vanishing by the Pfaffian system dropped).
    pub coframe_rows: [f64; 3],
}

pub fn structure_residual(chart: &Chart<'_>, k: &[i32], a: usize, b: usize) -> Result<StructureResidual> {
    let n = chart.n();
    let inf = n + 1;
    let dw = exterior_derivative(chart, k, a, b)?;
    let w = chart.omega(k)?;
    let (wa, wb) = (&w.dirs[a], &w.dirs[b]);
    let deviation = &dw - (wa * wb - wb * wa);
    let max = linalg::mat_max_abs(&deviation);

    let wedge = |x: (usize, usize), y: (usize, usize)| wa[x] * wb[y] - wb[x] * wa[y];
    let mut rows = [0.0f64; 3];
    let r0 = dw[(n, 0)] - wedge((n, 0), (0, 0)) - (1..n).map(|i| wedge((n, i), (i, 0))).sum::<f64>();
    rows[0] = r0.abs();
    for i in 1..n {
        let ri = dw[(n, i)]
            - wedge((n, 0), (0, i))
            - (1..n).map(|j| wedge((n, j), (j, i))).sum::<f64>()
            - wedge((n, inf), (inf, i));
        rows[1] = rows[1].max(ri.abs());
    }
    let r2 = dw[(n, inf)] - (1..n).map(|i| wedge((n, i), (i, inf))).sum::<f64>() - wedge((n, inf), (inf, inf));
    rows[2] = r2.abs();
    Ok(StructureResidual { deviation, max, coframe_rows: rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_connection_has_zero_pfaffian_residual() {
        let r = pfaffian_residual(&ConnectionMatrix::zero(3, 2));
        assert_eq!(r.max(), 0.0);
        assert_eq!(r.entries.len(), PfaffianRelation::ALL.len());
    }

    #[test]
    fn violation_is_read_out_directly() {
        let mut w = ConnectionMatrix::zero(3, 2);
        w.dirs[1][(3, 3)] = 0.1;
        let r = pfaffian_residual(&w);
        assert_eq!(r.get(PfaffianRelation::NormalNormal), 0.1);
        assert_eq!(r.get(PfaffianRelation::Metric), 0.0);
    }

    #[test]
    fn identity_transformation_keeps_connection() {
        let w = Mat::from_fn(4, 4, |i, j| (i as f64) - 2.0 * j as f64);
        let t = Mat::identity(4, 4);
        let out = transform_connection(&w, &t, &Mat::zeros(4, 4)).unwrap();
        assert_eq!(out, w);
    }
}
