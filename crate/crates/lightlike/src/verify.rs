//! Identity and residual suites over a configured grid.

use lightlike_core::ambient::ambient_curvature_check;
use lightlike_core::frames::{Chart, Extended};
use lightlike_core::lightlike::lift_euclidean;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{resolve, AnalysisConfig};
use crate::error::CliError;
use crate::sweep::{sweep_nodes, NodeOptions};

pub const VERIFY_SCHEMA: &str = "lightlike.verify/1";

/// Curvature is checked on every `CURVATURE_STRIDE`-th node.
const CURVATURE_STRIDE: usize = 37;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub evaluated: usize,
    pub max: f64,
    /// Base bound; order checks scale it per node by `(1 + curvature_scale)³`.
    pub bound: f64,
    /// Largest residual-to-bound ratio over the evaluated nodes.
    pub worst_ratio: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub family: String,
    pub nodes: usize,
    pub failed: usize,
    pub ambiguous: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// `values` yields `(residual, bound scale)` pairs.
fn check(name: &str, values: impl Iterator<Item = (f64, f64)>, bound: f64) -> Check {
    let mut evaluated = 0;
    let mut max: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for (v, scale) in values {
        evaluated += 1;
        let v = if v.is_nan() { f64::INFINITY } else { v };
        max = max.max(v);
        worst_ratio = worst_ratio.max(v / (bound * scale));
    }
    Check { name: name.into(), evaluated, max, bound, worst_ratio, passed: worst_ratio < 1.0 }
}

/// `A_n` closer than this to a focus leaves `λ⁻¹` numerically undefined.
const GAUGE_MARGIN: f64 = 1e-3;

/// Pfaffian, structure and apolarity residuals at every node, `ν + λ⁻¹` where
/// defined, and the ambient curvature identity on a node sample.
pub fn run_verify(config: &AnalysisConfig) -> Result<VerifyReport, CliError> {
    let resolved = resolve(config.clone())?;
    let fd = resolved.fd();
    let opts = NodeOptions { fd, foci: false, normalization: false };
    let nodes = sweep_nodes(&resolved, &opts);
    let h = resolved.config.fd_step;
    let order_bound = 10.0 * h * h;
    let tol = &resolved.config.tolerances;
    let scale = |n: &crate::sweep::NodeReport| (1.0 + n.residuals.curvature_scale.unwrap_or(0.0)).powi(3);
    let mut checks = vec![
        check("pfaffian", nodes.iter().filter_map(|n| Some((n.residuals.pfaffian?, scale(n)))), order_bound),
        check("structure", nodes.iter().filter_map(|n| Some((n.residuals.structure?, scale(n)))), order_bound),
        check("apolarity", nodes.iter().filter_map(|n| Some((n.residuals.apolarity?, 1.0))), tol.apolarity),
        // λ⁻¹ amplifies truncation error in λ by ‖λ⁻¹‖², so the residual is
        // weighted by the squared gauge margin before the order bound applies.
        check(
            "nu_inverse_lambda",
            nodes.iter().filter_map(|n| {
                let margin = n.residuals.gauge_margin.filter(|&g| g >= GAUGE_MARGIN)?;
                Some((n.residuals.nu_consistency? * margin.min(1.0).powi(2), scale(n)))
            }),
            order_bound,
        ),
    ];
    let geometry = &resolved.geometry;
    if geometry.param_dim() + 1 == geometry.n {
        let lift = lift_euclidean(&*geometry.immersion);
        let ext = Extended { inner: &lift };
        let sample: Vec<(f64, f64)> = nodes
            .par_iter()
            .filter(|n| n.index % CURVATURE_STRIDE == 0 && n.maximal.is_some())
            .filter_map(|n| {
                let mut u = n.u.clone();
                u.extend([0.0, 0.0]);
                let chart = Chart::new(&ext, &u, fd);
                let c = ambient_curvature_check(&chart, &chart.origin()).ok()?;
                Some((c.max_deviation, c.ricci_deviation))
            })
            .collect();
        let bound = 1e-4;
        checks.push(check("curvature", sample.iter().map(|s| (s.0, 1.0)), bound));
        checks.push(check("ricci", sample.iter().map(|s| (s.1, 1.0)), bound));
    }
    let failed = nodes.iter().filter(|n| n.branch == crate::sweep::Branch::Failed).count();
    let ambiguous = nodes.iter().filter(|n| n.branch == crate::sweep::Branch::Ambiguous).count();
    let fraction_ok = nodes.is_empty() || (failed as f64 / nodes.len() as f64) <= tol.failure_fraction;
    let passed = fraction_ok && checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        schema: VERIFY_SCHEMA.into(),
        family: resolved.config.family.clone(),
        nodes: nodes.len(),
        failed,
        ambiguous,
        checks,
        passed,
    })
}
