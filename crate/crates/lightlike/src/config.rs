//! Analysis configuration: JSON in, validated and defaulted.

use std::collections::BTreeMap;

use lightlike_core::frames::{FdScheme, GridAxis};
use lightlike_core::lightlike::{TAU_APOLAR, TAU_CONIC, TAU_FOLD};
use serde::{Deserialize, Serialize};

use crate::catalog::{builtin_family, Geometry};
use crate::error::CliError;

pub const DEFAULT_RESOLUTION: usize = 32;
pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const MIN_RESOLUTION: usize = 5;
pub const FD_STEP_RANGE: (f64, f64) = (1e-7, 1e-2);

/// Per-axis overrides merged onto the family's default domain.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Fold threshold on `|s_derivative| / (1+|s|)`.
    pub fold: f64,
    /// Conic threshold on `|s_derivative| / (1+|s|)`.
    pub conic: f64,
    pub apolarity: f64,
    /// Largest fraction of failed nodes before `analyze` exits with code 2.
    pub failure_fraction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { fold: TAU_FOLD, conic: TAU_CONIC, apolarity: TAU_APOLAR, failure_fraction: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub report: bool,
    pub eigenfields: bool,
    pub meshes: bool,
    /// Gauge values `s` of the `U^n` slices `A_n + s A_0` written as meshes.
    pub slices: Vec<f64>,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { report: true, eigenfields: true, meshes: false, slices: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub grid: Vec<AxisSpec>,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    /// Richardson extrapolation levels on top of central differences.
    #[serde(default)]
    pub richardson: u32,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: Outputs,
    /// Compute the invariant normalization (third-order data) per node.
    #[serde(default)]
    pub normalization: bool,
    #[serde(default)]
    pub seed: u64,
    /// Nodes sampled for the seeded gauge-invariance property check.
    #[serde(default = "default_property_samples")]
    pub property_samples: usize,
}

fn default_fd_step() -> f64 {
    DEFAULT_FD_STEP
}

fn default_property_samples() -> usize {
    16
}

/// A configuration resolved against the catalog.
pub struct Resolved {
    pub config: AnalysisConfig,
    pub geometry: Geometry,
    pub axes: Vec<GridAxis>,
}

impl Resolved {
    pub fn fd(&self) -> FdScheme {
        fd_scheme(&self.config)
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.resolution).product()
    }
}

pub fn fd_scheme(config: &AnalysisConfig) -> FdScheme {
    if config.richardson == 0 {
        FdScheme::central(config.fd_step)
    } else {
        FdScheme::richardson(config.fd_step, config.richardson)
    }
}

/// Parses JSON text; syntax errors carry line and column.
pub fn parse_config(text: &str) -> Result<AnalysisConfig, CliError> {
    let config: AnalysisConfig = serde_json::from_str(text).map_err(|e| {
        CliError::Validation(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    resolve(config.clone())?;
    Ok(config)
}

/// Validates every constraint and builds the geometry and grid.
pub fn resolve(mut config: AnalysisConfig) -> Result<Resolved, CliError> {
    let (lo, hi) = FD_STEP_RANGE;
    if !(config.fd_step >= lo && config.fd_step <= hi) {
        return Err(CliError::Validation(format!("fd_step: {} outside [{lo:e}, {hi:e}]", config.fd_step)));
    }
    if config.richardson > 3 {
        return Err(CliError::Validation(format!("richardson: {} levels (at most 3)", config.richardson)));
    }
    let t = &config.tolerances;
    for (name, v) in [("fold", t.fold), ("conic", t.conic), ("apolarity", t.apolarity)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Validation(format!("tolerances.{name}: must be positive, got {v}")));
        }
    }
    if t.conic >= t.fold {
        return Err(CliError::Validation(format!("tolerances.conic: {} must be below tolerances.fold {}", t.conic, t.fold)));
    }
    if !(0.0..=1.0).contains(&t.failure_fraction) {
        return Err(CliError::Validation(format!("tolerances.failure_fraction: {} outside [0, 1]", t.failure_fraction)));
    }
    if let Some(s) = config.outputs.slices.iter().find(|s| !s.is_finite()) {
        return Err(CliError::Validation(format!("outputs.slices: non-finite value {s}")));
    }
    let geometry = builtin_family(&config.family, &config.params, config.n)?;
    config.n = Some(geometry.n);
    let d = geometry.param_dim();
    if !config.grid.is_empty() && config.grid.len() != d {
        return Err(CliError::Validation(format!(
            "grid: family '{}' has {d} parameter axes, got {} entries",
            config.family,
            config.grid.len()
        )));
    }
    let mut axes = Vec::with_capacity(d);
    for (i, base) in geometry.axes.iter().enumerate() {
        let spec = config.grid.get(i).cloned().unwrap_or_default();
        let axis = GridAxis {
            min: spec.min.unwrap_or(base.min),
            max: spec.max.unwrap_or(base.max),
            resolution: spec.resolution.unwrap_or(DEFAULT_RESOLUTION),
            periodic: spec.periodic.unwrap_or(base.periodic),
        };
        if axis.resolution < MIN_RESOLUTION {
            return Err(CliError::Validation(format!(
                "grid[{i}].resolution: {} below the minimum {MIN_RESOLUTION}",
                axis.resolution
            )));
        }
        if !(axis.min.is_finite() && axis.max.is_finite() && axis.min < axis.max) {
            return Err(CliError::Validation(format!("grid[{i}]: need finite min < max, got [{}, {}]", axis.min, axis.max)));
        }
        axes.push(axis);
    }
    Ok(Resolved { config, geometry, axes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn validation(text: &str) -> String {
        match parse_config(text) {
            Err(CliError::Validation(m)) => m,
            other => panic!("expected a validation error, got {:?}", other.map(|c| c.family)),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(r#"{"family": "sphere", "n": 3}"#).unwrap();
        let r = resolve(c).unwrap();
        assert_eq!(r.config.fd_step, 1e-4);
        assert_eq!(r.axes.len(), 2);
        assert!(r.axes.iter().all(|a| a.resolution == 32));
        assert_eq!(r.node_count(), 32 * 32);
        assert!(r.config.outputs.report);
    }

    #[test]
    fn constraint_violations_name_the_field() {
        assert!(validation(r#"{"family": "torus", "grid": [{"resolution": 2}, {}]}"#).contains("grid[0].resolution"));
        assert!(validation(r#"{"family": "torus", "fd_step": 0.5}"#).contains("fd_step"));
        let m = validation(r#"{"family": "moebius"}"#);
        assert!(m.contains("family") && m.contains("ellipsoid") && m.contains("r_sphere"));
        assert!(validation(r#"{"family": "torus", "params": {"R": 1, "r": 1.5}}"#).contains("params.r"));
        assert!(validation(r#"{"family": "torus", "grid": [{}]}"#).contains("grid"));
    }

    #[test]
    fn unknown_keys_and_syntax_errors() {
        assert!(validation(r#"{"family": "torus", "colour": "red"}"#).contains("colour"));
        assert!(validation(r#"{"family": "torus", "tolerances": {"fol": 1}}"#).contains("fol"));
        let m = validation("{\"family\": \"torus\",\n  \"n\": }");
        assert!(m.starts_with("line 2"), "{m}");
    }
}
