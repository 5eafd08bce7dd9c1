//! Built-in geometry families.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use lightlike_core::frames::GridAxis;
use lightlike_core::surfaces::{
    Cylinder, Ellipsoid, EuclideanImmersion, Graph, Helix, Mode, PerturbedEllipsoid, Plane, Point, Revolution, Sphere,
    SurfaceR4, Torus,
};

use crate::error::CliError;

/// One numeric family parameter with its admissible closed range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub min: f64,
    pub max: f64,
}

const fn p(name: &'static str, default: f64, min: f64, max: f64) -> ParamSpec {
    ParamSpec { name, default, min, max }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    /// Admissible conformal dimensions.
    pub n_min: usize,
    pub n_max: usize,
    pub default_n: usize,
}

const POS: f64 = 1e-3;
const BIG: f64 = 1e3;

pub const CATALOG: &[FamilyInfo] = &[
    FamilyInfo {
        name: "sphere",
        summary: "round hypersphere of R^n (umbilic; one focus of multiplicity n-1)",
        params: &[p("radius", 1.0, POS, BIG)],
        n_min: 3,
        n_max: 8,
        default_n: 3,
    },
    FamilyInfo {
        name: "ellipsoid",
        summary: "ellipsoid with semi-axes a, b, c",
        params: &[p("a", 1.0, POS, BIG), p("b", 2.0, POS, BIG), p("c", 3.0, POS, BIG)],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "torus",
        summary: "torus of revolution with radii R > r (a canal surface)",
        params: &[p("R", 2.0, POS, BIG), p("r", 1.0, POS, BIG)],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "revolution",
        summary: "surface of revolution with meridian (a + b cos t, c t), b < a",
        params: &[p("a", 2.0, POS, BIG), p("b", 0.5, POS, BIG), p("c", 0.3, -BIG, BIG)],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "cylinder",
        summary: "circular cylinder (one principal curvature zero)",
        params: &[p("radius", 1.0, POS, BIG)],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "plane",
        summary: "hyperplane x^n = 0 (umbilic, all foci at the hyperplane itself)",
        params: &[],
        n_min: 3,
        n_max: 8,
        default_n: 3,
    },
    FamilyInfo {
        name: "graph",
        summary: "graph z = sum c_ij x^i y^j over [-1,1]^2 (finite-difference derivatives)",
        params: &[
            p("c20", 0.5, -10.0, 10.0),
            p("c11", 0.2, -10.0, 10.0),
            p("c02", -0.3, -10.0, 10.0),
            p("c30", 0.1, -10.0, 10.0),
            p("c21", 0.0, -10.0, 10.0),
            p("c12", 0.0, -10.0, 10.0),
            p("c03", -0.05, -10.0, 10.0),
        ],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "perturbed_ellipsoid",
        summary: "ellipsoid with one radial mode amp cos(kt t + pt) cos(kp p + pp)",
        params: &[
            p("a", 1.0, POS, BIG),
            p("b", 2.0, POS, BIG),
            p("c", 3.0, POS, BIG),
            p("amplitude", 0.01, -0.2, 0.2),
            p("k_theta", 2.0, -8.0, 8.0),
            p("k_phi", 3.0, -8.0, 8.0),
            p("phase_theta", 0.3, -10.0, 10.0),
            p("phase_phi", 0.7, -10.0, 10.0),
        ],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "circle",
        summary: "round circle in a coordinate plane (reduced rank r = 1)",
        params: &[p("radius", 1.0, POS, BIG)],
        n_min: 3,
        n_max: 8,
        default_n: 3,
    },
    FamilyInfo {
        name: "helix",
        summary: "helix (a cos t, a sin t, b t), a non-planar curve (r = 1)",
        params: &[p("a", 1.0, POS, BIG), p("b", 0.5, -BIG, BIG)],
        n_min: 3,
        n_max: 3,
        default_n: 3,
    },
    FamilyInfo {
        name: "surface_r4",
        summary: "surface (u, v, alpha(u^2-v^2)/2 + gamma u^3, beta u v + delta v^3) in R^4 (r = 2)",
        params: &[
            p("alpha", 1.0, -10.0, 10.0),
            p("beta", 0.7, -10.0, 10.0),
            p("gamma", 0.3, -10.0, 10.0),
            p("delta", -0.2, -10.0, 10.0),
        ],
        n_min: 4,
        n_max: 4,
        default_n: 4,
    },
    FamilyInfo {
        name: "r_sphere",
        summary: "round r-sphere in R^n, 1 <= r <= n-2 (cone case for r >= 2)",
        params: &[p("radius", 1.0, POS, BIG), p("r", 2.0, 1.0, 6.0)],
        n_min: 3,
        n_max: 8,
        default_n: 4,
    },
    FamilyInfo {
        name: "point",
        summary: "a single point (r = 0, hyperplane case)",
        params: &[p("x", 0.0, -BIG, BIG)],
        n_min: 3,
        n_max: 8,
        default_n: 3,
    },
];

pub fn family_info(name: &str) -> Option<&'static FamilyInfo> {
    CATALOG.iter().find(|f| f.name == name)
}

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|f| f.name).collect()
}

/// A resolved family: the Euclidean immersion with its default domain.
pub struct Geometry {
    pub immersion: Box<dyn EuclideanImmersion>,
    pub n: usize,
    /// Default domain axes (resolution filled from the configuration).
    pub axes: Vec<GridAxis>,
    pub axis_names: Vec<String>,
}

impl Geometry {
    pub fn param_dim(&self) -> usize {
        self.immersion.param_dim()
    }
}

/// Polar angles stay clear of the coordinate singularities at the poles.
const POLE_MARGIN: f64 = 0.15;

fn polar() -> GridAxis {
    GridAxis::new(POLE_MARGIN, PI - POLE_MARGIN, 0)
}

fn azimuth() -> GridAxis {
    GridAxis::periodic(0.0, 2.0 * PI, 0)
}

fn hyperspherical(r: usize) -> (Vec<GridAxis>, Vec<String>) {
    if r == 1 {
        return (vec![azimuth()], vec!["t".into()]);
    }
    let mut axes: Vec<GridAxis> = (0..r - 1).map(|_| polar()).collect();
    axes.push(azimuth());
    let names = (0..r).map(|k| format!("angle{k}")).collect();
    (axes, names)
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Resolves parameters (defaults filled, ranges checked) and builds the
/// immersion.
pub fn builtin_family(name: &str, params: &BTreeMap<String, f64>, n: Option<usize>) -> Result<Geometry, CliError> {
    let info = family_info(name).ok_or_else(|| {
        CliError::Validation(format!("family: unknown family '{name}'; catalog: {}", catalog_names().join(", ")))
    })?;
    for key in params.keys() {
        if !info.params.iter().any(|s| s.name == key) {
            let known: Vec<&str> = info.params.iter().map(|s| s.name).collect();
            return Err(CliError::Validation(format!(
                "params.{key}: not a parameter of '{name}' (expected one of: {})",
                known.join(", ")
            )));
        }
    }
    let mut v = BTreeMap::new();
    for spec in info.params {
        let x = params.get(spec.name).copied().unwrap_or(spec.default);
        if !x.is_finite() || x < spec.min || x > spec.max {
            return Err(CliError::Validation(format!(
                "params.{}: {x} outside [{}, {}]",
                spec.name, spec.min, spec.max
            )));
        }
        v.insert(spec.name, x);
    }
    let n = n.unwrap_or(info.default_n);
    if n < info.n_min || n > info.n_max {
        return Err(CliError::Validation(format!(
            "n: family '{name}' needs {} <= n <= {}, got {n}",
            info.n_min, info.n_max
        )));
    }
    let g = |k: &str| v[k];
    let (immersion, axes, axis_names): (Box<dyn EuclideanImmersion>, Vec<GridAxis>, Vec<String>) = match name {
        "sphere" => {
            let (axes, names) = hyperspherical(n - 1);
            (Box::new(Sphere { n, r: n - 1, center: vec![0.0; n], radius: g("radius") }), axes, names)
        }
        "ellipsoid" => (
            Box::new(Ellipsoid { a: g("a"), b: g("b"), c: g("c") }),
            vec![polar(), azimuth()],
            names(&["theta", "phi"]),
        ),
        "torus" => {
            if g("r") >= g("R") {
                return Err(CliError::Validation(format!("params.r: need r < R, got r={} R={}", g("r"), g("R"))));
            }
            (
                Box::new(Torus { major: g("R"), minor: g("r") }),
                vec![azimuth(), azimuth()],
                names(&["theta", "phi"]),
            )
        }
        "revolution" => {
            if g("b") >= g("a") {
                return Err(CliError::Validation(format!("params.b: need b < a, got b={} a={}", g("b"), g("a"))));
            }
            (
                Box::new(Revolution { a: g("a"), b: g("b"), c: g("c") }),
                vec![GridAxis::new(0.0, 2.0 * PI, 0), azimuth()],
                names(&["t", "phi"]),
            )
        }
        "cylinder" => (
            Box::new(Cylinder { radius: g("radius") }),
            vec![azimuth(), GridAxis::new(-1.0, 1.0, 0)],
            names(&["phi", "z"]),
        ),
        "plane" => (
            Box::new(Plane { n }),
            (0..n - 1).map(|_| GridAxis::new(-1.0, 1.0, 0)).collect(),
            (0..n - 1).map(|k| format!("x{k}")).collect(),
        ),
        "graph" => {
            let terms = ["c20", "c11", "c02", "c30", "c21", "c12", "c03"]
                .iter()
                .map(|k| {
                    let b = k.as_bytes();
                    ((b[1] - b'0') as u32, (b[2] - b'0') as u32, g(k))
                })
                .filter(|t| t.2 != 0.0)
                .collect();
            (
                Box::new(Graph { terms }),
                vec![GridAxis::new(-1.0, 1.0, 0), GridAxis::new(-1.0, 1.0, 0)],
                names(&["x", "y"]),
            )
        }
        "perturbed_ellipsoid" => (
            Box::new(PerturbedEllipsoid {
                base: Ellipsoid { a: g("a"), b: g("b"), c: g("c") },
                modes: vec![Mode {
                    amplitude: g("amplitude"),
                    k_theta: g("k_theta"),
                    k_phi: g("k_phi"),
                    phase_theta: g("phase_theta"),
                    phase_phi: g("phase_phi"),
                }],
            }),
            vec![polar(), azimuth()],
            names(&["theta", "phi"]),
        ),
        "circle" => (Box::new(Sphere::circle(n, g("radius"))), vec![azimuth()], names(&["t"])),
        "helix" => (Box::new(Helix { a: g("a"), b: g("b") }), vec![GridAxis::new(0.0, 4.0 * PI, 0)], names(&["t"])),
        "surface_r4" => (
            Box::new(SurfaceR4 { alpha: g("alpha"), beta: g("beta"), gamma: g("gamma"), delta: g("delta") }),
            vec![GridAxis::new(-0.5, 0.5, 0), GridAxis::new(-0.5, 0.5, 0)],
            names(&["u", "v"]),
        ),
        "r_sphere" => {
            let r = g("r");
            if r.fract() != 0.0 || (r as usize) + 2 > n {
                return Err(CliError::Validation(format!("params.r: need an integer 1 <= r <= n-2, got {r}")));
            }
            let r = r as usize;
            let (axes, names) = hyperspherical(r);
            (Box::new(Sphere { n, r, center: vec![0.0; n], radius: g("radius") }), axes, names)
        }
        "point" => {
            let mut position = vec![0.0; n];
            position[0] = g("x");
            (Box::new(Point { position }), Vec::new(), Vec::new())
        }
        _ => unreachable!("catalog and constructor disagree on '{name}'"),
    };
    Ok(Geometry { immersion, n, axes, axis_names })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(name: &str, params: &[(&str, f64)]) -> Result<Geometry, CliError> {
        let map = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        builtin_family(name, &map, None)
    }

    #[test]
    fn every_family_builds_with_defaults() {
        for info in CATALOG {
            let g = build(info.name, &[]).unwrap();
            assert_eq!(g.axes.len(), g.param_dim(), "{}", info.name);
            assert_eq!(g.axis_names.len(), g.param_dim());
            assert_eq!(g.immersion.ambient_dim(), g.n);
        }
    }

    #[test]
    fn parametrization_examples() {
        let t = build("torus", &[("R", 2.0), ("r", 1.0)]).unwrap();
        assert_eq!(t.immersion.point(&[0.0, 0.0]), vec![3.0, 0.0, 0.0]);
        let e = build("ellipsoid", &[]).unwrap();
        let v = e.immersion.point(&[PI / 2.0, 0.0]);
        assert!((v[0] - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15 && v[2].abs() < 1e-15);
        let c = build("circle", &[]).unwrap();
        for t in [0.0, 0.7, 2.0] {
            let q = c.immersion.point(&[t]);
            assert!((q[0] * q[0] + q[1] * q[1] - 1.0).abs() < 1e-15 && q[2] == 0.0);
        }
    }

    #[test]
    fn range_violations_are_rejected() {
        assert!(matches!(build("torus", &[("R", 1.0), ("r", 2.0)]), Err(CliError::Validation(_))));
        assert!(matches!(build("ellipsoid", &[("a", -1.0)]), Err(CliError::Validation(_))));
        assert!(matches!(build("torus", &[("radius", 1.0)]), Err(CliError::Validation(_))));
        let err = build("klein_bottle", &[]).err().unwrap().to_string();
        assert!(err.contains("torus") && err.contains("sphere"));
        let map = BTreeMap::new();
        assert!(builtin_family("torus", &map, Some(4)).is_err());
        let r = [("r", 3.0)];
        assert!(build("r_sphere", &r).is_err());
    }
}
