use lightlike_core::frames::*;
use lightlike_core::lightlike::{classify_foci, foci, lambda_form, lift_euclidean};
use lightlike_core::linalg::{self, Mat};
use lightlike_core::reduced::*;
use lightlike_core::surfaces::*;
use lightlike_core::Error;

const DEEP: FdScheme = FdScheme::richardson(2e-2, 2);
const H: f64 = 1e-3;
const PLAIN: FdScheme = FdScheme::central(H);

fn surface() -> SurfaceR4 {
    SurfaceR4 { alpha: 1.0, beta: 0.7, gamma: 0.3, delta: -0.2 }
}

/// `u ↦ inner(k u + c)`, a reparametrization of a curve.
struct Reparam<S> {
    inner: S,
    k: f64,
    c: f64,
}

impl<S: EuclideanImmersion> EuclideanImmersion for Reparam<S> {
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }
    fn param_dim(&self) -> usize {
        1
    }
    fn point(&self, u: &[f64]) -> Vec<f64> {
        self.inner.point(&[self.k * u[0] + self.c])
    }
    fn jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        vec![self.inner.jacobian(&[self.k * u[0] + self.c])[0].iter().map(|x| self.k * x).collect()]
    }
    fn hessian(&self, u: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let h = &self.inner.hessian(&[self.k * u[0] + self.c])[0][0];
        vec![vec![h.iter().map(|x| self.k * self.k * x).collect()]]
    }
    fn analytic(&self) -> bool {
        true
    }
}

#[test]
fn circle_rank_and_second_order() {
    for radius in [1.0, 2.0] {
        let circle = Sphere::circle(3, radius);
        assert_eq!(detect_rank(&lift_euclidean(circle.clone()), &[0.5]).unwrap(), 1);
        let frames = ReducedFrames::new(lift_euclidean(circle.clone()), &[0.4]).unwrap();
        let rf = frames.reduced_frame(&[0.5]).unwrap();
        assert_eq!((rf.r, rf.m), (1, 1));
        let so = reduced_second_order(&Chart::new(&frames, &[0.5], PLAIN)).unwrap();
        assert!(so.plane_residual < 10.0 * H * H && so.cross_residual < 10.0 * H * H);
        // A_n may sit anywhere in the normal plane; the invariant is the norm.
        let (kappa, _) = curve_curvature(&circle, &[0.5]).unwrap();
        let norm = (so.lambda_a[0][(0, 0)].powi(2) + so.lambda_n[(0, 0)].powi(2)).sqrt();
        assert!((norm - kappa).abs() < 1e-8, "{norm} vs {kappa}");
    }
}

#[test]
fn curve_datum_is_reparametrization_invariant() {
    let helix = Helix { a: 1.0, b: 0.5 };
    let (kappa, _) = curve_curvature(&helix, &[0.5]).unwrap();
    for (k, c) in [(1.0, 0.0), (2.5, -0.3), (-0.7, 1.1)] {
        let curve = Reparam { inner: helix, k, c };
        let u = [(0.5 - c) / k];
        let frames = ReducedFrames::new(lift_euclidean(curve), &u).unwrap();
        let so = reduced_second_order(&Chart::new(&frames, &u, DEEP)).unwrap();
        let norm = (so.lambda_a[0][(0, 0)].powi(2) + so.lambda_n[(0, 0)].powi(2)).sqrt();
        assert!((norm - kappa).abs() < 1e-8, "k={k}: {norm} vs {kappa}");
    }
}

#[test]
fn curves_have_no_screen_and_envelope_verdict() {
    for curve in [Box::new(Sphere::circle(3, 1.0)) as Box<dyn EuclideanImmersion>, Box::new(Helix { a: 1.0, b: 0.5 })] {
        let frames = ReducedFrames::new(lift_euclidean(curve), &[0.4]).unwrap();
        let chart = Chart::new(&frames, &[0.5], PLAIN);
        let inv = reduced_invariant_tensors(&chart).unwrap();
        // For r = 1 the trace-free part of a 1×1 tensor vanishes.
        assert_eq!(inv.rho, 0);
        assert!(matches!(mu_screen(&chart), Err(Error::ScreenUndefined { .. })));
        let polar = harmonic_polar(&chart).unwrap();
        let poly = focal_polynomial(&chart).unwrap();
        let z = [0.4, -1.3];
        let roots = poly.line_roots(&z);
        assert_eq!(roots.len(), 1);
        // The harmonic polar point of a line is its single focus.
        let mut at = vec![roots[0]];
        at.extend_from_slice(&z);
        assert!(polar.evaluate(&at).abs() < 1e-12);
        assert_eq!(degenerate_detect(&[chart]).unwrap(), DegenerateVerdict::Envelope);
    }
}

#[test]
fn plane_generators_carry_constant_tangent_hyperplanes() {
    let circle = ReducedFrames::new(lift_euclidean(Sphere::circle(3, 1.0)), &[0.4]).unwrap();
    let surf = ReducedFrames::new(lift_euclidean(surface()), &[0.2, 0.1]).unwrap();
    let cases: [(&dyn FrameSource, &[f64]); 2] = [(&circle, &[0.5]), (&surf, &[0.25, 0.15])];
    for (src, u) in cases {
        let g = plane_generator(&Chart::new(src, u, DEEP)).unwrap();
        assert!(g.hyperplane_variation < 1e-6, "{}", g.hyperplane_variation);
        assert!(g.tangency_residual < 1e-8);
        // Restricted form on L: one zero eigenvalue, the rest positive.
        assert!(g.restricted[0].abs() < 1e-10 && g.restricted[1..].iter().all(|e| *e > 0.5), "{:?}", g.restricted);
    }
}

#[test]
fn surface_in_four_space() {
    let frames = ReducedFrames::new(lift_euclidean(surface()), &[0.2, 0.1]).unwrap();
    let chart = Chart::new(&frames, &[0.25, 0.15], PLAIN);
    let so = reduced_second_order(&chart).unwrap();
    assert_eq!((so.r, so.m), (2, 1));
    assert!(so.asymmetry < 10.0 * H * H && so.cross_residual < 10.0 * H * H);
    let poly = FocalPolynomial::new(&so);
    let polar = HarmonicPolar::new(&so);
    assert_eq!(poly.degree_z0(), 2);
    for z in [[0.3, -0.7], [1.0, 0.2], [-2.0, 0.5]] {
        let roots = poly.line_roots(&z);
        let spectral = poly.line_roots_spectral(&z);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().zip(&spectral).all(|(a, b)| (a - b).abs() < 1e-8));
        assert!(poly.vieta_residual(&z, &polar) < 1e-8);
        assert!(polar.trace_residual(&poly, &[0.1, z[0], z[1]]) < 1e-12);
    }
    let inv = reduced_invariant_tensors(&chart).unwrap();
    assert!(inv.apolarity < 1e-10);
    assert_eq!(inv.rho, 2);
    assert_eq!(linalg::numeric_rank(&linalg::singular_values(&inv.a_upper), 1e-6).unwrap(), inv.rho);
    assert_eq!(linalg::numeric_rank(&linalg::singular_values(&inv.a_mixed), 1e-6).unwrap(), inv.rho);
}

#[test]
fn relative_invariant_has_weight_minus_two_rho() {
    let frames = ReducedFrames::new(lift_euclidean(surface()), &[0.2, 0.1]).unwrap();
    let u = [0.25, 0.15];
    let base = mu_screen(&Chart::new(&frames, &u, DEEP)).unwrap();
    for c in [2.0, 0.5, 3.0] {
        let scaled = Rescaled { inner: &frames, c };
        let m = mu_screen(&Chart::new(&scaled, &u, DEEP)).unwrap();
        let weight = (m.relative_invariant / base.relative_invariant).ln() / f64::ln(c);
        assert!((weight + 2.0 * base.rho as f64).abs() < 1e-8, "weight {weight}");
        assert!(linalg::subspace_distance(&m.points, &base.points) < 1e-8);
    }
}

#[test]
fn screen_span_survives_null_rotations() {
    let frames = ReducedFrames::new(lift_euclidean(surface()), &[0.2, 0.1]).unwrap();
    let u = [0.25, 0.15];
    let base = mu_screen(&Chart::new(&frames, &u, DEEP)).unwrap();
    let shifts: [&(dyn Fn(&[f64]) -> Vec<f64> + Sync); 2] =
        [&|p| vec![0.0, 0.3 + p[0], -0.2 * p[1], 0.0], &|p| vec![0.0, (p[0] * p[1]).sin(), 0.7, 0.0]];
    for t in shifts {
        let rotated = NullRotated { inner: &frames, t, about_infinity: false };
        let m = mu_screen(&Chart::new(&rotated, &u, DEEP)).unwrap();
        assert!(linalg::subspace_distance(&m.points, &base.points) < 1e-6);
        assert!((m.relative_invariant - base.relative_invariant).abs() < 1e-8);
    }
}

#[test]
fn mu_is_continuous() {
    let frames = ReducedFrames::new(lift_euclidean(surface()), &[0.2, 0.1]).unwrap();
    let h = 1e-2;
    let a = mu_screen(&Chart::new(&frames, &[0.25, 0.15], DEEP)).unwrap();
    let b = mu_screen(&Chart::new(&frames, &[0.25 + h, 0.15], DEEP)).unwrap();
    let jump = a.mu.iter().zip(&b.mu).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(jump < 10.0 * h, "{jump}");
}

#[test]
fn reduced_connection_has_symmetric_ricci() {
    let frames = ReducedFrames::new(lift_euclidean(surface()), &[0.2, 0.1]).unwrap();
    let screen = ReducedScreenFrames::new(&frames, DEEP);
    let c = reduced_connection(&Chart::new(&screen, &[0.25, 0.15], DEEP)).unwrap();
    assert!(c.mu_residual < 1e-8);
    assert!(c.torsion_residual < 1e-8 && c.closed_dilation < 1e-8);
    assert!(c.curvature_deviation < 1e-8, "{}", c.curvature_deviation);
    assert!(c.ricci_asymmetry < 1e-8, "{}", c.ricci_asymmetry);
    assert!(linalg::mat_max_abs(&(&c.ricci_closed - c.ricci_closed.transpose())) < 1e-12);
}

#[test]
fn round_sphere_gives_a_fixed_cone_vertex() {
    let sphere = Sphere { n: 4, r: 2, center: vec![0.1, 0.0, 0.0, 0.2], radius: 1.3 };
    let frames = ReducedFrames::new(lift_euclidean(sphere), &[0.7, 0.4]).unwrap();
    let charts: Vec<Chart<'_>> =
        [[0.7, 0.4], [0.9, 1.0], [1.2, 2.0], [2.0, -1.0]].iter().map(|u| Chart::new(&frames, u, DEEP)).collect();
    match degenerate_detect(&charts).unwrap() {
        DegenerateVerdict::Cone { variation, spherical, support_rank, vertex } => {
            assert!(variation < 1e-8, "{variation}");
            assert!(spherical && support_rank == 4);
            assert_eq!(vertex.len(), 2);
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn point_degenerates_into_a_hyperplane() {
    let frames = ReducedFrames::new(lift_euclidean(Point { position: vec![0.3, 0.1, 0.2] }), &[]).unwrap();
    let verdict = degenerate_detect(&[Chart::new(&frames, &[], PLAIN)]).unwrap();
    assert_eq!(verdict, DegenerateVerdict::Hyperplane);
}

#[test]
fn maximal_rank_is_rejected_unless_forced() {
    let torus = lift_euclidean(Torus { major: 2.0, minor: 1.0 });
    assert!(matches!(ReducedFrames::new(&torus, &[0.7, 0.3]), Err(Error::MaximalRank)));
    let forced = ReducedFrames::forced(&torus, &[0.7, 0.3]).unwrap();
    let poly = focal_polynomial(&Chart::new(&forced, &[0.7, 0.3], DEEP)).unwrap();
    let chart = Chart::new(&torus, &[0.7, 0.3], FdScheme::central(1e-4));
    let lf = lambda_form(&chart).unwrap();
    let mut set = foci(&lf.lambda, &Mat::identity(2, 2), &chart.frame(&chart.origin()).unwrap()).unwrap();
    classify_foci(&chart, &mut set).unwrap();
    let roots = poly.line_roots(&[1.0]);
    assert!(roots.iter().zip(&set.roots).all(|(a, b)| (a - b).abs() < 1e-8), "{roots:?} vs {:?}", set.roots);
}
