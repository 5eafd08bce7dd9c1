use lightlike_core::connection::*;
use lightlike_core::frames::*;
use lightlike_core::lightlike::lift_euclidean;
use lightlike_core::surfaces::*;

const DEEP: FdScheme = FdScheme::richardson(2e-2, 2);

fn revolution() -> LiftFrames<lightlike_core::EuclideanLift<Revolution>> {
    LiftFrames::new(lift_euclidean(Revolution { a: 2.0, b: 0.5, c: 0.3 }))
}

fn perturbed() -> LiftFrames<lightlike_core::EuclideanLift<PerturbedEllipsoid>> {
    LiftFrames::new(lift_euclidean(PerturbedEllipsoid {
        base: Ellipsoid { a: 1.0, b: 2.0, c: 3.0 },
        modes: vec![Mode { amplitude: 0.05, k_theta: 2.0, k_phi: 3.0, phase_theta: 0.3, phase_phi: 0.7 }],
    }))
}

fn within_factor_two(a: f64, b: f64) -> bool {
    a <= 2.0 * b && b <= 2.0 * a
}

#[test]
fn revolution_screen_is_integrable() {
    let sf = ScreenFrames::new(revolution(), DEEP);
    let charts: Vec<Chart<'_>> =
        [[0.9, 0.6, 0.3], [0.4, 1.5, -0.2], [2.0, 3.0, 0.1]].iter().map(|u| Chart::new(&sf, u, DEEP)).collect();
    let report = screen_integrability(&charts).unwrap();
    assert!(report.integrable);
    assert!(report.max_antisymmetry < TAU_INTEGRABLE && report.max_frobenius < TAU_INTEGRABLE, "{report:?}");
}

#[test]
fn perturbed_ellipsoid_screen_is_not_integrable() {
    let sf = ScreenFrames::new(perturbed(), DEEP);
    let charts: Vec<Chart<'_>> = [[0.9, 0.6, 0.3], [1.3, 2.0, -0.4]].iter().map(|u| Chart::new(&sf, u, DEEP)).collect();
    let report = screen_integrability(&charts).unwrap();
    assert!(!report.integrable);
    for (a, f) in report.antisymmetry.iter().zip(&report.frobenius) {
        assert!(*a > 1e-2 && within_factor_two(*a, *f), "{a:e} vs {f:e}");
    }
}

#[test]
fn mu_fit_is_consistent() {
    let sf = ScreenFrames::new(perturbed(), DEEP);
    let d = screen_forms(&Chart::new(&sf, &[0.9, 0.6, 0.3], DEEP)).unwrap();
    assert!(d.residual < 1e-8, "{}", d.residual);
    // The Frobenius matrix is the antisymmetric part of μ_ij.
    let anti = &d.mu - d.mu.transpose();
    let diff = lightlike_core::linalg::mat_max_abs(&(&anti - &d.frobenius));
    assert!(diff < 1e-6, "{diff:e}");
}

#[test]
fn induced_connection_matches_closed_form() {
    for src in [Box::new(revolution()) as Box<dyn FrameSource>, Box::new(perturbed())] {
        let sf = ScreenFrames::new(src, DEEP);
        let c = induced_connection(&Chart::new(&sf, &[0.9, 0.6, 0.3], DEEP)).unwrap();
        assert!(c.torsion_free.iter().all(|t| *t < 1e-7), "{:?}", c.torsion_free);
        assert!(c.omega_i0_deviation < 1e-5 && c.omega_ji_deviation < 1e-5);
        assert!(c.component_deviation < 1e-5, "{}", c.component_deviation);
        let m = c.r0_ij0.nrows();
        let target = lightlike_core::linalg::Mat::identity(m, m) * -0.5;
        assert!(lightlike_core::linalg::mat_max_abs(&(&c.r0_ij0 - target)) < 1e-5, "{}", c.r0_ij0);
    }
}

#[test]
fn torsion_free_forms_are_second_order_in_step() {
    for h in [1e-3, 5e-4] {
        let sf = ScreenFrames::new(revolution(), FdScheme::central(h));
        let c = induced_connection(&Chart::new(&sf, &[0.9, 0.6, 0.3], FdScheme::central(h))).unwrap();
        assert!(c.torsion_free.iter().all(|t| *t < 10.0 * h * h), "h={h}: {:?}", c.torsion_free);
    }
}

#[test]
fn symmetry_verdict_survives_gauge_shifts() {
    let rev = ScreenFrames::new(revolution(), DEEP);
    let pert = ScreenFrames::new(perturbed(), DEEP);
    for s in [-0.7, -0.3, 0.3, 0.7] {
        let r = screen_integrability(&[Chart::new(&rev, &[0.9, 0.6, s], DEEP)]).unwrap();
        assert!(r.integrable, "revolution s={s}: {r:?}");
        let p = screen_integrability(&[Chart::new(&pert, &[0.9, 0.6, s], DEEP)]).unwrap();
        assert!(!p.integrable, "perturbed s={s}: {p:?}");
    }
}
