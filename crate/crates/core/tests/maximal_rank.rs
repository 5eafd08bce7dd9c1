use std::f64::consts::PI;

use lightlike_core::frames::{Chart, FdScheme, FrameField, FrameSource, GaugeShifted, GridAxis};
use lightlike_core::lightlike::*;
use lightlike_core::linalg::{self, Mat};
use lightlike_core::surfaces::*;
use lightlike_core::{CausalClass, Error};

const H: FdScheme = FdScheme::central(1e-4);

fn focus_set(chart: &Chart<'_>) -> FocusSet {
    let lf = lambda_form(chart).unwrap();
    let frame = chart.frame(&chart.origin()).unwrap();
    let mut set = foci(&lf.lambda, &Mat::identity(lf.lambda.nrows(), lf.lambda.nrows()), &frame).unwrap();
    classify_foci(chart, &mut set).unwrap();
    set
}

/// Classical curvature sphere of a Euclidean surface, lifted.
fn curvature_sphere(surface: &dyn EuclideanImmersion, u: &[f64], h: usize) -> Vec<f64> {
    let pd = principal_curvatures(surface, u).unwrap();
    let k = pd.curvatures[h];
    if k.abs() < 1e-12 {
        return hyperplane(&pd.normal, &pd.point);
    }
    let center: Vec<f64> = pd.point.iter().zip(&pd.normal).map(|(p, n)| p + n / k).collect();
    hypersphere(&center, 1.0 / k.abs())
}

#[test]
fn unit_sphere_has_one_conic_focus_of_full_multiplicity() {
    let src = lift_euclidean(Sphere::unit(3));
    let mut apex: Option<Vec<f64>> = None;
    for u in [[0.4, 0.3], [1.0, 2.0], [2.2, -1.0], [1.5, 4.0]] {
        let chart = Chart::new(&src, &u, H);
        let set = focus_set(&chart);
        assert_eq!(set.foci.len(), 1);
        let f = &set.foci[0];
        assert_eq!(f.multiplicity, 2);
        assert_eq!(f.label, Some(FocusLabel::Conic));
        assert!((f.s + 1.0).abs() < 1e-8, "root {}", f.s);
        assert!(f.cluster_residual.unwrap() < 1e-6);
        let inv = invariants(&chart).unwrap();
        assert!(linalg::mat_max_abs(&inv.second.a) < 1e-10);
        let p = f.point.clone();
        match &apex {
            None => apex = Some(p),
            Some(a) => assert!(linalg::projective_distance(a, &p) < 1e-6),
        }
        assert!(matches!(normalization(&chart, false), Err(Error::NormalizationUndefined { .. })));
    }
}

#[test]
fn torus_outer_equator_has_radii_one_and_three() {
    let src = lift_euclidean(Torus { major: 2.0, minor: 1.0 });
    let chart = Chart::new(&src, &[0.0, 0.0], H);
    assert_eq!(src.surface.point(&[0.0, 0.0]), vec![3.0, 0.0, 0.0]);
    let set = focus_set(&chart);
    let radii: Vec<f64> = set.roots.iter().map(|s| 1.0 / s.abs()).collect();
    assert!((radii[0] - 3.0).abs() < 1e-8 && (radii[1] - 1.0).abs() < 1e-8, "{radii:?}");
    // The mean root is the harmonic pole of A_0 (at infinity on the s-line).
    let mean = 0.5 * (set.roots[0] + set.roots[1]);
    let cr = cross_ratio(set.roots[0], set.roots[1], f64::INFINITY, mean);
    assert!((cr + 1.0).abs() < 1e-10, "cross ratio {cr}");
}

#[test]
fn ellipsoid_vertex_has_radii_four_and_nine() {
    let e = Ellipsoid { a: 1.0, b: 2.0, c: 3.0 };
    let u = [PI / 2.0, 0.0];
    let p = e.point(&u);
    assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15 && p[2].abs() < 1e-15);
    let src = lift_euclidean(e);
    let chart = Chart::new(&src, &u, H);
    let set = focus_set(&chart);
    let mut radii: Vec<f64> = set.roots.iter().map(|s| 1.0 / s.abs()).collect();
    radii.sort_by(f64::total_cmp);
    assert!((radii[0] - 4.0).abs() < 1e-6 && (radii[1] - 9.0).abs() < 1e-6, "{radii:?}");
}

#[test]
fn foci_are_lifted_curvature_spheres() {
    let torus = Torus { major: 2.0, minor: 1.0 };
    let ell = Ellipsoid { a: 1.0, b: 2.0, c: 3.0 };
    let cases: [(&dyn EuclideanImmersion, [f64; 2]); 4] =
        [(&torus, [0.7, 0.3]), (&torus, [2.5, 1.0]), (&ell, [0.6, 0.4]), (&ell, [1.9, 2.2])];
    for (surface, u) in cases {
        let src = lift_euclidean(surface);
        let chart = Chart::new(&src, &u, H);
        let set = focus_set(&chart);
        let pd = principal_curvatures(surface, &u).unwrap();
        for (h, f) in set.foci.iter().enumerate() {
            assert!((f.s - ROOT_CURVATURE_SIGN * pd.curvatures[h]).abs() < 1e-6);
            let oracle = curvature_sphere(surface, &u, h);
            let d = linalg::projective_distance(&oracle, &f.point);
            assert!(d < 1e-5, "focus {h} at {u:?}: distance {d:e}");
        }
    }
}

#[test]
fn torus_foci_are_both_conic() {
    // Both focal sets of a torus are curves (the core circle and the axis), so
    // each root is constant along its own principal direction.
    let src = lift_euclidean(Torus { major: 2.0, minor: 1.0 });
    for u in [[0.7, 0.3], [2.0, 1.0], [3.0, 0.5], [4.4, 5.0]] {
        let set = focus_set(&Chart::new(&src, &u, H));
        assert_eq!(set.labels(), vec![Some(FocusLabel::Conic); 2], "{u:?}: {:?}", set.foci);
    }
}

#[test]
fn generic_ellipsoid_foci_are_folds() {
    let src = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    for u in [[0.6, 0.4], [1.0, 0.7], [0.9, 1.2], [2.0, 4.0]] {
        let set = focus_set(&Chart::new(&src, &u, H));
        assert_eq!(set.labels(), vec![Some(FocusLabel::Fold); 2], "{u:?}");
    }
}

#[test]
fn lambda_inverts_nu() {
    let ell = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    let tor = lift_euclidean(Torus { major: 2.0, minor: 1.0 });
    let rev = lift_euclidean(Revolution { a: 2.0, b: 0.5, c: 0.3 });
    let cases: [(&dyn FrameSource, [f64; 2]); 3] = [(&ell, [0.8, 0.5]), (&tor, [1.0, 0.2]), (&rev, [0.4, 0.3])];
    for (src, u) in cases {
        let lf = lambda_form(&Chart::new(src, &u, H)).unwrap();
        assert!(lf.nu_consistency.unwrap() < 1e-6, "{u:?} {:?}", lf.nu_consistency);
        assert!(lf.asymmetry < 1e-6);
    }
}

#[test]
fn focus_gauge_is_singular() {
    // With A_n shifted onto a focus the coframe ω_n^i degenerates.
    let ell = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    let u = [0.8, 0.5];
    let s0 = focus_set(&Chart::new(&ell, &u, H)).roots[0];
    let shifted = GaugeShifted { inner: &ell, s: s0 };
    let err = fundamental_forms(&Chart::new(&shifted, &u, H)).unwrap_err();
    assert_eq!(err.kind(), "singular_gauge");
}

#[test]
fn ellipsoid_normalization() {
    let src = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    let chart = Chart::new(&src, &[0.9, 0.6], FdScheme::richardson(2e-2, 2));
    let nd = normalization(&chart, true).unwrap();
    assert_eq!(nd.screen_dim, 1);
    assert!(nd.excludes_origin);
    assert!(nd.lambda_k_consistency.unwrap() < 1e-5);
    assert!(nd.lambda_ijk_asymmetry.unwrap() < 1e-8);
    assert!(nd.invariants.apolarity < 1e-12);
    // Frozen from a Richardson level-2 run at step 2e-2 (agrees with level 1
    // at step 1e-2 to 6e-10).
    assert!((nd.lambda_k[0] - 0.159_831_174).abs() < 1e-8, "{:?}", nd.lambda_k);
    assert!((nd.lambda_k[1] + 0.318_697_718).abs() < 1e-8, "{:?}", nd.lambda_k);
}

#[test]
fn normalization_is_gauge_invariant() {
    let base = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    let fd = FdScheme::richardson(2e-2, 2);
    let u = [0.9, 0.6];
    let reference = normalization(&Chart::new(&base, &u, fd), false).unwrap();
    for s in [0.5, -0.8] {
        let shifted = GaugeShifted { inner: &base, s };
        let nd = normalization(&Chart::new(&shifted, &u, fd), false).unwrap();
        let a_dev = linalg::mat_max_abs(&(&nd.invariants.second.a - &reference.invariants.second.a));
        assert!(a_dev < 1e-8, "a_ij moved by {a_dev:e}");
        assert!(linalg::projective_distance(&nd.invariants.harmonic_pole, &reference.invariants.harmonic_pole) < 1e-8);
        let d = linalg::subspace_distance(&nd.points, &reference.points);
        assert!(d < 1e-8, "ζ moved by {d:e}");
    }
}

#[test]
fn focal_manifold_ranks() {
    let torus = lift_euclidean(Torus { major: 2.0, minor: 1.0 });
    let axes = vec![GridAxis::periodic(0.0, 2.0 * PI, 12), GridAxis::periodic(0.0, 2.0 * PI, 12)];
    let field = FrameField::build(&torus, axes, H);
    let nodes: Vec<usize> = (0..field.node_count()).step_by(7).collect();
    for h in 0..2 {
        let sample = focal_manifold_sample(&field, h, &nodes);
        assert_eq!(sample.dominant_rank(), Some(1), "torus focus {h}");
        assert!(sample.causal.iter().flatten().all(|c| *c == CausalClass::Spacelike), "{:?}", sample.causal);
    }
    let ell = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    let axes = vec![GridAxis::new(0.5, 1.2, 5), GridAxis::new(0.3, 1.3, 5)];
    let field = FrameField::build(&ell, axes, H);
    let nodes: Vec<usize> = (0..field.node_count()).collect();
    for h in 0..2 {
        assert_eq!(focal_manifold_sample(&field, h, &nodes).dominant_rank(), Some(2), "ellipsoid focus {h}");
    }
    let sphere = lift_euclidean(Sphere::unit(3));
    let axes = vec![GridAxis::new(0.5, 1.5, 5), GridAxis::new(0.0, 1.0, 5)];
    let field = FrameField::build(&sphere, axes, H);
    assert_eq!(focal_manifold_sample(&field, 0, &[6, 12]).dominant_rank(), Some(0));
}

#[test]
fn root_sign_calibration() {
    // Outward normal on the unit sphere has κ = −1 for det[f_1, f_2, N] > 0
    // in hyperspherical angles; the pencil root equals κ.
    let pd = principal_curvatures(&Sphere::unit(3), &[1.0, 0.5]).unwrap();
    assert!(pd.curvatures.iter().all(|k| (k + 1.0).abs() < 1e-12));
    assert_eq!(ROOT_CURVATURE_SIGN, 1.0);
}

#[test]
fn fold_focal_tangent_spaces_are_lightlike() {
    let ell = lift_euclidean(Ellipsoid { a: 1.0, b: 2.0, c: 3.0 });
    let axes = vec![GridAxis::new(0.5, 1.2, 5), GridAxis::new(0.3, 1.3, 5)];
    let field = FrameField::build(&ell, axes, H);
    let nodes: Vec<usize> = (0..field.node_count()).collect();
    for h in 0..2 {
        let sample = focal_manifold_sample(&field, h, &nodes);
        let classes: Vec<CausalClass> = sample.causal.iter().flatten().copied().collect();
        assert!(!classes.is_empty());
        assert!(classes.iter().all(|c| *c == CausalClass::Lightlike), "focus {h}: {classes:?}");
    }
}
