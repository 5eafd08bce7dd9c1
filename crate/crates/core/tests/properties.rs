use proptest::prelude::*;

use lightlike_core::frames::{Chart, FdScheme, GaugeShifted};
use lightlike_core::lightlike::*;
use lightlike_core::linalg::{self, Mat};
use lightlike_core::reduced::{reduced_invariant_tensors, FocalPolynomial, HarmonicPolar, ReducedFrames, reduced_second_order};
use lightlike_core::surfaces::*;
use lightlike_core::AmbientForm;

const H: FdScheme = FdScheme::central(1e-4);

fn focus_set(chart: &Chart<'_>) -> FocusSet {
    let lf = lambda_form(chart).unwrap();
    let frame = chart.frame(&chart.origin()).unwrap();
    let mut set = foci(&lf.lambda, &Mat::identity(2, 2), &frame).unwrap();
    classify_foci(chart, &mut set).unwrap();
    set
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn torus_tensors_are_gauge_invariant(t in 0.0..6.28f64, p in 0.0..6.28f64, s in -1.0..1.0f64) {
        let base = lift_euclidean(Torus { major: 2.0, minor: 1.0 });
        let shifted = GaugeShifted { inner: &base, s };
        let c0 = Chart::new(&base, &[t, p], H);
        let c1 = Chart::new(&shifted, &[t, p], H);
        let (i0, i1) = (invariants(&c0).unwrap(), invariants(&c1).unwrap());
        let scale = 1.0 + linalg::mat_max_abs(&i0.second.a);
        prop_assert!(linalg::mat_max_abs(&(&i0.second.a - &i1.second.a)) < 1e-8 * scale);
        prop_assert!(linalg::projective_distance(&i0.harmonic_pole, &i1.harmonic_pole) < 1e-8);
        let (f0, f1) = (focus_set(&c0), focus_set(&c1));
        prop_assert_eq!(f0.labels(), f1.labels());
        for (a, b) in f0.foci.iter().zip(&f1.foci) {
            prop_assert!(linalg::projective_distance(&a.point, &b.point) < 1e-8);
            prop_assert!((a.s - (b.s + s)).abs() < 1e-8 * (1.0 + a.s.abs()));
        }
    }

    #[test]
    fn apolarity_and_root_count(t in 0.3..2.8f64, p in 0.0..6.28f64, a in 0.8..1.5f64, b in 1.6..2.4f64) {
        let src = lift_euclidean(Ellipsoid { a, b, c: 3.0 });
        let chart = Chart::new(&src, &[t, p], H);
        let inv = invariants(&chart).unwrap();
        prop_assert!(inv.apolarity < 1e-12);
        let set = foci(&inv.second.lambda, &Mat::identity(2, 2), &chart.frame(&chart.origin()).unwrap()).unwrap();
        prop_assert_eq!(set.roots.len(), 2);
        prop_assert_eq!(set.foci.iter().map(|f| f.multiplicity).sum::<usize>(), 2);
        // The harmonic pole sits at the mean root.
        let mean = 0.5 * (set.roots[0] + set.roots[1]);
        prop_assert!((inv.second.lambda_mean - mean).abs() < 1e-12 * (1.0 + mean.abs()));
    }

    #[test]
    fn causal_class_is_scale_invariant(x in prop::collection::vec(-3.0..3.0f64, 5), c in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64]) {
        let form = AmbientForm::new(3).unwrap();
        prop_assume!(linalg::norm(&x) > 1e-3);
        let y: Vec<f64> = x.iter().map(|v| c * v).collect();
        prop_assert_eq!(form.classify_point(&x).unwrap(), form.classify_point(&y).unwrap());
    }

    #[test]
    fn cross_ratio_is_projectively_invariant(
        v in prop::collection::vec(-5.0..5.0f64, 4),
        m in prop::collection::vec(-2.0..2.0f64, 4),
    ) {
        let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
        prop_assume!((a * d - b * c).abs() > 0.1);
        let f = |x: f64| (a * x + b) / (c * x + d);
        prop_assume!(v.iter().all(|x| (c * x + d).abs() > 1e-2));
        prop_assume!((0..4).all(|i| (0..i).all(|j| (v[i] - v[j]).abs() > 1e-2)));
        let before = cross_ratio(v[0], v[1], v[2], v[3]);
        let after = cross_ratio(f(v[0]), f(v[1]), f(v[2]), f(v[3]));
        prop_assert!((before - after).abs() < 1e-6 * (1.0 + before.abs()));
    }

    #[test]
    fn reduced_apolarity_and_vieta(
        alpha in 0.5..1.5f64, beta in 0.3..1.2f64, gamma in -0.5..0.5f64, delta in -0.5..0.5f64,
        z in prop::collection::vec(-2.0..2.0f64, 2),
    ) {
        let surface = SurfaceR4 { alpha, beta, gamma, delta };
        let frames = ReducedFrames::new(lift_euclidean(surface), &[0.1, 0.1]).unwrap();
        let chart = Chart::new(&frames, &[0.15, 0.05], FdScheme::central(1e-3));
        let inv = reduced_invariant_tensors(&chart).unwrap();
        prop_assert!(inv.apolarity < 1e-10);
        let so = reduced_second_order(&chart).unwrap();
        let poly = FocalPolynomial::new(&so);
        let polar = HarmonicPolar::new(&so);
        prop_assert_eq!(poly.degree_z0(), 2);
        prop_assert!(poly.vieta_residual(&z, &polar) < 1e-8);
    }
}
