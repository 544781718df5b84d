use std::f64::consts::PI;

use gaugebench::adhm::{
    adhm_residuals, asd_residual, build_connection, charge_and_action, existence_threshold, field_strength,
    gauge_transform, moduli_dimension, thooft_data, AdhmData, AdhmError, CurvatureSample, Group,
};
use gaugebench::numerics::{c, frobenius, ComplexMatrix, Grid4D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one_instanton(rho: f64) -> AdhmData {
    thooft_data(&[[0.0; 4]], &[rho]).unwrap()
}

/// Closed-form |F|^2 of the charge-one instanton of scale rho at the origin.
fn bpst_density(x: [f64; 4], rho: f64) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    48.0 * rho.powi(4) / (r2 + rho * rho).powi(4)
}

#[test]
fn residual_examples() {
    let rho = 1.3;
    assert_eq!(adhm_residuals(&one_instanton(rho)), (0.0, 0.0));
    let mut d = one_instanton(rho);
    d.p_map *= c(2.0, 0.0);
    let (a, b) = adhm_residuals(&d);
    assert_eq!(a, 0.0);
    assert!((b - 3.0 * rho * rho).abs() < 1e-12);
    let z = AdhmData::new(
        ComplexMatrix::zeros(2, 2),
        ComplexMatrix::zeros(2, 2),
        ComplexMatrix::zeros(2, 3),
        ComplexMatrix::zeros(3, 2),
        0.0,
    )
    .unwrap();
    assert_eq!(adhm_residuals(&z), (0.0, 0.0));
}

#[test]
fn thooft_examples() {
    let d = thooft_data(&[[0.0; 4], [1.0, 0.0, 0.0, 0.0]], &[1.0, 1.0]).unwrap();
    assert_eq!(adhm_residuals(&d), (0.0, 0.0));
    let e = thooft_data(&[[0.5, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0]], &[1.0, 2.0]);
    assert!(matches!(e, Err(AdhmError::DuplicateCenters(0, 1))));
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m.qr().q()
}

#[test]
fn residuals_are_unitary_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = 3;
    let rnd = |rng: &mut ChaCha8Rng, a: usize, b: usize| {
        ComplexMatrix::from_fn(a, b, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    };
    let d = AdhmData::new(rnd(&mut rng, k, k), rnd(&mut rng, k, k), rnd(&mut rng, k, 2), rnd(&mut rng, 2, k), 0.4)
        .unwrap();
    let (a0, b0) = adhm_residuals(&d);
    for _ in 0..100 {
        let u = random_unitary(&mut rng, k);
        let (a, b) = adhm_residuals(&d.conjugate_by(&u));
        assert!((a - a0).abs() < 1e-12 * a0.max(1.0));
        assert!((b - b0).abs() < 1e-12 * b0.max(1.0));
    }
}

#[test]
fn density_matches_closed_form() {
    let rho = 1.0;
    let d = one_instanton(rho);
    let centre = field_strength(&d, [0.0; 4], 1e-2).unwrap().density();
    assert!((centre - 48.0).abs() < 1e-4 * 48.0);
    for x in [[0.3, -0.2, 0.5, 0.1], [1.0, 0.0, 0.0, 0.0], [-0.7, 1.1, 0.4, -0.9], [2.0, 1.0, -1.0, 0.5]] {
        let f = field_strength(&d, x, 1e-2).unwrap();
        let exact = bpst_density(x, rho);
        assert!((f.density() - exact).abs() < 1e-4 * centre, "x = {x:?}");
        assert!(asd_residual(&f) < 1e-4 * centre.sqrt());
        assert!(f.max_anti_hermitian_defect() < 1e-8);
    }
    let at_rho = field_strength(&d, [0.0, 0.0, 0.0, 1.0], 1e-2).unwrap().density();
    assert!((at_rho / centre - 1.0 / 16.0).abs() < 1e-5);
}

#[test]
fn reflection_symmetry() {
    let d = one_instanton(0.8);
    let x = [0.4, -0.3, 0.2, 0.6];
    let neg = x.map(|v| -v);
    let a = field_strength(&d, x, 1e-2).unwrap().density();
    let b = field_strength(&d, neg, 1e-2).unwrap().density();
    assert!((a - b).abs() < 1e-8);
}

#[test]
fn framing_gauge_decay_matches_singular_gauge() {
    // Singular gauge: sum_mu ||A_mu||_F^2 = 6 rho^4 / (|x|^2 (|x|^2 + rho^2)^2).
    let rho = 1.0;
    let d = one_instanton(rho);
    for r in [5.0, 10.0, 20.0] {
        let x = [r * 0.5, r * 0.5, r * 0.5, r * 0.5];
        let s = build_connection(&d, x).unwrap();
        let norm = s.a.iter().map(|m| frobenius(m).powi(2)).sum::<f64>().sqrt();
        let exact = 6f64.sqrt() * rho * rho / (r * (r * r + rho * rho));
        assert!((norm / exact - 1.0).abs() < 1e-4, "r = {r}: {norm} vs {exact}");
        for m in &s.a {
            assert!(frobenius(&(m + m.adjoint())) < 1e-10);
        }
    }
}

#[test]
fn degenerate_datum_is_rejected() {
    let d = AdhmData::new(
        ComplexMatrix::zeros(1, 1),
        ComplexMatrix::zeros(1, 1),
        ComplexMatrix::zeros(1, 2),
        ComplexMatrix::zeros(2, 1),
        0.0,
    )
    .unwrap();
    assert!(matches!(build_connection(&d, [0.0; 4]), Err(AdhmError::KernelDimensionMismatch { .. })));
}

#[test]
fn asd_residual_examples() {
    let m = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 - j as f64, (i + j) as f64));
    let z = ComplexMatrix::zeros(2, 2);
    let mut f: [ComplexMatrix; 6] = std::array::from_fn(|_| z.clone());
    f[0] = m.clone();
    f[5] = -m.clone();
    assert_eq!(asd_residual(&CurvatureSample { x: [0.0; 4], f: f.clone() }), 0.0);
    f[5] = m.clone();
    let r = asd_residual(&CurvatureSample { x: [0.0; 4], f });
    assert!((r - 2f64.sqrt() * frobenius(&m)).abs() < 1e-12);
}

#[test]
fn flat_datum() {
    let d = AdhmData::flat(2);
    let g = Grid4D::new(2.0, 5).unwrap();
    assert_eq!(charge_and_action(&d, &g, 1e-2).unwrap(), (0.0, 0.0));
    assert_eq!(field_strength(&d, [0.1, 0.2, 0.3, 0.4], 1e-2).unwrap().density(), 0.0);
}

#[test]
fn charge_translation_and_scaling() {
    let g = Grid4D::new(4.0, 24).unwrap();
    let base = one_instanton(1.0);
    let (q0, s0) = charge_and_action(&base, &g, 1e-2).unwrap();
    assert!((q0 - 1.0).abs() < 0.03);
    assert!((s0 - 8.0 * PI * PI).abs() < 0.03 * 8.0 * PI * PI);
    // A shift by a whole number of grid cells samples the same function values.
    let h = g.spacing();
    let moved = base.translate([2.0 * h, -h, 0.0, 3.0 * h]);
    let shifted = Grid4D::new(4.0, 24).unwrap();
    let (q1, _) = charge_and_action(&moved, &shifted, 1e-2).unwrap();
    assert!((q1 - q0).abs() < 1e-3 + 0.02);
    let small = base.translate([0.01, 0.02, -0.01, 0.0]);
    let (q2, _) = charge_and_action(&small, &g, 1e-2).unwrap();
    assert!((q2 - q0).abs() < 1e-3);
    let c2 = 1.7;
    let (q3, s3) = charge_and_action(&base.dilate(c2), &Grid4D::new(4.0 * c2, 24).unwrap(), 1e-2 * c2).unwrap();
    assert!((q3 - q0).abs() < 1e-6);
    assert!((s3 - s0).abs() < 1e-6 * s0);
}

#[test]
fn gauge_invariance_of_density() {
    let d = one_instanton(1.0);
    let x = [0.3, 0.4, -0.2, 0.1];
    let h = 1e-3;
    let st = gaugebench::adhm::connection_stencil(&d, x, h, true).unwrap();
    let before = gaugebench::adhm::curvature_from_stencil(&st);
    let theta = |p: [f64; 4]| 0.3 * p[0] - 0.7 * p[1] + 0.2 * p[2] + 0.5 * p[3];
    let g = |p: [f64; 4]| {
        let t = theta(p);
        ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(t.cos(), t.sin()), c(t.cos(), -t.sin())]))
    };
    let samples = gauge_transform(&st.samples, g).unwrap();
    let after = gaugebench::adhm::curvature_from_stencil(&gaugebench::adhm::ConnectionStencil { samples, ..st.clone() });
    assert!((after.density() - before.density()).abs() < 1e-8 * before.density().max(1.0));
    let bad = |_: [f64; 4]| ComplexMatrix::identity(2, 2) * c(1.5, 0.0);
    assert!(matches!(gauge_transform(&st.samples, bad), Err(AdhmError::NonUnitary(_))));
    let same = gauge_transform(&st.samples, |_| ComplexMatrix::identity(2, 2)).unwrap();
    assert_eq!(same, st.samples);
}

#[test]
fn thresholds_and_dimension() {
    assert!(existence_threshold(Group::SU, 2, 1).unwrap());
    assert!(!existence_threshold(Group::G2, 0, 1).unwrap());
    assert!(existence_threshold(Group::E8, 0, 3).unwrap());
    assert!(!existence_threshold(Group::SU, 5, 2).unwrap());
    assert!(existence_threshold(Group::Sp, 3, 3).unwrap());
    assert!(matches!(existence_threshold(Group::Spin, 5, 4), Err(AdhmError::UnsupportedGroup(_))));
    assert!("SO".parse::<Group>().is_err());
    assert_eq!((moduli_dimension(1), moduli_dimension(2), moduli_dimension(10)), (5, 13, 77));
}

#[test]
fn json_round_trip_and_zero_charge() {
    let d = thooft_data(&[[0.0; 4], [1.0, 0.0, 0.0, 0.0]], &[1.0, 0.5]).unwrap();
    let text = serde_json::to_string(&d).unwrap();
    let back: AdhmData = serde_json::from_str(&text).unwrap();
    assert_eq!(back, d);
    let flat: AdhmData = serde_json::from_str(&serde_json::to_string(&AdhmData::flat(2)).unwrap()).unwrap();
    assert_eq!(flat.k, 0);
}
