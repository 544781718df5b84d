use std::io::Write;

use gaugebench::algebra::{MPoly, Rational, RationalFunction};
use gaugebench::localization::{
    ab_integral, boundary_check_cm, cm_model, dh_lhs_numeric, dh_rhs, formal_integral, load_model, moment_hull_check,
    projective_plane_model, pushforward_density, sphere_corrupted_model, sphere_model, sphere_pair_model,
    CorruptedSampler, LocalizationError, ManifoldModel, ProjectivePlaneSampler, SphereSampler,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn tau() -> Vec<String> {
    vec!["tau".into()]
}

fn tau_power(c: Rational, e: i32) -> RationalFunction {
    let m = RationalFunction::from_poly(tau(), MPoly::from_terms(1, [(vec![e.unsigned_abs()], Rational::one())]));
    if e >= 0 {
        m.scale(&c)
    } else {
        m.recip().unwrap().scale(&c)
    }
}

/// `∫_{S^2} e^{−itH} ω` with area 2: `2 sin t / t`.
fn sphere_oracle(t: f64) -> Complex64 {
    Complex64::new(2.0 * t.sin() / t, 0.0)
}

/// Closed form of `∫ e^{−ith} ρ(h) dh` for the piecewise linear density of
/// `H = μ1 + 2μ2` on `CP^2`: `h/2` on `[0, 1]`, `1 − h/2` on `[1, 2]`.
fn cp2_oracle(t: f64) -> Complex64 {
    let i = Complex64::i();
    let e = |h: f64| (-i * t * h).exp();
    // ∫_a^b (α + βh) e^{−ith} dh by parts.
    let lin = |a: f64, b: f64, alpha: f64, beta: f64| {
        let k = -i * t;
        let prim = |h: f64| e(h) * ((alpha + beta * h) / k - beta / (k * k));
        prim(b) - prim(a)
    };
    lin(0.0, 1.0, 0.0, 0.5) + lin(1.0, 2.0, 1.0, -0.5)
}

#[test]
fn dh_on_sphere() {
    let s = sphere_model();
    assert!(dh_rhs(&s, std::f64::consts::PI).unwrap().norm() < 1e-15);
    for k in 0..20 {
        let t = 0.1 + k as f64 * (20.0 - 0.1) / 19.0;
        let rhs = dh_rhs(&s, t).unwrap();
        let lhs = dh_lhs_numeric(&s, t).unwrap();
        assert!((rhs - sphere_oracle(t)).norm() < 1e-14, "t={t}");
        assert!((lhs - rhs).norm() <= 1e-7, "t={t}");
    }
    assert!((dh_lhs_numeric(&s, 1.0).unwrap() - dh_rhs(&s, 1.0).unwrap()).norm() < 1e-8);
    assert!((dh_lhs_numeric(&s, 0.0).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    assert!(matches!(dh_rhs(&s, 0.0), Err(LocalizationError::ZeroTime)));
    assert!(matches!(dh_rhs(&cm_model(2), 1.0), Err(LocalizationError::NotCompact(_))));
}

#[test]
fn dh_on_projective_plane_and_pair() {
    let cp2 = projective_plane_model();
    for t in [0.3, 1.0, 2.5, 7.0, 15.0] {
        let rhs = dh_rhs(&cp2, t).unwrap();
        assert!((rhs - cp2_oracle(t)).norm() < 1e-12, "t={t}");
        assert!((dh_lhs_numeric(&cp2, t).unwrap() - rhs).norm() < 1e-10, "t={t}");
    }
    let pair = sphere_pair_model();
    for t in [0.5, 3.0] {
        let expect = sphere_oracle(t) * (1.0 + (Complex64::new(0.0, -3.0 * t)).exp());
        assert!((dh_rhs(&pair, t).unwrap() - expect).norm() < 1e-13);
        assert!((dh_lhs_numeric(&pair, t).unwrap() - expect).norm() < 1e-8);
    }
    assert!(matches!(dh_lhs_numeric(&cm_model(1), 1.0), Err(LocalizationError::NoSampler(_))));
}

#[test]
fn atiyah_bott_classes() {
    let s = sphere_model();
    assert!(ab_integral(&s, "one").unwrap().is_zero());
    assert_eq!(ab_integral(&s, "omega").unwrap().as_constant(), Some(Rational::from(2)));
    // Degree above the dimension: (ω + τH)^2/2 integrates to τ times ∫ H ω = 0.
    assert!(ab_integral(&s, "omega^2").unwrap().is_zero());
    let cp2 = projective_plane_model();
    assert!(ab_integral(&cp2, "one").unwrap().is_zero());
    assert!(ab_integral(&cp2, "omega").unwrap().is_zero());
    assert_eq!(ab_integral(&cp2, "omega^2").unwrap().as_constant(), Some(Rational::new(1, 2).unwrap()));
    // (ω + τH)^3/3! integrates to τ ∫ H ω^2/2 = τ · vol · mean(H) = τ/2.
    let deg3 = ab_integral(&cp2, "omega^3").unwrap();
    assert_eq!(deg3, tau_power(Rational::new(1, 2).unwrap(), 1));
    let e = ab_integral(&sphere_corrupted_model(), "bad");
    assert!(matches!(e, Err(LocalizationError::NotPolynomial(..))));
    assert!(matches!(ab_integral(&s, "missing"), Err(LocalizationError::MissingClass { .. })));
}

#[test]
fn formal_integrals() {
    for m in 1..=5 {
        assert_eq!(formal_integral(&[vec![1; m]]).unwrap(), tau_power(Rational::one(), -(m as i32)));
    }
    assert!(formal_integral(&[vec![1], vec![-1]]).unwrap().is_zero());
    assert_eq!(formal_integral(&[vec![1, 2]]).unwrap(), tau_power(Rational::new(1, 2).unwrap(), -2));
    assert!(matches!(formal_integral(&[vec![1, 0]]), Err(LocalizationError::ZeroWeight(_))));
    assert!(formal_integral(&[vec![]]).is_err());
}

#[test]
fn boundary_identity() {
    for m in 1..=6 {
        let b = boundary_check_cm(m).unwrap();
        assert!(b.equal);
        assert_eq!(b.lhs, tau_power(Rational::one(), -(m as i32)));
    }
    assert!(boundary_check_cm(0).is_err());
}

#[test]
fn sphere_density_is_flat() {
    let d = pushforward_density(&sphere_model(), 16, 1_000_000, 11, None).unwrap();
    assert_eq!(d.pieces.len(), 1);
    let c = &d.pieces[0].coefficients;
    assert_eq!(c.len(), 1);
    // Archimedes: area 2 spread over [−1, 1].
    assert!((c[0] - 1.0).abs() < 0.01);
    assert!(d.relative_residual < 0.01);
    let total: f64 = d.bins.iter().map(|b| b.mass).sum();
    assert!((total - 2.0).abs() < 1e-9);
}

#[test]
fn projective_plane_density_is_piecewise_linear() {
    let d = pushforward_density(&projective_plane_model(), 20, 1_000_000, 5, None).unwrap();
    assert_eq!(d.pieces.len(), 2);
    let exact = |h: f64| if h <= 1.0 { h / 2.0 } else { 1.0 - h / 2.0 };
    for p in &d.pieces {
        for h in [p.lo + 0.1, 0.5 * (p.lo + p.hi), p.hi - 0.1] {
            assert!((p.eval(h) - exact(h)).abs() < 0.01, "h={h}");
        }
    }
    assert!(d.relative_residual < 0.02);
}

#[test]
fn sphere_pair_has_two_plateaus() {
    let d = pushforward_density(&sphere_pair_model(), 40, 400_000, 3, Some(0)).unwrap();
    let plateau = |h: f64| d.pieces.iter().find(|p| p.lo <= h && h <= p.hi).unwrap().eval(h);
    assert!((plateau(0.0) - 1.0).abs() < 0.02);
    assert!(plateau(1.5).abs() < 0.02);
    assert!((plateau(3.0) - 1.0).abs() < 0.02);
}

#[test]
fn monte_carlo_rate() {
    let mean = |n: usize| {
        (0..6u64).map(|s| pushforward_density(&sphere_model(), 16, n, 100 + s, None).unwrap().relative_residual).sum::<f64>()
            / 6.0
    };
    let coarse = mean(1 << 15);
    let fine = mean(1 << 17);
    let ratio = coarse / fine;
    assert!((1.5..2.7).contains(&ratio), "ratio {ratio}");
}

#[test]
fn sampling_is_seed_deterministic() {
    let a = pushforward_density(&projective_plane_model(), 8, 50_000, 9, None).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| pushforward_density(&projective_plane_model(), 8, 50_000, 9, None).unwrap());
    assert_eq!(a, b);
    let c = pushforward_density(&projective_plane_model(), 8, 50_000, 10, None).unwrap();
    assert_ne!(a, c);
}

#[test]
fn hulls() {
    let r = moment_hull_check(&projective_plane_model(), 100_000, 1).unwrap();
    assert!(r.inside);
    assert_eq!(r.outside, 0);
    let r = moment_hull_check(&sphere_model(), 20_000, 1).unwrap();
    assert!(r.inside);
    let bad = projective_plane_model().with_sampler(Box::new(CorruptedSampler { inner: Box::new(ProjectivePlaneSampler) }));
    let r = moment_hull_check(&bad, 100_000, 1).unwrap();
    assert!(!r.inside && r.outside > 0 && r.worst_violation > 1.0);
    let bad = sphere_model().with_sampler(Box::new(CorruptedSampler { inner: Box::new(SphereSampler { shift: 0.0 }) }));
    assert!(!moment_hull_check(&bad, 20_000, 1).unwrap().inside);
    assert!(matches!(moment_hull_check(&cm_model(2), 10, 1), Err(LocalizationError::NoSampler(_))));
}

#[test]
fn json_models() {
    let model = sphere_model();
    let text = serde_json::to_string(&model).unwrap();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    let back = load_model(file.path().to_str().unwrap()).unwrap();
    assert!(back.sampler.is_none());
    assert_eq!(back.fixed_points, model.fixed_points);
    assert_eq!(ab_integral(&back, "omega").unwrap().as_constant(), Some(Rational::from(2)));

    let mut broken: serde_json::Value = serde_json::from_str(&text).unwrap();
    broken["fixed_points"][0]["weights"] = serde_json::json!([0]);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(broken.to_string().as_bytes()).unwrap();
    assert!(matches!(ManifoldModel::from_json_file(file.path()), Err(LocalizationError::ZeroWeight(_))));
    assert!(matches!(load_model("no/such/model.json"), Err(LocalizationError::UnknownModel(_))));
    assert_eq!(load_model("c3").unwrap().m, 3);
}

proptest! {
    #[test]
    fn formal_integral_is_homogeneous(
        lists in prop::collection::vec(prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 3), 1..4),
        c in prop_oneof![-3i64..=-1, 2i64..=3],
    ) {
        let base = formal_integral(&lists).unwrap();
        let scaled: Vec<Vec<i64>> = lists.iter().map(|l| l.iter().map(|w| w * c).collect()).collect();
        let expect = base.scale(&Rational::from(c).pow(-3));
        prop_assert_eq!(formal_integral(&scaled).unwrap(), expect);
    }
}
