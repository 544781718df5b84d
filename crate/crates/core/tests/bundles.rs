use gaugebench::bundles::{
    atiyah_tree, f_tower, line_cohomology_pn, ns_matrices, nu_stability, rr_curve, semistable_cohomology,
    BundleError, BundleSymbol, StepKind,
};
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;
use std::f64::consts::PI;

fn sym(r: u32, d: i64, g: u32) -> BundleSymbol {
    BundleSymbol::new(r, d, g).unwrap()
}

/// Plain recursive binomial, independent of the library's.
fn choose(n: i64, k: i64) -> u64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k as usize]
}

#[test]
fn line_cohomology_examples() {
    assert_eq!(line_cohomology_pn(1, -2).unwrap(), vec![0, 1]);
    assert_eq!(line_cohomology_pn(3, -2).unwrap(), vec![0, 0, 0, 0]);
    for p in [-1, -3] {
        assert_eq!(line_cohomology_pn(3, p).unwrap(), vec![0, 0, 0, 0]);
    }
    assert_eq!(line_cohomology_pn(3, 2).unwrap(), vec![10, 0, 0, 0]);
    assert!(line_cohomology_pn(0, 1).is_err());
}

#[test]
fn line_cohomology_serre_duality_and_counts() {
    for n in 1..=4u32 {
        for p in -10..=10i64 {
            let h = line_cohomology_pn(n, p).unwrap();
            let dual = line_cohomology_pn(n, -(n as i64) - 1 - p).unwrap();
            for i in 0..=n as usize {
                assert_eq!(h[i], dual[n as usize - i], "n={n} p={p} i={i}");
            }
            assert_eq!(h[0], if p >= 0 { choose(n as i64 + p, n as i64) } else { 0 });
            // χ(O(p)) = C(n + p, n) as a polynomial in p.
            let chi: i64 = h.iter().enumerate().map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
            let poly: f64 = (1..=n as i64).map(|j| (p + j) as f64 / j as f64).product();
            assert_eq!(chi, poly.round() as i64);
        }
    }
}

#[test]
fn riemann_roch_examples() {
    let l = sym(1, 3, 2);
    assert_eq!(rr_curve(&l), 2);
    assert_eq!(semistable_cohomology(&l), Some((2, 0)));
    let e = sym(2, -3, 1);
    assert_eq!(rr_curve(&e), -3);
    assert_eq!(semistable_cohomology(&e), Some((0, 3)));
    assert_eq!(rr_curve(&sym(1, 0, 1)), 0);
    assert_eq!(semistable_cohomology(&sym(1, 1, 2)), None);
    assert!(BundleSymbol::new(0, 1, 1).is_err());
}

#[test]
fn e53_derivation() {
    let t = atiyah_tree(5, 3).unwrap();
    let shape: Vec<(StepKind, (u32, i64), (u32, i64), u32)> = t
        .steps
        .iter()
        .map(|s| (s.kind, (s.result.rank, s.result.degree), (s.operand.rank, s.operand.degree), s.trivial_rank))
        .collect();
    assert_eq!(
        shape,
        vec![
            (StepKind::ExtensionByTrivial, (5, 3), (2, 3), 3),
            (StepKind::TensorLambda, (2, 3), (2, 1), 0),
            (StepKind::ExtensionByTrivial, (2, 1), (1, 1), 1),
            (StepKind::TensorLambda, (1, 1), (1, 0), 0),
        ]
    );
    assert_eq!(t.replay(), (5, 3));
    let t = atiyah_tree(2, 1).unwrap();
    assert_eq!(t.count(StepKind::ExtensionByTrivial), 1);
    assert_eq!((t.steps[0].operand.rank, t.steps[0].operand.degree), (1, 1));
    assert!(atiyah_tree(1, 0).unwrap().steps.is_empty());
    assert!(matches!(atiyah_tree(4, 2), Err(BundleError::NotCoprime(4, 2))));
}

/// Rank subtractions of subtractive Euclid on `(r, d mod r)`.
fn rank_subtractions(r: u64, d: i64) -> usize {
    let (mut a, mut b) = (r, d.rem_euclid(r as i64) as u64);
    let mut n = 0;
    while a > 0 && b > 0 {
        if a > b {
            a -= b;
            n += 1;
        } else {
            b -= a;
        }
    }
    n
}

#[test]
fn f_towers() {
    assert!(f_tower(1).unwrap().steps.is_empty());
    let t2 = f_tower(2).unwrap();
    assert_eq!(t2.steps.len(), 1);
    assert_eq!(t2.replay(), (2, 0));
    let t4 = f_tower(4).unwrap();
    assert_eq!(t4.steps.len(), 3);
    assert_eq!(t4.replay(), (4, 0));
    assert!(t4.steps.iter().all(|s| s.kind == StepKind::FTowerStep && s.result.degree == 0));
    assert!(f_tower(0).is_err());
}

#[test]
fn ns_examples() {
    let p = ns_matrices(2, 1).unwrap();
    assert!((p.zeta - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    assert!(p.commutator_defect() < 1e-12);
    let p3 = ns_matrices(3, 1).unwrap();
    assert!((p3.zeta - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
    assert!(p3.commutator_defect() < 1e-12);
    assert!(matches!(ns_matrices(2, 2), Err(BundleError::NotCoprime(2, 2))));
}

#[test]
fn ns_all_small_ranks() {
    for r in 1..=12u32 {
        for d in -(r as i64)..=2 * r as i64 {
            if (r as i64).gcd(&d) != 1 {
                continue;
            }
            let p = ns_matrices(r, d).unwrap();
            assert!(p.commutator_defect() <= 1e-12, "r={r} d={d}");
            assert_eq!(p.commutant_dimension().unwrap(), 1, "r={r} d={d}");
            let n = r as usize;
            let id = gaugebench::numerics::ComplexMatrix::identity(n, n);
            assert!((p.a_matrix.adjoint() * &p.a_matrix - &id).norm() < 1e-12);
            assert!((p.b_matrix.adjoint() * &p.b_matrix - &id).norm() < 1e-12);
            let det_a = p.a_matrix.determinant();
            let sign = if (r - 1) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((det_a - Complex64::new(sign, 0.0)).norm() < 1e-10);
            let det_b = p.b_matrix.determinant();
            let expected = p.zeta.powu(r * (r + 1) / 2);
            assert!((det_b - expected).norm() < 1e-10);
            // A^r = I and B^r = I.
            let mut ar = id.clone();
            let mut br = id.clone();
            for _ in 0..r {
                ar = &ar * &p.a_matrix;
                br = &br * &p.b_matrix;
            }
            assert!((ar - &id).norm() < 1e-10 && (br - &id).norm() < 1e-10);
        }
    }
}

#[test]
fn stability_examples() {
    assert!(nu_stability(0, 1));
    assert!(!nu_stability(1, 2));
    assert!(nu_stability(-1, 0));
}

proptest! {
    #[test]
    fn tree_replays_and_counts_extensions(r in 1u32..=50, d in -200i64..200) {
        prop_assume!((r as i64).gcd(&d) == 1);
        let t = atiyah_tree(r, d).unwrap();
        prop_assert_eq!(t.replay(), (r, d));
        prop_assert_eq!(t.count(StepKind::ExtensionByTrivial), rank_subtractions(r as u64, d));
        prop_assert_eq!(t.steps.last().map(|s| (s.operand.rank, s.operand.degree)).unwrap_or((1, 0)), (1, 0));
    }

    #[test]
    fn euler_characteristic_is_additive(r1 in 1u32..10, d1 in -20i64..20, r2 in 1u32..10, d2 in -20i64..20, g in 0u32..6) {
        let (a, b) = (sym(r1, d1, g), sym(r2, d2, g));
        prop_assert_eq!(rr_curve(&a.direct_sum(&b).unwrap()), rr_curve(&a) + rr_curve(&b));
    }
}
