use gaugebench::algebra::{AlgebraError, LaurentPoly, Rational};
use gaugebench::moduli::{
    aij_generating, aij_table, check_splitting, critical_value, equivariant_series, exponent_rule, homology_via_aij,
    moduli_poincare, stratum_series, ModuliError, SeriesParams,
};

fn ints(p: &LaurentPoly) -> Vec<i64> {
    p.integer_coefficients().unwrap()
}

fn coeffs(s: &gaugebench::algebra::TruncatedSeries<Rational>) -> Vec<i64> {
    s.coefficients().iter().map(|c| c.to_i64().unwrap()).collect()
}

fn poly_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn binom_row(e: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for _ in 0..e {
        let mut next = vec![1i64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

/// `(1 + t^k)^e` as a dense integer vector of length `n`.
fn one_plus(k: usize, e: usize, n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for (i, c) in binom_row(e).into_iter().enumerate() {
        if i * k < n {
            out[i * k] = c;
        }
    }
    out
}

fn geometric(k: usize, n: usize) -> Vec<i64> {
    (0..n).map(|i| i64::from(i % k == 0)).collect()
}

/// Betti numbers by dense integer series division; `None` if the series
/// does not terminate at degree 6g − 6.
fn betti_oracle(g: usize) -> Option<Vec<i64>> {
    let n = 6 * g + 12;
    let mut num = one_plus(3, 2 * g, n);
    let corr = one_plus(1, 2 * g, n);
    for i in 0..n {
        if i + 2 * g < n {
            num[i + 2 * g] -= corr[i];
        }
    }
    let s = poly_mul(&poly_mul(&num, &geometric(2, n), n), &geometric(4, n), n);
    let top = 6 * g - 6;
    if s[top + 1..].iter().any(|&c| c != 0) {
        return None;
    }
    Some(s[..=top].to_vec())
}

#[test]
fn genus_two() {
    let p = SeriesParams::reconciled(2).unwrap();
    assert_eq!(ints(&moduli_poincare(&p).unwrap()), vec![1, 0, 1, 4, 1, 0, 1]);
    assert_eq!(ints(&homology_via_aij(&p).unwrap()), vec![1, 0, 1, 4, 1, 0, 1]);
    assert_eq!(&coeffs(&equivariant_series(&p))[..5], &[1, 0, 1, 4, 2]);
}

#[test]
fn poincare_matches_integer_oracle() {
    for g in 2..=8u32 {
        let p = SeriesParams::reconciled(g).unwrap();
        let pm = moduli_poincare(&p).unwrap();
        let c = ints(&pm);
        assert_eq!(Some(c.clone()), betti_oracle(g as usize), "g={g}");
        assert_eq!(pm.max_exp(), Some(6 * g as i64 - 6));
        assert!(pm.is_palindromic());
        assert!(c.iter().all(|&x| x >= 0));
        assert_eq!((c[0], c[1], c[2], c[3]), (1, 0, 1, 2 * g as i64));
    }
}

#[test]
fn printed_exponents_do_not_divide() {
    for g in 2..=6 {
        let p = SeriesParams::new(g, None, exponent_rule("paper").unwrap()).unwrap();
        assert!(matches!(moduli_poincare(&p), Err(ModuliError::Algebra(AlgebraError::NonExactDivision(_)))));
        let r = check_splitting(&p);
        assert!(!r.holds);
        assert!(r.division_error.is_some());
    }
    assert!(matches!(exponent_rule("other"), Err(ModuliError::UnknownRule(_))));
}

#[test]
fn splitting_is_exact() {
    for g in 2..=6u32 {
        let p = SeriesParams::reconciled(g).unwrap();
        let r = check_splitting(&p);
        assert!(r.holds, "g={g}: {r:?}");
        // Independent: sum the pieces by hand through the order.
        let n = p.order + 1;
        let eq = poly_mul(&poly_mul(&one_plus(3, 2 * g as usize, n), &geometric(2, n), n), &geometric(4, n), n);
        assert_eq!(coeffs(&equivariant_series(&p)), eq);
        let mut rhs = betti_oracle(g as usize).unwrap();
        rhs.resize(n, 0);
        let mut mu = 1;
        while 2 * g + 4 * mu - 4 <= p.order as u32 {
            let s = coeffs(&stratum_series(&p, mu).unwrap());
            let d = (2 * g + 4 * mu - 4) as usize;
            assert!(s[..d].iter().all(|&c| c == 0));
            assert_eq!(s[d], 1);
            for i in 0..n {
                rhs[i] += s[i];
            }
            mu += 1;
        }
        assert_eq!(rhs, eq, "g={g}");
    }
}

#[test]
fn stratum_leading_terms() {
    let p = SeriesParams::reconciled(2).unwrap();
    let s1 = coeffs(&stratum_series(&p, 1).unwrap());
    assert_eq!(s1.iter().position(|&c| c != 0), Some(4));
    let s2 = coeffs(&stratum_series(&p, 2).unwrap());
    assert_eq!(s2.iter().position(|&c| c != 0), Some(8));
    assert!(matches!(stratum_series(&p, 0), Err(ModuliError::BadStratum)));
}

#[test]
fn critical_values() {
    let v: Vec<Rational> = (1..=3).map(|m| critical_value(m).unwrap()).collect();
    assert_eq!(v, vec![Rational::from(1), Rational::from(5), Rational::from(13)]);
}

#[test]
fn aij_examples() {
    assert_eq!(ints(&aij_generating(1).unwrap()), vec![1]);
    assert!(aij_generating(0).unwrap().is_zero());
    let q2 = aij_generating(2).unwrap();
    assert_eq!((q2.min_exp(), q2.max_exp()), (Some(-3), Some(3)));
    let t = aij_table(6, 6).unwrap();
    for j in 0..=6 {
        for i in -6..=6 {
            assert_eq!(t.get(i, j), t.get(-i, j));
            assert!(t.get(i, j) >= 0);
        }
    }
    assert_eq!(t.get(0, 1), 1);
    assert_eq!(t.get(2, 1), 0);
}

#[test]
fn aij_law_is_genus_independent() {
    for g in 2..=6 {
        let p = SeriesParams::reconciled(g).unwrap();
        assert_eq!(homology_via_aij(&p).unwrap(), moduli_poincare(&p).unwrap(), "g={g}");
    }
}

#[test]
fn parameter_validation() {
    assert!(matches!(SeriesParams::reconciled(1), Err(ModuliError::GenusTooSmall(1))));
    assert!(matches!(
        SeriesParams::new(3, Some(5), exponent_rule("reconciled").unwrap()),
        Err(ModuliError::OrderTooSmall { order: 5, min: 12 })
    ));
}
