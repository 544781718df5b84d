//! Equivariant Morse series for rank-2, odd-degree, fixed-determinant
//! moduli of bundles over a genus-g curve.
//!
//! The equivariant series of the space of connections splits as the
//! Poincaré polynomial of the moduli space plus one shifted contribution per
//! unstable stratum `μ >= 1`. The exponents entering the three pieces are
//! supplied by an [`ExponentRule`], so the identity can be checked exactly
//! for competing choices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{binomial, AlgebraError, LaurentPoly, Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuliError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("truncation order {order} is below 6g − 6 = {min}")]
    OrderTooSmall { order: usize, min: usize },
    #[error("stratum index must be at least 1")]
    BadStratum,
    #[error("unknown exponent rule {0:?}")]
    UnknownRule(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Exponents of the three pieces of the splitting.
pub trait ExponentRule: Send + Sync {
    fn name(&self) -> &str;
    /// `e` in `(1 + t^3)^e / ((1 − t^4)(1 − t^2))`.
    fn equivariant_power(&self, g: u32) -> u32;
    /// `(a, b)` in the subtracted term `t^a (1 + t)^b` of the moduli numerator,
    /// whose leading part is `(1 + t^3)^{2g}`.
    fn moduli_correction(&self, g: u32) -> (u32, u32);
    /// Lowest degree of the stratum `μ`.
    fn stratum_degree(&self, g: u32, mu: u32) -> u32;
}

/// The exponents under which the splitting is an exact identity.
pub struct Reconciled;

impl ExponentRule for Reconciled {
    fn name(&self) -> &str {
        "reconciled"
    }
    fn equivariant_power(&self, g: u32) -> u32 {
        2 * g
    }
    fn moduli_correction(&self, g: u32) -> (u32, u32) {
        (2 * g, 2 * g)
    }
    fn stratum_degree(&self, g: u32, mu: u32) -> u32 {
        2 * g + 4 * mu - 4
    }
}

/// The exponents as they are usually printed: `(1 + t^3)^g`,
/// `t^{2g}(1 + t)^g` and stratum index `2g + 4μ`.
pub struct Printed;

impl ExponentRule for Printed {
    fn name(&self) -> &str {
        "paper"
    }
    fn equivariant_power(&self, g: u32) -> u32 {
        g
    }
    fn moduli_correction(&self, g: u32) -> (u32, u32) {
        (2 * g, g)
    }
    fn stratum_degree(&self, g: u32, mu: u32) -> u32 {
        2 * g + 4 * mu
    }
}

pub fn exponent_rule(name: &str) -> Result<Box<dyn ExponentRule>, ModuliError> {
    match name {
        "reconciled" => Ok(Box::new(Reconciled)),
        "paper" | "printed" => Ok(Box::new(Printed)),
        _ => Err(ModuliError::UnknownRule(name.to_string())),
    }
}

pub struct SeriesParams {
    pub genus: u32,
    pub order: usize,
    pub rule: Box<dyn ExponentRule>,
}

impl SeriesParams {
    pub fn new(genus: u32, order: Option<usize>, rule: Box<dyn ExponentRule>) -> Result<Self, ModuliError> {
        if genus < 2 {
            return Err(ModuliError::GenusTooSmall(genus));
        }
        let min = 6 * genus as usize - 6;
        let order = order.unwrap_or(6 * genus as usize + 10);
        if order < min {
            return Err(ModuliError::OrderTooSmall { order, min });
        }
        Ok(SeriesParams { genus, order, rule })
    }

    pub fn reconciled(genus: u32) -> Result<Self, ModuliError> {
        SeriesParams::new(genus, None, Box::new(Reconciled))
    }
}

fn t_poly(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms("t", terms.iter().map(|&(e, c)| (e, Rational::from(c))))
}

fn one_plus_t_pow(k: i64, e: u32) -> LaurentPoly {
    t_poly(&[(0, 1), (k, 1)]).pow(e)
}

/// Expansion of a polynomial in `t` truncated at `order`.
fn to_series(p: &LaurentPoly, order: usize) -> TruncatedSeries<Rational> {
    let coeffs = (0..=order as i64).map(|e| p.coeff(e)).collect();
    TruncatedSeries::new("t", order, coeffs, &Rational::zero())
}

/// `1 / (1 − t^k)` truncated.
fn geometric(k: usize, order: usize) -> TruncatedSeries<Rational> {
    let coeffs = (0..=order).map(|e| if e % k == 0 { Rational::one() } else { Rational::zero() }).collect();
    TruncatedSeries::new("t", order, coeffs, &Rational::zero())
}

/// `(1 + t^3)^e / ((1 − t^4)(1 − t^2))`.
pub fn equivariant_series(p: &SeriesParams) -> TruncatedSeries<Rational> {
    let num = to_series(&one_plus_t_pow(3, p.rule.equivariant_power(p.genus)), p.order);
    num.mul(&geometric(4, p.order)).and_then(|s| s.mul(&geometric(2, p.order))).expect("same variable")
}

/// `t^d (1 + t)^{2g} / (1 − t^2)` with `d` from the exponent rule.
pub fn stratum_series(p: &SeriesParams, mu: u32) -> Result<TruncatedSeries<Rational>, ModuliError> {
    if mu == 0 {
        return Err(ModuliError::BadStratum);
    }
    let d = p.rule.stratum_degree(p.genus, mu) as i64;
    let num = one_plus_t_pow(1, 2 * p.genus).shift(d);
    Ok(to_series(&num, p.order).mul(&geometric(2, p.order)).expect("same variable"))
}

/// `[(1 + t^3)^{2g} − t^a (1 + t)^b] / ((1 − t^2)(1 − t^4))` as an exact
/// quotient.
pub fn moduli_poincare(p: &SeriesParams) -> Result<LaurentPoly, ModuliError> {
    let g = p.genus;
    let (a, b) = p.rule.moduli_correction(g);
    let num = one_plus_t_pow(3, 2 * g).checked_sub(&one_plus_t_pow(1, b).shift(a as i64))?;
    let den = t_poly(&[(0, 1), (2, -1)]).checked_mul(&t_poly(&[(0, 1), (4, -1)]))?;
    Ok(num.exact_div(&den)?)
}

/// `μ^2 + (1 − μ)^2`.
pub fn critical_value(mu: u32) -> Result<Rational, ModuliError> {
    if mu == 0 {
        return Err(ModuliError::BadStratum);
    }
    let m = mu as i64;
    Ok(Rational::from(m * m + (1 - m) * (1 - m)))
}

/// `a_ij` for `|i| <= i_max`, `0 <= j <= j_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub i_max: i64,
    pub j_max: u32,
    /// `entries[i][j]`, keyed by the centered degree `i`.
    pub entries: BTreeMap<i64, Vec<i64>>,
}

impl HomologyTable {
    pub fn get(&self, i: i64, j: u32) -> i64 {
        self.entries.get(&i).and_then(|row| row.get(j as usize)).copied().unwrap_or(0)
    }
}

/// `(t^{2j} − t^{−2j})(t^j − t^{−j}) / ((t^2 − t^{−2})(t − t^{−1}))`.
pub fn aij_generating(j: u32) -> Result<LaurentPoly, ModuliError> {
    let j = j as i64;
    let num = t_poly(&[(2 * j, 1), (-2 * j, -1)]).checked_mul(&t_poly(&[(j, 1), (-j, -1)]))?;
    let den = t_poly(&[(2, 1), (-2, -1)]).checked_mul(&t_poly(&[(1, 1), (-1, -1)]))?;
    Ok(num.exact_div(&den)?)
}

pub fn aij_table(i_max: i64, j_max: u32) -> Result<HomologyTable, ModuliError> {
    let quotients = (0..=j_max).map(aij_generating).collect::<Result<Vec<_>, _>>()?;
    let mut entries = BTreeMap::new();
    for i in -i_max..=i_max {
        let row = quotients
            .iter()
            .map(|q| q.coeff(i).to_i64().ok_or_else(|| AlgebraError::NonExactDivision(format!("a_{i} not integral"))))
            .collect::<Result<Vec<_>, _>>()?;
        entries.insert(i, row);
    }
    Ok(HomologyTable { i_max, j_max, entries })
}

/// `sum_i (sum_j a_ij C(2g, g + j)) t^{3g − 3 + i}`.
pub fn homology_via_aij(p: &SeriesParams) -> Result<LaurentPoly, ModuliError> {
    let g = p.genus as i64;
    let half = 3 * g - 3;
    let table = aij_table(half, p.genus)?;
    let mut terms = Vec::new();
    for i in -half..=half {
        let mut acc = Rational::zero();
        for j in 0..=p.genus {
            let a = table.get(i, j);
            if a != 0 {
                acc += &(Rational::from(a) * Rational::from(binomial(2 * g, g + j as i64)));
            }
        }
        terms.push((half + i, acc));
    }
    Ok(LaurentPoly::from_terms("t", terms))
}

/// Outcome of checking the splitting through the truncation order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub genus: u32,
    pub rule: String,
    pub order: usize,
    pub strata: u32,
    pub moduli_polynomial: Option<LaurentPoly>,
    pub division_error: Option<String>,
    /// First degree where the two sides disagree.
    pub first_mismatch: Option<usize>,
    pub holds: bool,
}

/// Compares the equivariant series with the moduli polynomial plus every
/// stratum whose lowest degree is within the truncation order.
pub fn check_splitting(p: &SeriesParams) -> SplittingReport {
    let mut strata = 0;
    while p.rule.stratum_degree(p.genus, strata + 1) as usize <= p.order {
        strata += 1;
    }
    let mut report = SplittingReport {
        genus: p.genus,
        rule: p.rule.name().to_string(),
        order: p.order,
        strata,
        moduli_polynomial: None,
        division_error: None,
        first_mismatch: None,
        holds: false,
    };
    let pm = match moduli_poincare(p) {
        Ok(pm) => pm,
        Err(e) => {
            report.division_error = Some(e.to_string());
            return report;
        }
    };
    let mut rhs = to_series(&pm, p.order);
    for mu in 1..=strata {
        rhs = rhs.add(&stratum_series(p, mu).expect("mu >= 1")).expect("same variable");
    }
    let lhs = equivariant_series(p);
    report.first_mismatch = (0..=p.order).find(|&e| lhs.coeff(e) != rhs.coeff(e));
    report.holds = report.first_mismatch.is_none();
    report.moduli_polynomial = Some(pm);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_coefficients() {
        let p = SeriesParams::reconciled(2).unwrap();
        let s = equivariant_series(&p);
        let first: Vec<i64> = (0..5).map(|e| s.coeff(e).to_i64().unwrap()).collect();
        assert_eq!(first, vec![1, 0, 1, 4, 2]);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(SeriesParams::reconciled(1), Err(ModuliError::GenusTooSmall(1))));
        assert!(SeriesParams::new(3, Some(5), Box::new(Reconciled)).is_err());
        assert!(exponent_rule("nope").is_err());
    }
}
