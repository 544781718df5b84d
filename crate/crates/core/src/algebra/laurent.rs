use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Rational};

/// Laurent polynomial in one named variable with exact coefficients.
///
/// JSON shape: `{"variable": "t", "terms": {"-2": "1/1", "3": "4/1"}}`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LaurentRepr", into = "LaurentRepr")]
pub struct LaurentPoly {
    variable: String,
    terms: BTreeMap<i64, Rational>,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    variable: String,
    terms: BTreeMap<i64, Rational>,
}

impl TryFrom<LaurentRepr> for LaurentPoly {
    type Error = AlgebraError;
    fn try_from(r: LaurentRepr) -> Result<Self, Self::Error> {
        Ok(LaurentPoly::from_terms(r.variable, r.terms))
    }
}

impl From<LaurentPoly> for LaurentRepr {
    fn from(p: LaurentPoly) -> Self {
        LaurentRepr { variable: p.variable, terms: p.terms }
    }
}

impl LaurentPoly {
    pub fn zero(variable: impl Into<String>) -> Self {
        LaurentPoly { variable: variable.into(), terms: BTreeMap::new() }
    }

    pub fn one(variable: impl Into<String>) -> Self {
        Self::monomial(variable, 0, Rational::one())
    }

    pub fn monomial(variable: impl Into<String>, exp: i64, coeff: Rational) -> Self {
        let mut p = Self::zero(variable);
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    pub fn from_terms(
        variable: impl Into<String>,
        terms: impl IntoIterator<Item = (i64, Rational)>,
    ) -> Self {
        let mut p = Self::zero(variable);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// Builds from small integer coefficients, index 0 = exponent `low`.
    pub fn from_ints(variable: impl Into<String>, low: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            variable,
            coeffs.iter().enumerate().map(|(i, &c)| (low + i as i64, Rational::from(c))),
        )
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, exp: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    fn same_var(&self, other: &Self) -> Result<(), AlgebraError> {
        // The zero polynomial is allowed to carry any name.
        if self.variable == other.variable || self.is_zero() || other.is_zero() {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch(format!("{} vs {}", self.variable, other.variable)))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_var(other)?;
        let mut out = self.clone();
        if out.is_zero() {
            out.variable = other.variable.clone();
        }
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_var(other)?;
        let mut out = Self::zero(self.variable.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            variable: self.variable.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.variable.clone(), self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            variable: self.variable.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.variable.clone());
        for _ in 0..n {
            acc = acc.checked_mul(self).expect("same variable");
        }
        acc
    }

    /// Quotient `self / divisor`, provided the division is exact in the
    /// Laurent ring. Monomials are units, so both sides are first shifted to
    /// polynomials with nonzero constant term and divided in `Q[t]`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.same_var(divisor)?;
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.variable.clone()));
        }
        let (a_low, a) = self.dense();
        let (b_low, b) = divisor.dense();
        if a.len() < b.len() {
            return Err(AlgebraError::NonExactDivision(format!("({self}) / ({divisor})")));
        }
        let mut rem = a;
        let lead = b.last().expect("nonzero divisor").clone();
        let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + b.len() - 1];
            if top.is_zero() {
                continue;
            }
            let q = top / &lead;
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &(&q * bj);
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NonExactDivision(format!("({self}) / ({divisor})")));
        }
        Ok(Self::from_terms(
            self.variable.clone(),
            quot.into_iter().enumerate().map(|(i, c)| (a_low - b_low + i as i64, c)),
        ))
    }

    /// (lowest exponent, dense coefficients from that exponent up).
    fn dense(&self) -> (i64, Vec<Rational>) {
        let low = self.min_exp().unwrap_or(0);
        let high = self.max_exp().unwrap_or(0);
        let mut v = vec![Rational::zero(); (high - low + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - low) as usize] = c.clone();
        }
        (low, v)
    }

    /// Substitutes `t -> 1/t`.
    pub fn reflect(&self) -> Self {
        LaurentPoly {
            variable: self.variable.clone(),
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_palindromic(&self) -> bool {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => self.reflect().shift(lo + hi) == *self,
            _ => true,
        }
    }

    /// Dense integer coefficient list from exponent 0 to the top degree,
    /// when every coefficient is an integer and no negative exponent occurs.
    pub fn integer_coefficients(&self) -> Option<Vec<i64>> {
        if self.min_exp().map_or(false, |e| e < 0) {
            return None;
        }
        let top = self.max_exp().unwrap_or(0);
        (0..=top).map(|e| self.coeff(e).to_i64()).collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag_str = if mag.is_integer() { mag.numer().to_string() } else { mag.to_string() };
            match *e {
                0 => write!(f, "{mag_str}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_str}*")?;
                    }
                    if *e == 1 {
                        write!(f, "{}", self.variable)?;
                    } else {
                        write!(f, "{}^{}", self.variable, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{laurent_arith, LaurentOp};
    use proptest::prelude::*;

    fn t(low: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_ints("t", low, c)
    }

    #[test]
    fn telescoping_quotient() {
        let num = t(0, &[1, 0, 0, 0, 0, 0, 0, 0, -1]);
        let den = t(0, &[1, 0, 0, 0, -1]);
        let q = laurent_arith(&num, &den, LaurentOp::ExactDiv).unwrap();
        assert_eq!(q, t(0, &[1, 0, 0, 0, 1]));
    }

    #[test]
    fn genus_two_quotient() {
        // (1+t^3)^4 - t^4 (1+t)^4 over (1-t^2)(1-t^4)
        let a = t(0, &[1, 0, 0, 1]).pow(4);
        let b = t(0, &[1, 1]).pow(4).shift(4);
        let num = a.checked_sub(&b).unwrap();
        let den = t(0, &[1, 0, -1]).checked_mul(&t(0, &[1, 0, 0, 0, -1])).unwrap();
        let q = num.exact_div(&den).unwrap();
        assert_eq!(q, t(0, &[1, 0, 1, 4, 1, 0, 1]));
    }

    #[test]
    fn non_exact_and_zero() {
        let r = t(0, &[1, 1]).exact_div(&t(0, &[1, -1]));
        assert!(matches!(r, Err(AlgebraError::NonExactDivision(_))));
        let r = t(0, &[1]).exact_div(&LaurentPoly::zero("t"));
        assert_eq!(r, Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn negative_exponents() {
        // (t^2 - t^-2) / (t - t^-1) = t + t^-1
        let q = t(-2, &[-1, 0, 0, 0, 1]).exact_div(&t(-1, &[-1, 0, 1])).unwrap();
        assert_eq!(q, t(-1, &[1, 0, 1]));
        assert!(q.is_palindromic());
    }

    #[test]
    fn json_shape() {
        let p = t(-1, &[2, 0, -3]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"variable":"t","terms":{"-1":"2/1","1":"-3/1"}}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn variable_mismatch() {
        let a = LaurentPoly::from_ints("t", 0, &[1, 1]);
        let b = LaurentPoly::from_ints("s", 0, &[1, 1]);
        assert!(matches!(a.checked_mul(&b), Err(AlgebraError::VariableMismatch(_))));
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
        (-4i64..4, prop::collection::vec(-5i64..=5, 1..6))
            .prop_map(|(low, c)| LaurentPoly::from_ints("t", low, &c))
    }

    proptest! {
        #[test]
        fn product_divides_back(a in arb_laurent(), b in arb_laurent()) {
            prop_assume!(!b.is_zero());
            let prod = a.checked_mul(&b).unwrap();
            prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
        }
    }
}
