//! Truncated power series in one variable with exact coefficients.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Rational, RationalFunction};

/// Coefficient ring for [`TruncatedSeries`]. Methods take `&self` as a
/// template so that rings carrying context (variable lists) can build
/// their own zero and one.
pub trait Coefficient: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, k: &Rational) -> Self;
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, k: &Rational) -> Self {
        self * k
    }
}

impl Coefficient for RationalFunction {
    fn zero_like(&self) -> Self {
        RationalFunction::zero_in(self.variables().to_vec())
    }
    fn one_like(&self) -> Self {
        RationalFunction::one_in(self.variables().to_vec())
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunction::add(self, other).expect("series coefficients share variables")
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::mul(self, other).expect("series coefficients share variables")
    }
    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }
    fn scale(&self, k: &Rational) -> Self {
        RationalFunction::scale(self, k)
    }
}

/// `sum_{n <= order} c_n x^n`, with everything above `order` discarded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries<C> {
    variable: String,
    order: usize,
    coefficients: Vec<C>,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Pads or truncates `coefficients` to length `order + 1`; `template`
    /// supplies the zero used for padding.
    pub fn new(variable: &str, order: usize, mut coefficients: Vec<C>, template: &C) -> Self {
        coefficients.truncate(order + 1);
        while coefficients.len() < order + 1 {
            coefficients.push(template.zero_like());
        }
        TruncatedSeries { variable: variable.to_string(), order, coefficients }
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coefficients
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coefficients[n]
    }

    fn template(&self) -> &C {
        &self.coefficients[0]
    }

    fn check(&self, other: &Self) -> Result<usize, AlgebraError> {
        if self.variable != other.variable {
            return Err(AlgebraError::VariableMismatch(format!("{} vs {}", self.variable, other.variable)));
        }
        Ok(self.order.min(other.order))
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        let n = self.check(other)?;
        let c = (0..=n).map(|i| self.coefficients[i].add(&other.coefficients[i])).collect();
        Ok(TruncatedSeries { variable: self.variable.clone(), order: n, coefficients: c })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            variable: self.variable.clone(),
            order: self.order,
            coefficients: self.coefficients.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        TruncatedSeries {
            variable: self.variable.clone(),
            order: self.order,
            coefficients: self.coefficients.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let n = self.check(other)?;
        let mut out = vec![self.template().zero_like(); n + 1];
        for i in 0..=n {
            if self.coefficients[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coefficients[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coefficients[i].mul(&other.coefficients[j]));
            }
        }
        Ok(TruncatedSeries { variable: self.variable.clone(), order: n, coefficients: out })
    }

    fn unit_part(&self) -> Result<Self, AlgebraError> {
        if !self.coefficients[0].is_one() {
            return Err(AlgebraError::BadConstantTerm(format!("{:?}", self.coefficients[0])));
        }
        let mut u = self.clone();
        u.coefficients[0] = self.template().zero_like();
        Ok(u)
    }

    /// `log(s) = sum_{n>=1} (-1)^{n+1} u^n / n` with `u = s - 1`.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        let u = self.unit_part()?;
        let mut acc = TruncatedSeries::new(&self.variable, self.order, Vec::new(), self.template());
        let mut power = u.clone();
        for n in 1..=self.order {
            let k = Rational::new(if n % 2 == 1 { 1 } else { -1 }, n as i64)?;
            acc = acc.add(&power.scale(&k))?;
            if n < self.order {
                power = power.mul(&u)?;
            }
        }
        Ok(acc)
    }

    /// `exp(s)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.coefficients[0].is_zero() {
            return Err(AlgebraError::BadConstantTerm(format!("{:?}", self.coefficients[0])));
        }
        let one = self.template().one_like();
        let mut acc = TruncatedSeries::new(&self.variable, self.order, vec![one.clone()], &one);
        let mut term = acc.clone();
        for n in 1..=self.order {
            term = term.mul(self)?.scale(&Rational::new(1, n as i64)?);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}
