//! Exact arithmetic: rationals, Laurent polynomials, sparse multivariate
//! polynomials, rational functions, truncated power series and integer
//! partitions. No floating point is used anywhere in this module.

mod laurent;
mod mpoly;
mod partition;
mod ratfun;
mod rational;
mod series;

pub use laurent::LaurentPoly;
pub use mpoly::{Monomial, MPoly};
pub use partition::{partition_count, partitions_of, Partition};
pub use ratfun::RationalFunction;
pub use rational::{binomial, Rational};
pub use series::{Coefficient, TruncatedSeries};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division leaves a nonzero remainder: {0}")]
    NonExactDivision(String),
    #[error("series has constant term {0}, expected 1")]
    BadConstantTerm(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Arithmetic selector for [`laurent_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Mul,
    ExactDiv,
}

/// Binary arithmetic on Laurent polynomials; `ExactDiv` only succeeds when
/// the remainder is identically zero.
pub fn laurent_arith(
    a: &LaurentPoly,
    b: &LaurentPoly,
    op: LaurentOp,
) -> Result<LaurentPoly, AlgebraError> {
    match op {
        LaurentOp::Add => a.checked_add(b),
        LaurentOp::Mul => a.checked_mul(b),
        LaurentOp::ExactDiv => a.exact_div(b),
    }
}

/// `log(s)` for a series with constant term 1.
pub fn series_log<C: Coefficient>(s: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>, AlgebraError> {
    s.log()
}

/// Cancels common factors and returns the canonical form.
pub fn ratfun_simplify(f: &RationalFunction) -> RationalFunction {
    f.simplified()
}
