//! Instanton counting on `R^4` by torus localization: fixed points labelled
//! by tuples of partitions, the generating function `Z`, its logarithm, and
//! periods of the curve `Λ(w + 1/w) = z^2 + u`.
//!
//! Variables are `e1, e2` for rank 1 and `e1, e2, a` for rank 2, with
//! Coulomb offsets `(a, −a)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{partitions_of, AlgebraError, MPoly, Partition, Rational, RationalFunction, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NekrasovError {
    #[error("rank {0} not supported (use 1 or 2)")]
    UnsupportedRank(u32),
    #[error("a tangent weight vanishes identically at fixed point {0:?}")]
    ZeroWeightAtGenericPoint(Vec<Partition>),
    #[error("coefficient of Λ^{0} keeps a pole at ε = 0")]
    PolePersists(usize),
    #[error("branch point at distance {0:e} from the unit circle")]
    BranchCollision(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn variables(rank: u32) -> Vec<String> {
    let mut v = vec!["e1".to_string(), "e2".to_string()];
    if rank == 2 {
        v.push("a".to_string());
    }
    v
}

fn check_rank(rank: u32) -> Result<(), NekrasovError> {
    if rank == 1 || rank == 2 {
        Ok(())
    } else {
        Err(NekrasovError::UnsupportedRank(rank))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointTuple {
    pub partitions: Vec<Partition>,
}

impl FixedPointTuple {
    pub fn size(&self) -> u32 {
        self.partitions.iter().map(|p| p.size()).sum()
    }
}

/// All `rank`-tuples of partitions of total size `k`. Tuples with larger
/// leading slots come first; within a size split, partitions follow
/// [`partitions_of`].
pub fn fixed_points(rank: u32, k: u32) -> Result<Vec<FixedPointTuple>, NekrasovError> {
    check_rank(rank)?;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    tuples(rank as usize, k, &mut cur, &mut out);
    Ok(out)
}

fn tuples(slots: usize, rest: u32, cur: &mut Vec<Partition>, out: &mut Vec<FixedPointTuple>) {
    if slots == 1 {
        for p in partitions_of(rest) {
            cur.push(p);
            out.push(FixedPointTuple { partitions: cur.clone() });
            cur.pop();
        }
        return;
    }
    for first in (0..=rest).rev() {
        for p in partitions_of(first) {
            cur.push(p);
            tuples(slots - 1, rest - first, cur, out);
            cur.pop();
        }
    }
}

/// Linear form `c_a a + c1 e1 + c2 e2` in the rank's variables.
fn form(rank: u32, c1: i64, c2: i64, ca: i64) -> MPoly {
    let mut coeffs = vec![Rational::from(c1), Rational::from(c2)];
    if rank == 2 {
        coeffs.push(Rational::from(ca));
    }
    MPoly::linear(&coeffs, Rational::zero())
}

/// The `2 r k` tangent weights at a fixed point. For slots `α, β` with
/// offsets `a_α, a_β`, boxes `s` of `λ_α` contribute
/// `a_β − a_α − e1 l_{λ_β}(s) + e2 (arm_{λ_α}(s) + 1)` and boxes of `λ_β`
/// contribute `a_β − a_α + e1 (l_{λ_α}(s) + 1) − e2 arm_{λ_β}(s)`.
/// Arm and leg may be negative for boxes outside a diagram.
pub fn tangent_weights(fp: &FixedPointTuple) -> Result<Vec<MPoly>, NekrasovError> {
    let rank = fp.partitions.len() as u32;
    check_rank(rank)?;
    // Offsets in units of a.
    let offset = |i: usize| -> i64 {
        if rank == 1 {
            0
        } else if i == 0 {
            1
        } else {
            -1
        }
    };
    let mut out = Vec::with_capacity(2 * rank as usize * fp.size() as usize);
    for (al, la) in fp.partitions.iter().enumerate() {
        for (be, lb) in fp.partitions.iter().enumerate() {
            let shift = offset(be) - offset(al);
            for (i, j) in la.boxes() {
                out.push(form(rank, -lb.leg(i, j), la.arm(i, j) + 1, shift));
            }
            for (i, j) in lb.boxes() {
                out.push(form(rank, la.leg(i, j) + 1, -lb.arm(i, j), shift));
            }
        }
    }
    if out.iter().any(|w| w.is_zero()) {
        return Err(NekrasovError::ZeroWeightAtGenericPoint(fp.partitions.clone()));
    }
    Ok(out)
}

/// `prod 1/w` over the tangent weights.
pub fn fixed_point_contribution(fp: &FixedPointTuple) -> Result<RationalFunction, NekrasovError> {
    let vars = variables(fp.partitions.len() as u32);
    let n = vars.len();
    let ws = tangent_weights(fp)?;
    Ok(RationalFunction::from_factored(vars, MPoly::one(n), ws.into_iter().map(|w| (w, 1)).collect())?)
}

/// Ordered pairwise merge; the grouping depends only on the length.
fn tree_add(mut v: Vec<RationalFunction>) -> Result<RationalFunction, NekrasovError> {
    while v.len() > 1 {
        v = v
            .par_chunks(2)
            .map(|c| if c.len() == 2 { c[0].add(&c[1]) } else { Ok(c[0].clone()) })
            .collect::<Result<Vec<_>, _>>()?;
    }
    Ok(v.pop().expect("nonempty"))
}

/// `Z_k = sum over fixed points of prod 1/w`.
pub fn instanton_coefficient(rank: u32, k: u32) -> Result<RationalFunction, NekrasovError> {
    let fps = fixed_points(rank, k)?;
    let parts = fps.par_iter().map(fixed_point_contribution).collect::<Result<Vec<_>, _>>()?;
    tree_add(parts)
}

/// `Z = sum_k Λ^k Z_k` through `Λ^order`.
pub fn z_series(rank: u32, order: usize) -> Result<TruncatedSeries<RationalFunction>, NekrasovError> {
    check_rank(rank)?;
    let coeffs = (0..=order as u32).map(|k| instanton_coefficient(rank, k)).collect::<Result<Vec<_>, _>>()?;
    let one = RationalFunction::one_in(variables(rank));
    Ok(TruncatedSeries::new("Lambda", order, coeffs, &one))
}

/// `e1 e2 log Z`.
pub fn prepotential(rank: u32, order: usize) -> Result<TruncatedSeries<RationalFunction>, NekrasovError> {
    let z = z_series(rank, order)?;
    let log = z.log()?;
    let vars = variables(rank);
    let e1e2 = RationalFunction::var(vars.clone(), 0).mul(&RationalFunction::var(vars.clone(), 1))?;
    let coeffs = log.coefficients().iter().map(|c| c.mul(&e1e2)).collect::<Result<Vec<_>, _>>()?;
    Ok(TruncatedSeries::new("Lambda", order, coeffs, &RationalFunction::one_in(vars)))
}

/// Limits of the prepotential coefficients along `e1 = e2 = ε → 0`, as
/// rational functions of the remaining variables (`a` for rank 2, none for
/// rank 1).
pub fn prepotential_limit(rank: u32, order: usize) -> Result<Vec<RationalFunction>, NekrasovError> {
    let f = prepotential(rank, order)?;
    limits_of(rank, &f)
}

pub fn limits_of(rank: u32, f: &TruncatedSeries<RationalFunction>) -> Result<Vec<RationalFunction>, NekrasovError> {
    // (e1, e2, a) -> (eps, eps, a) in variables (eps, a).
    let mut diag_vars = vec!["eps".to_string()];
    let mut rest_vars = Vec::new();
    if rank == 2 {
        diag_vars.push("a".to_string());
        rest_vars.push("a".to_string());
    }
    let n = diag_vars.len();
    let mut images = vec![MPoly::var(n, 0), MPoly::var(n, 0)];
    if rank == 2 {
        images.push(MPoly::var(n, 1));
    }
    // Drop eps after restriction.
    let drop: Vec<MPoly> = if rank == 2 { vec![MPoly::zero(1), MPoly::var(1, 0)] } else { vec![MPoly::zero(0)] };
    f.coefficients()
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let d = c.substitute(diag_vars.clone(), &images)?;
            let r = d.restrict_to_zero(0).ok_or(NekrasovError::PolePersists(k))?;
            Ok(r.substitute(rest_vars.clone(), &drop)?)
        })
        .collect()
}

/// Compares each `Z_k` with `1/(k! (e1 e2)^k)`; returns the first order that
/// disagrees.
pub fn check_exp(z: &TruncatedSeries<RationalFunction>) -> Result<Option<usize>, NekrasovError> {
    let vars = variables(1);
    let e1e2 = RationalFunction::var(vars.clone(), 0).mul(&RationalFunction::var(vars.clone(), 1))?;
    let mut fact = Rational::one();
    for k in 0..=z.order() {
        if k > 0 {
            fact *= &Rational::from(k as i64);
        }
        let expect = e1e2.pow(k as u32).scale(&fact).recip()?;
        if z.coeff(k) != &expect {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwPeriod {
    pub u: Complex64,
    pub lambda: f64,
    pub samples: usize,
    pub a: Complex64,
    /// `|a(samples) − a(samples / 2)|`.
    pub doubling_difference: f64,
    /// Distance of the nearest finite nonzero branch point from `|w| = 1`.
    pub branch_clearance: f64,
}

/// Roots of `w^2 − (u/Λ) w + 1`, the branch points besides `0` and `∞`.
pub fn branch_points(u: Complex64, lambda: f64) -> [Complex64; 2] {
    let b = u / lambda;
    let disc = (b * b - 4.0).sqrt();
    [(b + disc) / 2.0, (b - disc) / 2.0]
}

/// `(1/2πi) ∮_{|w|=1} z dw/w`, i.e. the mean of `z` over the circle, using
/// the branch equal to the principal square root of `2Λ − u` at `w = 1` and
/// continued along the contour.
pub fn sw_periods(u: Complex64, lambda: f64, samples: usize) -> Result<SwPeriod, NekrasovError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(NekrasovError::InvalidArgument("lambda must be positive".into()));
    }
    if samples < 8 || samples % 2 != 0 {
        return Err(NekrasovError::InvalidArgument("samples must be even and at least 8".into()));
    }
    let clearance = branch_points(u, lambda).iter().map(|w| (w.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
    if clearance < 1e-6 {
        return Err(NekrasovError::BranchCollision(clearance));
    }
    let a = circle_mean(u, lambda, samples);
    let half = circle_mean(u, lambda, samples / 2);
    Ok(SwPeriod { u, lambda, samples, a, doubling_difference: (a - half).norm(), branch_clearance: clearance })
}

fn circle_mean(u: Complex64, lambda: f64, n: usize) -> Complex64 {
    let mut prev: Option<Complex64> = None;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let mut z = (lambda * (w + 1.0 / w) - u).sqrt();
        if let Some(p) = prev {
            if (z - p).norm() > (z + p).norm() {
                z = -z;
            }
        }
        prev = Some(z);
        acc += z;
    }
    acc / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(fixed_points(1, 2).unwrap().len(), 2);
        assert_eq!(fixed_points(2, 1).unwrap().len(), 2);
        assert_eq!(fixed_points(2, 3).unwrap().len(), 10);
        assert!(fixed_points(3, 1).is_err());
    }

    #[test]
    fn one_box_rank_one() {
        let fp = &fixed_points(1, 1).unwrap()[0];
        let ws = tangent_weights(fp).unwrap();
        assert_eq!(ws.len(), 2);
        assert!(ws.contains(&MPoly::var(2, 0)) && ws.contains(&MPoly::var(2, 1)));
    }
}
