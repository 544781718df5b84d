//! Bookkeeping for vector bundles on curves and projective spaces: line
//! bundle cohomology on P^n, Riemann–Roch, Atiyah's recursive construction of
//! indecomposable bundles on an elliptic curve, and the finite unitary pairs
//! attached to rank and degree.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{c, frobenius, kernel_frame, matrix_serde, ComplexMatrix, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BundleError {
    #[error("rank {0} and degree {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSymbol {
    pub rank: u32,
    pub degree: i64,
    pub genus: u32,
}

impl BundleSymbol {
    pub fn new(rank: u32, degree: i64, genus: u32) -> Result<Self, BundleError> {
        if rank == 0 {
            return Err(BundleError::InvalidArgument("rank must be at least 1".into()));
        }
        Ok(BundleSymbol { rank, degree, genus })
    }

    fn elliptic(rank: u32, degree: i64) -> Self {
        BundleSymbol { rank, degree, genus: 1 }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, BundleError> {
        if self.genus != other.genus {
            return Err(BundleError::InvalidArgument("bundles live on different curves".into()));
        }
        BundleSymbol::new(self.rank + other.rank, self.degree + other.degree, self.genus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// `E = λ ⊗ E'`.
    TensorLambda,
    /// `E = λ^{-1} ⊗ E'`.
    TensorLambdaInverse,
    /// `0 → C^m → E → E' → 0`.
    ExtensionByTrivial,
    /// `0 → C → F_h → F_{h-1} → 0`.
    FTowerStep,
}

/// One recursion step: `result` is built from `operand`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    pub kind: StepKind,
    pub result: BundleSymbol,
    pub operand: BundleSymbol,
    /// Copies of the trivial bundle in an extension step, zero otherwise.
    pub trivial_rank: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTree {
    pub root: BundleSymbol,
    /// From the root down to the base `E_{1,0}`.
    pub steps: Vec<ConstructionStep>,
}

impl ConstructionTree {
    /// Rebuilds `(rank, degree)` from `E_{1,0}` by running the steps backwards.
    pub fn replay(&self) -> (u32, i64) {
        let (mut r, mut d) = (1u32, 0i64);
        for s in self.steps.iter().rev() {
            match s.kind {
                StepKind::TensorLambda => d += r as i64,
                StepKind::TensorLambdaInverse => d -= r as i64,
                StepKind::ExtensionByTrivial | StepKind::FTowerStep => r += s.trivial_rank,
            }
        }
        (r, d)
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }
}

/// The indecomposable `E_{r,d}` on an elliptic curve, built by
/// `E_{r,d+r} = λ ⊗ E_{r,d}` and, for `0 < d < r`, the extension
/// `0 → C^d → E_{r,d} → E_{r-d,d} → 0`, down to `E_{1,0}`.
pub fn atiyah_tree(r: u32, d: i64) -> Result<ConstructionTree, BundleError> {
    if r == 0 {
        return Err(BundleError::InvalidArgument("rank must be at least 1".into()));
    }
    if (r as i64).gcd(&d) != 1 {
        return Err(BundleError::NotCoprime(r as i64, d));
    }
    let root = BundleSymbol::elliptic(r, d);
    let mut steps = Vec::new();
    let (mut r, mut d) = (r, d);
    loop {
        let here = BundleSymbol::elliptic(r, d);
        if d >= r as i64 || (d > 0 && r == 1) {
            d -= r as i64;
            steps.push(ConstructionStep { kind: StepKind::TensorLambda, result: here, operand: BundleSymbol::elliptic(r, d), trivial_rank: 0 });
        } else if d < 0 {
            d += r as i64;
            steps.push(ConstructionStep { kind: StepKind::TensorLambdaInverse, result: here, operand: BundleSymbol::elliptic(r, d), trivial_rank: 0 });
        } else if d == 0 {
            // gcd(r, 0) = 1 forces r = 1: the base E_{1,0}.
            break;
        } else {
            let m = d as u32;
            r -= m;
            steps.push(ConstructionStep {
                kind: StepKind::ExtensionByTrivial,
                result: here,
                operand: BundleSymbol::elliptic(r, d),
                trivial_rank: m,
            });
        }
    }
    Ok(ConstructionTree { root, steps })
}

/// Subtractive Euclid on `(r, d)` with `0 <= d`: returns
/// `(rank subtractions, degree subtractions)` until `d = 0`.
pub fn subtractive_euclid(r: u64, d: u64) -> (u64, u64) {
    let (mut a, mut b) = (r, d);
    let (mut ra, mut rb) = (0, 0);
    while a > 0 && b > 0 {
        if a > b {
            a -= b;
            ra += 1;
        } else {
            b -= a;
            rb += 1;
        }
    }
    (ra, rb)
}

/// `F_h` as `h − 1` successive extensions of `F_{h-1}` by `O`, ending at
/// `F_1 = O`.
pub fn f_tower(h: u32) -> Result<ConstructionTree, BundleError> {
    if h == 0 {
        return Err(BundleError::InvalidArgument("h must be at least 1".into()));
    }
    let steps = (2..=h)
        .rev()
        .map(|k| ConstructionStep {
            kind: StepKind::FTowerStep,
            result: BundleSymbol::elliptic(k, 0),
            operand: BundleSymbol::elliptic(k - 1, 0),
            trivial_rank: 1,
        })
        .collect();
    Ok(ConstructionTree { root: BundleSymbol::elliptic(h, 0), steps })
}

/// `χ = d + r(1 − g)`.
pub fn rr_curve(e: &BundleSymbol) -> i64 {
    e.degree + e.rank as i64 * (1 - e.genus as i64)
}

/// `(h^0, h^1)` for a semistable bundle when a vanishing theorem applies:
/// negative slope kills `h^0`, slope above `2g − 2` kills `h^1`.
pub fn semistable_cohomology(e: &BundleSymbol) -> Option<(i64, i64)> {
    let chi = rr_curve(e);
    if e.degree < 0 {
        return Some((0, -chi));
    }
    if e.degree > (2 * e.genus as i64 - 2) * e.rank as i64 {
        return Some((chi, 0));
    }
    None
}

fn binomial_u64(n: u64, k: u64) -> Result<u64, BundleError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return Err(BundleError::Overflow);
        }
    }
    Ok(acc as u64)
}

/// `h^i(P^n, O(p))` for `i = 0..=n`.
pub fn line_cohomology_pn(n: u32, p: i64) -> Result<Vec<u64>, BundleError> {
    if n == 0 {
        return Err(BundleError::InvalidArgument("n must be at least 1".into()));
    }
    let mut h = vec![0u64; n as usize + 1];
    let nn = n as i64;
    if p >= 0 {
        h[0] = binomial_u64((nn + p) as u64, nn as u64)?;
    }
    if p <= -nn - 1 {
        h[n as usize] = binomial_u64((-p - 1) as u64, nn as u64)?;
    }
    Ok(h)
}

/// `ν < d/2`, with `ν` the maximal degree of a line subbundle.
pub fn nu_stability(nu: i64, d: i64) -> bool {
    2 * nu < d
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryPair {
    #[serde(with = "matrix_serde")]
    pub a_matrix: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    pub b_matrix: ComplexMatrix,
    pub zeta: Complex64,
}

impl UnitaryPair {
    /// `‖A B A^{-1} B^{-1} − ζ I‖_F`.
    pub fn commutator_defect(&self) -> f64 {
        let a_inv = self.a_matrix.adjoint();
        let b_inv = self.b_matrix.adjoint();
        let n = self.a_matrix.nrows();
        let m = &self.a_matrix * &self.b_matrix * a_inv * b_inv;
        frobenius(&(m - ComplexMatrix::identity(n, n) * self.zeta))
    }

    /// Dimension of `{X : AX = XA, BX = XB}`.
    pub fn commutant_dimension(&self) -> Result<usize, BundleError> {
        let n = self.a_matrix.nrows();
        let id = ComplexMatrix::identity(n, n);
        // vec(MX − XM) = (I ⊗ M − Mᵀ ⊗ I) vec(X).
        let block = |m: &ComplexMatrix| id.kronecker(m) - m.transpose().kronecker(&id);
        let mut sys = ComplexMatrix::zeros(2 * n * n, n * n);
        sys.view_mut((0, 0), (n * n, n * n)).copy_from(&block(&self.a_matrix));
        sys.view_mut((n * n, 0), (n * n, n * n)).copy_from(&block(&self.b_matrix));
        Ok(kernel_frame(&sys, 1e-8)?.ncols())
    }
}

/// `A e_k = e_{k-1}` (indices mod r), `B = diag(ζ, ζ^2, …, ζ^r)` with
/// `ζ = exp(2πi d/r)`.
pub fn ns_matrices(r: u32, d: i64) -> Result<UnitaryPair, BundleError> {
    if r == 0 {
        return Err(BundleError::InvalidArgument("rank must be at least 1".into()));
    }
    if (r as i64).gcd(&d) != 1 {
        return Err(BundleError::NotCoprime(r as i64, d));
    }
    let n = r as usize;
    let zeta = Complex64::from_polar(1.0, 2.0 * PI * d as f64 / r as f64);
    let a = ComplexMatrix::from_fn(n, n, |i, j| if (i + 1) % n == j % n { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let b = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            // Exact phases: reduce the exponent k·d modulo r before taking cos/sin.
            let e = ((i as i64 + 1) * d).rem_euclid(r as i64);
            Complex64::from_polar(1.0, 2.0 * PI * e as f64 / r as f64)
        } else {
            c(0.0, 0.0)
        }
    });
    Ok(UnitaryPair { a_matrix: a, b_matrix: b, zeta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_shift_layout() {
        let p = ns_matrices(2, 1).unwrap();
        assert_eq!(p.a_matrix, crate::numerics::real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!((p.b_matrix[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((p.b_matrix[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn euclid_counts() {
        assert_eq!(subtractive_euclid(5, 3), (2, 2));
        assert_eq!(subtractive_euclid(1, 0), (0, 0));
    }
}
