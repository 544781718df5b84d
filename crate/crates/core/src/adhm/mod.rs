//! ADHM instanton data and the gauge fields built from it.
//!
//! Data `(α1, α2, P, Q)` with `α_i: k×k`, `P: k×r`, `Q: r×k` define, at each
//! point `x` of R^4 with `z1 = x1 + i x2`, `z2 = x3 + i x4`, the operator
//!
//! ```text
//!         ⎡ (α1 − z1)*   (α2 − z2)*   Q* ⎤
//! D(x) =  ⎣ −(α2 − z2)    α1 − z1     P  ⎦      (2k × (2k + r))
//! ```
//!
//! whose kernel is the fiber of the instanton bundle. `D D*` is
//! block-diagonal exactly when the ADHM equations hold, which is what makes
//! the kernel dimension constant.

mod field;
mod integrals;
mod operator;

pub use field::{
    asd_residual, build_connection, connection_stencil, curvature_from_stencil, field_strength, gauge_transform,
    ConnectionStencil, CurvatureSample, GaugeSample,
};
pub use integrals::{charge_and_action, grid_report, projector_densities, GridReport};
pub use operator::{adhm_operator, projector, ProjectorWorkspace};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{c, commutator, frobenius, matrix_serde, ComplexMatrix, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdhmError {
    #[error("instanton centers {0} and {1} coincide")]
    DuplicateCenters(usize, usize),
    #[error("kernel has dimension {found} at {x:?}, expected {expected}")]
    KernelDimensionMismatch { expected: usize, found: usize, x: [f64; 4] },
    #[error("reference frame degenerates at {0:?}")]
    SingularGauge([f64; 4]),
    #[error("gauge function is not unitary: defect {0:e}")]
    NonUnitary(f64),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("ADHM equations violated: residuals ({0:e}, {1:e})")]
    NotAdhm(f64, f64),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdhmData {
    pub k: usize,
    pub r: usize,
    #[serde(with = "matrix_serde")]
    pub alpha1: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    pub alpha2: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    pub p_map: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    pub q_map: ComplexMatrix,
    #[serde(default)]
    pub deformation: f64,
}

#[derive(Deserialize)]
struct AdhmRepr {
    k: usize,
    r: usize,
    #[serde(with = "matrix_serde")]
    alpha1: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    alpha2: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    p_map: ComplexMatrix,
    #[serde(with = "matrix_serde")]
    q_map: ComplexMatrix,
    #[serde(default)]
    deformation: f64,
}

impl<'de> Deserialize<'de> for AdhmData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = AdhmRepr::deserialize(d)?;
        // Row lists cannot express a k×r matrix with k = 0.
        let fix = |m: ComplexMatrix, rows: usize, cols: usize| {
            if m.is_empty() {
                ComplexMatrix::zeros(rows, cols)
            } else {
                m
            }
        };
        AdhmData::new(
            fix(r.alpha1, r.k, r.k),
            fix(r.alpha2, r.k, r.k),
            fix(r.p_map, r.k, r.r),
            fix(r.q_map, r.r, r.k),
            r.deformation,
        )
        .and_then(|a| {
            if a.k == r.k && a.r == r.r {
                Ok(a)
            } else {
                Err(AdhmError::InvalidData("declared k, r disagree with matrix sizes".into()))
            }
        })
        .map_err(serde::de::Error::custom)
    }
}

impl AdhmData {
    pub fn new(
        alpha1: ComplexMatrix,
        alpha2: ComplexMatrix,
        p_map: ComplexMatrix,
        q_map: ComplexMatrix,
        deformation: f64,
    ) -> Result<Self, AdhmError> {
        let k = alpha1.nrows();
        let r = p_map.ncols();
        let ok = alpha1.shape() == (k, k)
            && alpha2.shape() == (k, k)
            && p_map.shape() == (k, r)
            && q_map.shape() == (r, k)
            && r > 0;
        if !ok {
            return Err(AdhmError::InvalidData(format!(
                "sizes α1 {:?}, α2 {:?}, P {:?}, Q {:?}",
                alpha1.shape(),
                alpha2.shape(),
                p_map.shape(),
                q_map.shape()
            )));
        }
        Ok(AdhmData { k, r, alpha1, alpha2, p_map, q_map, deformation })
    }

    /// Charge-zero datum: the trivial rank-`r` bundle with the flat connection.
    pub fn flat(r: usize) -> Self {
        AdhmData {
            k: 0,
            r,
            alpha1: ComplexMatrix::zeros(0, 0),
            alpha2: ComplexMatrix::zeros(0, 0),
            p_map: ComplexMatrix::zeros(0, r),
            q_map: ComplexMatrix::zeros(r, 0),
            deformation: 0.0,
        }
    }

    /// Acts by `u ∈ U(k)`: `α ↦ u α u*`, `P ↦ u P`, `Q ↦ Q u*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let ua = u.adjoint();
        AdhmData {
            alpha1: u * &self.alpha1 * &ua,
            alpha2: u * &self.alpha2 * &ua,
            p_map: u * &self.p_map,
            q_map: &self.q_map * &ua,
            ..self.clone()
        }
    }

    /// Moves every center by `(w1, w2) ∈ C^2`.
    pub fn translate(&self, shift: [f64; 4]) -> Self {
        let id = ComplexMatrix::identity(self.k, self.k);
        AdhmData {
            alpha1: &self.alpha1 + &id * c(shift[0], shift[1]),
            alpha2: &self.alpha2 + &id * c(shift[2], shift[3]),
            ..self.clone()
        }
    }

    /// Scales lengths by `s`: `α ↦ s α`, `P, Q ↦ s P, s Q`.
    pub fn dilate(&self, s: f64) -> Self {
        let f = c(s, 0.0);
        AdhmData {
            alpha1: &self.alpha1 * f,
            alpha2: &self.alpha2 * f,
            p_map: &self.p_map * f,
            q_map: &self.q_map * f,
            deformation: self.deformation * s * s,
            ..self.clone()
        }
    }

    /// Largest distance scale in the datum, used to size integration boxes.
    pub fn scale_bound(&self) -> f64 {
        frobenius(&self.p_map).max(frobenius(&self.q_map))
    }
}

/// Frobenius norms of `[α1, α2] + PQ` and
/// `[α1, α1*] + [α2, α2*] + PP* − Q*Q − ε I`.
pub fn adhm_residuals(d: &AdhmData) -> (f64, f64) {
    let complex = commutator(&d.alpha1, &d.alpha2) + &d.p_map * &d.q_map;
    let real = commutator(&d.alpha1, &d.alpha1.adjoint()) + commutator(&d.alpha2, &d.alpha2.adjoint())
        + &d.p_map * d.p_map.adjoint()
        - d.q_map.adjoint() * &d.q_map
        - ComplexMatrix::identity(d.k, d.k) * c(d.deformation, 0.0);
    (frobenius(&complex), frobenius(&real))
}

pub(crate) fn require_adhm(d: &AdhmData) -> Result<(), AdhmError> {
    let (a, b) = adhm_residuals(d);
    if a > 1e-8 || b > 1e-8 {
        return Err(AdhmError::NotAdhm(a, b));
    }
    Ok(())
}

/// Diagonal data: `α1 = diag(λ)`, `α2 = diag(μ)`, row `i` of `P` is
/// `(ρ_i, 0)`, column `i` of `Q` is `(0, ρ_i)`. Rank 2, so `PQ = 0` and
/// `PP* = Q*Q`.
pub fn thooft_data(centers: &[[f64; 4]], scales: &[f64]) -> Result<AdhmData, AdhmError> {
    let k = centers.len();
    if scales.len() != k {
        return Err(AdhmError::InvalidData(format!("{k} centers but {} scales", scales.len())));
    }
    if let Some(s) = scales.iter().find(|s| !(**s > 0.0)) {
        return Err(AdhmError::InvalidData(format!("scale {s} is not positive")));
    }
    for i in 0..k {
        for j in i + 1..k {
            if centers[i] == centers[j] {
                return Err(AdhmError::DuplicateCenters(i, j));
            }
        }
    }
    let mut a1 = ComplexMatrix::zeros(k, k);
    let mut a2 = ComplexMatrix::zeros(k, k);
    let mut p = ComplexMatrix::zeros(k, 2);
    let mut q = ComplexMatrix::zeros(2, k);
    for i in 0..k {
        a1[(i, i)] = c(centers[i][0], centers[i][1]);
        a2[(i, i)] = c(centers[i][2], centers[i][3]);
        p[(i, 0)] = c(scales[i], 0.0);
        q[(1, i)] = c(scales[i], 0.0);
    }
    AdhmData::new(a1, a2, p, q, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    SU,
    Sp,
    Spin,
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl FromStr for Group {
    type Err = AdhmError;
    fn from_str(s: &str) -> Result<Self, AdhmError> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "SU" => Group::SU,
            "SP" => Group::Sp,
            "SPIN" => Group::Spin,
            "G2" => Group::G2,
            "F4" => Group::F4,
            "E6" => Group::E6,
            "E7" => Group::E7,
            "E8" => Group::E8,
            _ => return Err(AdhmError::UnsupportedGroup(s.to_string())),
        })
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Whether irreducible ASD connections of charge `k` exist on S^4 for the
/// group. `rank` is ignored for the exceptional groups.
pub fn existence_threshold(group: Group, rank: u32, k: u32) -> Result<bool, AdhmError> {
    let (k, r) = (k as u64, rank as u64);
    match group {
        Group::SU | Group::Sp if r == 0 => Err(AdhmError::UnsupportedGroup(format!("{group}(0)"))),
        Group::SU => Ok(2 * k >= r),
        Group::Sp => Ok(k >= r),
        Group::Spin if r < 7 => Err(AdhmError::UnsupportedGroup(format!("Spin({r}) needs r >= 7"))),
        Group::Spin => Ok(4 * k >= r),
        Group::G2 => Ok(k >= 2),
        Group::F4 | Group::E6 | Group::E7 | Group::E8 => Ok(k >= 3),
    }
}

/// Dimension of the moduli space of charge-`k` SU(2) instantons on S^4.
pub fn moduli_dimension(k: u32) -> i64 {
    8 * k as i64 - 3
}
