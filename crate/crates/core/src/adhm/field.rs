//! Pointwise connections and curvature.
//!
//! A frame of the kernel bundle near `x` is fixed by a reference `R` (an
//! `n × r` isometry): `v(y) = Π(y) R (R* Π(y) R)^{-1/2}`, i.e. the projected
//! reference re-orthonormalized. With `R` the framing block this is the
//! usual singular gauge; with `R = v(x)` it is a gauge that is smooth at `x`.

use serde::{Deserialize, Serialize};

use super::operator::projector;
use super::{require_adhm, AdhmData, AdhmError};
use crate::numerics::{
    c, commutator, frobenius, hermitian_inv_sqrt, kernel_frame, matrix_serde, unitarity_defect, ComplexMatrix,
    DEFAULT_KERNEL_TOL,
};

/// Default step for the derivatives inside `A = v* dv`.
pub const FRAME_STEP: f64 = 1e-3;

const STENCIL: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const WEIGHTS: [f64; 4] = [1.0, -8.0, 8.0, -1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeSample {
    pub x: [f64; 4],
    #[serde(with = "four_matrices")]
    pub a: [ComplexMatrix; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub x: [f64; 4],
    /// `F12, F13, F14, F23, F24, F34`.
    #[serde(with = "six_matrices")]
    pub f: [ComplexMatrix; 6],
}

macro_rules! fixed_matrices {
    ($name:ident, $n:expr) => {
        mod $name {
            use super::*;
            use serde::{Deserializer, Serializer};

            #[derive(Serialize, Deserialize)]
            struct Wrap(#[serde(with = "matrix_serde")] ComplexMatrix);

            pub fn serialize<S: Serializer>(m: &[ComplexMatrix; $n], s: S) -> Result<S::Ok, S::Error> {
                m.iter().map(|x| Wrap(x.clone())).collect::<Vec<_>>().serialize(s)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[ComplexMatrix; $n], D::Error> {
                let v: Vec<Wrap> = Vec::deserialize(d)?;
                let v: Vec<ComplexMatrix> = v.into_iter().map(|w| w.0).collect();
                v.try_into().map_err(|_| serde::de::Error::custom(concat!("expected ", $n, " matrices")))
            }
        }
    };
}

fixed_matrices!(four_matrices, 4);
fixed_matrices!(six_matrices, 6);

pub(crate) const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl CurvatureSample {
    pub fn component(&self, mu: usize, nu: usize) -> ComplexMatrix {
        if mu == nu {
            let r = self.f[0].nrows();
            return ComplexMatrix::zeros(r, r);
        }
        let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
        let i = PAIRS.iter().position(|&p| p == (a, b)).expect("valid pair");
        &self.f[i] * c(sign, 0.0)
    }

    /// `|F|^2 = sum_{μ<ν} ‖F_μν‖_F^2`.
    pub fn density(&self) -> f64 {
        self.f.iter().map(|m| frobenius(m).powi(2)).sum()
    }

    /// `tr(F ∧ F)` coefficient of the volume form.
    pub fn topological_density(&self) -> f64 {
        let t = |a: &ComplexMatrix, b: &ComplexMatrix| (a * b).trace().re;
        2.0 * (t(&self.f[0], &self.f[5]) - t(&self.f[1], &self.f[4]) + t(&self.f[2], &self.f[3]))
    }

    pub fn max_anti_hermitian_defect(&self) -> f64 {
        self.f.iter().map(|m| frobenius(&(m + m.adjoint()))).fold(0.0, f64::max)
    }
}

/// `|F⁺|` over the six components of `F⁺ = (F + ⋆F)/2`. Each self-dual
/// combination `F12 + F34`, `F13 + F42`, `F14 + F23` fills two components
/// with half its value, so this is the root-sum-square of the three divided
/// by √2.
pub fn asd_residual(cs: &CurvatureSample) -> f64 {
    let f = &cs.f;
    let a = frobenius(&(&f[0] + &f[5]));
    let b = frobenius(&(&f[1] - &f[4]));
    let c = frobenius(&(&f[2] + &f[3]));
    ((a * a + b * b + c * c) / 2.0).sqrt()
}

fn shifted(x: [f64; 4], mu: usize, s: f64) -> [f64; 4] {
    let mut y = x;
    y[mu] += s;
    y
}

fn frame_at(d: &AdhmData, y: [f64; 4], reference: &ComplexMatrix) -> Result<ComplexMatrix, AdhmError> {
    let pi = projector(d, y).ok_or(AdhmError::SingularGauge(y))?;
    let pr = &pi * reference;
    let overlap = reference.adjoint() * &pr;
    let min_eig = overlap.clone().symmetric_eigen().eigenvalues.min();
    if !(min_eig > 1e-10) {
        return Err(AdhmError::SingularGauge(y));
    }
    let s = hermitian_inv_sqrt(&overlap).ok_or(AdhmError::SingularGauge(y))?;
    Ok(pr * s)
}

fn check_kernel(d: &AdhmData, x: [f64; 4]) -> Result<ComplexMatrix, AdhmError> {
    let frame = kernel_frame(&super::adhm_operator(d, x), DEFAULT_KERNEL_TOL)?;
    if frame.ncols() != d.r {
        return Err(AdhmError::KernelDimensionMismatch { expected: d.r, found: frame.ncols(), x });
    }
    Ok(frame)
}

fn connection_with_reference(
    d: &AdhmData,
    x: [f64; 4],
    reference: &ComplexMatrix,
    step: f64,
) -> Result<GaugeSample, AdhmError> {
    let v = frame_at(d, x, reference)?;
    let vd = v.adjoint();
    let mut a: [ComplexMatrix; 4] = Default::default();
    for (mu, slot) in a.iter_mut().enumerate() {
        let mut dv = ComplexMatrix::zeros(v.nrows(), v.ncols());
        for (s, w) in STENCIL.iter().zip(WEIGHTS) {
            dv += frame_at(d, shifted(x, mu, s * step), reference)? * c(w, 0.0);
        }
        *slot = &vd * dv * c(1.0 / (12.0 * step), 0.0);
    }
    Ok(GaugeSample { x, a })
}

fn framing_reference(d: &AdhmData) -> ComplexMatrix {
    let n = 2 * d.k + d.r;
    ComplexMatrix::from_fn(n, d.r, |i, j| if i == 2 * d.k + j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// `A_μ = v* ∂_μ v` in the framing gauge, where the frame is aligned with the
/// `C^r` block. That gauge is singular at instanton centers.
pub fn build_connection(d: &AdhmData, x: [f64; 4]) -> Result<GaugeSample, AdhmError> {
    require_adhm(d)?;
    check_kernel(d, x)?;
    connection_with_reference(d, x, &framing_reference(d), FRAME_STEP)
}

/// Connection samples at `x` and at `x ± h e_μ`, `x ± 2h e_μ`, all in one gauge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionStencil {
    pub x: [f64; 4],
    pub h: f64,
    /// Centre first, then `(μ, offset)` for offsets `-2, -1, 1, 2`.
    pub samples: Vec<GaugeSample>,
}

/// Builds a stencil in the framing gauge (`reference = None`) or in the gauge
/// aligned with the kernel frame at `x`.
pub fn connection_stencil(d: &AdhmData, x: [f64; 4], h: f64, smooth_at_x: bool) -> Result<ConnectionStencil, AdhmError> {
    require_adhm(d)?;
    if !(h > 0.0) {
        return Err(AdhmError::InvalidData(format!("step must be positive, got {h}")));
    }
    let frame = check_kernel(d, x)?;
    let reference = if smooth_at_x { frame } else { framing_reference(d) };
    let step = FRAME_STEP.min(h);
    let mut samples = vec![connection_with_reference(d, x, &reference, step)?];
    for mu in 0..4 {
        for s in STENCIL {
            samples.push(connection_with_reference(d, shifted(x, mu, s * h), &reference, step)?);
        }
    }
    Ok(ConnectionStencil { x, h, samples })
}

/// `F_μν = ∂_μ A_ν − ∂_ν A_μ + [A_μ, A_ν]` from a stencil.
pub fn curvature_from_stencil(st: &ConnectionStencil) -> CurvatureSample {
    let a0 = &st.samples[0].a;
    let r = a0[0].nrows();
    let deriv = |mu: usize, nu: usize| {
        let mut acc = ComplexMatrix::zeros(r, r);
        for (j, w) in WEIGHTS.iter().enumerate() {
            acc += &st.samples[1 + 4 * mu + j].a[nu] * c(*w, 0.0);
        }
        acc * c(1.0 / (12.0 * st.h), 0.0)
    };
    let f = PAIRS.map(|(mu, nu)| deriv(mu, nu) - deriv(nu, mu) + commutator(&a0[mu], &a0[nu]));
    CurvatureSample { x: st.x, f }
}

/// Curvature at `x` in a gauge that is smooth there.
pub fn field_strength(d: &AdhmData, x: [f64; 4], h: f64) -> Result<CurvatureSample, AdhmError> {
    if d.k == 0 {
        let z = ComplexMatrix::zeros(d.r, d.r);
        return Ok(CurvatureSample { x, f: std::array::from_fn(|_| z.clone()) });
    }
    Ok(curvature_from_stencil(&connection_stencil(d, x, h, true)?))
}

/// `A ↦ g A g^{-1} − (dg) g^{-1}`, with `dg` from a fourth-order difference.
pub fn gauge_transform<G>(samples: &[GaugeSample], g: G) -> Result<Vec<GaugeSample>, AdhmError>
where
    G: Fn([f64; 4]) -> ComplexMatrix,
{
    const DG_STEP: f64 = 1e-3;
    samples
        .iter()
        .map(|s| {
            let gx = g(s.x);
            let defect = unitarity_defect(&gx);
            if defect > 1e-10 {
                return Err(AdhmError::NonUnitary(defect));
            }
            let ginv = gx.adjoint();
            let a = std::array::from_fn(|mu| {
                let mut dg = ComplexMatrix::zeros(gx.nrows(), gx.ncols());
                for (off, w) in STENCIL.iter().zip(WEIGHTS) {
                    dg += g(shifted(s.x, mu, off * DG_STEP)) * c(w, 0.0);
                }
                let dg = dg * c(1.0 / (12.0 * DG_STEP), 0.0);
                &gx * &s.a[mu] * &ginv - dg * &ginv
            });
            Ok(GaugeSample { x: s.x, a })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::anti_hermitian_defect;

    #[test]
    fn component_antisymmetry() {
        let m = |v: f64| ComplexMatrix::identity(1, 1) * c(0.0, v);
        let cs = CurvatureSample { x: [0.0; 4], f: [m(1.0), m(2.0), m(3.0), m(4.0), m(5.0), m(6.0)] };
        assert_eq!(cs.component(3, 1), m(-5.0));
        assert_eq!(cs.component(2, 2), ComplexMatrix::zeros(1, 1));
    }

    #[test]
    fn connection_is_anti_hermitian() {
        let d = crate::adhm::thooft_data(&[[0.0; 4]], &[1.0]).unwrap();
        let s = build_connection(&d, [0.7, -0.4, 1.1, 0.3]).unwrap();
        for a in &s.a {
            assert!(anti_hermitian_defect(a) < 1e-10);
        }
    }
}
