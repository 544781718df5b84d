//! Contour transforms `F(p, q, r, s) = ∮ f(z, pz + q, rz + s) dz` and checks
//! that they solve the complexified Laplace equation
//! `∂²F/∂p∂s − ∂²F/∂q∂r = 0`.
//!
//! Real points use `p = x1 + i x2`, `s = x1 − i x2`, `q = −x3 + i x4`,
//! `r = x3 + i x4`, so that `ps − qr = |x|^2` and the Laplacian on R^4 is
//! `4 (∂p∂s − ∂q∂r)`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{contour_integrate, finite_diff, Contour, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistorError {
    #[error("section leaves the integrand's domain: {0}")]
    DomainViolation(String),
    #[error("unknown integrand {0:?}")]
    UnknownIntegrand(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatemanParams {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

impl BatemanParams {
    pub fn new(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> Self {
        BatemanParams { p, q, r, s }
    }

    pub fn from_point(x: [f64; 4]) -> Self {
        BatemanParams {
            p: Complex64::new(x[0], x[1]),
            s: Complex64::new(x[0], -x[1]),
            q: Complex64::new(-x[2], x[3]),
            r: Complex64::new(x[2], x[3]),
        }
    }

    fn as_array(&self) -> [Complex64; 4] {
        [self.p, self.q, self.r, self.s]
    }

    fn from_array(a: [Complex64; 4]) -> Self {
        BatemanParams { p: a[0], q: a[1], r: a[2], s: a[3] }
    }
}

/// A holomorphic `f(z, ζ1, ζ2)` together with the region where it may be
/// integrated.
pub trait TwistorIntegrand: Send + Sync {
    fn name(&self) -> &str;
    fn eval(&self, z: Complex64, zeta1: Complex64, zeta2: Complex64) -> Complex64;
    /// `(inner, outer)` radii of the annulus in `z` where `f` is analytic,
    /// for these parameters.
    fn annulus(&self, params: &BatemanParams) -> (f64, f64);
    /// Exact value of the transform on a circle around the origin, when known.
    fn closed_form(&self, _params: &BatemanParams) -> Option<Complex64> {
        None
    }
}

/// Wraps a closure analytic on `0 < |z| < ∞`.
pub struct FnIntegrand<F> {
    pub name: String,
    pub f: F,
}

impl<F> TwistorIntegrand for FnIntegrand<F>
where
    F: Fn(Complex64, Complex64, Complex64) -> Complex64 + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }
    fn eval(&self, z: Complex64, a: Complex64, b: Complex64) -> Complex64 {
        (self.f)(z, a, b)
    }
    fn annulus(&self, _: &BatemanParams) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

/// `ζ1 ζ2 / z^2`.
struct Bilinear;

impl TwistorIntegrand for Bilinear {
    fn name(&self) -> &str {
        "bilinear"
    }
    fn eval(&self, z: Complex64, a: Complex64, b: Complex64) -> Complex64 {
        a * b / (z * z)
    }
    fn annulus(&self, _: &BatemanParams) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn closed_form(&self, x: &BatemanParams) -> Option<Complex64> {
        Some(TWO_PI_I * (x.p * x.s + x.q * x.r))
    }
}

/// `ζ2 / (z − ζ1)`; the section has a single pole at `q / (1 − p)`.
struct Pole;

impl TwistorIntegrand for Pole {
    fn name(&self) -> &str {
        "pole"
    }
    fn eval(&self, z: Complex64, a: Complex64, b: Complex64) -> Complex64 {
        b / (z - a)
    }
    fn annulus(&self, x: &BatemanParams) -> (f64, f64) {
        let one = Complex64::new(1.0, 0.0);
        if (one - x.p).norm() == 0.0 {
            return (f64::INFINITY, f64::INFINITY);
        }
        ((x.q / (one - x.p)).norm(), f64::INFINITY)
    }
    fn closed_form(&self, x: &BatemanParams) -> Option<Complex64> {
        let u = Complex64::new(1.0, 0.0) - x.p;
        Some(TWO_PI_I * (x.r * x.q / (u * u) + x.s / u))
    }
}

/// `exp(ζ1) / z`.
struct ExpOverZ;

impl TwistorIntegrand for ExpOverZ {
    fn name(&self) -> &str {
        "exp"
    }
    fn eval(&self, z: Complex64, a: Complex64, _: Complex64) -> Complex64 {
        a.exp() / z
    }
    fn annulus(&self, _: &BatemanParams) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn closed_form(&self, x: &BatemanParams) -> Option<Complex64> {
        Some(TWO_PI_I * x.q.exp())
    }
}

/// `g(z) = z^2 + 3`, independent of the section.
struct Entire;

impl TwistorIntegrand for Entire {
    fn name(&self) -> &str {
        "entire"
    }
    fn eval(&self, z: Complex64, _: Complex64, _: Complex64) -> Complex64 {
        z * z + 3.0
    }
    fn annulus(&self, _: &BatemanParams) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn closed_form(&self, _: &BatemanParams) -> Option<Complex64> {
        Some(Complex64::new(0.0, 0.0))
    }
}

/// Built-in integrands by name.
pub struct IntegrandCatalog {
    entries: BTreeMap<String, Box<dyn TwistorIntegrand>>,
}

impl Default for IntegrandCatalog {
    fn default() -> Self {
        let mut c = IntegrandCatalog { entries: BTreeMap::new() };
        c.register(Box::new(Bilinear));
        c.register(Box::new(Pole));
        c.register(Box::new(ExpOverZ));
        c.register(Box::new(Entire));
        c
    }
}

impl IntegrandCatalog {
    pub fn register(&mut self, f: Box<dyn TwistorIntegrand>) {
        self.entries.insert(f.name().to_string(), f);
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    /// Accepts `NAME` or `builtin:NAME`.
    pub fn get(&self, spec: &str) -> Result<&dyn TwistorIntegrand, TwistorError> {
        let name = spec.strip_prefix("builtin:").unwrap_or(spec);
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| TwistorError::UnknownIntegrand(spec.to_string()))
    }
}

fn check_domain(f: &dyn TwistorIntegrand, x: &BatemanParams, c: &Contour) -> Result<(), TwistorError> {
    let (inner, outer) = f.annulus(x);
    let lo = c.center.norm() + c.radius;
    let hi = c.radius - c.center.norm();
    if !(inner < hi && lo < outer) {
        return Err(TwistorError::DomainViolation(format!(
            "{}: contour radius {} outside analytic annulus ({inner}, {outer})",
            f.name(),
            c.radius
        )));
    }
    Ok(())
}

pub fn bateman_transform(f: &dyn TwistorIntegrand, x: &BatemanParams, c: &Contour) -> Result<Complex64, TwistorError> {
    check_domain(f, x, c)?;
    Ok(contour_integrate(|z| f.eval(z, x.p * z + x.q, x.r * z + x.s), c)?)
}

/// Mixed second difference of the (holomorphic) transform along two
/// parameter axes, with real steps.
fn mixed(f: &dyn TwistorIntegrand, x: &BatemanParams, c: &Contour, h: f64, a: usize, b: usize) -> Result<Complex64, TwistorError> {
    let base = x.as_array();
    let eval = |part: usize| {
        move |v: &[f64]| -> f64 {
            let mut arr = base;
            arr[a] += v[0];
            arr[b] += v[1];
            match bateman_transform(f, &BatemanParams::from_array(arr), c) {
                Ok(val) if part == 0 => val.re,
                Ok(val) => val.im,
                Err(_) => f64::NAN,
            }
        }
    };
    // Surface domain errors before differencing.
    for sa in [-h, h] {
        for sb in [-h, h] {
            let mut arr = base;
            arr[a] += sa;
            arr[b] += sb;
            bateman_transform(f, &BatemanParams::from_array(arr), c)?;
        }
    }
    let re = finite_diff(eval(0), &[0.0, 0.0], h, 2, &[0, 1])?;
    let im = finite_diff(eval(1), &[0.0, 0.0], h, 2, &[0, 1])?;
    Ok(Complex64::new(re, im))
}

/// `|∂²F/∂p∂s − ∂²F/∂q∂r|` by central differences.
pub fn ultrahyperbolic_residual(f: &dyn TwistorIntegrand, x: &BatemanParams, c: &Contour, h: f64) -> Result<f64, TwistorError> {
    Ok((mixed(f, x, c, h, 0, 3)? - mixed(f, x, c, h, 1, 2)?).norm())
}

/// `|Δ (F ∘ φ)(x)|` on R^4, real and imaginary parts together.
pub fn harmonic_restriction_residual(f: &dyn TwistorIntegrand, x: [f64; 4], c: &Contour, h: f64) -> Result<f64, TwistorError> {
    for mu in 0..4 {
        for s in [-h, h] {
            let mut y = x;
            y[mu] += s;
            bateman_transform(f, &BatemanParams::from_point(y), c)?;
        }
    }
    let part = |im: bool| {
        move |y: &[f64]| -> f64 {
            let v = bateman_transform(f, &BatemanParams::from_point([y[0], y[1], y[2], y[3]]), c)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            if im {
                v.im
            } else {
                v.re
            }
        }
    };
    let mut lap = Complex64::new(0.0, 0.0);
    for mu in 0..4 {
        lap += Complex64::new(
            finite_diff(part(false), &x, h, 2, &[mu])?,
            finite_diff(part(true), &x, h, 2, &[mu])?,
        );
    }
    Ok(lap.norm())
}

/// Residuals at `h` and `h/2` and the order they imply. A residual already
/// at the rounding floor of the stencil (`~ ε|F|/h²`) means the stencil is
/// exact for this integrand and no order can be observed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub scale: f64,
    pub residual: f64,
    pub residual_half: f64,
    pub observed_order: Option<f64>,
    pub stencil_exact: bool,
}

pub fn ultrahyperbolic_order(f: &dyn TwistorIntegrand, x: &BatemanParams, c: &Contour, h: f64) -> Result<OrderCheck, TwistorError> {
    let scale = bateman_transform(f, x, c)?.norm().max(f64::MIN_POSITIVE);
    let r1 = ultrahyperbolic_residual(f, x, c, h)?;
    let r2 = ultrahyperbolic_residual(f, x, c, h / 2.0)?;
    let floor = |step: f64| 1e2 * f64::EPSILON * scale / (step * step);
    let stencil_exact = r1 <= floor(h) && r2 <= floor(h / 2.0);
    let observed_order = (!stencil_exact && r2 > 0.0).then(|| (r1 / r2).log2());
    Ok(OrderCheck { scale, residual: r1, residual_half: r2, observed_order, stencil_exact })
}

/// Writes `p,q,r,s` (real and imaginary parts) and `F` for each parameter set.
pub fn write_csv<W: Write>(f: &dyn TwistorIntegrand, params: &[BatemanParams], c: &Contour, mut w: W) -> io::Result<()> {
    writeln!(w, "p_re,p_im,q_re,q_im,r_re,r_im,s_re,s_im,F_re,F_im")?;
    for x in params {
        let v = bateman_transform(f, x, c).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            x.p.re, x.p.im, x.q.re, x.q.im, x.r.re, x.r.im, x.s.re, x.s.im, v.re, v.im
        )?;
    }
    Ok(())
}
