//! Contour integrals, finite differences and Gauss–Legendre rules.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NumericsError;

/// Circle traversed counter-clockwise, sampled at equally spaced nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub samples: usize,
}

impl Contour {
    pub fn new(center: Complex64, radius: f64, samples: usize) -> Result<Self, NumericsError> {
        if !(radius > 0.0) {
            return Err(NumericsError::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        if samples < 16 {
            return Err(NumericsError::InvalidArgument(format!("need at least 16 samples, got {samples}")));
        }
        Ok(Contour { center, radius, samples })
    }

    pub fn unit(samples: usize) -> Result<Self, NumericsError> {
        Contour::new(Complex64::new(0.0, 0.0), 1.0, samples)
    }

    pub fn node(&self, j: usize) -> Complex64 {
        let theta = 2.0 * PI * j as f64 / self.samples as f64;
        self.center + Complex64::from_polar(self.radius, theta)
    }

    pub fn with_samples(&self, samples: usize) -> Self {
        Contour { samples, ..*self }
    }
}

/// Periodic trapezoid rule for `∮ f(z) dz`.
pub fn contour_integrate<F>(f: F, c: &Contour) -> Result<Complex64, NumericsError>
where
    F: Fn(Complex64) -> Complex64,
{
    let n = c.samples;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let z = c.node(j);
        let v = f(z);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(NumericsError::NonFinite(format!("integrand at z = {z}")));
        }
        // dz = i (z - center) dθ
        acc += v * Complex64::i() * (z - c.center);
    }
    Ok(acc * (2.0 * PI / n as f64))
}

/// Central differences with `O(h^2)` truncation error. `order` 1 takes one
/// axis; `order` 2 takes one axis (pure) or two distinct axes (mixed, four
/// point cross stencil).
pub fn finite_diff<F>(f: F, x: &[f64], h: f64, order: u8, axes: &[usize]) -> Result<f64, NumericsError>
where
    F: Fn(&[f64]) -> f64,
{
    if !(h > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if axes.iter().any(|&a| a >= x.len()) {
        return Err(NumericsError::InvalidArgument("axis out of range".into()));
    }
    let eval = |shifts: &[(usize, f64)]| -> Result<f64, NumericsError> {
        let mut p = x.to_vec();
        for &(a, s) in shifts {
            p[a] += s;
        }
        let v = f(&p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFinite(format!("function at {p:?}")))
        }
    };
    match (order, axes) {
        (1, [a]) => Ok((eval(&[(*a, h)])? - eval(&[(*a, -h)])?) / (2.0 * h)),
        (2, [a]) => Ok((eval(&[(*a, h)])? - 2.0 * eval(&[])? + eval(&[(*a, -h)])?) / (h * h)),
        (2, [a, b]) if a != b => {
            let pp = eval(&[(*a, h), (*b, h)])?;
            let pm = eval(&[(*a, h), (*b, -h)])?;
            let mp = eval(&[(*a, -h), (*b, h)])?;
            let mm = eval(&[(*a, -h), (*b, -h)])?;
            Ok((pp - pm - mp + mm) / (4.0 * h * h))
        }
        (2, [_, _]) => Err(NumericsError::InvalidArgument("mixed partial needs two distinct axes".into())),
        _ => Err(NumericsError::InvalidArgument(format!("unsupported order {order} with {} axes", axes.len()))),
    }
}

/// One Richardson step on top of [`finite_diff`]: `(4 D(h/2) − D(h)) / 3`.
pub fn richardson_diff<F>(f: F, x: &[f64], h: f64, order: u8, axes: &[usize]) -> Result<f64, NumericsError>
where
    F: Fn(&[f64]) -> f64,
{
    let coarse = finite_diff(&f, x, h, order, axes)?;
    let fine = finite_diff(&f, x, h / 2.0, order, axes)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre quadrature of `f` over `[a, b]` with `panels`
/// equal panels of `points` nodes each.
pub fn integrate_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, points: usize) -> f64 {
    let (x, w) = gauss_legendre(points);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let s: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * f(mid + 0.5 * width * xi)).sum();
        total += 0.5 * width * s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues() {
        let c = Contour::unit(64).unwrap();
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        assert!((contour_integrate(|z| 1.0 / z, &c).unwrap() - i2pi).norm() < 1e-12);
        let shifted = contour_integrate(|z| 1.0 / (z - 0.3), &c).unwrap();
        assert!((shifted - i2pi).norm() < 1e-10);
        for k in -5..=5 {
            let v = contour_integrate(|z| z.powi(k), &c).unwrap();
            let expect = if k == -1 { i2pi } else { Complex64::new(0.0, 0.0) };
            assert!((v - expect).norm() < 1e-12, "k = {k}");
        }
        assert!(contour_integrate(|_| Complex64::new(f64::NAN, 0.0), &c).is_err());
        assert!(Contour::unit(8).is_err());
    }

    #[test]
    fn differences() {
        let d2 = finite_diff(|x: &[f64]| x[0] * x[0], &[0.0], 1e-3, 2, &[0]).unwrap();
        assert!((d2 - 2.0).abs() < 1e-8);
        let mixed = finite_diff(|x: &[f64]| x[0] * x[1], &[0.4, -1.0], 1e-3, 2, &[0, 1]).unwrap();
        assert!((mixed - 1.0).abs() < 1e-8);
        let d1 = richardson_diff(|x: &[f64]| x[0].sin(), &[0.0], 1e-2, 1, &[0]).unwrap();
        assert!((d1 - 1.0).abs() < 1e-10);
        assert!(finite_diff(|x: &[f64]| x[0], &[0.0], 1e-3, 2, &[0, 0]).is_err());
        assert!(finite_diff(|_: &[f64]| f64::INFINITY, &[0.0], 1e-3, 1, &[0]).is_err());
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
        let v = integrate_gl(f64::sin, 0.0, PI, 4, 8);
        assert!((v - 2.0).abs() < 1e-13);
    }
}
