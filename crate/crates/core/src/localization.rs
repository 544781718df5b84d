//! Equivariant localization for circle and torus actions with isolated
//! fixed points.
//!
//! Conventions, fixed once here:
//!
//! * The equivariant extension of the symplectic form is `ω + τH`, so it
//!   restricts to `τ H(p)` at a fixed point.
//! * The tangent weight at `p` along the invariant sphere joining `p` to `q`
//!   is `(H(p) − H(q)) / area`, so the maximum of `H` carries positive
//!   weights. The equivariant Euler class is `E_p = prod_i (w_i τ)`.
//! * The oscillatory integral is `∫ e^{−itH} ω^m/m!`, and the fixed-point
//!   side is `sum_p e^{−itH(p)} / (e(p) (−it)^m)` with `e(p) = prod_i w_i`.
//! * `S^2` carries `ω = (1/2π) dφ ∧ dH` with `H = x3`, total area 2.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, MPoly, Rational, RationalFunction};
use crate::numerics::gauss_legendre;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocalizationError {
    #[error("fixed point {0} has a zero weight")]
    ZeroWeight(String),
    #[error("model {0} is not compact")]
    NotCompact(String),
    #[error("model {0} has no numeric sampler")]
    NoSampler(String),
    #[error("class {0} does not integrate to a polynomial: {1}")]
    NotPolynomial(String, String),
    #[error("class {class} missing at fixed point {point}")]
    MissingClass { class: String, point: String },
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("t must be nonzero")]
    ZeroTime,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn tau_vars() -> Vec<String> {
    vec!["tau".to_string()]
}

fn tau_pow(c: Rational, e: u32) -> RationalFunction {
    RationalFunction::from_poly(tau_vars(), MPoly::from_terms(1, [(vec![e], c)]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointDatum {
    pub label: String,
    pub moment_value: Rational,
    pub weights: Vec<i64>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, RationalFunction>,
}

impl FixedPointDatum {
    pub fn euler_number(&self) -> i64 {
        self.weights.iter().product()
    }

    /// `E_p = prod (w_i τ)` as a rational function of `τ`.
    pub fn euler_class(&self) -> RationalFunction {
        tau_pow(Rational::from(self.euler_number()), self.weights.len() as u32)
    }
}

/// Numerical access to a model: volume-uniform samples of the torus moment
/// map, and the oscillatory integral by deterministic quadrature.
pub trait MomentSampler: Send + Sync {
    /// The circle inside the torus: `H = <circle, moment>`.
    fn circle(&self) -> Vec<f64>;
    /// Total symplectic volume `∫ ω^m/m!`.
    fn volume(&self) -> f64;
    /// Moment value of one volume-uniform random point.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    /// `∫ e^{−itH} ω^m/m!`.
    fn oscillatory_integral(&self, t: f64) -> Complex64;
}

/// Round sphere, `H = x3`.
pub struct SphereSampler {
    pub shift: f64,
}

impl MomentSampler for SphereSampler {
    fn circle(&self) -> Vec<f64> {
        vec![1.0]
    }
    fn volume(&self) -> f64 {
        2.0
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        vec![v[2] / n + self.shift]
    }
    fn oscillatory_integral(&self, t: f64) -> Complex64 {
        // ω = (1/2π) sin θ dθ ∧ dφ; the φ integral cancels the 1/2π.
        let (x, w) = gauss_legendre(16);
        let panels = 64 + (t.abs() * 4.0) as usize;
        let width = PI / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (xi, wi) in x.iter().zip(&w) {
                let theta = mid + 0.5 * width * xi;
                let h = theta.cos() + self.shift;
                acc += Complex64::from_polar(1.0, -t * h) * (theta.sin() * wi * 0.5 * width);
            }
        }
        acc
    }
}

/// `CP^2` with the standard torus; the moment map is `(|z1|^2, |z2|^2)` on
/// the unit sphere of `C^3`, and the circle is `H = μ1 + 2 μ2`.
pub struct ProjectivePlaneSampler;

impl MomentSampler for ProjectivePlaneSampler {
    fn circle(&self) -> Vec<f64> {
        vec![1.0, 2.0]
    }
    fn volume(&self) -> f64 {
        0.5
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let v: [f64; 6] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n: f64 = v.iter().map(|x| x * x).sum();
        vec![(v[2] * v[2] + v[3] * v[3]) / n, (v[4] * v[4] + v[5] * v[5]) / n]
    }
    fn oscillatory_integral(&self, t: f64) -> Complex64 {
        // Action-angle coordinates: ω^2/2 = dμ1 dμ2 dφ1 dφ2 / (2π)^2 over the
        // triangle μ1, μ2 >= 0, μ1 + μ2 <= 1.
        let (x, w) = gauss_legendre(24);
        let panels = 8 + (t.abs() * 2.0) as usize;
        let width = 1.0 / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            for (xi, wi) in x.iter().zip(&w) {
                let mu1 = (p as f64 + 0.5 + 0.5 * xi) * width;
                let top = 1.0 - mu1;
                // Inner integral over μ2 ∈ [0, 1 − μ1] in closed form.
                let a = -2.0 * t;
                let inner = if a.abs() * top < 1e-8 {
                    Complex64::new(top, 0.0)
                } else {
                    (Complex64::new(0.0, a * top).exp() - 1.0) / Complex64::new(0.0, a)
                };
                acc += Complex64::from_polar(1.0, -t * mu1) * inner * (wi * 0.5 * width);
            }
        }
        acc
    }
}

/// Disjoint union of samplers, each chosen with probability proportional to
/// its volume.
pub struct UnionSampler {
    pub parts: Vec<Box<dyn MomentSampler>>,
}

impl MomentSampler for UnionSampler {
    fn circle(&self) -> Vec<f64> {
        self.parts[0].circle()
    }
    fn volume(&self) -> f64 {
        self.parts.iter().map(|p| p.volume()).sum()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut u = rng.gen::<f64>() * self.volume();
        for p in &self.parts {
            if u < p.volume() {
                return p.sample(rng);
            }
            u -= p.volume();
        }
        self.parts.last().expect("nonempty union").sample(rng)
    }
    fn oscillatory_integral(&self, t: f64) -> Complex64 {
        self.parts.iter().map(|p| p.oscillatory_integral(t)).sum()
    }
}

/// Adds 2 to the first moment coordinate on the patch where it is within
/// 0.05 of its lowest sampled region; used as a negative control.
pub struct CorruptedSampler {
    pub inner: Box<dyn MomentSampler>,
}

impl MomentSampler for CorruptedSampler {
    fn circle(&self) -> Vec<f64> {
        self.inner.circle()
    }
    fn volume(&self) -> f64 {
        self.inner.volume()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut m = self.inner.sample(rng);
        if m.iter().all(|&x| x.abs() < 0.05 || (0.45..0.5).contains(&x)) {
            m[0] += 2.0;
        }
        m
    }
    fn oscillatory_integral(&self, t: f64) -> Complex64 {
        self.inner.oscillatory_integral(t)
    }
}

/// Fixed-point data plus an optional sampler.
#[derive(Serialize, Deserialize)]
pub struct ManifoldModel {
    pub name: String,
    /// Half the real dimension.
    pub m: usize,
    #[serde(default = "default_true")]
    pub compact: bool,
    pub fixed_points: Vec<FixedPointDatum>,
    /// Torus moment images of the fixed points, when a torus acts.
    #[serde(default)]
    pub torus_images: Vec<Vec<f64>>,
    #[serde(skip)]
    pub sampler: Option<Box<dyn MomentSampler>>,
}

fn default_true() -> bool {
    true
}

impl std::fmt::Debug for ManifoldModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManifoldModel")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("compact", &self.compact)
            .field("fixed_points", &self.fixed_points)
            .field("sampler", &self.sampler.is_some())
            .finish()
    }
}

impl ManifoldModel {
    pub fn validate(&self) -> Result<(), LocalizationError> {
        if self.fixed_points.is_empty() {
            return Err(LocalizationError::InvalidModel(format!("{} has no fixed points", self.name)));
        }
        for p in &self.fixed_points {
            if p.weights.len() != self.m {
                return Err(LocalizationError::InvalidModel(format!(
                    "fixed point {} has {} weights, expected {}",
                    p.label,
                    p.weights.len(),
                    self.m
                )));
            }
            if p.weights.contains(&0) {
                return Err(LocalizationError::ZeroWeight(p.label.clone()));
            }
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self, LocalizationError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LocalizationError::InvalidModel(format!("{}: {e}", path.display())))?;
        let model: ManifoldModel =
            serde_json::from_str(&text).map_err(|e| LocalizationError::InvalidModel(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    fn sampler(&self) -> Result<&dyn MomentSampler, LocalizationError> {
        self.sampler.as_deref().ok_or_else(|| LocalizationError::NoSampler(self.name.clone()))
    }

    pub fn with_sampler(mut self, s: Box<dyn MomentSampler>) -> Self {
        self.sampler = Some(s);
        self
    }
}

/// Restrictions of `(ω + τH)^j / j!` for `j = 0..=max`, keyed `omega^j`
/// (`one` for `j = 0`, `omega` for `j = 1`).
fn power_classes(h: &Rational, max: u32) -> BTreeMap<String, RationalFunction> {
    let mut out = BTreeMap::new();
    let mut fact = Rational::one();
    for j in 0..=max {
        if j > 0 {
            fact *= &Rational::from(j as i64);
        }
        let key = match j {
            0 => "one".to_string(),
            1 => "omega".to_string(),
            _ => format!("omega^{j}"),
        };
        let coeff = h.pow(j as i32) / fact.clone();
        out.insert(key, tau_pow(coeff, j));
    }
    out
}

fn point(label: &str, h: i64, weights: &[i64], classes: u32) -> FixedPointDatum {
    let hv = Rational::from(h);
    FixedPointDatum {
        label: label.to_string(),
        restrictions: power_classes(&hv, classes),
        moment_value: hv,
        weights: weights.to_vec(),
    }
}

pub fn sphere_model() -> ManifoldModel {
    ManifoldModel {
        name: "s2".into(),
        m: 1,
        compact: true,
        fixed_points: vec![point("N", 1, &[1], 3), point("S", -1, &[-1], 3)],
        torus_images: vec![vec![1.0], vec![-1.0]],
        sampler: Some(Box::new(SphereSampler { shift: 0.0 })),
    }
}

/// `S^2` with restrictions `1` at one pole and `0` at the other: not the
/// restriction of any equivariant class.
pub fn sphere_corrupted_model() -> ManifoldModel {
    let mut m = sphere_model();
    m.name = "s2-corrupted".into();
    let vars = tau_vars();
    m.fixed_points[0].restrictions.insert("bad".into(), RationalFunction::one_in(vars.clone()));
    m.fixed_points[1].restrictions.insert("bad".into(), RationalFunction::zero_in(vars));
    m
}

pub fn projective_plane_model() -> ManifoldModel {
    ManifoldModel {
        name: "cp2".into(),
        m: 2,
        compact: true,
        fixed_points: vec![point("p0", 0, &[-1, -2], 4), point("p1", 1, &[1, -1], 4), point("p2", 2, &[2, 1], 4)],
        torus_images: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        sampler: Some(Box::new(ProjectivePlaneSampler)),
    }
}

/// Two spheres, the second with `H` shifted by 3.
pub fn sphere_pair_model() -> ManifoldModel {
    ManifoldModel {
        name: "s2-pair".into(),
        m: 1,
        compact: true,
        fixed_points: vec![
            point("N1", 1, &[1], 2),
            point("S1", -1, &[-1], 2),
            point("N2", 4, &[1], 2),
            point("S2", 2, &[-1], 2),
        ],
        torus_images: vec![vec![1.0], vec![-1.0], vec![4.0], vec![2.0]],
        sampler: Some(Box::new(UnionSampler {
            parts: vec![Box::new(SphereSampler { shift: 0.0 }), Box::new(SphereSampler { shift: 3.0 })],
        })),
    }
}

/// `C^m` with the diagonal weight-1 circle: one fixed point, not compact.
pub fn cm_model(m: usize) -> ManifoldModel {
    ManifoldModel {
        name: format!("c{m}"),
        m,
        compact: false,
        fixed_points: vec![point("0", 0, &vec![1; m], 0)],
        torus_images: vec![],
        sampler: None,
    }
}

/// Built-in models by name: `s2`, `s2-corrupted`, `s2-pair`, `cp2`, `cN`.
/// Anything else is read as a JSON model file.
pub fn load_model(spec: &str) -> Result<ManifoldModel, LocalizationError> {
    match spec {
        "s2" => Ok(sphere_model()),
        "s2-corrupted" => Ok(sphere_corrupted_model()),
        "s2-pair" => Ok(sphere_pair_model()),
        "cp2" => Ok(projective_plane_model()),
        _ => {
            if let Some(m) = spec.strip_prefix('c').and_then(|s| s.parse::<usize>().ok()) {
                if m > 0 {
                    return Ok(cm_model(m));
                }
            }
            let path = Path::new(spec);
            if path.exists() {
                ManifoldModel::from_json_file(path)
            } else {
                Err(LocalizationError::UnknownModel(spec.to_string()))
            }
        }
    }
}

/// `sum_p e^{−itH(p)} / (e(p) (−it)^m)`.
pub fn dh_rhs(model: &ManifoldModel, t: f64) -> Result<Complex64, LocalizationError> {
    if !model.compact {
        return Err(LocalizationError::NotCompact(model.name.clone()));
    }
    if t == 0.0 {
        return Err(LocalizationError::ZeroTime);
    }
    model.validate()?;
    let denom = Complex64::new(0.0, -t).powi(model.m as i32);
    Ok(model
        .fixed_points
        .iter()
        .map(|p| Complex64::from_polar(1.0, -t * p.moment_value.to_f64()) / (p.euler_number() as f64 * denom))
        .sum())
}

pub fn dh_lhs_numeric(model: &ManifoldModel, t: f64) -> Result<Complex64, LocalizationError> {
    Ok(model.sampler()?.oscillatory_integral(t))
}

/// `sum_p i_p^*(α) / E_p`, simplified; an error unless the sum is a
/// polynomial in `τ`.
pub fn ab_integral(model: &ManifoldModel, class: &str) -> Result<RationalFunction, LocalizationError> {
    model.validate()?;
    let mut acc = RationalFunction::zero_in(tau_vars());
    for p in &model.fixed_points {
        let r = p.restrictions.get(class).ok_or_else(|| LocalizationError::MissingClass {
            class: class.to_string(),
            point: p.label.clone(),
        })?;
        acc = acc.add(&r.div(&p.euler_class())?)?;
    }
    if !acc.is_polynomial() {
        return Err(LocalizationError::NotPolynomial(class.to_string(), acc.to_string()));
    }
    Ok(acc)
}

/// `sum_p prod_i 1/(w_i τ)` for formal (possibly non-compact) models.
pub fn formal_integral(weight_lists: &[Vec<i64>]) -> Result<RationalFunction, LocalizationError> {
    let mut acc = RationalFunction::zero_in(tau_vars());
    for (i, ws) in weight_lists.iter().enumerate() {
        if ws.is_empty() {
            return Err(LocalizationError::InvalidModel(format!("fixed point {i} has no weights")));
        }
        if ws.contains(&0) {
            return Err(LocalizationError::ZeroWeight(i.to_string()));
        }
        let e: i64 = ws.iter().product();
        acc = acc.add(&tau_pow(Rational::from(e), ws.len() as u32).recip()?)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    pub m: u32,
    pub lhs: RationalFunction,
    pub rhs: RationalFunction,
    pub equal: bool,
}

/// Formal integral of `C^m` against `τ^{−m} <c_1^{m−1}, [CP^{m−1}]>`, the
/// pairing being 1 for the hyperplane class.
pub fn boundary_check_cm(m: u32) -> Result<BoundaryCheck, LocalizationError> {
    if m == 0 {
        return Err(LocalizationError::InvalidModel("m must be at least 1".into()));
    }
    let lhs = formal_integral(&[vec![1; m as usize]])?;
    let rhs = tau_pow(Rational::one(), m).recip()?;
    let equal = lhs == rhs;
    Ok(BoundaryCheck { m, lhs, rhs, equal })
}

/// Samples are drawn in blocks; block `b` uses stream `b` of a generator
/// seeded with `seed`, so results do not depend on the worker count.
const BLOCK: usize = 1 << 14;

fn sample_moments(s: &dyn MomentSampler, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let blocks = n.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            (b * BLOCK..((b + 1) * BLOCK).min(n)).map(|_| s.sample(&mut rng)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityBin {
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

/// Polynomial `sum_k c_k h^k` fitted to the density on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece {
    pub lo: f64,
    pub hi: f64,
    pub coefficients: Vec<f64>,
}

impl DensityPiece {
    pub fn eval(&self, h: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PushforwardDensity {
    pub samples: usize,
    pub bins: Vec<DensityBin>,
    pub pieces: Vec<DensityPiece>,
    /// RMS of (bin mass − fitted mass) over bins inside a piece, relative to
    /// the mean bin mass.
    pub relative_residual: f64,
}

/// Histogram of `H` under the normalized volume, with a polynomial of degree
/// `degree` (default `m − 1`) fitted between consecutive critical values.
pub fn pushforward_density(
    model: &ManifoldModel,
    bins: usize,
    samples: usize,
    seed: u64,
    degree: Option<usize>,
) -> Result<PushforwardDensity, LocalizationError> {
    let s = model.sampler()?;
    if bins == 0 || samples == 0 {
        return Err(LocalizationError::InvalidModel("bins and samples must be positive".into()));
    }
    let degree = degree.unwrap_or(model.m.saturating_sub(1));
    let circle = s.circle();
    let mut crit: Vec<f64> = model.fixed_points.iter().map(|p| p.moment_value.to_f64()).collect();
    crit.sort_by(f64::total_cmp);
    crit.dedup();
    let (lo, hi) = (crit[0], *crit.last().expect("nonempty"));
    let width = (hi - lo) / bins as f64;
    let mut mass = vec![0.0; bins];
    let unit = s.volume() / samples as f64;
    for m in sample_moments(s, samples, seed) {
        let h: f64 = m.iter().zip(&circle).map(|(a, b)| a * b).sum();
        let b = (((h - lo) / width).floor() as isize).clamp(0, bins as isize - 1) as usize;
        mass[b] += unit;
    }
    let bins_out: Vec<DensityBin> = (0..bins)
        .map(|b| DensityBin { lo: lo + b as f64 * width, hi: lo + (b + 1) as f64 * width, mass: mass[b] })
        .collect();
    let mut pieces = Vec::new();
    let mut sq = 0.0;
    let mut used = 0usize;
    for w in crit.windows(2) {
        let inside: Vec<&DensityBin> =
            bins_out.iter().filter(|b| b.lo >= w[0] - 1e-12 && b.hi <= w[1] + 1e-12).collect();
        let coefficients = fit_polynomial(&inside, degree);
        let piece = DensityPiece { lo: w[0], hi: w[1], coefficients };
        for b in &inside {
            let fitted = integrate_piece(&piece, b.lo, b.hi);
            sq += (b.mass - fitted).powi(2);
            used += 1;
        }
        pieces.push(piece);
    }
    let mean = s.volume() / bins as f64;
    let relative_residual = if used > 0 { (sq / used as f64).sqrt() / mean } else { 0.0 };
    Ok(PushforwardDensity { samples, bins: bins_out, pieces, relative_residual })
}

fn integrate_piece(p: &DensityPiece, a: f64, b: f64) -> f64 {
    p.coefficients.iter().enumerate().map(|(k, c)| c * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0)).sum()
}

/// Least squares for bin masses `∫_bin sum c_k h^k dh`.
fn fit_polynomial(bins: &[&DensityBin], degree: usize) -> Vec<f64> {
    if bins.is_empty() {
        return vec![0.0; degree + 1];
    }
    let a = DMatrix::from_fn(bins.len(), degree + 1, |i, k| {
        let (lo, hi) = (bins[i].lo, bins[i].hi);
        (hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1)) / (k as f64 + 1.0)
    });
    let y = DVector::from_iterator(bins.len(), bins.iter().map(|b| b.mass));
    let svd = a.svd(true, true);
    svd.solve(&y, 1e-12).map(|v| v.iter().copied().collect()).unwrap_or_else(|_| vec![0.0; degree + 1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullReport {
    pub samples: usize,
    pub outside: usize,
    pub worst_violation: f64,
    pub inside: bool,
}

/// Whether every sampled torus moment value lies in the convex hull of the
/// fixed-point images, with slack `1e-9`.
pub fn moment_hull_check(model: &ManifoldModel, samples: usize, seed: u64) -> Result<HullReport, LocalizationError> {
    const SLACK: f64 = 1e-9;
    let s = model.sampler()?;
    let dim = model.torus_images.first().map_or(0, |v| v.len());
    let constraints: Vec<(Vec<f64>, f64)> = match dim {
        1 => {
            let lo = model.torus_images.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
            let hi = model.torus_images.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
            vec![(vec![1.0], hi), (vec![-1.0], -lo)]
        }
        2 => hull_halfplanes(&model.torus_images),
        _ => return Err(LocalizationError::InvalidModel("hull test needs a 1- or 2-torus image".into())),
    };
    let moments = sample_moments(s, samples, seed);
    let mut outside = 0;
    let mut worst: f64 = 0.0;
    for m in &moments {
        let v = constraints
            .iter()
            .map(|(n, c)| n.iter().zip(m).map(|(a, b)| a * b).sum::<f64>() - c)
            .fold(f64::NEG_INFINITY, f64::max);
        if v > SLACK {
            outside += 1;
        }
        worst = worst.max(v);
    }
    Ok(HullReport { samples, outside, worst_violation: worst.max(0.0), inside: outside == 0 })
}

/// Half-planes `n · x <= c` of the convex hull of planar points.
fn hull_halfplanes(points: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    // Counter-clockwise: the outward normal of edge a→b is (dy, −dx).
    (0..hull.len())
        .map(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % hull.len()];
            let n = vec![b.1 - a.1, a.0 - b.0];
            let c = n[0] * a.0 + n[1] * a.1;
            (n, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_halfplanes() {
        let hp = hull_halfplanes(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(hp.len(), 3);
        let inside = |x: f64, y: f64| hp.iter().all(|(n, c)| n[0] * x + n[1] * y <= c + 1e-12);
        assert!(inside(0.2, 0.2));
        assert!(!inside(0.6, 0.6));
        assert!(!inside(-0.1, 0.5));
    }
}
