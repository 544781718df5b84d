//! Sparse multivariate polynomials over Q.
//!
//! Terms are kept in a `BTreeMap` ordered by graded lexicographic order
//! (total degree first, then lexicographic with variable 0 largest), so the
//! leading term is always the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial(e), Rational::one());
        p
    }

    /// Linear form `sum coeffs[i] * x_i + constant`.
    pub fn linear(coeffs: &[Rational], constant: Rational) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Self::var(n, i).terms.into_keys().next().unwrap(), c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_linear(&self) -> bool {
        self.total_degree() == 1
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let (mut out, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut acc: std::collections::HashMap<Monomial, Rational> = std::collections::HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let p = ca * cb;
                acc.entry(m).and_modify(|v| *v += &p).or_insert(p);
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }


    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `Some(q)` with `self = q * d` when `d` divides `self` exactly.
    ///
    /// Leading-term reduction in a fixed monomial order: if `d | self`, every
    /// intermediate remainder's leading term is divisible by `LT(d)`, so the
    /// first failure proves non-divisibility.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            // subtract qc*qm*d
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), &-(c * &qc));
            }
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t *= &x.pow(e as i32);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c.to_f64() * m.exps().iter().zip(point).map(|(&e, x)| x.powi(e as i32)).product::<f64>()
            })
            .sum()
    }

    /// Rational `c` such that `self / c` has coprime integer coefficients and
    /// a positive leading coefficient.
    pub fn content(&self) -> Rational {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return Rational::one();
        }
        let c = Rational::new(g, l).expect("nonzero lcm");
        match self.leading() {
            Some((_, lc)) if lc.is_negative() => -c,
            _ => c,
        }
    }

    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.scale(&c.recip().expect("nonzero content"))
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].add_term(Monomial(e), c);
        }
        out
    }

    fn var_power(nvars: usize, var: usize, k: u32) -> Monomial {
        let mut e = vec![0; nvars];
        e[var] = k;
        Monomial(e)
    }

    /// Substitutes `x_i -> images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(target), p.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Greatest common divisor, normalized as a primitive integer polynomial
    /// with positive leading coefficient (`1` when coprime, `0` only when
    /// both inputs vanish). Recursive primitive remainder sequence.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        let n = self.nvars;
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        if self.is_constant() || other.is_constant() {
            return MPoly::one(n);
        }
        if self == other {
            return self.primitive();
        }
        let var = (0..n)
            .rev()
            .find(|&v| self.uses_var(v) || other.uses_var(v))
            .expect("non-constant polynomial uses a variable");
        match (self.uses_var(var), other.uses_var(var)) {
            (true, false) => return self.content_in(var).gcd(other),
            (false, true) => return self.gcd(&other.content_in(var)),
            _ => {}
        }
        let cf = self.content_in(var);
        let cg = other.content_in(var);
        let c = cf.gcd(&cg);
        let mut a = self.exact_div(&cf).expect("content divides");
        let mut b = other.exact_div(&cg).expect("content divides");
        if a.degree_in(var) < b.degree_in(var) {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var) == 0 {
                return c.primitive();
            }
            a = b;
            b = r.primitive_in(var);
        }
        c.mul(&b.primitive_in(var)).primitive()
    }

    /// gcd of the coefficients with respect to `var`.
    fn content_in(&self, var: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        for c in self.coefficients_in(var) {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.primitive() } else { g.gcd(&c) };
            if g.is_constant() {
                return MPoly::one(self.nvars);
            }
        }
        g
    }

    fn primitive_in(&self, var: usize) -> MPoly {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides").primitive()
    }

    fn pseudo_rem(&self, d: &MPoly, var: usize) -> MPoly {
        let dd = d.degree_in(var);
        let lcd = d.coefficients_in(var).pop().expect("nonzero");
        let mut r = self.clone();
        while !r.is_zero() && r.uses_var(var) && r.degree_in(var) >= dd {
            let dr = r.degree_in(var);
            let lcr = r.coefficients_in(var).pop().expect("nonzero");
            let shift = MPoly {
                nvars: self.nvars,
                terms: std::iter::once((Self::var_power(self.nvars, var, dr - dd), Rational::one())).collect(),
            };
            r = r.mul(&lcd).sub(&lcr.mul(&shift).mul(d));
        }
        r
    }

    /// Canonical text with the given variable names, leading term first.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let is_unit = m.degree() == 0;
            if !mag.is_one() || is_unit {
                factors.push(if mag.is_integer() { mag.numer().to_string() } else { mag.to_string() });
            }
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }

    /// Exponent-string keyed terms, e.g. `"1,0,2" -> "3/1"`.
    pub fn to_key_map(&self) -> BTreeMap<String, Rational> {
        self.terms
            .iter()
            .map(|(m, c)| (m.0.iter().map(u32::to_string).collect::<Vec<_>>().join(","), c.clone()))
            .collect()
    }

    pub fn from_key_map(nvars: usize, map: &BTreeMap<String, Rational>) -> Result<MPoly, super::AlgebraError> {
        let mut p = MPoly::zero(nvars);
        for (k, c) in map {
            let exps: Vec<u32> = if k.trim().is_empty() {
                Vec::new()
            } else {
                k.split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| super::AlgebraError::Parse(format!("bad exponent key {k:?}")))?
            };
            if exps.len() != nvars {
                return Err(super::AlgebraError::Parse(format!(
                    "exponent key {k:?} has {} entries, expected {nvars}",
                    exps.len()
                )));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn x(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn grlex_leading_term() {
        let p = x(2, 0).add(&x(2, 1).pow(2));
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.exps(), &[0, 2]);
    }

    #[test]
    fn exact_division() {
        let a = x(3, 0).add(&x(3, 1)).add(&MPoly::constant(3, r(2)));
        let b = x(3, 2).sub(&x(3, 0).scale(&r(3)));
        let p = a.mul(&b);
        assert_eq!(p.exact_div(&b).unwrap(), a);
        assert!(p.add(&MPoly::one(3)).exact_div(&b).is_none());
    }

    #[test]
    fn gcd_univariate_and_multivariate() {
        let t = x(1, 0);
        let a = t.pow(2).sub(&t); // t^2 - t
        let g = a.gcd(&t);
        assert_eq!(g, t);

        let n = 3;
        let f1 = x(n, 0).add(&x(n, 1).scale(&r(2))).sub(&x(n, 2));
        let f2 = x(n, 0).mul(&x(n, 2)).add(&MPoly::one(n));
        let f3 = x(n, 1).pow(2).add(&x(n, 0));
        let p = f1.mul(&f2).mul(&f2);
        let q = f1.mul(&f2).mul(&f3);
        let g = p.gcd(&q);
        assert_eq!(g, f1.mul(&f2).primitive());
        assert!(f1.gcd(&f3).is_constant());
    }

    #[test]
    fn substitution_collapses_variables() {
        // x0 - x1 with x0 = x1 = e
        let p = x(2, 0).sub(&x(2, 1));
        let e = x(1, 0);
        assert!(p.substitute(&[e.clone(), e]).is_zero());
    }

    #[test]
    fn key_map_round_trip() {
        let p = x(2, 0).pow(2).scale(&Rational::new(3, 2).unwrap()).sub(&MPoly::one(2));
        let m = p.to_key_map();
        assert_eq!(m["2,0"], Rational::new(3, 2).unwrap());
        assert_eq!(MPoly::from_key_map(2, &m).unwrap(), p);
    }

    #[test]
    fn format() {
        let names = vec!["e1".to_string(), "a".to_string()];
        let p = x(2, 0).pow(2).scale(&r(2)).sub(&x(2, 1)).add(&MPoly::constant(2, r(-5)));
        assert_eq!(p.format_with(&names), "2*e1^2 - a - 5");
    }
}
