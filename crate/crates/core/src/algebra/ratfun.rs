//! Multivariate rational functions over Q.
//!
//! The denominator is stored as a product of pairwise coprime primitive
//! factors with positive leading coefficients; all scalar content lives in
//! the numerator. Localization and instanton sums only ever divide by
//! products of linear forms, and distinct normalized linear forms are
//! coprime irreducibles, so the common case never calls the general gcd.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, MPoly, Rational};

#[derive(Clone, Debug)]
pub struct RationalFunction {
    vars: Vec<String>,
    num: MPoly,
    den: Vec<(MPoly, u32)>,
}

/// JSON shape: `{"variables": [...], "numerator": {"1,0": "2/1"}, "denominator": {"0,0": "1/1"}}`
/// with exponent vectors as comma-separated keys in variable order.
#[derive(Serialize, Deserialize)]
struct RatFunRepr {
    variables: Vec<String>,
    numerator: BTreeMap<String, Rational>,
    denominator: BTreeMap<String, Rational>,
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatFunRepr {
            variables: self.vars.clone(),
            numerator: self.num.to_key_map(),
            denominator: self.denominator().to_key_map(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RatFunRepr::deserialize(d)?;
        let n = r.variables.len();
        let num = MPoly::from_key_map(n, &r.numerator).map_err(serde::de::Error::custom)?;
        let den = MPoly::from_key_map(n, &r.denominator).map_err(serde::de::Error::custom)?;
        RationalFunction::new(r.variables, num, den).map_err(serde::de::Error::custom)
    }
}

fn normalize_factor(p: &MPoly) -> (Rational, MPoly) {
    let c = p.content();
    (c.clone(), p.scale(&c.recip().expect("nonzero factor")))
}

/// Builds a pairwise coprime base from the given (primitive) polynomials.
fn coprime_base(polys: Vec<MPoly>) -> Vec<MPoly> {
    let mut base: Vec<MPoly> = Vec::new();
    let mut pending = polys;
    'next: while let Some(f) = pending.pop() {
        if f.is_constant() {
            continue;
        }
        for i in 0..base.len() {
            if base[i] == f {
                continue 'next;
            }
            if base[i].is_linear() && f.is_linear() {
                continue;
            }
            let g = base[i].gcd(&f);
            if g.is_constant() {
                continue;
            }
            let b = base.swap_remove(i);
            let b_rest = b.exact_div(&g).expect("gcd divides").primitive();
            let f_rest = f.exact_div(&g).expect("gcd divides").primitive();
            pending.push(g);
            pending.push(b_rest);
            pending.push(f_rest);
            continue 'next;
        }
        base.push(f);
    }
    base
}

/// Rewrites a product of factors over a coprime base. Returns the scalar
/// content picked up along the way.
fn refactor(factors: &[(MPoly, u32)]) -> (Rational, Vec<(MPoly, u32)>) {
    let mut unit = Rational::one();
    let mut prims = Vec::with_capacity(factors.len());
    for (f, e) in factors {
        let (c, p) = normalize_factor(f);
        unit *= &c.pow(*e as i32);
        prims.push((p, *e));
    }
    let base = coprime_base(prims.iter().map(|(p, _)| p.clone()).collect());
    let mut exps = vec![0u32; base.len()];
    for (p, e) in &prims {
        if p.is_constant() {
            unit *= &p.constant_value().unwrap().pow(*e as i32);
            continue;
        }
        if let Some(i) = base.iter().position(|b| b == p) {
            exps[i] += e;
            continue;
        }
        let mut rest = p.clone();
        for (i, b) in base.iter().enumerate() {
            while let Some(q) = rest.exact_div(b) {
                if rest.is_constant() {
                    break;
                }
                rest = q;
                exps[i] += e;
            }
        }
        let leftover = rest.constant_value().expect("base covers every factor");
        unit *= &leftover.pow(*e as i32);
    }
    let mut out: Vec<(MPoly, u32)> = base.into_iter().zip(exps).filter(|(_, e)| *e > 0).collect();
    sort_factors(&mut out);
    (unit, out)
}

fn sort_factors(f: &mut [(MPoly, u32)]) {
    f.sort_by(|(a, _), (b, _)| {
        let ka: Vec<_> = a.terms().iter().rev().collect();
        let kb: Vec<_> = b.terms().iter().rev().collect();
        ka.cmp(&kb)
    });
}

/// Quick exact test that `num` does not vanish on the hyperplane `l = 0`.
fn nonvanishing_on_hyperplane(num: &MPoly, l: &MPoly) -> bool {
    let n = l.nvars();
    let pivot = match (0..n).find(|&v| l.uses_var(v)) {
        Some(v) => v,
        None => return true,
    };
    // Choose the other coordinates as distinct primes; solve for the pivot.
    let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mut point: Vec<Rational> = (0..n).map(|i| Rational::from(primes[i % primes.len()] + i as i64 / 12)).collect();
    point[pivot] = Rational::zero();
    let coeffs = l.coefficients_in(pivot);
    let a = coeffs[1].eval(&point);
    let b = coeffs[0].eval(&point);
    point[pivot] = -(b / a);
    !num.eval(&point).is_zero()
}

impl RationalFunction {
    /// `num / den`, simplified.
    pub fn new(vars: Vec<String>, num: MPoly, den: MPoly) -> Result<Self, AlgebraError> {
        Ok(Self::unreduced(vars, num, den)?.simplified())
    }

    /// `num / den` without cancellation; call [`simplified`](Self::simplified)
    /// to reach canonical form.
    pub fn unreduced(vars: Vec<String>, num: MPoly, den: MPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        check_arity(&vars, &num)?;
        check_arity(&vars, &den)?;
        let (c, p) = normalize_factor(&den);
        let num = num.scale(&c.recip().expect("nonzero"));
        let den = if p.is_constant() { Vec::new() } else { vec![(p, 1)] };
        Ok(RationalFunction { vars, num, den })
    }

    /// `num / prod factors[i]^e_i`, simplified.
    pub fn from_factored(vars: Vec<String>, num: MPoly, factors: Vec<(MPoly, u32)>) -> Result<Self, AlgebraError> {
        check_arity(&vars, &num)?;
        for (f, _) in &factors {
            check_arity(&vars, f)?;
            if f.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
        }
        let (unit, den) = refactor(&factors);
        let num = num.scale(&unit.recip().expect("nonzero"));
        Ok(RationalFunction { vars, num, den }.cancel())
    }

    pub fn from_poly(vars: Vec<String>, num: MPoly) -> Self {
        RationalFunction { vars, num, den: Vec::new() }
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let n = vars.len();
        Self::from_poly(vars, MPoly::constant(n, c))
    }

    pub fn var(vars: Vec<String>, i: usize) -> Self {
        let n = vars.len();
        Self::from_poly(vars, MPoly::var(n, i))
    }

    pub fn zero_in(vars: Vec<String>) -> Self {
        Self::constant(vars, Rational::zero())
    }

    pub fn one_in(vars: Vec<String>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(MPoly, u32)] {
        &self.den
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> MPoly {
        let n = self.vars.len();
        self.den.iter().fold(MPoly::one(n), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch(format!("{:?} vs {:?}", self.vars, other.vars)))
        }
    }

    /// Cancels every common factor of numerator and denominator.
    pub fn simplified(&self) -> Self {
        let (unit, den) = refactor(&self.den);
        RationalFunction {
            vars: self.vars.clone(),
            num: self.num.scale(&unit.recip().expect("nonzero")),
            den,
        }
        .cancel()
    }

    /// Assumes `den` is a coprime base of primitive factors.
    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut i = 0;
        while i < self.den.len() {
            let f = self.den[i].0.clone();
            if f.is_linear() {
                while self.den[i].1 > 0 && !nonvanishing_on_hyperplane(&self.num, &f) {
                    match self.num.exact_div(&f) {
                        Some(q) => {
                            self.num = q;
                            self.den[i].1 -= 1;
                        }
                        None => break,
                    }
                }
                i += 1;
                continue;
            }
            let g = self.num.gcd(&f);
            if g.is_constant() {
                i += 1;
                continue;
            }
            if g == f {
                self.num = self.num.exact_div(&f).expect("gcd divides");
                self.den[i].1 -= 1;
                if self.den[i].1 == 0 {
                    i += 1;
                }
                continue;
            }
            // Split f into g * (f/g) and start over on the refined base.
            let e = self.den[i].1;
            let rest = f.exact_div(&g).expect("gcd divides");
            self.den.remove(i);
            self.den.push((g, e));
            self.den.push((rest, e));
            let (unit, den) = refactor(&self.den);
            self.num = self.num.scale(&unit.recip().expect("nonzero"));
            self.den = den;
            i = 0;
        }
        self.den.retain(|(_, e)| *e > 0);
        sort_factors(&mut self.den);
        self
    }

    fn combine_bases(a: &[(MPoly, u32)], b: &[(MPoly, u32)]) -> (Vec<MPoly>, Vec<u32>, Vec<u32>, Rational, Rational) {
        // Fast path: both already share one coprime base of linear forms.
        let all_linear = a.iter().chain(b).all(|(f, _)| f.is_linear());
        if all_linear {
            let mut base: Vec<MPoly> = a.iter().map(|(f, _)| f.clone()).collect();
            let mut ea: Vec<u32> = a.iter().map(|(_, e)| *e).collect();
            let mut eb = vec![0u32; base.len()];
            for (f, e) in b {
                match base.iter().position(|x| x == f) {
                    Some(i) => eb[i] += e,
                    None => {
                        base.push(f.clone());
                        ea.push(0);
                        eb.push(*e);
                    }
                }
            }
            return (base, ea, eb, Rational::one(), Rational::one());
        }
        let base = coprime_base(a.iter().chain(b).map(|(f, _)| f.clone()).collect());
        let (ua, ea) = exponents_over(&base, a);
        let (ub, eb) = exponents_over(&base, b);
        (base, ea, eb, ua, ub)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let (base, ea, eb, ua, ub) = Self::combine_bases(&self.den, &other.den);
        let n = self.vars.len();
        let mut na = self.num.scale(&ua.recip().expect("nonzero"));
        let mut nb = other.num.scale(&ub.recip().expect("nonzero"));
        let mut den = Vec::with_capacity(base.len());
        for (i, f) in base.into_iter().enumerate() {
            let top = ea[i].max(eb[i]);
            if top > ea[i] {
                na = na.mul(&f.pow(top - ea[i]));
            }
            if top > eb[i] {
                nb = nb.mul(&f.pow(top - eb[i]));
            }
            if top > 0 {
                den.push((f, top));
            }
        }
        let _ = n;
        Ok(RationalFunction { vars: self.vars.clone(), num: na.add(&nb), den }.cancel())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { vars: self.vars.clone(), num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero_in(self.vars.clone());
        }
        RationalFunction { vars: self.vars.clone(), num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero_in(self.vars.clone()));
        }
        let (base, ea, eb, ua, ub) = Self::combine_bases(&self.den, &other.den);
        let unit = (ua * ub).recip().expect("nonzero");
        let den = base.into_iter().zip(ea.iter().zip(&eb)).map(|(f, (a, b))| (f, a + b)).filter(|(_, e)| *e > 0).collect();
        Ok(RationalFunction { vars: self.vars.clone(), num: self.num.mul(&other.num).scale(&unit), den }.cancel())
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let num = self.denominator();
        Self::from_factored(self.vars.clone(), num, vec![(self.num.clone(), 1)])
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.mul(&other.recip()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one_in(self.vars.clone());
        for _ in 0..n {
            acc = acc.mul(self).expect("same variables");
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        let mut d = Rational::one();
        for (f, e) in &self.den {
            d *= &f.eval(point).pow(*e as i32);
        }
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let d: f64 = self.den.iter().map(|(f, e)| f.eval_f64(point).powi(*e as i32)).product();
        self.num.eval_f64(point) / d
    }

    /// Substitutes each variable by a polynomial in `new_vars`.
    pub fn substitute(&self, new_vars: Vec<String>, images: &[MPoly]) -> Result<Self, AlgebraError> {
        if images.len() != self.vars.len() {
            return Err(AlgebraError::VariableMismatch("substitution arity".into()));
        }
        for im in images {
            check_arity(&new_vars, im)?;
        }
        let num = self.num.substitute(images);
        let mut factors = Vec::new();
        for (f, e) in &self.den {
            let g = f.substitute(images);
            if g.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            factors.push((g, *e));
        }
        Self::from_factored(new_vars, num, factors)
    }

    /// Value of the function restricted to `vars[var] = 0`, provided no pole
    /// survives there. `None` signals a pole along that hyperplane.
    pub fn restrict_to_zero(&self, var: usize) -> Option<Self> {
        let n = self.vars.len();
        let images: Vec<MPoly> = (0..n)
            .map(|i| if i == var { MPoly::zero(n) } else { MPoly::var(n, i) })
            .collect();
        if self.den.iter().any(|(f, _)| f.substitute(&images).is_zero()) {
            return None;
        }
        self.substitute(self.vars.clone(), &images).ok()
    }

    pub fn rename(&self, vars: Vec<String>) -> Result<Self, AlgebraError> {
        if vars.len() != self.vars.len() {
            return Err(AlgebraError::VariableMismatch("rename arity".into()));
        }
        Ok(RationalFunction { vars, num: self.num.clone(), den: self.den.clone() })
    }
}

fn check_arity(vars: &[String], p: &MPoly) -> Result<(), AlgebraError> {
    if p.nvars() != vars.len() {
        return Err(AlgebraError::VariableMismatch(format!(
            "polynomial in {} variables, ring has {}",
            p.nvars(),
            vars.len()
        )));
    }
    Ok(())
}

fn exponents_over(base: &[MPoly], factors: &[(MPoly, u32)]) -> (Rational, Vec<u32>) {
    let mut unit = Rational::one();
    let mut exps = vec![0u32; base.len()];
    for (f, e) in factors {
        if let Some(i) = base.iter().position(|b| b == f) {
            exps[i] += e;
            continue;
        }
        let mut rest = f.clone();
        for (i, b) in base.iter().enumerate() {
            while !rest.is_constant() {
                match rest.exact_div(b) {
                    Some(q) => {
                        rest = q;
                        exps[i] += e;
                    }
                    None => break,
                }
            }
        }
        unit *= &rest.constant_value().expect("base covers factor").pow(*e as i32);
    }
    (unit, exps)
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.vars != other.vars {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.denominator()) == other.num.mul(&self.denominator())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.format_with(&self.vars);
        if self.den.is_empty() {
            return write!(f, "{num}");
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                let s = p.format_with(&self.vars);
                let s = if p.num_terms() > 1 { format!("({s})") } else { s };
                if *e > 1 {
                    format!("{s}^{e}")
                } else {
                    s
                }
            })
            .collect();
        let num = if self.num.num_terms() > 1 { format!("({num})") } else { num };
        write!(f, "{num}/({})", den.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tau() -> Vec<String> {
        vec!["tau".to_string()]
    }

    fn t() -> MPoly {
        MPoly::var(1, 0)
    }

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn cancels_common_factor() {
        let f = RationalFunction::unreduced(tau(), t().pow(2).sub(&t()), t()).unwrap();
        let s = f.simplified();
        assert!(s.is_polynomial());
        assert_eq!(s.numerator(), &t().sub(&MPoly::one(1)));
    }

    #[test]
    fn opposite_poles_cancel() {
        let a = RationalFunction::new(tau(), MPoly::one(1), t()).unwrap();
        let b = RationalFunction::new(tau(), MPoly::constant(1, r(-1)), t()).unwrap();
        assert!(a.add(&b).unwrap().is_zero());
        let c = RationalFunction::new(tau(), MPoly::one(1), t().neg()).unwrap();
        let s = a.add(&c).unwrap();
        assert!(s.is_zero() && s.is_polynomial());
    }

    #[test]
    fn nonlinear_denominator_split() {
        // 1/(t^2 - 1) + 1/(t + 1) = t/(t^2 - 1)
        let one = MPoly::one(1);
        let a = RationalFunction::new(tau(), one.clone(), t().pow(2).sub(&one)).unwrap();
        let b = RationalFunction::new(tau(), one.clone(), t().add(&one)).unwrap();
        let s = a.add(&b).unwrap();
        let expected = RationalFunction::new(tau(), t(), t().pow(2).sub(&one)).unwrap();
        assert_eq!(s, expected);
        // (t - 1)/(t^2 - 1) = 1/(t + 1)
        let q = RationalFunction::new(tau(), t().sub(&one), t().pow(2).sub(&one)).unwrap();
        assert_eq!(q.denominator(), t().add(&one));
    }

    #[test]
    fn denominator_sign_normalized() {
        let f = RationalFunction::new(tau(), MPoly::one(1), t().scale(&r(-2))).unwrap();
        assert_eq!(f.denominator(), t());
        assert_eq!(f.numerator(), &MPoly::constant(1, Rational::new(-1, 2).unwrap()));
    }

    #[test]
    fn json_shape() {
        let f = RationalFunction::new(tau(), MPoly::one(1), t()).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"variables":["tau"],"numerator":{"0":"1/1"},"denominator":{"1":"1/1"}}"#);
        let back: RationalFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn restrict_detects_pole() {
        let vars = vec!["e".to_string(), "a".to_string()];
        let e = MPoly::var(2, 0);
        let a = MPoly::var(2, 1);
        let f = RationalFunction::new(vars.clone(), MPoly::one(2), e.clone()).unwrap();
        assert!(f.restrict_to_zero(0).is_none());
        let g = RationalFunction::new(vars, MPoly::one(2), a.add(&e)).unwrap();
        let lim = g.restrict_to_zero(0).unwrap();
        assert_eq!(lim.denominator(), a);
    }

    fn arb_poly() -> impl Strategy<Value = MPoly> {
        prop::collection::vec(-3i64..=3, 1..5).prop_map(|c| {
            MPoly::from_terms(1, c.into_iter().enumerate().map(|(i, v)| (vec![i as u32], Rational::from(v))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn simplify_idempotent_and_value_preserving(
            n in arb_poly(), d in arb_poly(), k in arb_poly()
        ) {
            prop_assume!(!d.is_zero() && !k.is_zero());
            let f = RationalFunction::unreduced(tau(), n.mul(&k), d.mul(&k)).unwrap();
            let s = f.simplified();
            prop_assert_eq!(s.simplified(), s.clone());
            prop_assert!(s.numerator().gcd(&s.denominator()).is_constant() || s.is_zero());
            let mut checked = 0;
            for i in 0..60 {
                let x = Rational::new(2 * i - 37, 7).unwrap();
                let (Ok(a), Ok(b)) = (f.eval(&[x.clone()]), s.eval(&[x])) else { continue };
                prop_assert_eq!(a, b);
                checked += 1;
                if checked == 20 { break; }
            }
        }
    }
}
