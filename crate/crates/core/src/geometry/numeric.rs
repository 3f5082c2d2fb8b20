//! Closed-form numeric metrics: each of `A, B, C` is a constant `c`, a linear
//! function `c·t + d`, or a power `c·tᵖ` with integer `p ≥ 0`.

use std::fmt;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{parse, Atom, Func, Poly, RewriteRuleSet};

/// One metric function from the closed-form family, stored as a
/// polynomial in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm<K: Scalar> {
    poly: Poly<K>,
}

impl<K: Scalar> ClosedForm<K> {
    pub fn constant(c: K) -> Self {
        ClosedForm { poly: Poly::constant(c) }
    }

    /// Accepts exactly the constant / linear / single-power family.
    pub fn from_poly(poly: Poly<K>) -> Result<Self> {
        if let Some(a) = poly.contains(|a| *a != Atom::T) {
            return Err(Error::Metric(format!("closed form may only depend on t, found {a}")));
        }
        if poly.terms().any(|(m, _)| m.exponent(&Atom::T) < 0) {
            return Err(Error::Metric(format!("negative power of t in {poly}")));
        }
        let max_exp = poly.terms().map(|(m, _)| m.exponent(&Atom::T)).max().unwrap_or(0);
        if max_exp > 1 && poly.len() > 1 {
            return Err(Error::Metric(format!("{poly} is not constant, linear or a single power of t")));
        }
        if poly.is_zero() {
            return Err(Error::Metric("metric function identically zero".into()));
        }
        Ok(ClosedForm { poly })
    }

    pub fn parse(text: &str) -> Result<Self> {
        ClosedForm::from_poly(parse::<K>(text)?.to_poly()?)
    }

    pub fn poly(&self) -> &Poly<K> {
        &self.poly
    }

    pub fn derivative(&self, order: u8) -> Poly<K> {
        (0..order).fold(self.poly.clone(), |p, _| p.diff(&Atom::T))
    }
}

impl<K: Scalar> fmt::Display for ClosedForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Numeric metric: closed forms for `A, B, C`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMetric<K: Scalar> {
    pub funcs: [ClosedForm<K>; 3],
}

impl<K: Scalar> NumericMetric<K> {
    pub fn new(a: ClosedForm<K>, b: ClosedForm<K>, c: ClosedForm<K>) -> Self {
        NumericMetric { funcs: [a, b, c] }
    }

    pub fn unit() -> Self {
        let one = ClosedForm::constant(K::one());
        NumericMetric::new(one.clone(), one.clone(), one)
    }

    /// Parses `A = 1, B = t, C = 2*t` style text (commas, semicolons or
    /// newlines between entries; `#` starts a comment). Missing functions
    /// default to `1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = NumericMetric::unit();
        let mut seen = [false; 3];
        for raw in text.split(['\n', ',', ';']) {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, rhs) = line
                .split_once('=')
                .ok_or_else(|| Error::Metric(format!("expected `NAME = expression`, got `{line}`")))?;
            let name = name.trim();
            let name = name.strip_suffix("(t)").unwrap_or(name).trim();
            let idx = Func::ALL
                .iter()
                .position(|f| name.len() == 1 && name.starts_with(f.letter()))
                .ok_or_else(|| Error::Metric(format!("unknown metric function `{name}`")))?;
            if seen[idx] {
                return Err(Error::Metric(format!("`{name}` given twice")));
            }
            seen[idx] = true;
            m.funcs[idx] = ClosedForm::parse(rhs)?;
        }
        Ok(m)
    }

    pub fn func(&self, f: Func) -> &ClosedForm<K> {
        &self.funcs[f as usize]
    }

    /// The specialization as rewrite rules `A ↦ a(t)` etc.
    pub fn rules(&self) -> Result<RewriteRuleSet<K>> {
        RewriteRuleSet::new(Func::ALL.map(|f| (Atom::func(f), self.func(f).poly.clone())))
    }

    /// `F⁽ᵏ⁾(t)` as an exact polynomial in `t`.
    pub fn symbolic_value(&self, f: Func, order: u8) -> Poly<K> {
        self.func(f).derivative(order)
    }

    /// Derivative table for fast evaluation.
    pub fn evaluator(&self, max_order: u8) -> MetricEvaluator {
        let table = Func::ALL
            .iter()
            .map(|f| (0..=max_order).map(|k| self.symbolic_value(*f, k).map_coefficients(|c| c.to_f64())).collect())
            .collect();
        MetricEvaluator { table }
    }
}

impl<K: Scalar> fmt::Display for NumericMetric<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A = {}, B = {}, C = {}", self.funcs[0], self.funcs[1], self.funcs[2])
    }
}

/// Float evaluation of `F⁽ᵏ⁾(t)`.
#[derive(Clone, Debug)]
pub struct MetricEvaluator {
    table: Vec<Vec<Poly<f64>>>,
}

impl MetricEvaluator {
    pub fn value<F: Float>(&self, f: Func, order: u8, t: F) -> Option<F> {
        let p = self.table[f as usize].get(usize::from(order))?;
        let v = p.eval(&|a: &Atom| (*a == Atom::T).then_some(t)).ok()?;
        Some(v)
    }

    pub fn max_order(&self) -> u8 {
        (self.table[0].len() - 1) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn closed_form_family() {
        assert!(ClosedForm::<Rational>::parse("2").is_ok());
        assert!(ClosedForm::<Rational>::parse("2*t + 1").is_ok());
        assert!(ClosedForm::<Rational>::parse("3*t^4").is_ok());
        assert!(ClosedForm::<Rational>::parse("t^2 + 1").is_err());
        assert!(ClosedForm::<Rational>::parse("x").is_err());
        assert!(ClosedForm::<Rational>::parse("0").is_err());
    }

    #[test]
    fn metric_text() {
        let m = NumericMetric::<Rational>::parse("A = 1\nB(t) = t, C = 2*t # comment").unwrap();
        assert_eq!(m.to_string(), "A = 1, B = t, C = 2*t");
        let m = NumericMetric::<Rational>::parse("A=t^2,B=t,C=1").unwrap();
        assert_eq!(m.symbolic_value(Func::A, 2).to_string(), "2");
        assert!(NumericMetric::<Rational>::parse("D = 1").is_err());
        assert!(NumericMetric::<Rational>::parse("A = 1, A = 2").is_err());
        let ev = m.evaluator(2);
        assert_eq!(ev.value(Func::A, 1, 3.0f64), Some(6.0));
        assert_eq!(ev.value(Func::C, 0, 3.0f32), Some(1.0));
    }
}
