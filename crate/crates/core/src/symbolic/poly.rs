//! Canonical Laurent polynomials over atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use super::atom::{Atom, AtomDerivative, Coord, Dir};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::{float_from, Scalar};

/// The canonical form of an expression: a map from monomial to nonzero
/// coefficient. The zero polynomial has no terms.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    terms: BTreeMap<Monomial, K>,
}

impl<K> Default for Poly<K> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<K: Scalar> Poly<K> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(K::one())
    }

    pub fn constant(k: K) -> Self {
        Poly::term(k, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(K::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Poly::constant(K::from_ratio(num, den))
    }

    pub fn atom(atom: Atom) -> Self {
        Poly::term(K::one(), Monomial::atom(atom))
    }

    pub fn term(coeff: K, mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Poly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut p = Poly::zero();
        for (m, k) in terms {
            p.add_term(m, k);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> {
        self.terms.iter()
    }

    /// The highest term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, mono: &Monomial) -> K {
        self.terms.get(mono).cloned().unwrap_or_else(K::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> K {
        self.coeff(&Monomial::one())
    }

    /// `Some(k)` when the polynomial is the constant `k`.
    pub fn as_constant(&self) -> Option<K> {
        match self.terms.len() {
            0 => Some(K::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_single_term(&self) -> Option<(&Monomial, &K)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }

    pub fn add_term(&mut self, mono: Monomial, coeff: K) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    /// Integer power. Negative exponents require a single-term polynomial.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp >= 0 {
            let mut acc = Poly::one();
            let mut base = self.clone();
            let mut e = exp as u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = &acc * &base;
                }
                e >>= 1;
                if e > 0 {
                    base = &base * &base;
                }
            }
            return Ok(acc);
        }
        let (mono, coeff) = match self.as_single_term() {
            Some(t) => t,
            None if self.is_zero() => return Err(Error::DivisionByZero),
            None => return Err(Error::NonMonomialInverse(self.to_string())),
        };
        let inv = K::one() / coeff.clone();
        let k = (0..-exp).fold(K::one(), |acc, _| acc * inv.clone());
        Ok(Poly::term(k, mono.pow(exp)))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|m| m.atoms().copied()).collect()
    }

    pub fn contains(&self, pred: impl Fn(&Atom) -> bool) -> Option<Atom> {
        self.terms.keys().flat_map(|m| m.atoms()).find(|a| pred(a)).copied()
    }

    /// Largest total exponent of velocity atoms over all terms.
    pub fn velocity_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.factors().iter().filter(|(a, _)| a.is_velocity()).map(|(_, e)| i64::from(*e)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Partial derivative treating every atom as independent, except that
    /// metric functions chain in `t` and abstract partials chain in every
    /// coordinate.
    pub fn diff(&self, sym: &Atom) -> Self {
        let mut out = Poly::zero();
        for (mono, coeff) in &self.terms {
            for &(atom, exp) in mono.factors() {
                let (_, rest) = mono.take(&atom);
                let lowered = rest.mul(&Monomial::power(atom, exp - 1));
                let k = coeff.clone() * K::from_int(i64::from(exp));
                match atom.derivative(sym) {
                    AtomDerivative::Zero => {}
                    AtomDerivative::One => out.add_term(lowered, k),
                    AtomDerivative::Atom(next) => out.add_term(lowered.mul(&Monomial::atom(next)), k),
                }
            }
        }
        out
    }

    /// Directional derivative `Σ v_c ∂_c` over the five coordinates.
    pub fn directional(&self, field: &[Poly<K>; 5]) -> Self {
        let mut out = Poly::zero();
        for c in Coord::ALL {
            let v = &field[c.index()];
            if !v.is_zero() {
                out = &out + &(v * &self.diff(&Atom::Coord(c)));
            }
        }
        out
    }

    /// First-order total derivative `∂_s + ṫ∂_t + ẋ∂_x + ẏ∂_y + ż∂_z`.
    pub fn total_derivative(&self) -> Result<Self> {
        if let Some(a) = self.contains(Atom::is_acceleration) {
            return Err(Error::AccelerationInJet(a.to_string()));
        }
        Ok(self.jet_derivative(false))
    }

    /// Second-order total derivative, which also differentiates velocities
    /// into accelerations.
    pub fn total_derivative_second(&self) -> Self {
        self.jet_derivative(true)
    }

    fn jet_derivative(&self, second_order: bool) -> Self {
        let mut out = self.diff(&Atom::S);
        for d in Dir::ALL {
            let along = self.diff(&Atom::Coord(d.coord()));
            out = &out + &along.mul_monomial(&Monomial::atom(Atom::Vel(d)));
            if second_order {
                let accel = self.diff(&Atom::Vel(d));
                out = &out + &accel.mul_monomial(&Monomial::atom(Atom::Acc(d)));
            }
        }
        out
    }

    /// Simultaneous substitution of atoms by polynomials. Negative powers of
    /// a substituted atom require a single-term replacement.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Poly<K>>) -> Result<Self> {
        let mut out = Poly::zero();
        for (mono, coeff) in &self.terms {
            let mut acc = Poly::constant(coeff.clone());
            let mut keep = Monomial::one();
            for &(atom, exp) in mono.factors() {
                match bindings.get(&atom) {
                    Some(repl) => acc = &acc * &repl.pow(exp)?,
                    None => keep = keep.mul(&Monomial::power(atom, exp)),
                }
            }
            out = &out + &acc.mul_monomial(&keep);
        }
        Ok(out)
    }

    /// Coefficient of `atom^1` when the polynomial is linear in `atom`.
    pub fn linear_coefficient(&self, atom: &Atom) -> Option<(Self, Self)> {
        let mut lin = Poly::zero();
        let mut rest = Poly::zero();
        for (mono, coeff) in &self.terms {
            let (exp, cof) = mono.take(atom);
            match exp {
                0 => rest.add_term(cof, coeff.clone()),
                1 => lin.add_term(cof, coeff.clone()),
                _ => return None,
            }
        }
        Some((lin, rest))
    }

    /// Monomial made of the most negative exponents of atoms matching
    /// `pred`, inverted: multiplying by it removes those denominators.
    pub fn denominator_clearing(&self, pred: impl Fn(&Atom) -> bool) -> Monomial {
        let mut worst: BTreeMap<Atom, i32> = BTreeMap::new();
        for mono in self.terms.keys() {
            for &(a, e) in mono.factors() {
                if e < 0 && pred(&a) {
                    let w = worst.entry(a).or_insert(0);
                    *w = (*w).min(e);
                }
            }
        }
        Monomial::from_factors(worst.into_iter().map(|(a, e)| (a, -e)))
    }

    /// Numeric evaluation. Returns `Err` naming the first atom without a value.
    pub fn eval<F: Float>(&self, value: &dyn Fn(&Atom) -> Option<F>) -> Result<F> {
        let mut sum = F::zero();
        for (mono, coeff) in &self.terms {
            let mut term: F = float_from(coeff.to_f64());
            for &(atom, exp) in mono.factors() {
                let v = value(&atom).ok_or_else(|| Error::Unbound(atom.to_string()))?;
                term = term * v.powi(exp);
            }
            sum = sum + term;
        }
        Ok(sum)
    }

    pub fn map_coefficients<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::from_terms(self.terms.iter().map(|(m, k)| (m.clone(), f(k))))
    }
}

impl<K: Scalar> fmt::Display for Poly<K> {
    /// Highest term first, in the textual expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let negative = coeff.is_negative();
            let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mono.is_one() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{magnitude}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<K: Scalar> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<K: Scalar> Add for &Poly<K> {
    type Output = Poly<K>;

    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, k) in &small.terms {
            out.add_term(m.clone(), k.clone());
        }
        out
    }
}

impl<K: Scalar> Sub for &Poly<K> {
    type Output = Poly<K>;

    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        let mut out = self.clone();
        for (m, k) in &rhs.terms {
            out.add_term(m.clone(), -k.clone());
        }
        out
    }
}

impl<K: Scalar> Mul for &Poly<K> {
    type Output = Poly<K>;

    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        let mut out = Poly::zero();
        for (ma, ka) in &self.terms {
            for (mb, kb) in &rhs.terms {
                out.add_term(ma.mul(mb), ka.clone() * kb.clone());
            }
        }
        out
    }
}

impl<K: Scalar> Neg for &Poly<K> {
    type Output = Poly<K>;

    fn neg(self) -> Poly<K> {
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), -k.clone())).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl<K: Scalar> $trait for Poly<K> {
            type Output = Poly<K>;
            fn $method(self, rhs: Poly<K>) -> Poly<K> {
                (&self).$method(&rhs)
            }
        }
        impl<K: Scalar> $trait<&Poly<K>> for Poly<K> {
            type Output = Poly<K>;
            fn $method(self, rhs: &Poly<K>) -> Poly<K> {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<K: Scalar> Neg for Poly<K> {
    type Output = Poly<K>;

    fn neg(self) -> Poly<K> {
        -&self
    }
}

impl<K: Scalar> std::iter::Sum for Poly<K> {
    fn sum<I: Iterator<Item = Poly<K>>>(iter: I) -> Self {
        iter.fold(Poly::zero(), |a, b| &a + &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::atom::Func;
    use crate::Rational;

    type P = Poly<Rational>;

    fn td() -> P {
        P::atom(Atom::Vel(Dir::T))
    }
    fn xd() -> P {
        P::atom(Atom::Vel(Dir::X))
    }

    #[test]
    fn binomial_square() {
        let sq = (&td() + &xd()).pow(2).unwrap();
        let expected = &(&td() * &td()) + &(&(&P::int(2) * &td()) * &xd());
        let expected = &expected + &(&xd() * &xd());
        assert_eq!(sq, expected);
        assert_eq!(sq.to_string(), "td^2 + 2*td*xd + xd^2");
    }

    #[test]
    fn function_atoms_chain_in_t() {
        let a = P::atom(Atom::func(Func::A));
        let e = &(&a * &a) * &(&xd() * &xd());
        let d = e.diff(&Atom::T);
        assert_eq!(d.to_string(), "2*xd^2*A(t)*A'(t)");
        assert!(e.diff(&Atom::X).is_zero());
    }

    #[test]
    fn inverse_of_sum_is_rejected() {
        let e = &td() + &P::int(1);
        assert!(matches!(e.pow(-1), Err(Error::NonMonomialInverse(_))));
        assert!(matches!(P::zero().pow(-2), Err(Error::DivisionByZero)));
        let a = P::atom(Atom::func(Func::A)).scale(&Rational::from_int(2));
        assert_eq!(a.pow(-2).unwrap().to_string(), "1/4*A(t)^(-2)");
    }

    #[test]
    fn total_derivative_basics() {
        assert_eq!(P::atom(Atom::S).total_derivative().unwrap(), P::one());
        let t2 = P::atom(Atom::T).pow(2).unwrap();
        assert_eq!(t2.total_derivative().unwrap().to_string(), "2*t*td");
        let a = P::atom(Atom::func(Func::A));
        assert_eq!(a.total_derivative().unwrap().to_string(), "td*A'(t)");
        let acc = P::atom(Atom::Acc(Dir::T));
        assert!(acc.total_derivative().is_err());
    }

    #[test]
    fn f64_coefficients_work_too() {
        let p: Poly<f64> = Poly::atom(Atom::X).scale(&0.5);
        let q = &p * &p;
        let v = q.eval(&|a: &Atom| (*a == Atom::X).then_some(2.0f64)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }
}
