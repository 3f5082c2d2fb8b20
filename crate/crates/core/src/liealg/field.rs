use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{parse, Atom, Coord, Poly};

/// A vector field `μ∂s + τ∂t + ξ∂x + η∂y + φ∂z` on `(s, t, x, y, z)`
/// together with a gauge function.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorField5<K: Scalar> {
    /// Coefficients in [`Coord::ALL`] order.
    pub coeffs: [Poly<K>; 5],
    pub gauge: Poly<K>,
}

impl<K: Scalar> Default for VectorField5<K> {
    fn default() -> Self {
        VectorField5 { coeffs: Default::default(), gauge: Poly::zero() }
    }
}

impl<K: Scalar> VectorField5<K> {
    /// Rejects coefficients or gauges that mention velocities or
    /// accelerations.
    pub fn new(coeffs: [Poly<K>; 5], gauge: Poly<K>) -> Result<Self> {
        for p in coeffs.iter().chain(std::iter::once(&gauge)) {
            if let Some(a) = p.contains(Atom::is_jet) {
                return Err(Error::JetInGenerator(a.to_string()));
            }
        }
        Ok(VectorField5 { coeffs, gauge })
    }

    /// Parses the five coefficients and the gauge.
    pub fn parse(coeffs: [&str; 5], gauge: &str) -> Result<Self> {
        let mut out: [Poly<K>; 5] = Default::default();
        for (slot, text) in out.iter_mut().zip(coeffs) {
            *slot = parse::<K>(text)?.to_poly()?;
        }
        VectorField5::new(out, parse::<K>(gauge)?.to_poly()?)
    }

    /// `c·∂_coord`.
    pub fn basis_direction(coord: Coord, c: K) -> Self {
        let mut v = VectorField5::default();
        v.coeffs[coord.index()] = Poly::constant(c);
        v
    }

    pub fn component(&self, c: Coord) -> &Poly<K> {
        &self.coeffs[c.index()]
    }

    pub fn with_gauge(mut self, gauge: Poly<K>) -> Self {
        self.gauge = gauge;
        self
    }

    /// True when every coefficient vanishes (the gauge is ignored).
    pub fn is_zero_field(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_field() && self.gauge.is_zero()
    }

    /// `X(p) = Σ Xᶜ ∂_c p`.
    pub fn apply(&self, p: &Poly<K>) -> Poly<K> {
        p.directional(&self.coeffs)
    }

    pub fn scale(&self, k: &K) -> Self {
        VectorField5 { coeffs: self.coeffs.clone().map(|c| c.scale(k)), gauge: self.gauge.scale(k) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (c, o) in coeffs.iter_mut().zip(&other.coeffs) {
            *c = &*c + o;
        }
        VectorField5 { coeffs, gauge: &self.gauge + &other.gauge }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-K::one()))
    }

    /// Linear combination `Σ cᵢ Xᵢ`.
    pub fn combination(fields: &[Self], coeffs: &[K]) -> Self {
        fields
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(VectorField5::default(), |acc, (f, c)| acc.add(&f.scale(c)))
    }

    /// Formats the field part only.
    pub fn field_string(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for c in Coord::ALL {
            let p = &self.coeffs[c.index()];
            if p.is_zero() {
                continue;
            }
            let d = format!("∂{}", c.letter());
            let text = match p.as_constant() {
                Some(k) if k == K::one() => d,
                Some(k) if k == -K::one() => format!("-{d}"),
                _ if p.len() == 1 => format!("{p}*{d}"),
                _ => format!("({p})*{d}"),
            };
            parts.push(text);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl<K: Scalar> fmt::Display for VectorField5<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field_string())?;
        if !self.gauge.is_zero() {
            write!(f, ", f = {}", self.gauge)?;
        }
        Ok(())
    }
}

/// `[X, Y]ᵃ = X(Yᵃ) − Y(Xᵃ)`, with gauge `X(f_Y) − Y(f_X)`.
pub fn commutator<K: Scalar>(x: &VectorField5<K>, y: &VectorField5<K>) -> VectorField5<K> {
    let mut coeffs: [Poly<K>; 5] = Default::default();
    for (a, slot) in coeffs.iter_mut().enumerate() {
        *slot = &x.apply(&y.coeffs[a]) - &y.apply(&x.coeffs[a]);
    }
    VectorField5 { coeffs, gauge: &x.apply(&y.gauge) - &y.apply(&x.gauge) }
}
