//! Term rewriting over the expression class the engine needs: polynomials
//! of low degree in the four velocities, with Laurent-polynomial
//! coefficients over coordinates, metric-function atoms and parameters.

mod atom;
mod expr;
mod monomial;
mod parse;
mod poly;
mod rules;

use std::collections::BTreeMap;

pub use atom::{Atom, Coord, Dir, Func, Param, Unknown};
pub use expr::Expr;
pub use monomial::Monomial;
pub use parse::{atom_by_name, parse};
pub use poly::Poly;
pub use rules::{RewriteRuleSet, MAX_DERIVATIVE_ORDER};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Canonical form: the expanded, rule-rewritten, collected polynomial.
pub type CanonicalExpr<K> = Poly<K>;

/// Fully expands `e` and rewrites it under `rules` to fixpoint.
pub fn normalize<K: Scalar>(e: &Expr<K>, rules: &RewriteRuleSet<K>) -> Result<CanonicalExpr<K>> {
    rules.apply(&e.to_poly()?)
}

pub fn partial_diff<K: Scalar>(e: &Expr<K>, sym: &Atom) -> Expr<K> {
    e.diff(sym)
}

pub fn total_derivative<K: Scalar>(e: &Expr<K>) -> Result<Expr<K>> {
    e.total_derivative()
}

pub fn substitute<K: Scalar>(e: &Expr<K>, bindings: &BTreeMap<Atom, Expr<K>>) -> Result<Expr<K>> {
    e.substitute(bindings)
}

pub fn is_zero<K: Scalar>(e: &Expr<K>, rules: &RewriteRuleSet<K>) -> Result<bool> {
    rules.is_zero(&e.to_poly()?)
}

/// Parses and normalizes without rules; test and catalog convenience.
pub fn poly<K: Scalar>(text: &str) -> Result<Poly<K>> {
    parse::<K>(text)?.to_poly()
}

/// Partition of a polynomial by velocity monomial.
pub type VelocitySplit<K> = BTreeMap<Monomial, Poly<K>>;

/// Groups the canonical form of `p` (under `rules`) by the velocity part of
/// each monomial. The constant key is [`Monomial::one`].
pub fn velocity_split_poly<K: Scalar>(p: &Poly<K>, rules: &RewriteRuleSet<K>) -> Result<VelocitySplit<K>> {
    let reduced = rules.reduce(p)?;
    let degree = reduced.velocity_degree();
    if degree > 3 {
        return Err(Error::VelocityDegree(degree));
    }
    let mut out: VelocitySplit<K> = BTreeMap::new();
    for (mono, k) in reduced.terms() {
        let (vel, rest) = mono.partition(Atom::is_velocity);
        out.entry(vel).or_insert_with(Poly::zero).add_term(rest, k.clone());
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

pub fn velocity_split<K: Scalar>(e: &Expr<K>, rules: &RewriteRuleSet<K>) -> Result<VelocitySplit<K>> {
    velocity_split_poly(&e.to_poly()?, rules)
}

/// Inverse of [`velocity_split`]: `Σ key · coefficient`.
pub fn recombine<K: Scalar>(split: &VelocitySplit<K>) -> Poly<K> {
    split.iter().map(|(key, coeff)| coeff.mul_monomial(key)).sum()
}
