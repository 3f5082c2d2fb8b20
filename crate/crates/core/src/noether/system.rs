use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::residual::residual_template;
use crate::error::{Error, Result};
use crate::geometry::MetricSpec;
use crate::liealg::linear::{rank, Matrix};
use crate::symbolic::{velocity_split_poly, Atom, Monomial};
use crate::{Poly, Rational};

/// One coefficient of the residual template.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingEquation {
    /// Velocity monomial whose coefficient this is.
    pub key: Monomial,
    /// The coefficient as produced by the split.
    pub raw: Poly,
    /// `raw` divided by its rational content, leading coefficient positive.
    pub normalized: Poly,
    /// False when the equation is a consequence of earlier ones.
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingSystem {
    /// Ordered by velocity degree (highest first), pure powers first within
    /// a degree, then by descending monomial order.
    pub equations: Vec<DeterminingEquation>,
}

impl DeterminingSystem {
    pub fn nontrivial(&self) -> impl Iterator<Item = &DeterminingEquation> {
        self.equations.iter().filter(|e| e.nontrivial)
    }

    pub fn export(&self) -> Vec<EquationExport> {
        self.nontrivial()
            .map(|e| EquationExport { monomial: e.key.to_string(), equation: e.normalized.to_string() })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationExport {
    pub monomial: String,
    pub equation: String,
}

/// Divides by the rational content and fixes the sign of the leading term.
pub fn normalize_equation(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let mut num = num_bigint::BigInt::zero();
    let mut den = num_bigint::BigInt::one();
    for (_, k) in p.terms() {
        num = num.gcd(k.numer());
        den = den.lcm(k.denom());
    }
    let mut content = Rational::new(num, den);
    if p.leading().is_some_and(|(_, k)| Signed::is_negative(k)) {
        content = -content;
    }
    p.scale(&(Rational::one() / content))
}

/// Whether `a = c·b` for some nonzero rational `c`.
pub fn proportional(a: &Poly, b: &Poly) -> bool {
    match (a.leading(), b.leading()) {
        (Some((ma, ka)), Some((mb, kb))) if ma == mb => {
            let c = ka.clone() / kb.clone();
            (a - &b.scale(&c)).is_zero()
        }
        (None, None) => true,
        _ => false,
    }
}

fn key_priority(key: &Monomial) -> (std::cmp::Reverse<i64>, bool, std::cmp::Reverse<Monomial>) {
    let pure = key.factors().len() == 1;
    (std::cmp::Reverse(key.degree()), !pure, std::cmp::Reverse(key.clone()))
}

/// Coefficient vectors of an equation over the unknown partials.
fn linear_form(eq: &Poly, unknowns: &BTreeMap<Atom, usize>) -> Result<Vec<(usize, Poly)>> {
    let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
    for (mono, k) in eq.terms() {
        let partials: Vec<&(Atom, i32)> = mono.factors().iter().filter(|(a, _)| matches!(a, Atom::Partial(..))).collect();
        match partials.as_slice() {
            [(a, 1)] => {
                let (_, rest) = mono.take(a);
                out.entry(unknowns[a]).or_insert_with(Poly::zero).add_term(rest, k.clone());
            }
            _ => return Err(Error::Internal(format!("determining equation not linear in the unknowns: {eq}"))),
        }
    }
    Ok(out.into_iter().collect())
}

const RANK_SAMPLES: usize = 3;
const RANK_SEED: u64 = 0x6e6f_6574_6865_72;

/// Splits the residual template by velocity monomials under the spec's
/// rules and marks a maximal independent subset (over the field of
/// functions of the non-unknown atoms) as nontrivial.
pub fn derive_determining_system(spec: &MetricSpec<Rational>) -> Result<DeterminingSystem> {
    let template = residual_template::<Rational>()?;
    let rules = spec.rules()?;
    let split = velocity_split_poly(&template, &rules)?;
    let mut keys: Vec<Monomial> = split.keys().cloned().collect();
    keys.sort_by_key(key_priority);

    let mut unknowns: BTreeMap<Atom, usize> = BTreeMap::new();
    let mut others: BTreeSet<Atom> = BTreeSet::new();
    for atom in split.values().flat_map(Poly::atoms) {
        if matches!(atom, Atom::Partial(..)) {
            let next = unknowns.len();
            unknowns.entry(atom).or_insert(next);
        } else {
            others.insert(atom);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(RANK_SEED);
    let points: Vec<BTreeMap<Atom, Poly>> = (0..RANK_SAMPLES)
        .map(|_| {
            others
                .iter()
                .map(|a| {
                    let num: i64 = rng.gen_range(1..=97);
                    let den: i64 = rng.gen_range(1..=13);
                    (*a, Poly::ratio(num, den))
                })
                .collect()
        })
        .collect();

    let evaluate = |form: &[(usize, Poly)], point: &BTreeMap<Atom, Poly>| -> Result<Vec<Rational>> {
        let mut row = vec![Rational::zero(); unknowns.len()];
        for (col, coeff) in form {
            let v = coeff.substitute(point)?;
            row[*col] = v
                .as_constant()
                .ok_or_else(|| Error::Internal(format!("coefficient {coeff} did not evaluate to a number")))?;
        }
        Ok(row)
    };
    let generic_rank = |rows: &[Vec<Vec<Rational>>]| -> usize {
        (0..RANK_SAMPLES).map(|p| rank::<Rational>(rows.iter().map(|r| r[p].clone()).collect::<Matrix<Rational>>())).max().unwrap_or(0)
    };

    let mut kept: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut current = 0;
    let mut equations = Vec::new();
    for key in keys {
        let raw = split[&key].clone();
        let form = linear_form(&raw, &unknowns)?;
        let rows: Vec<Vec<Rational>> = points.iter().map(|pt| evaluate(&form, pt)).collect::<Result<_>>()?;
        kept.push(rows);
        let r = generic_rank(&kept);
        let nontrivial = r > current;
        if nontrivial {
            current = r;
        } else {
            kept.pop();
        }
        let normalized = normalize_equation(&raw);
        equations.push(DeterminingEquation { key, raw, normalized, nontrivial });
    }
    Ok(DeterminingSystem { equations })
}
