//! Constraint rewrite rules on metric-function atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::atom::{Atom, Coord};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Highest derivative order generated by the derivative closure.
pub const MAX_DERIVATIVE_ORDER: u8 = 8;

/// A terminating set of atom rewrites, closed under `∂/∂t`.
///
/// A rule `F⁽ᵏ⁾ ↦ R` implies `F⁽ᵏ⁺ʲ⁾ ↦ ∂ᵗʲR`; those implied rules are
/// generated at construction unless an explicit rule for the same atom
/// exists.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRuleSet<K: Scalar> {
    explicit: Vec<(Atom, Poly<K>)>,
    rules: BTreeMap<Atom, Poly<K>>,
}

impl<K: Scalar> Default for RewriteRuleSet<K> {
    fn default() -> Self {
        RewriteRuleSet { explicit: Vec::new(), rules: BTreeMap::new() }
    }
}

impl<K: Scalar> RewriteRuleSet<K> {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(rules: impl IntoIterator<Item = (Atom, Poly<K>)>) -> Result<Self> {
        let explicit: Vec<(Atom, Poly<K>)> = rules.into_iter().collect();
        let mut map = BTreeMap::new();
        for (lhs, rhs) in &explicit {
            match lhs {
                Atom::Func(_, 0) if rhs.is_zero() => {
                    return Err(Error::InvalidRule(format!("{lhs} ↦ 0 makes the metric degenerate")));
                }
                Atom::Func(..) | Atom::Param(..) => {}
                _ => return Err(Error::InvalidRule(format!("left-hand side {lhs} is not a function atom or parameter"))),
            }
            if let Some(a) = rhs.contains(|a| a.is_jet()) {
                return Err(Error::InvalidRule(format!("replacement for {lhs} contains jet variable {a}")));
            }
            if let Some(a) = rhs.contains(|a| matches!(a, Atom::Coord(c) if *c != Coord::T)) {
                return Err(Error::InvalidRule(format!("replacement for {lhs} depends on {a}")));
            }
            if map.insert(*lhs, rhs.clone()).is_some() {
                return Err(Error::InvalidRule(format!("duplicate rule for {lhs}")));
            }
        }
        for (lhs, rhs) in &explicit {
            if let Atom::Func(f, k) = *lhs {
                let mut current = rhs.clone();
                for order in k + 1..=MAX_DERIVATIVE_ORDER {
                    current = current.diff(&Atom::T);
                    map.entry(Atom::Func(f, order)).or_insert_with(|| current.clone());
                }
            }
        }
        let set = RewriteRuleSet { explicit, rules: map };
        set.check_acyclic()?;
        Ok(set)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// The rules as given, before derivative closure.
    pub fn explicit(&self) -> &[(Atom, Poly<K>)] {
        &self.explicit
    }

    pub fn get(&self, atom: &Atom) -> Option<&Poly<K>> {
        self.rules.get(atom)
    }

    /// Rules from `self` plus those of `other` for atoms `self` leaves free.
    pub fn extended(&self, other: &RewriteRuleSet<K>) -> Result<Self> {
        let mut all = self.explicit.clone();
        for (lhs, rhs) in &other.explicit {
            if !self.rules.contains_key(lhs) {
                all.push((*lhs, rhs.clone()));
            }
        }
        RewriteRuleSet::new(all)
    }

    fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Visiting,
            Done,
        }
        fn visit<K: Scalar>(
            atom: &Atom,
            rules: &BTreeMap<Atom, Poly<K>>,
            marks: &mut BTreeMap<Atom, Mark>,
        ) -> Result<()> {
            match marks.get(atom) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Visiting) => return Err(Error::CyclicRules(atom.to_string())),
                None => {}
            }
            if let Some(rhs) = rules.get(atom) {
                marks.insert(*atom, Mark::Visiting);
                for next in rhs.atoms() {
                    // Higher derivatives beyond the closure are leaves.
                    visit(&next, rules, marks)?;
                }
            }
            marks.insert(*atom, Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for atom in self.rules.keys() {
            visit(atom, &self.rules, &mut marks)?;
        }
        Ok(())
    }

    /// Rewrites to fixpoint. Terminates because the rule graph is acyclic.
    pub fn apply(&self, p: &Poly<K>) -> Result<Poly<K>> {
        if self.rules.is_empty() {
            return Ok(p.clone());
        }
        let mut current = p.clone();
        loop {
            let atoms = current.atoms();
            let beyond = atoms.iter().find(|a| match a {
                Atom::Func(f, k) => *k > MAX_DERIVATIVE_ORDER && self.rules.contains_key(&Atom::Func(*f, MAX_DERIVATIVE_ORDER)),
                _ => false,
            });
            if let Some(a) = beyond {
                return Err(Error::Internal(format!("{a} exceeds the derivative closure of the rules")));
            }
            let hits: BTreeSet<Atom> = atoms.into_iter().filter(|a| self.rules.contains_key(a)).collect();
            if hits.is_empty() {
                return Ok(current);
            }
            let bindings: BTreeMap<Atom, Poly<K>> = hits.iter().map(|a| (*a, self.rules[a].clone())).collect();
            current = current.substitute(&bindings)?;
        }
    }

    /// Zero test modulo the rules. Negative powers of rewritten function atoms
    /// are cleared first; metric functions are nonvanishing, so this does not
    /// change whether the expression is zero.
    pub fn is_zero(&self, p: &Poly<K>) -> Result<bool> {
        let clearing = p.denominator_clearing(|a| a.is_function() && self.rules.contains_key(a));
        Ok(self.apply(&p.mul_monomial(&clearing))?.is_zero())
    }

    /// `apply` when possible; otherwise the denominator-cleared rewrite. The
    /// result is zero exactly when `p` vanishes under the rules.
    pub fn reduce(&self, p: &Poly<K>) -> Result<Poly<K>> {
        match self.apply(p) {
            Ok(r) => Ok(r),
            Err(Error::NonMonomialInverse(_)) => {
                let clearing = p.denominator_clearing(|a| a.is_function() && self.rules.contains_key(a));
                self.apply(&p.mul_monomial(&clearing))
            }
            Err(e) => Err(e),
        }
    }
}

impl<K: Scalar> fmt::Display for RewriteRuleSet<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lhs, rhs)) in self.explicit.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{lhs} = {rhs}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::atom::{Dir, Func};
    use crate::Rational;

    type P = Poly<Rational>;

    fn fa(f: Func, k: u8) -> Atom {
        Atom::Func(f, k)
    }

    #[test]
    fn derivative_closure_of_zero_rule() {
        let rules = RewriteRuleSet::new([(fa(Func::A, 2), P::zero())]).unwrap();
        assert_eq!(rules.get(&fa(Func::A, 3)), Some(&P::zero()));
        assert_eq!(rules.get(&fa(Func::A, 5)), Some(&P::zero()));
        assert_eq!(rules.get(&fa(Func::A, 1)), None);
    }

    #[test]
    fn identification_rules_chain_to_fixpoint() {
        let rules = RewriteRuleSet::new([
            (fa(Func::A, 2), P::zero()),
            (fa(Func::B, 0), P::atom(fa(Func::A, 0))),
        ])
        .unwrap();
        let e = P::atom(fa(Func::B, 2)) + P::atom(fa(Func::B, 1));
        assert_eq!(rules.apply(&e).unwrap(), P::atom(fa(Func::A, 1)));
        let diff = (P::atom(fa(Func::A, 0)) - P::atom(fa(Func::B, 0))) * P::atom(Atom::Vel(Dir::X));
        assert!(rules.apply(&diff).unwrap().is_zero());
    }

    #[test]
    fn cycles_are_rejected() {
        let r = RewriteRuleSet::new([
            (fa(Func::A, 0), P::atom(fa(Func::B, 0))),
            (fa(Func::B, 0), P::atom(fa(Func::A, 0))),
        ]);
        assert!(matches!(r, Err(Error::CyclicRules(_))));
        let r = RewriteRuleSet::new([(fa(Func::A, 1), P::atom(fa(Func::A, 1)) * P::atom(Atom::T))]);
        assert!(matches!(r, Err(Error::CyclicRules(_))));
    }

    #[test]
    fn degenerate_and_malformed_rules() {
        assert!(RewriteRuleSet::new([(fa(Func::A, 0), P::zero())]).is_err());
        assert!(RewriteRuleSet::new([(Atom::X, P::zero())]).is_err());
        assert!(RewriteRuleSet::new([(fa(Func::A, 0), P::atom(Atom::X))]).is_err());
    }

    #[test]
    fn zero_test_clears_denominators() {
        let rules = RewriteRuleSet::new([(fa(Func::A, 0), P::atom(Atom::T) + P::one())]).unwrap();
        let a = P::atom(fa(Func::A, 0));
        let e = a.pow(-2).unwrap() * (a.clone() - P::atom(Atom::T) - P::one());
        assert!(rules.apply(&e).is_err());
        assert!(rules.is_zero(&e).unwrap());
        assert!(!rules.is_zero(&a.pow(-1).unwrap()).unwrap());
    }
}
