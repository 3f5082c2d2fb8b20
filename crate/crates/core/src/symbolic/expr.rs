//! Expression trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::atom::{Atom, AtomDerivative, Dir};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An unsimplified expression. [`Expr::to_poly`] gives its canonical form.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<K> {
    Num(K),
    Atom(Atom),
    Add(Vec<Expr<K>>),
    Mul(Vec<Expr<K>>),
    Pow(Box<Expr<K>>, i32),
}

impl<K: Scalar> Expr<K> {
    pub fn int(n: i64) -> Self {
        Expr::Num(K::from_int(n))
    }

    pub fn atom(a: Atom) -> Self {
        Expr::Atom(a)
    }

    pub fn pow(self, exp: i32) -> Self {
        Expr::Pow(Box::new(self), exp)
    }

    pub fn neg(self) -> Self {
        Expr::Mul(vec![Expr::int(-1), self])
    }

    /// Expands into canonical form. Negative powers are accepted only on
    /// single terms built from metric-function atoms.
    pub fn to_poly(&self) -> Result<Poly<K>> {
        match self {
            Expr::Num(k) => Ok(Poly::constant(k.clone())),
            Expr::Atom(a) => Ok(Poly::atom(*a)),
            Expr::Add(items) => items.iter().map(Expr::to_poly).sum(),
            Expr::Mul(items) => items.iter().try_fold(Poly::one(), |acc, e| Ok(&acc * &e.to_poly()?)),
            Expr::Pow(base, exp) => {
                let b = base.to_poly()?;
                if *exp < 0 {
                    if let Some(a) = b.contains(|a| !a.is_function()) {
                        return Err(if b.len() > 1 {
                            Error::NonMonomialInverse(b.to_string())
                        } else {
                            Error::NegativePower(a.to_string())
                        });
                    }
                }
                b.pow(*exp)
            }
        }
    }

    pub fn from_poly(p: &Poly<K>) -> Self {
        let terms: Vec<Expr<K>> = p
            .terms()
            .rev()
            .map(|(mono, k)| {
                let mut factors = vec![Expr::Num(k.clone())];
                factors.extend(mono.factors().iter().map(|&(a, e)| match e {
                    1 => Expr::Atom(a),
                    e => Expr::Atom(a).pow(e),
                }));
                Expr::Mul(factors)
            })
            .collect();
        match terms.len() {
            0 => Expr::int(0),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    /// Tree-level partial derivative (sum, product and power rules).
    pub fn diff(&self, sym: &Atom) -> Expr<K> {
        match self {
            Expr::Num(_) => Expr::int(0),
            Expr::Atom(a) => match a.derivative(sym) {
                AtomDerivative::Zero => Expr::int(0),
                AtomDerivative::One => Expr::int(1),
                AtomDerivative::Atom(next) => Expr::Atom(next),
            },
            Expr::Add(items) => Expr::Add(items.iter().map(|e| e.diff(sym)).collect()),
            Expr::Mul(items) => Expr::Add(
                (0..items.len())
                    .map(|i| {
                        let mut factors = items.clone();
                        factors[i] = items[i].diff(sym);
                        Expr::Mul(factors)
                    })
                    .collect(),
            ),
            Expr::Pow(base, exp) => Expr::Mul(vec![
                Expr::int(i64::from(*exp)),
                (**base).clone().pow(exp - 1),
                base.diff(sym),
            ]),
        }
    }

    pub fn contains(&self, pred: &dyn Fn(&Atom) -> bool) -> Option<Atom> {
        match self {
            Expr::Num(_) => None,
            Expr::Atom(a) => pred(a).then_some(*a),
            Expr::Add(items) | Expr::Mul(items) => items.iter().find_map(|e| e.contains(pred)),
            Expr::Pow(base, _) => base.contains(pred),
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Expr::Num(_) => {}
            Expr::Atom(a) => {
                out.insert(*a);
            }
            Expr::Add(items) | Expr::Mul(items) => items.iter().for_each(|e| e.collect_atoms(out)),
            Expr::Pow(base, _) => base.collect_atoms(out),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    /// First-order total derivative on the tree.
    pub fn total_derivative(&self) -> Result<Expr<K>> {
        if let Some(a) = self.contains(&Atom::is_acceleration) {
            return Err(Error::AccelerationInJet(a.to_string()));
        }
        let mut parts = vec![self.diff(&Atom::S)];
        for d in Dir::ALL {
            parts.push(Expr::Mul(vec![Expr::Atom(Atom::Vel(d)), self.diff(&Atom::Coord(d.coord()))]));
        }
        Ok(Expr::Add(parts))
    }

    /// Simultaneous substitution. Bindings whose replacements mention bound
    /// atoms in a cycle are rejected.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr<K>>) -> Result<Expr<K>> {
        check_binding_cycles(bindings)?;
        Ok(self.substitute_unchecked(bindings))
    }

    fn substitute_unchecked(&self, bindings: &BTreeMap<Atom, Expr<K>>) -> Expr<K> {
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Atom(a) => bindings.get(a).cloned().unwrap_or_else(|| self.clone()),
            Expr::Add(items) => Expr::Add(items.iter().map(|e| e.substitute_unchecked(bindings)).collect()),
            Expr::Mul(items) => Expr::Mul(items.iter().map(|e| e.substitute_unchecked(bindings)).collect()),
            Expr::Pow(base, exp) => base.substitute_unchecked(bindings).pow(*exp),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(items) if items.len() > 1 => 1,
            Expr::Mul(items) if items.len() > 1 => 2,
            Expr::Num(k) if k.is_negative() || !is_integer_text(k) => 2,
            Expr::Add(items) | Expr::Mul(items) => items.first().map_or(4, Expr::precedence),
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn is_integer_text<K: Scalar>(k: &K) -> bool {
    !k.to_string().contains('/')
}

fn check_binding_cycles<K: Scalar>(bindings: &BTreeMap<Atom, Expr<K>>) -> Result<()> {
    let edges: BTreeMap<Atom, Vec<Atom>> = bindings
        .iter()
        .map(|(a, e)| (*a, e.atoms().into_iter().filter(|b| bindings.contains_key(b)).collect()))
        .collect();
    fn dfs(a: Atom, edges: &BTreeMap<Atom, Vec<Atom>>, stack: &mut Vec<Atom>, done: &mut BTreeSet<Atom>) -> Result<()> {
        if done.contains(&a) {
            return Ok(());
        }
        if stack.contains(&a) {
            return Err(Error::CyclicBindings(a.to_string()));
        }
        stack.push(a);
        for &b in &edges[&a] {
            dfs(b, edges, stack, done)?;
        }
        stack.pop();
        done.insert(a);
        Ok(())
    }
    let mut done = BTreeSet::new();
    for &a in edges.keys() {
        dfs(a, &edges, &mut Vec::new(), &mut done)?;
    }
    Ok(())
}

impl<K: Scalar> fmt::Display for Expr<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(k) => write!(f, "{k}"),
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Add(items) if items.is_empty() => f.write_str("0"),
            Expr::Mul(items) if items.is_empty() => f.write_str("1"),
            Expr::Add(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    e.fmt_child(f, 2)?;
                }
                Ok(())
            }
            Expr::Mul(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    e.fmt_child(f, 3)?;
                }
                Ok(())
            }
            Expr::Pow(base, exp) => {
                base.fmt_child(f, 4)?;
                if *exp < 0 {
                    write!(f, "^({exp})")
                } else {
                    write!(f, "^{exp}")
                }
            }
        }
    }
}
