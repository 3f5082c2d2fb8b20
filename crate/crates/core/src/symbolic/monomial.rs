use std::cmp::Ordering;
use std::fmt;

use super::atom::Atom;

/// A product of atom powers, kept sorted by atom with no zero exponents.
///
/// Exponents may be negative (Laurent monomials); negative powers arise from
/// the inverse metric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Atom, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(atom: Atom) -> Self {
        Monomial::power(atom, 1)
    }

    pub fn power(atom: Atom, exp: i32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        Monomial { factors: vec![(atom, exp)] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, i32)>) -> Self {
        factors
            .into_iter()
            .fold(Monomial::one(), |m, (a, e)| m.mul(&Monomial::power(a, e)))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, i32)] {
        &self.factors
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| i64::from(*e)).sum()
    }

    pub fn exponent(&self, atom: &Atom) -> i32 {
        self.factors
            .binary_search_by(|(a, _)| a.cmp(atom))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.factors.iter().map(|(a, _)| a)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    if ea + eb != 0 {
                        out.push((a, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    pub fn pow(&self, exp: i32) -> Monomial {
        if exp == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self.factors.iter().map(|&(a, e)| (a, e * exp)).collect(),
        }
    }

    /// Removes `atom` entirely, returning its exponent and the cofactor.
    pub fn take(&self, atom: &Atom) -> (i32, Monomial) {
        let exp = self.exponent(atom);
        let rest = self.factors.iter().filter(|(a, _)| a != atom).copied().collect();
        (exp, Monomial { factors: rest })
    }

    /// Splits into (factors satisfying `pred`, the rest).
    pub fn partition(&self, pred: impl Fn(&Atom) -> bool) -> (Monomial, Monomial) {
        let (yes, no): (Vec<_>, Vec<_>) = self.factors.iter().partition(|(a, _)| pred(a));
        (Monomial { factors: yes }, Monomial { factors: no })
    }
}

/// Graded lexicographic order: total degree first, then the earliest atom
/// (in atom order) whose exponents differ; the larger exponent ranks higher.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.factors.get(i), other.factors.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some((_, ea)), None) => return ea.cmp(&0),
                    (None, Some((_, eb))) => return 0.cmp(eb),
                    (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                        Ordering::Less => return ea.cmp(&0),
                        Ordering::Greater => return 0.cmp(eb),
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (atom, exp)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match exp {
                1 => write!(f, "{atom}")?,
                e if *e < 0 => write!(f, "{atom}^({e})")?,
                e => write!(f, "{atom}^{e}")?,
            }
        }
        Ok(())
    }
}
