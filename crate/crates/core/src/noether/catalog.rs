//! The nine metric classes with their claimed component solutions,
//! generator lists and commutator tables, stored as claims to be checked.

use crate::error::Result;
use crate::geometry::MetricSpec;
use crate::symbolic::{poly, Atom, RewriteRuleSet};
use crate::{Poly, Rational, Scalar};

use super::residual::Generator;

/// `[Xᵢ, Xⱼ] = Σ cₖ Xₖ` as listed; indices are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaimedBracket {
    pub i: usize,
    pub j: usize,
    pub rhs: Vec<(usize, Rational)>,
}

impl ClaimedBracket {
    pub fn rhs_string(&self) -> String {
        combination_string(&self.rhs)
    }
}

/// `c₁X₁ + c₂X₂ …` with unit coefficients elided; `0` when empty.
pub fn combination_string(terms: &[(usize, Rational)]) -> String {
    let mut out = String::new();
    for (k, (idx, c)) in terms.iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).enumerate() {
        let neg = c.is_negative();
        let mag = if neg { -c.clone() } else { c.clone() };
        let body = if num_traits::One::is_one(&mag) { format!("X{idx}") } else { format!("{mag}*X{idx}") };
        match (k, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub label: &'static str,
    pub constraints: RewriteRuleSet<Rational>,
    /// Atoms required to be nonzero (e.g. `A''` for `A'' ≠ 0`).
    pub nonzero: Vec<Atom>,
    /// Parameterized solution: coefficients linear in `a1..a9`.
    pub component_solution: Generator<Rational>,
    pub claimed_generators: Vec<(String, Generator<Rational>)>,
    pub claimed_brackets: Vec<ClaimedBracket>,
    /// Whether the listing asserts that all unlisted brackets vanish.
    pub remaining_vanish: bool,
}

impl CaseSpec {
    pub fn spec(&self) -> MetricSpec<Rational> {
        MetricSpec::Symbolic(self.constraints.clone())
    }

    pub fn constraints_string(&self) -> String {
        let mut parts: Vec<String> = self.constraints.explicit().iter().map(|(l, r)| format!("{l} = {r}")).collect();
        parts.extend(self.nonzero.iter().map(|a| format!("{a} ≠ 0")));
        if parts.is_empty() {
            return "none".into();
        }
        parts.join(", ")
    }

    pub fn generator(&self, index: usize) -> Option<&Generator<Rational>> {
        self.claimed_generators.get(index.checked_sub(1)?).map(|(_, g)| g)
    }
}

fn p(text: &str) -> Poly {
    poly(text).expect("catalog expression parses")
}

fn rules(items: &[(&str, &str)]) -> RewriteRuleSet<Rational> {
    let parsed = items.iter().map(|(lhs, rhs)| {
        let atom = crate::symbolic::atom_by_name(lhs).expect("catalog rule atom");
        (atom, p(rhs))
    });
    RewriteRuleSet::new(parsed).expect("catalog rules are valid")
}

fn gen(c: [&str; 5], f: &str) -> Generator<Rational> {
    Generator::parse(c, f).expect("catalog generator parses")
}

fn atoms(names: &[&str]) -> Vec<Atom> {
    names.iter().map(|n| crate::symbolic::atom_by_name(n).expect("catalog atom")).collect()
}

fn brackets(items: &[(usize, usize, &[(usize, i64, i64)])]) -> Vec<ClaimedBracket> {
    items
        .iter()
        .map(|(i, j, rhs)| ClaimedBracket {
            i: *i,
            j: *j,
            rhs: rhs.iter().map(|(k, n, d)| (*k, Rational::from_ratio(*n, *d))).collect(),
        })
        .collect()
}

fn named(list: Vec<Generator<Rational>>) -> Vec<(String, Generator<Rational>)> {
    list.into_iter().enumerate().map(|(i, g)| (format!("X{}", i + 1), g)).collect()
}

const DS: [&str; 5] = ["1", "0", "0", "0", "0"];
const DT: [&str; 5] = ["0", "1", "0", "0", "0"];
const DX: [&str; 5] = ["0", "0", "1", "0", "0"];
const DY: [&str; 5] = ["0", "0", "0", "1", "0"];
const MINUS_DZ: [&str; 5] = ["0", "0", "0", "0", "-1"];
const DZ: [&str; 5] = ["0", "0", "0", "0", "1"];
const HEIS: [&str; 5] = ["0", "0", "1", "z", "0"];
const ROT: [&str; 5] = ["0", "0", "z", "1/2*z^2 - 1/2*x^2", "-x"];

pub const CASE_LABELS: [&str; 9] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"];

pub fn case_catalog() -> Vec<CaseSpec> {
    vec![
        CaseSpec {
            label: "I",
            constraints: rules(&[("A''", "0"), ("B", "A"), ("C", "A")]),
            nonzero: vec![],
            component_solution: gen(
                ["1/2*a1*s^2 + a2*s + a3", "1/2*a1*s*t + 1/2*a2*t + a4*s + a6", "a7", "a7*z + a8", "-a9"],
                "-1/2*a1*t^2 - 2*a4*t",
            ),
            claimed_generators: named(vec![
                gen(["1/2*s^2", "1/2*t*s", "0", "0", "0"], "-1/2*t^2"),
                gen(["s", "1/2*t", "0", "0", "0"], "0"),
                gen(DT, "0"),
                gen(DX, "0"),
                gen(["0", "s", "0", "0", "0"], "-2*t"),
                gen(HEIS, "0"),
                gen(DY, "0"),
                gen(MINUS_DZ, "0"),
            ]),
            claimed_brackets: brackets(&[
                (1, 2, &[(1, -1, 1)]),
                (1, 3, &[(5, 1, 2)]),
                (1, 4, &[(2, -1, 1)]),
                (2, 3, &[(1, -1, 2)]),
                (2, 4, &[(4, -1, 1)]),
                (2, 5, &[(5, 1, 1)]),
                (4, 5, &[(3, 1, 1)]),
                (6, 8, &[(7, 1, 1)]),
            ]),
            remaining_vanish: true,
        },
        CaseSpec {
            label: "II",
            constraints: rules(&[("A'", "0"), ("B'", "0"), ("C'", "0")]),
            nonzero: vec![],
            component_solution: gen(
                ["a1", "a2*s + a3", "a4*z + a5", "a4*(z^2 - x^2)/2 + a5*z + a6", "-a4*x - a7"],
                "-2*a2*t",
            ),
            claimed_generators: named(vec![
                gen(DS, "0"),
                gen(["0", "s", "0", "0", "0"], "-2*t"),
                gen(ROT, "0"),
                gen(DT, "0"),
                gen(HEIS, "0"),
                gen(DY, "0"),
                gen(MINUS_DZ, "0"),
            ]),
            claimed_brackets: brackets(&[
                (1, 2, &[(4, 1, 1)]),
                (5, 3, &[(7, 1, 1)]),
                (3, 7, &[(5, 1, 1)]),
                (5, 7, &[(6, 1, 1)]),
            ]),
            remaining_vanish: true,
        },
        CaseSpec {
            label: "III",
            constraints: rules(&[("A'", "0"), ("B'", "0"), ("C''", "0")]),
            nonzero: vec![],
            component_solution: gen(
                ["a1*s + a2", "1/2*a1*t + a3", "1/2*a1*x + a4", "1/2*a1*y + a4*z + a5", "-a6"],
                "0",
            ),
            claimed_generators: named(vec![
                gen(["s", "1/2*t", "1/2*x", "1/2*y", "0"], "0"),
                gen(DS, "0"),
                gen(DT, "0"),
                gen(HEIS, "0"),
                gen(DY, "0"),
                gen(MINUS_DZ, "0"),
            ]),
            claimed_brackets: vec![],
            remaining_vanish: false,
        },
        CaseSpec {
            label: "IV",
            constraints: rules(&[("A'", "0"), ("C'", "0")]),
            nonzero: atoms(&["B'"]),
            component_solution: gen(
                ["a1", "0", "a2*z + a3", "a2*(z^2 - x^2)/2 + a3*z + a4", "-a3*x - a5"],
                "0",
            ),
            claimed_generators: named(vec![
                gen(DS, "0"),
                gen(ROT, "0"),
                gen(HEIS, "0"),
                gen(DY, "0"),
                gen(MINUS_DZ, "0"),
            ]),
            claimed_brackets: brackets(&[(2, 5, &[(3, 1, 1)]), (3, 2, &[(5, 1, 1)]), (3, 5, &[(4, 1, 1)])]),
            remaining_vanish: true,
        },
        CaseSpec {
            label: "V",
            constraints: rules(&[("B''", "0"), ("C''", "0")]),
            nonzero: atoms(&["A''"]),
            component_solution: gen(["a1*s + a2", "1/2*a4*t + a3", "0", "a4", "-a5"], "0"),
            claimed_generators: named(vec![
                gen(["s", "1/2*t", "0", "0", "0"], "0"),
                gen(DS, "0"),
                gen(DT, "0"),
                gen(DY, "0"),
                gen(MINUS_DZ, "0"),
            ]),
            claimed_brackets: brackets(&[(2, 1, &[(2, 1, 1)]), (3, 1, &[(3, -1, 2)])]),
            remaining_vanish: true,
        },
        CaseSpec {
            label: "VI",
            constraints: rules(&[("A''", "0"), ("B'", "0")]),
            nonzero: vec![],
            component_solution: gen(["a1*s + a2", "a1*(t/2 + 1)", "0", "a3*y + a4", "a3*z - a5"], "0"),
            claimed_generators: named(vec![
                gen(["s", "t/2 + 1", "0", "0", "0"], "0"),
                gen(DS, "0"),
                gen(["0", "0", "0", "y", "z"], "0"),
                gen(DY, "0"),
                gen(MINUS_DZ, "0"),
            ]),
            claimed_brackets: brackets(&[(2, 1, &[(2, 1, 1)]), (4, 3, &[(4, 1, 1)]), (5, 3, &[(5, 1, 1)])]),
            remaining_vanish: true,
        },
        CaseSpec {
            label: "VII",
            constraints: rules(&[("A'", "0"), ("B'", "0")]),
            nonzero: atoms(&["C''"]),
            component_solution: gen(["a1", "0", "a2", "a2*z + a3", "-a4"], "0"),
            claimed_generators: named(vec![gen(DS, "0"), gen(HEIS, "0"), gen(DY, "0"), gen(MINUS_DZ, "0")]),
            claimed_brackets: brackets(&[(2, 4, &[(3, 1, 1)])]),
            remaining_vanish: true,
        },
        CaseSpec {
            label: "VIII",
            constraints: rules(&[("B'", "0"), ("C''", "0")]),
            nonzero: atoms(&["A''"]),
            component_solution: gen(["a1", "a2", "0", "a3", "-a4"], "0"),
            claimed_generators: named(vec![gen(DS, "0"), gen(DT, "0"), gen(DY, "0"), gen(MINUS_DZ, "0")]),
            claimed_brackets: vec![],
            remaining_vanish: true,
        },
        CaseSpec {
            label: "IX",
            constraints: rules(&[("C''", "0")]),
            nonzero: atoms(&["A''"]),
            component_solution: gen(["a1", "0", "0", "a2", "-a3"], "0"),
            claimed_generators: named(vec![gen(DS, "0"), gen(DY, "0"), gen(DZ, "0")]),
            claimed_brackets: vec![],
            remaining_vanish: true,
        },
    ]
}

/// Looks up a case by its roman numeral (case-insensitive).
pub fn find_case(label: &str) -> Option<CaseSpec> {
    let wanted = label.trim().to_ascii_uppercase();
    case_catalog().into_iter().find(|c| c.label == wanted)
}

/// Entries of the Killing form (1-based, `i ≤ j`) claimed nonzero, with all
/// others claimed zero. Only Case I carries such a claim.
pub fn claimed_killing_support(label: &str) -> Option<Vec<(usize, usize)>> {
    (label == "I").then(|| vec![(1, 4), (2, 2)])
}

/// Checks the case hypotheses against a concrete rule set (typically a
/// numeric metric): each constraint must reduce to an identity and each
/// nonzero condition must survive. Returns the violated conditions.
pub fn hypothesis_violations(case: &CaseSpec, concrete: &RewriteRuleSet<Rational>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (lhs, rhs) in case.constraints.explicit() {
        let diff = &Poly::atom(*lhs) - rhs;
        if !concrete.is_zero(&diff)? {
            out.push(format!("{lhs} = {rhs} does not hold"));
        }
    }
    for atom in &case.nonzero {
        if concrete.is_zero(&Poly::atom(*atom))? {
            out.push(format!("{atom} ≠ 0 does not hold"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shape() {
        let cat = case_catalog();
        assert_eq!(cat.len(), 9);
        let counts: Vec<usize> = cat.iter().map(|c| c.claimed_generators.len()).collect();
        assert_eq!(counts, vec![8, 7, 6, 5, 5, 5, 4, 4, 3]);
        let brackets: Vec<usize> = cat.iter().map(|c| c.claimed_brackets.len()).collect();
        assert_eq!(brackets, vec![8, 4, 0, 3, 2, 3, 1, 0, 0]);
        assert_eq!(cat[8].claimed_generators[2].1.to_string(), "∂z");
        assert_eq!(cat[0].constraints_string(), "A''(t) = 0, B(t) = A(t), C(t) = A(t)");
        assert_eq!(cat[7].constraints_string(), "B'(t) = 0, C''(t) = 0, A''(t) ≠ 0");
        assert!(find_case("viii").is_some());
        assert!(find_case("X").is_none());
    }

    #[test]
    fn combination_strings() {
        let half = Rational::from_ratio(1, 2);
        assert_eq!(combination_string(&[(5, half.clone())]), "1/2*X5");
        assert_eq!(combination_string(&[(1, -half), (2, Rational::from_int(1))]), "-1/2*X1 + X2");
        assert_eq!(combination_string(&[]), "0");
    }

    #[test]
    fn numeric_hypotheses() {
        let viii = find_case("VIII").unwrap();
        let a_linear = crate::geometry::NumericMetric::<Rational>::parse("A = t").unwrap().rules().unwrap();
        assert_eq!(hypothesis_violations(&viii, &a_linear).unwrap(), vec!["A''(t) ≠ 0 does not hold"]);
        let ok = crate::geometry::NumericMetric::<Rational>::parse("A = t^2, C = 2*t + 1").unwrap().rules().unwrap();
        assert!(hypothesis_violations(&viii, &ok).unwrap().is_empty());
    }
}
