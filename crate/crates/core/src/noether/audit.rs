use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use super::catalog::{case_catalog, combination_string, CaseSpec, ClaimedBracket};
use super::residual::{noether_residual, residual_paths_agree, residual_template, Generator};
use crate::error::{Error, Result};
use crate::geometry::MetricSpec;
use crate::liealg::{commutator, express};
use crate::symbolic::{velocity_split_poly, Atom, Func, Monomial, Param, RewriteRuleSet};
use crate::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    /// Zero iff verified.
    pub residual: Poly,
    /// Velocity monomials of the residual with their coefficients.
    pub offending: Vec<(Monomial, Poly)>,
}

impl Verdict {
    pub fn verified(&self) -> bool {
        self.status == Status::Verified
    }
}

/// Checks the Noether condition for `g` under an arbitrary metric spec.
pub fn verify_under(g: &Generator<Rational>, spec: &MetricSpec<Rational>) -> Result<Verdict> {
    let residual = noether_residual(g, spec)?;
    if spec.rules()?.is_zero(&residual)? {
        return Ok(Verdict { status: Status::Verified, residual: Poly::zero(), offending: Vec::new() });
    }
    let offending = velocity_split_poly(&residual, &RewriteRuleSet::empty())?.into_iter().collect();
    Ok(Verdict { status: Status::Refuted, residual, offending })
}

pub fn verify_generator(g: &Generator<Rational>, case: &CaseSpec) -> Result<Verdict> {
    verify_under(g, &case.spec())
}

/// One generator per parameter `aᵢ` of the component solution, from
/// `∂/∂aᵢ` of every coefficient and of the gauge. Zero generators are
/// dropped.
pub fn basis_from_solution(case: &CaseSpec) -> Result<Vec<(u8, Generator<Rational>)>> {
    let sol = &case.component_solution;
    let all: Vec<&Poly> = sol.coeffs.iter().chain(std::iter::once(&sol.gauge)).collect();
    let params: BTreeSet<u8> = all
        .iter()
        .flat_map(|p| p.atoms())
        .filter_map(|a| match a {
            Atom::Param(Param::Alpha(i)) => Some(i),
            _ => None,
        })
        .collect();
    let is_param = |a: &Atom| matches!(a, Atom::Param(Param::Alpha(_)));
    for p in &all {
        for (mono, _) in p.terms() {
            let degree: i32 = mono.factors().iter().filter(|(a, _)| is_param(a)).map(|(_, e)| *e).sum();
            if degree != 1 {
                return Err(Error::NonlinearSolution(p.to_string()));
            }
        }
    }
    let mut out = Vec::new();
    for i in params {
        let a = Atom::Param(Param::Alpha(i));
        let d = |p: &Poly| p.diff(&a);
        let g = Generator { coeffs: sol.coeffs.clone().map(|c| d(&c)), gauge: d(&sol.gauge) };
        if !g.is_zero() {
            out.push((i, g));
        }
    }
    Ok(out)
}

/// Extra constraints tried when explaining a refutation.
fn diagnostic_candidates() -> Vec<(Atom, Poly)> {
    let mut out = Vec::new();
    let lower = |f: Func| match f {
        Func::A => Param::LowerA,
        _ => Param::LowerB,
    };
    for f in Func::ALL {
        out.push((Atom::Func(f, 1), Poly::zero()));
        out.push((Atom::Func(f, 2), Poly::zero()));
        out.push((Atom::func(f), &Poly::atom(Atom::Param(lower(f))) * &Poly::atom(Atom::T)));
    }
    out.push((Atom::func(Func::B), Poly::atom(Atom::func(Func::A))));
    out.push((Atom::func(Func::C), Poly::atom(Atom::func(Func::A))));
    out.push((Atom::func(Func::C), Poly::atom(Atom::func(Func::B))));
    out
}

/// Alternates the case rules and the extra rules until nothing changes.
fn reduce_jointly(case: &RewriteRuleSet<Rational>, extra: &RewriteRuleSet<Rational>, p: &Poly) -> Result<Poly> {
    let mut current = case.reduce(p)?;
    for _ in 0..16 {
        let next = case.reduce(&extra.reduce(&current)?)?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
    Ok(current)
}

/// An additional hypothesis under which a refuted generator verifies.
#[derive(Clone, Debug, PartialEq)]
pub struct Repair {
    pub constraints: Vec<String>,
    /// Nonzero conditions of the case that the repair would violate.
    pub conflicts: Vec<String>,
}

/// Searches single, then paired, extra constraints that make the residual
/// vanish.
pub fn explain_refutation(g: &Generator<Rational>, case: &CaseSpec) -> Result<Vec<Repair>> {
    let residual = noether_residual(g, &case.spec())?;
    let candidates: Vec<(Atom, Poly)> =
        diagnostic_candidates().into_iter().filter(|(lhs, _)| case.constraints.get(lhs).is_none()).collect();
    let describe = |set: &[&(Atom, Poly)]| set.iter().map(|(l, r)| format!("{l} = {r}")).collect::<Vec<_>>();
    let attempt = |set: &[&(Atom, Poly)]| -> Result<Option<Repair>> {
        let extra = match RewriteRuleSet::new(set.iter().map(|(l, r)| (*l, r.clone()))) {
            Ok(r) => r,
            Err(_) => return Ok(None),
        };
        if !reduce_jointly(&case.constraints, &extra, &residual)?.is_zero() {
            return Ok(None);
        }
        let mut conflicts = Vec::new();
        for atom in &case.nonzero {
            if reduce_jointly(&case.constraints, &extra, &Poly::atom(*atom))?.is_zero() {
                conflicts.push(format!("{atom} ≠ 0"));
            }
        }
        Ok(Some(Repair { constraints: describe(set), conflicts }))
    };
    let mut found = Vec::new();
    for c in &candidates {
        if let Some(r) = attempt(&[c])? {
            found.push(r);
        }
    }
    if found.iter().any(|r| r.conflicts.is_empty()) {
        return Ok(found);
    }
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            if a.0 == b.0 || (a.0.is_function() && b.0.is_function() && same_function(&a.0, &b.0)) {
                continue;
            }
            if let Some(r) = attempt(&[a, b])? {
                found.push(r);
            }
        }
    }
    Ok(found)
}

fn same_function(a: &Atom, b: &Atom) -> bool {
    matches!((a, b), (Atom::Func(f, _), Atom::Func(g, _)) if f == g)
}

fn repair_text(repairs: &[Repair]) -> String {
    if repairs.is_empty() {
        return "no extra constraint from the diagnostic set makes it verify".into();
    }
    let mut out = String::new();
    let usable: Vec<&Repair> = repairs.iter().filter(|r| r.conflicts.is_empty()).collect();
    if usable.is_empty() {
        out.push_str("it verifies only under ");
        let opts: Vec<String> = repairs
            .iter()
            .map(|r| format!("{} (contradicts {})", r.constraints.join(" and "), r.conflicts.join(", ")))
            .collect();
        out.push_str(&opts.join("; or "));
    } else {
        out.push_str("it verifies under the extra constraint ");
        let opts: Vec<String> = usable.iter().map(|r| r.constraints.join(" and ")).collect();
        out.push_str(&opts.join(", or "));
    }
    out
}

/// Listed bracket checked against recomputation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub i: usize,
    pub j: usize,
    pub claimed: String,
    pub computed: String,
    #[serde(rename = "match")]
    pub matches: bool,
    /// False for brackets implied to vanish by omission.
    pub listed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorReport {
    pub name: String,
    pub field: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditSummary {
    pub generators_verified: usize,
    pub generators_total: usize,
    pub brackets_matched: usize,
    pub brackets_listed: usize,
    pub implicit_zero_matched: usize,
    pub implicit_zero_total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub case: String,
    pub constraints: String,
    pub generators: Vec<GeneratorReport>,
    pub brackets: Vec<BracketReport>,
    pub findings: Vec<String>,
    pub summary: AuditSummary,
}

/// A listed generator replaced by a component-solution direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    /// 1-based index into the listed generators.
    pub index: usize,
    pub parameter: u8,
    pub replacement: Generator<Rational>,
    pub matched_before: usize,
    pub matched_after: usize,
}

fn check_bracket(list: &[Generator<Rational>], i: usize, j: usize, rhs: &[(usize, Rational)]) -> (bool, String) {
    let (Some(x), Some(y)) = (list.get(i.wrapping_sub(1)), list.get(j.wrapping_sub(1))) else {
        return (false, "index out of range".into());
    };
    let b = commutator(x, y);
    let mut claimed = Generator::default();
    for (k, c) in rhs {
        match list.get(k.wrapping_sub(1)) {
            Some(g) => claimed = claimed.add(&g.scale(c)),
            None => return (false, "index out of range".into()),
        }
    }
    let diff = b.sub(&claimed);
    let field_ok = diff.is_zero_field();
    let gauge_ok = diff.gauge.is_zero() || diff.gauge.as_constant().is_some();
    let mut computed = match express(list, &b) {
        Some(c) => combination_string(&c.into_iter().enumerate().map(|(k, v)| (k + 1, v)).collect::<Vec<_>>()),
        None => b.field_string(),
    };
    if field_ok && !gauge_ok {
        let _ = write!(computed, " (gauge differs by {})", diff.gauge);
    }
    (field_ok && gauge_ok, computed)
}

fn matched_count(list: &[Generator<Rational>], claims: &[ClaimedBracket]) -> usize {
    claims.iter().filter(|c| check_bracket(list, c.i, c.j, &c.rhs).0).count()
}

fn fields_in_span(basis: &[Generator<Rational>], g: &Generator<Rational>) -> bool {
    express(basis, g).is_some()
}

/// Listed generators with typo corrections applied, plus the corrections.
/// A refuted listed generator that lies outside the component solution is
/// replaced by a verified, unlisted solution direction when that strictly
/// increases the number of listed brackets that hold.
pub fn effective_generators(case: &CaseSpec) -> Result<(Vec<Generator<Rational>>, Vec<Correction>)> {
    let mut list: Vec<Generator<Rational>> = case.claimed_generators.iter().map(|(_, g)| g.clone()).collect();
    let basis = basis_from_solution(case)?;
    let basis_fields: Vec<Generator<Rational>> = basis.iter().map(|(_, g)| g.clone()).collect();
    let mut corrections = Vec::new();
    for k in 0..list.len() {
        if verify_generator(&list[k], case)?.verified() || fields_in_span(&basis_fields, &list[k]) {
            continue;
        }
        let before = matched_count(&list, &case.claimed_brackets);
        let mut best: Option<(usize, u8, Generator<Rational>)> = None;
        for (param, cand) in &basis {
            if fields_in_span(&list, cand) || !verify_generator(cand, case)?.verified() {
                continue;
            }
            let mut trial = list.clone();
            trial[k] = cand.clone();
            let after = matched_count(&trial, &case.claimed_brackets);
            if after > before && best.as_ref().map_or(true, |(b, _, _)| after > *b) {
                best = Some((after, *param, cand.clone()));
            }
        }
        if let Some((after, parameter, replacement)) = best {
            list[k] = replacement.clone();
            corrections.push(Correction { index: k + 1, parameter, replacement, matched_before: before, matched_after: after });
        }
    }
    Ok((list, corrections))
}

/// Notes on notation that apply to every case.
pub fn convention_notes() -> Vec<String> {
    vec![
        "convention: the t-component of the prolongation is taken as D_s τ − ṫ·D_s μ (the velocity ṫ, not the coordinate t)".into(),
        "convention: the ∂s coefficient is μ throughout, so the Noether condition is X¹L + L·D_s μ = D_s f".into(),
    ]
}

pub fn audit_case(case: &CaseSpec) -> Result<AuditReport> {
    let mut findings = Vec::new();
    let mut generators = Vec::new();
    let template = residual_template::<Rational>()?;
    for (name, g) in &case.claimed_generators {
        if !residual_paths_agree(&template, g, &case.constraints)? {
            return Err(Error::Internal(format!("residual code paths disagree for {name} = {g}")));
        }
        let v = verify_generator(g, case)?;
        if !v.verified() {
            let repairs = explain_refutation(g, case)?;
            findings.push(format!("{name} = {g} is refuted (residual {}); {}", v.residual, repair_text(&repairs)));
        }
        generators.push(GeneratorReport {
            name: name.clone(),
            field: g.to_string(),
            status: v.status,
            residual: (!v.verified()).then(|| v.residual.to_string()),
        });
    }

    let basis = basis_from_solution(case)?;
    let listed: Vec<Generator<Rational>> = case.claimed_generators.iter().map(|(_, g)| g.clone()).collect();
    let basis_fields: Vec<Generator<Rational>> = basis.iter().map(|(_, g)| g.clone()).collect();
    for (param, g) in &basis {
        let v = verify_generator(g, case)?;
        if !v.verified() {
            let repairs = explain_refutation(g, case)?;
            findings.push(format!(
                "component-solution direction a{param} = {g} is refuted (residual {}); {}",
                v.residual,
                repair_text(&repairs)
            ));
        }
        if !fields_in_span(&listed, g) {
            findings.push(format!("component-solution direction a{param} = {g} is not spanned by the listed generators"));
        }
    }
    for (name, g) in &case.claimed_generators {
        if !fields_in_span(&basis_fields, g) {
            findings.push(format!("{name} = {g} is not contained in the component solution"));
        }
    }

    let (effective, corrections) = effective_generators(case)?;
    for c in &corrections {
        let (name, old) = &case.claimed_generators[c.index - 1];
        findings.push(format!(
            "probable typo: {name} is listed as {old}, which is refuted; the a{} direction {} verifies and raises the listed brackets that hold from {} to {}; brackets below use the corrected {name}",
            c.parameter, c.replacement, c.matched_before, c.matched_after
        ));
    }

    let mut brackets = Vec::new();
    for claim in &case.claimed_brackets {
        let (ok, computed) = check_bracket(&effective, claim.i, claim.j, &claim.rhs);
        let claimed = claim.rhs_string();
        if !ok {
            findings.push(format!("[X{}, X{}] is listed as {claimed} but recomputes to {computed}", claim.i, claim.j));
        }
        brackets.push(BracketReport { i: claim.i, j: claim.j, claimed, computed, matches: ok, listed: true });
    }
    let listed_pairs: BTreeSet<(usize, usize)> =
        case.claimed_brackets.iter().map(|c| (c.i.min(c.j), c.i.max(c.j))).collect();
    let mut implicit_zero_total = 0;
    let mut implicit_zero_matched = 0;
    if case.remaining_vanish {
        for i in 1..=effective.len() {
            for j in i + 1..=effective.len() {
                if listed_pairs.contains(&(i, j)) {
                    continue;
                }
                let (ok, computed) = check_bracket(&effective, i, j, &[]);
                implicit_zero_total += 1;
                if ok {
                    implicit_zero_matched += 1;
                } else {
                    findings.push(format!("[X{i}, X{j}] is implied to vanish but recomputes to {computed}"));
                }
                brackets.push(BracketReport { i, j, claimed: "0".into(), computed, matches: ok, listed: false });
            }
        }
    }
    findings.extend(convention_notes());

    let summary = AuditSummary {
        generators_verified: generators.iter().filter(|g| g.status == Status::Verified).count(),
        generators_total: generators.len(),
        brackets_matched: brackets.iter().filter(|b| b.listed && b.matches).count(),
        brackets_listed: case.claimed_brackets.len(),
        implicit_zero_matched,
        implicit_zero_total,
    };
    Ok(AuditReport {
        case: case.label.to_string(),
        constraints: case.constraints_string(),
        generators,
        brackets,
        findings,
        summary,
    })
}

impl AuditReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Case {}: {}", self.case, self.constraints);
        for g in &self.generators {
            let _ = write!(out, "  {:<4} {:<9} {}", g.name, g.status.to_string(), g.field);
            if let Some(r) = &g.residual {
                let _ = write!(out, "   [residual {r}]");
            }
            out.push('\n');
        }
        for b in self.brackets.iter().filter(|b| b.listed || !b.matches) {
            let mark = if b.matches { "match" } else { "MISMATCH" };
            let _ = writeln!(out, "  [X{}, X{}] claimed {} computed {} {}", b.i, b.j, b.claimed, b.computed, mark);
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "  summary: {}/{} generators verified, {}/{} listed brackets match, {}/{} implied-zero brackets vanish",
            s.generators_verified, s.generators_total, s.brackets_matched, s.brackets_listed, s.implicit_zero_matched, s.implicit_zero_total
        );
        for f in &self.findings {
            let _ = writeln!(out, "  - {f}");
        }
        out
    }
}

/// Whether a translation along one spacetime direction is a symmetry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslationClaim {
    pub case: String,
    pub quantity: String,
    pub generator: String,
    pub claimed: bool,
    pub listed: bool,
    pub verified: bool,
    pub agrees: bool,
}

const ENERGY_CLAIMED: [&str; 5] = ["I", "II", "III", "IV", "VIII"];

/// Recomputes which cases admit `∂t`, `∂y`, `∂z` and compares with the
/// summary claims (energy for cases I–IV and VIII, momenta for all).
pub fn translation_claims() -> Result<Vec<TranslationClaim>> {
    let mut out = Vec::new();
    for case in case_catalog() {
        for (coord, quantity) in [
            (crate::symbolic::Coord::T, "energy"),
            (crate::symbolic::Coord::Y, "momentum-y"),
            (crate::symbolic::Coord::Z, "momentum-z"),
        ] {
            let g = Generator::basis_direction(coord, Rational::from_integer(1.into()));
            let claimed = quantity != "energy" || ENERGY_CLAIMED.contains(&case.label);
            let listed = case.claimed_generators.iter().any(|(_, h)| {
                h.gauge.as_constant().is_some() || h.gauge.is_zero()
            } && express(std::slice::from_ref(&g), h).is_some_and(|c| !c[0].is_zero()));
            let verified = verify_generator(&g, &case)?.verified();
            out.push(TranslationClaim {
                case: case.label.to_string(),
                quantity: quantity.to_string(),
                generator: g.to_string(),
                claimed,
                listed,
                verified,
                agrees: claimed == verified,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noether::catalog::find_case;

    #[test]
    fn case_ii_boost_and_erased_gauge() {
        let ii = find_case("II").unwrap();
        assert!(verify_generator(ii.generator(2).unwrap(), &ii).unwrap().verified());
        let bare = ii.generator(2).unwrap().clone().with_gauge(Poly::zero());
        let v = verify_generator(&bare, &ii).unwrap();
        assert_eq!(v.status, Status::Refuted);
        assert_eq!(v.offending.len(), 1);
        assert_eq!(v.offending[0].0.to_string(), "td");
    }

    #[test]
    fn case_vii_heisenberg_generator() {
        let vii = find_case("VII").unwrap();
        assert!(verify_generator(vii.generator(2).unwrap(), &vii).unwrap().verified());
    }

    #[test]
    fn rotation_repair_identifies_c_with_a() {
        let ii = find_case("II").unwrap();
        let repairs = explain_refutation(ii.generator(3).unwrap(), &ii).unwrap();
        assert!(repairs.iter().any(|r| r.constraints == ["C(t) = A(t)"] && r.conflicts.is_empty()));
    }

    #[test]
    fn time_translation_in_case_viii_conflicts() {
        let viii = find_case("VIII").unwrap();
        let repairs = explain_refutation(viii.generator(2).unwrap(), &viii).unwrap();
        assert!(!repairs.is_empty());
        assert!(repairs.iter().all(|r| !r.conflicts.is_empty()));
    }

    #[test]
    fn extracted_bases() {
        let i = find_case("I").unwrap();
        let basis = basis_from_solution(&i).unwrap();
        let params: Vec<u8> = basis.iter().map(|(p, _)| *p).collect();
        assert_eq!(params, vec![1, 2, 3, 4, 6, 7, 8, 9]);
        assert_eq!(basis[2].1.to_string(), "∂s");
        assert_eq!(basis[3].1.to_string(), "s*∂t, f = -2*t");
        let ii = find_case("II").unwrap();
        let b2 = basis_from_solution(&ii).unwrap();
        assert_eq!(b2[3].1, *ii.generator(3).unwrap());
        let mut bad = ii.clone();
        bad.component_solution.coeffs[0] = crate::symbolic::poly("a1*a2").unwrap();
        assert!(matches!(basis_from_solution(&bad), Err(Error::NonlinearSolution(_))));
    }

    #[test]
    fn case_i_typo_correction() {
        let i = find_case("I").unwrap();
        let (list, corr) = effective_generators(&i).unwrap();
        assert_eq!(corr.len(), 1);
        assert_eq!(corr[0].index, 4);
        assert_eq!(corr[0].parameter, 3);
        assert_eq!(list[3].to_string(), "∂s");
        let report = audit_case(&i).unwrap();
        let get = |a: usize, b: usize| report.brackets.iter().find(|x| x.listed && x.i == a && x.j == b).unwrap();
        assert!(get(6, 8).matches);
        assert!(get(1, 4).matches && get(2, 4).matches && get(4, 5).matches && get(1, 2).matches);
        assert_eq!(get(1, 3).computed, "-1/2*X5");
        assert_eq!(get(2, 3).computed, "-1/2*X3");
        assert_eq!(get(2, 5).computed, "1/2*X5");
        assert!(report.findings.iter().any(|f| f.starts_with("probable typo: X4")));
    }
}
