//! Per-case algebra and conservation reports shared by the command-line
//! front end and the acceptance suite.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::conslaw::{first_integral, numeric_drift, on_shell_check, DriftReport, FirstIntegral, OnShellStatus, PhysicsLabel};
use crate::error::{Error, Result};
use crate::geometry::{integrate_geodesic, steps_for, GeodesicState, MetricSpec, NumericMetric};
use crate::liealg::{rational_string, structure_constants, LeviVerdict, LieAlgebra, StructureExport, SubspaceQ};
use crate::noether::{claimed_killing_support, effective_generators, hypothesis_violations, verify_under, CaseSpec, Generator};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeviReport {
    pub status: String,
    pub candidate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub case: String,
    pub generators: Vec<String>,
    pub structure_constants: StructureExport,
    pub killing_form: Vec<Vec<String>>,
    pub derived_series: Vec<usize>,
    pub lower_central_series: Vec<usize>,
    pub radical_dim: usize,
    pub solvable: bool,
    pub jacobi_holds: bool,
    pub killing_ad_invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levi: Option<LeviReport>,
    pub findings: Vec<String>,
}

fn vector_string(v: &[Rational]) -> String {
    SubspaceQ::span(v.len(), [v.to_vec()]).to_string().trim_start_matches("span{").trim_end_matches('}').to_string()
}

/// Basis vectors taken greedily while independent modulo the radical.
pub fn levi_candidate(alg: &LieAlgebra<Rational>, rad: &SubspaceQ<Rational>) -> SubspaceQ<Rational> {
    let n = alg.dim();
    let mut chosen = Vec::new();
    let mut acc = rad.clone();
    for i in 0..n {
        let e = crate::liealg::linear::unit::<Rational>(n, i);
        if !acc.contains(&e) {
            acc = acc.sum(&SubspaceQ::span(n, [e.clone()]));
            chosen.push(e);
        }
    }
    SubspaceQ::span(n, chosen)
}

/// Structure of the algebra spanned by the case's effective generators.
pub fn algebra_report(case: &CaseSpec) -> Result<(LieAlgebra<Rational>, AlgebraReport)> {
    let (basis, corrections) = effective_generators(case)?;
    let mut findings = Vec::new();
    for c in &corrections {
        findings.push(format!("X{} taken as the a{} direction {} (typo correction)", c.index, c.parameter, c.replacement));
    }
    let alg = structure_constants(&basis)?;
    let n = alg.dim();
    let kappa = alg.killing_form();
    if let Some(support) = claimed_killing_support(case.label) {
        for i in 0..n {
            for j in i..n {
                let claimed = support.contains(&(i + 1, j + 1));
                let nonzero = !kappa[i][j].is_zero();
                if claimed != nonzero {
                    findings.push(format!(
                        "κ(X{}, X{}) = {} but is claimed {}",
                        i + 1,
                        j + 1,
                        rational_string(&kappa[i][j]),
                        if claimed { "nonzero" } else { "zero" }
                    ));
                }
            }
        }
    }
    let rad = alg.solvable_radical()?;
    let levi = if rad.dim() < n {
        let candidate = levi_candidate(&alg, &rad);
        Some(match alg.levi_check(&candidate)? {
            LeviVerdict::Sl2(t) => LeviReport {
                status: "sl2".into(),
                candidate: candidate.to_string(),
                reason: None,
                triple: Some([vector_string(&t.e), vector_string(&t.h), vector_string(&t.f)]),
            },
            LeviVerdict::Refuted(r) => {
                findings.push(format!("Levi complement {candidate}: {r}"));
                LeviReport { status: "refuted".into(), candidate: candidate.to_string(), reason: Some(r), triple: None }
            }
        })
    } else {
        None
    };
    let jacobi_holds = alg.jacobi_violations().is_empty();
    let killing_ad_invariant = alg.killing_ad_invariant();
    if !jacobi_holds || !killing_ad_invariant {
        return Err(Error::Internal(format!("case {} structure constants fail Jacobi or κ invariance", case.label)));
    }
    let report = AlgebraReport {
        case: case.label.to_string(),
        generators: basis.iter().enumerate().map(|(i, g)| format!("X{} = {g}", i + 1)).collect(),
        structure_constants: alg.export(),
        killing_form: kappa.iter().map(|row| row.iter().map(rational_string).collect()).collect(),
        derived_series: alg.derived_series().iter().map(SubspaceQ::dim).collect(),
        lower_central_series: alg.lower_central_series().iter().map(SubspaceQ::dim).collect(),
        radical_dim: rad.dim(),
        solvable: alg.is_solvable(),
        jacobi_holds,
        killing_ad_invariant,
        levi,
        findings,
    };
    Ok((alg, report))
}

impl AlgebraReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Case {}: algebra of dimension {}", self.case, self.generators.len());
        for g in &self.generators {
            let _ = writeln!(out, "  {g}");
        }
        if self.structure_constants.brackets.is_empty() {
            let _ = writeln!(out, "  abelian");
        }
        for b in &self.structure_constants.brackets {
            let terms: Vec<(usize, Rational)> = b
                .coeffs
                .iter()
                .enumerate()
                .filter_map(|(k, c)| parse_rational(c).filter(|v| !v.is_zero()).map(|v| (k + 1, v)))
                .collect();
            let _ = writeln!(out, "  [X{}, X{}] = {}", b.i, b.j, crate::noether::combination_string(&terms));
        }
        let _ = writeln!(out, "  Killing form:");
        for row in &self.killing_form {
            let _ = writeln!(out, "    [{}]", row.join(", "));
        }
        let _ = writeln!(out, "  derived series dims: {:?}", self.derived_series);
        let _ = writeln!(out, "  lower central series dims: {:?}", self.lower_central_series);
        let _ = writeln!(out, "  radical dim: {} (solvable: {})", self.radical_dim, self.solvable);
        if let Some(l) = &self.levi {
            match &l.triple {
                Some([e, h, f]) => {
                    let _ = writeln!(out, "  Levi factor {} ≅ sl(2): e = {e}, h = {h}, f = {f}", l.candidate);
                }
                None => {
                    let _ = writeln!(out, "  Levi check on {}: {}", l.candidate, l.reason.as_deref().unwrap_or("refuted"));
                }
            }
        }
        for f in &self.findings {
            let _ = writeln!(out, "  - {f}");
        }
        out
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    s.parse().ok()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralReport {
    pub name: String,
    pub generator: String,
    pub verified: bool,
    pub label: PhysicsLabel,
    pub integral: String,
    pub on_shell: OnShellStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConserveReport {
    pub case: String,
    pub metric: String,
    pub initial_conditions: Vec<f64>,
    pub integrals: Vec<IntegralReport>,
    pub drift: Vec<DriftReport>,
}

pub struct ConserveOutcome {
    pub integrals: Vec<(bool, FirstIntegral)>,
    pub report: ConserveReport,
}

/// First integrals of the case's effective generators under a numeric
/// metric, their on-shell proofs, and drift along one RK4 geodesic.
/// Unverified generators are kept but marked.
pub fn conserve_case(
    case: &CaseSpec,
    metric: &NumericMetric<Rational>,
    ics: GeodesicState<f64>,
    step: f64,
    smax: f64,
) -> Result<ConserveOutcome> {
    let violations = hypothesis_violations(case, &metric.rules()?)?;
    if !violations.is_empty() {
        return Err(Error::Metric(format!(
            "case {} requires {}; for {metric}: {}",
            case.label,
            case.constraints_string(),
            violations.join("; ")
        )));
    }
    let spec = MetricSpec::Numeric(metric.clone());
    let (basis, _) = effective_generators(case)?;
    let traj = integrate_geodesic(metric, ics, step, steps_for(smax, step))?;
    let mut integrals = Vec::new();
    let mut rows = Vec::new();
    let mut drift = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let name = format!("X{}", k + 1);
        let verified = verify_under(g, &spec)?.verified();
        let mut integral = first_integral(&name, g, &spec)?;
        let status = on_shell_check(&integral, &spec)?;
        integral.on_shell = Some(status);
        if verified && status != OnShellStatus::Proved {
            return Err(Error::Internal(format!("{name} verifies but its integral is not conserved on shell")));
        }
        rows.push(IntegralReport {
            name,
            generator: g.to_string(),
            verified,
            label: integral.label,
            integral: integral.expression.to_string(),
            on_shell: status,
        });
        drift.push(numeric_drift(&integral, &traj)?);
        integrals.push((verified, integral));
    }
    let mut v = ics.pos.to_vec();
    v.extend(ics.vel);
    Ok(ConserveOutcome {
        integrals,
        report: ConserveReport { case: case.label.to_string(), metric: metric.to_string(), initial_conditions: v, integrals: rows, drift },
    })
}

impl ConserveReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Case {} with {}", self.case, self.metric);
        for (row, d) in self.integrals.iter().zip(&self.drift) {
            let _ = writeln!(
                out,
                "  {} = {} [{}{}] on-shell {}: I = {}",
                row.name,
                row.generator,
                row.label,
                if row.verified { "" } else { ", unverified" },
                match row.on_shell {
                    OnShellStatus::Proved => "proved",
                    OnShellStatus::Failed => "failed",
                },
                row.integral
            );
            let _ = writeln!(
                out,
                "      drift over s ∈ [0, {}] at h = {}: abs {:.3e}, rel {:.3e}",
                d.smax, d.step, d.max_abs_drift, d.max_rel_drift
            );
        }
        out
    }
}

/// Convenience for tests and the front end.
pub fn verified_generators(case: &CaseSpec) -> Result<Vec<(String, Generator<Rational>)>> {
    let spec = case.spec();
    let (basis, _) = effective_generators(case)?;
    let mut out = Vec::new();
    for (k, g) in basis.into_iter().enumerate() {
        if verify_under(&g, &spec)?.verified() {
            out.push((format!("X{}", k + 1), g));
        }
    }
    Ok(out)
}
