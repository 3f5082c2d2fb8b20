//! Noether first integrals: construction, symbolic on-shell proof, numeric
//! drift along integrated geodesics, and physical labels.

use num_traits::Float;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{generic_lagrangian, geodesic_accelerations, on_shell, rewrite, MetricSpec, StateBindings, Trajectory};
use crate::noether::{prolong, Generator};
use crate::symbolic::{Atom, Coord, Dir};
use crate::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OnShellStatus {
    Proved,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PhysicsLabel {
    #[serde(rename = "energy")]
    Energy,
    #[serde(rename = "momentum-y")]
    MomentumY,
    #[serde(rename = "momentum-z")]
    MomentumZ,
    #[serde(rename = "scaling/other")]
    Other,
}

impl std::fmt::Display for PhysicsLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhysicsLabel::Energy => "energy",
            PhysicsLabel::MomentumY => "momentum-y",
            PhysicsLabel::MomentumZ => "momentum-z",
            PhysicsLabel::Other => "scaling/other",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegral {
    pub expression: Poly,
    pub generator_name: String,
    pub generator: Generator<Rational>,
    /// `None` until [`on_shell_check`] has run.
    pub on_shell: Option<OnShellStatus>,
    pub label: PhysicsLabel,
}

/// `I = μL + Σ (ζᵃ − μẋᵃ) ∂L/∂ẋᵃ − f`, so that `∂s` gives `−L`.
pub fn integral_expression(g: &Generator<Rational>, spec: &MetricSpec<Rational>) -> Result<Poly> {
    // Validates the point-symmetry invariant.
    prolong(g)?;
    let l = generic_lagrangian::<Rational>();
    let mu = &g.coeffs[Coord::S.index()];
    let mut out = mu * &l;
    for d in Dir::ALL {
        let v = Poly::atom(Atom::Vel(d));
        let weight = &g.coeffs[d.coord().index()] - &(mu * &v);
        if !weight.is_zero() {
            out = &out + &(&weight * &l.diff(&Atom::Vel(d)));
        }
    }
    rewrite(&spec.rules()?, &out - &g.gauge)
}

pub fn first_integral(name: &str, g: &Generator<Rational>, spec: &MetricSpec<Rational>) -> Result<FirstIntegral> {
    Ok(FirstIntegral {
        expression: integral_expression(g, spec)?,
        generator_name: name.to_string(),
        generator: g.clone(),
        on_shell: None,
        label: classify_physics(g),
    })
}

/// `D̂_s I` with the geodesic accelerations substituted, reduced under the
/// spec's rules. Zero exactly when `I` is conserved.
pub fn on_shell_remainder(expression: &Poly, spec: &MetricSpec<Rational>) -> Result<Poly> {
    let acc = geodesic_accelerations(&MetricSpec::<Rational>::generic())?;
    let derivative = on_shell(&expression.total_derivative_second(), &acc)?;
    spec.rules()?.reduce(&derivative)
}

pub fn on_shell_check(integral: &FirstIntegral, spec: &MetricSpec<Rational>) -> Result<OnShellStatus> {
    Ok(if on_shell_remainder(&integral.expression, spec)?.is_zero() {
        OnShellStatus::Proved
    } else {
        OnShellStatus::Failed
    })
}

/// Energy, momentum or other, from the generator: a pure nonzero constant
/// multiple of `∂t`, `∂y` or `∂z` with constant gauge.
pub fn classify_physics(g: &Generator<Rational>) -> PhysicsLabel {
    if !(g.gauge.is_zero() || g.gauge.as_constant().is_some()) {
        return PhysicsLabel::Other;
    }
    let nonzero: Vec<(Coord, Option<Rational>)> = Coord::ALL
        .iter()
        .filter(|c| !g.coeffs[c.index()].is_zero())
        .map(|c| (*c, g.coeffs[c.index()].as_constant()))
        .collect();
    match nonzero.as_slice() {
        [(Coord::T, Some(_))] => PhysicsLabel::Energy,
        [(Coord::Y, Some(_))] => PhysicsLabel::MomentumY,
        [(Coord::Z, Some(_))] => PhysicsLabel::MomentumZ,
        _ => PhysicsLabel::Other,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub integral: String,
    pub generator: String,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    pub step: f64,
    pub smax: f64,
    pub proved_on_shell: bool,
}

/// Values of `expression` at every state of the trajectory.
pub fn integral_values<F: Float>(expression: &Poly, traj: &Trajectory<F>) -> Result<Vec<F>> {
    let p = expression.map_coefficients(|c| crate::Scalar::to_f64(c));
    let ev = traj.metric.evaluator(3);
    traj.states.iter().map(|state| StateBindings { state, metric: &ev }.eval(&p)).collect()
}

/// Maximum deviation from the initial value; the relative figure divides by
/// `max(1, |I(0)|)`.
pub fn drift_of<F: Float>(values: &[F]) -> (f64, f64) {
    let Some(first) = values.first() else { return (0.0, 0.0) };
    let v0 = first.to_f64().unwrap_or(f64::NAN);
    let abs = values
        .iter()
        .map(|v| (v.to_f64().unwrap_or(f64::NAN) - v0).abs())
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
    (abs, abs / v0.abs().max(1.0))
}

pub fn numeric_drift<F: Float>(integral: &FirstIntegral, traj: &Trajectory<F>) -> Result<DriftReport> {
    let values = integral_values(&integral.expression, traj)?;
    let (max_abs_drift, max_rel_drift) = drift_of(&values);
    Ok(DriftReport {
        integral: integral.expression.to_string(),
        generator: format!("{} = {}", integral.generator_name, integral.generator),
        max_abs_drift,
        max_rel_drift,
        step: traj.step.to_f64().unwrap_or(f64::NAN),
        smax: traj.smax().to_f64().unwrap_or(f64::NAN),
        proved_on_shell: integral.on_shell == Some(OnShellStatus::Proved),
    })
}
