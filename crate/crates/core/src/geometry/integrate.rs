//! Fixed-step RK4 integration of the geodesic equations.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{Atom, Coord, Func, Poly};
use crate::Rational;

use super::metric::{geodesic_accelerations, MetricSpec};
use super::numeric::{MetricEvaluator, NumericMetric};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_SMAX: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicState<F> {
    pub s: F,
    /// `(t, x, y, z)`
    pub pos: [F; 4],
    /// `(ṫ, ẋ, ẏ, ż)`
    pub vel: [F; 4],
}

impl<F: Float> GeodesicState<F> {
    pub fn new(s: F, pos: [F; 4], vel: [F; 4]) -> Self {
        GeodesicState { s, pos, vel }
    }

    /// From `t,x,y,z,td,xd,yd,zd` at `s = 0`.
    pub fn from_slice(v: &[F]) -> Option<Self> {
        if v.len() != 8 {
            return None;
        }
        Some(GeodesicState::new(F::zero(), [v[0], v[1], v[2], v[3]], [v[4], v[5], v[6], v[7]]))
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.pos.iter().chain(&self.vel).all(|v| v.is_finite())
    }

    fn as_f64(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for i in 0..4 {
            out[i] = self.pos[i].to_f64().unwrap_or(f64::NAN);
            out[i + 4] = self.vel[i].to_f64().unwrap_or(f64::NAN);
        }
        out
    }
}

/// Numeric values for atoms at a state.
pub struct StateBindings<'a, F> {
    pub state: &'a GeodesicState<F>,
    pub metric: &'a MetricEvaluator,
}

impl<F: Float> StateBindings<'_, F> {
    pub fn value(&self, atom: &Atom) -> Option<F> {
        match atom {
            Atom::Coord(Coord::S) => Some(self.state.s),
            Atom::Coord(c) => Some(self.state.pos[c.spacetime()?.index()]),
            Atom::Vel(d) => Some(self.state.vel[d.index()]),
            Atom::Func(f, k) => self.metric.value(*f, *k, self.state.pos[0]),
            _ => None,
        }
    }

    pub fn eval(&self, p: &Poly<f64>) -> Result<F> {
        p.eval(&|a| self.value(a))
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory<F> {
    pub states: Vec<GeodesicState<F>>,
    pub step: F,
    pub metric: NumericMetric<Rational>,
}

impl<F: Float> Trajectory<F> {
    pub fn smax(&self) -> F {
        self.states.last().map_or(F::zero(), |s| s.s)
    }
}

/// Geodesic right-hand side compiled for float evaluation.
pub struct GeodesicSystem {
    accelerations: [Poly<f64>; 4],
    metric: MetricEvaluator,
}

impl GeodesicSystem {
    pub fn new(metric: &NumericMetric<Rational>) -> Result<Self> {
        let acc = geodesic_accelerations(&MetricSpec::<Rational>::generic())?;
        Ok(GeodesicSystem {
            accelerations: acc.map(|p| p.map_coefficients(|c| c.to_f64())),
            metric: metric.evaluator(3),
        })
    }

    pub fn evaluator(&self) -> &MetricEvaluator {
        &self.metric
    }

    fn derivative<F: Float>(&self, state: &GeodesicState<F>) -> Result<[F; 8]> {
        let bind = StateBindings { state, metric: &self.metric };
        let mut out = [F::zero(); 8];
        for i in 0..4 {
            out[i] = state.vel[i];
            out[i + 4] = bind.eval(&self.accelerations[i])?;
        }
        Ok(out)
    }

    fn check_nondegenerate<F: Float>(&self, state: &GeodesicState<F>) -> Result<()> {
        for f in Func::ALL {
            let v = self.metric.value(f, 0, state.pos[0]).unwrap_or_else(F::nan);
            if !(v > F::zero()) {
                return Err(Error::Metric(format!(
                    "{}(t) is not positive at t = {}",
                    f.letter(),
                    state.pos[0].to_f64().unwrap_or(f64::NAN)
                )));
            }
        }
        Ok(())
    }
}

fn offset<F: Float>(base: &GeodesicState<F>, k: &[F; 8], scale: F, ds: F) -> GeodesicState<F> {
    let mut next = *base;
    next.s = base.s + ds;
    for i in 0..4 {
        next.pos[i] = base.pos[i] + k[i] * scale;
        next.vel[i] = base.vel[i] + k[i + 4] * scale;
    }
    next
}

/// Classical RK4 on the eight-dimensional first-order system; returns
/// `n + 1` states with `s_k = s_0 + k h`.
pub fn integrate_geodesic<F: Float>(
    metric: &NumericMetric<Rational>,
    ics: GeodesicState<F>,
    h: F,
    n: usize,
) -> Result<Trajectory<F>> {
    if !(h > F::zero()) {
        return Err(Error::Metric("step size must be positive".into()));
    }
    let system = GeodesicSystem::new(metric)?;
    let two = F::one() + F::one();
    let six = two + two + two;
    let half = h / two;
    let mut states = Vec::with_capacity(n + 1);
    system.check_nondegenerate(&ics)?;
    states.push(ics);
    let mut y = ics;
    for step in 1..=n {
        let k1 = system.derivative(&y)?;
        let k2 = system.derivative(&offset(&y, &k1, half, half))?;
        let k3 = system.derivative(&offset(&y, &k2, half, half))?;
        let k4 = system.derivative(&offset(&y, &k3, h, h))?;
        let mut next = y;
        next.s = ics.s + h * F::from(step).unwrap_or_else(F::nan);
        for i in 0..8 {
            let incr = h / six * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
            if i < 4 {
                next.pos[i] = y.pos[i] + incr;
            } else {
                next.vel[i - 4] = y.vel[i - 4] + incr;
            }
        }
        if !next.is_finite() {
            return Err(Error::Diverged { s: y.s.to_f64().unwrap_or(f64::NAN), state: y.as_f64() });
        }
        system.check_nondegenerate(&next)?;
        states.push(next);
        y = next;
    }
    Ok(Trajectory { states, step: h, metric: metric.clone() })
}

/// Number of steps to cover `[0, smax]` with step `h`.
pub fn steps_for(smax: f64, h: f64) -> usize {
    (smax / h).round().max(0.0) as usize
}

/// Evaluates the Lagrangian along a trajectory.
pub fn lagrangian_values<F: Float>(traj: &Trajectory<F>) -> Result<Vec<F>> {
    let l = super::metric::generic_lagrangian::<Rational>().map_coefficients(|c| c.to_f64());
    let ev = traj.metric.evaluator(2);
    traj.states
        .iter()
        .map(|state| StateBindings { state, metric: &ev }.eval(&l))
        .collect()
}
