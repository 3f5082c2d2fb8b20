use std::collections::BTreeMap;

use crate::error::Result;
use crate::geometry::{generic_lagrangian, MetricSpec};
use crate::liealg::VectorField5;
use crate::scalar::Scalar;
use crate::symbolic::{Atom, Coord, Dir, Poly, RewriteRuleSet, Unknown};

/// A point symmetry generator with its gauge function.
pub type Generator<K> = VectorField5<K>;

/// `τ¹, ξ¹, η¹, φ¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedCoefficients<K: Scalar> {
    pub coeffs: [Poly<K>; 4],
}

impl<K: Scalar> ProlongedCoefficients<K> {
    pub fn get(&self, d: Dir) -> &Poly<K> {
        &self.coeffs[d.index()]
    }
}

/// First prolongation `ζ¹ = D_s ζ − ẋᵃ D_s μ` for each spacetime direction.
pub fn prolong<K: Scalar>(g: &Generator<K>) -> Result<ProlongedCoefficients<K>> {
    let g = Generator::new(g.coeffs.clone(), g.gauge.clone())?;
    let dmu = g.coeffs[Coord::S.index()].total_derivative()?;
    let mut coeffs: [Poly<K>; 4] = Default::default();
    for d in Dir::ALL {
        let own = g.coeffs[d.coord().index()].total_derivative()?;
        coeffs[d.index()] = &own - &dmu.mul_monomial(&crate::symbolic::Monomial::atom(Atom::Vel(d)));
    }
    Ok(ProlongedCoefficients { coeffs })
}

/// `X¹L + L·D_sμ − D_s f` for the generic Lagrangian, before rules.
pub fn raw_residual<K: Scalar>(g: &Generator<K>) -> Result<Poly<K>> {
    let l = generic_lagrangian::<K>();
    let pro = prolong(g)?;
    let mut out = l.directional(&g.coeffs);
    for d in Dir::ALL {
        let z = pro.get(d);
        if !z.is_zero() {
            out = &out + &(z * &l.diff(&Atom::Vel(d)));
        }
    }
    let dmu = g.coeffs[Coord::S.index()].total_derivative()?;
    out = &out + &(&l * &dmu);
    Ok(&out - &g.gauge.total_derivative()?)
}

/// The Noether residual under the spec's rules. Zero exactly when `g` is a
/// Noether symmetry of the specialized Lagrangian.
pub fn noether_residual<K: Scalar>(g: &Generator<K>, spec: &MetricSpec<K>) -> Result<Poly<K>> {
    crate::geometry::rewrite(&spec.rules()?, raw_residual(g)?)
}

/// The generator whose coefficients are the abstract unknowns
/// `mu, tau, xi, eta, phi` with gauge `f`.
pub fn abstract_generator<K: Scalar>() -> Generator<K> {
    let u = |x| Poly::atom(Atom::unknown(x));
    VectorField5 {
        coeffs: [u(Unknown::Mu), u(Unknown::Tau), u(Unknown::Xi), u(Unknown::Eta), u(Unknown::Phi)],
        gauge: u(Unknown::Gauge),
    }
}

/// Residual of the abstract generator: linear in the unknowns and their
/// partials.
pub fn residual_template<K: Scalar>() -> Result<Poly<K>> {
    raw_residual(&abstract_generator())
}

/// Second code path for the residual: replaces each abstract partial in the
/// template by the matching derivative of `g`.
pub fn residual_via_template<K: Scalar>(template: &Poly<K>, g: &Generator<K>) -> Result<Poly<K>> {
    let mut bindings = BTreeMap::new();
    for atom in template.atoms() {
        if let Atom::Partial(u, idx) = atom {
            let base = match u {
                Unknown::Gauge => &g.gauge,
                other => &g.coeffs[other as usize],
            };
            let mut p = base.clone();
            for c in Coord::ALL {
                for _ in 0..idx[c.index()] {
                    p = p.diff(&Atom::Coord(c));
                }
            }
            bindings.insert(atom, p);
        }
    }
    template.substitute(&bindings)
}

/// Whether the two residual computations agree modulo `rules`.
pub fn residual_paths_agree<K: Scalar>(
    template: &Poly<K>,
    g: &Generator<K>,
    rules: &RewriteRuleSet<K>,
) -> Result<bool> {
    let a = raw_residual(g)?;
    let b = residual_via_template(template, g)?;
    rules.is_zero(&(&a - &b))
}
