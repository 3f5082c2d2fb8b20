use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{Atom, Dir, Func, Poly, RewriteRuleSet};

use super::numeric::NumericMetric;

/// Symmetric 4×4 matrix of expressions indexed by `(t, x, y, z)`.
pub type MetricMatrix<K> = [[Poly<K>; 4]; 4];

/// `Γᵃ_bc`, indexed `[a][b][c]`.
pub type Christoffel<K> = [[[Poly<K>; 4]; 4]; 4];

/// The metric family: symbolic `A, B, C` subject to constraint rules, or a
/// closed-form numeric choice.
#[derive(Clone, Debug)]
pub enum MetricSpec<K: Scalar> {
    Symbolic(RewriteRuleSet<K>),
    Numeric(NumericMetric<K>),
}

impl<K: Scalar> MetricSpec<K> {
    pub fn generic() -> Self {
        MetricSpec::Symbolic(RewriteRuleSet::empty())
    }

    /// Rules used for canonicalization and zero tests. A numeric metric acts
    /// as the specialization `A ↦ a(t)`, `B ↦ b(t)`, `C ↦ c(t)`.
    pub fn rules(&self) -> Result<RewriteRuleSet<K>> {
        match self {
            MetricSpec::Symbolic(r) => Ok(r.clone()),
            MetricSpec::Numeric(m) => m.rules(),
        }
    }

    pub fn numeric(&self) -> Option<&NumericMetric<K>> {
        match self {
            MetricSpec::Numeric(m) => Some(m),
            MetricSpec::Symbolic(_) => None,
        }
    }
}

/// Rewrites under the rules when the result stays a Laurent polynomial;
/// otherwise returns `p` unchanged (same value, function atoms kept).
pub(crate) fn rewrite<K: Scalar>(rules: &RewriteRuleSet<K>, p: Poly<K>) -> Result<Poly<K>> {
    match rules.apply(&p) {
        Ok(r) => Ok(r),
        Err(Error::NonMonomialInverse(_)) => Ok(p),
        Err(e) => Err(e),
    }
}

fn f<K: Scalar>(func: Func) -> Poly<K> {
    Poly::atom(Atom::func(func))
}

fn sq<K: Scalar>(p: &Poly<K>) -> Poly<K> {
    p * p
}

fn inv_sq<K: Scalar>(func: Func) -> Poly<K> {
    Poly::term(K::one(), crate::symbolic::Monomial::power(Atom::func(func), -2))
}

fn map_matrix<K: Scalar>(m: MetricMatrix<K>, rules: &RewriteRuleSet<K>) -> Result<MetricMatrix<K>> {
    let mut out: MetricMatrix<K> = Default::default();
    for (i, row) in m.into_iter().enumerate() {
        for (j, entry) in row.into_iter().enumerate() {
            out[i][j] = rewrite(rules, entry)?;
        }
    }
    Ok(out)
}

/// Generic metric components, before any rules.
pub fn generic_metric<K: Scalar>() -> MetricMatrix<K> {
    let (a, b, c) = (f::<K>(Func::A), f::<K>(Func::B), f::<K>(Func::C));
    let x = Poly::atom(Atom::X);
    let mut g: MetricMatrix<K> = Default::default();
    g[0][0] = Poly::int(-1);
    g[1][1] = sq(&a);
    g[2][2] = sq(&b);
    g[2][3] = -(&sq(&b) * &x);
    g[3][2] = g[2][3].clone();
    g[3][3] = &sq(&c) + &(&sq(&b) * &sq(&x));
    g
}

/// Closed-form inverse from block inversion of the `(y, z)` block.
pub fn generic_inverse<K: Scalar>() -> MetricMatrix<K> {
    let x = Poly::atom(Atom::X);
    let mut h: MetricMatrix<K> = Default::default();
    h[0][0] = Poly::int(-1);
    h[1][1] = inv_sq(Func::A);
    h[2][2] = &inv_sq(Func::B) + &(&sq(&x) * &inv_sq(Func::C));
    h[2][3] = &x * &inv_sq(Func::C);
    h[3][2] = h[2][3].clone();
    h[3][3] = inv_sq(Func::C);
    h
}

pub fn metric_components<K: Scalar>(spec: &MetricSpec<K>) -> Result<MetricMatrix<K>> {
    map_matrix(generic_metric(), &spec.rules()?)
}

pub fn inverse_metric<K: Scalar>(spec: &MetricSpec<K>) -> Result<MetricMatrix<K>> {
    map_matrix(generic_inverse(), &spec.rules()?)
}

pub fn mat_mul<K: Scalar>(a: &MetricMatrix<K>, b: &MetricMatrix<K>) -> MetricMatrix<K> {
    let mut out: MetricMatrix<K> = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| &a[i][k] * &b[k][j]).sum();
        }
    }
    out
}

/// Checks `g·g⁻¹ = 1` entrywise modulo the rules.
pub fn verify_inverse<K: Scalar>(spec: &MetricSpec<K>) -> Result<bool> {
    let rules = spec.rules()?;
    let product = mat_mul(&generic_metric(), &generic_inverse());
    for (i, row) in product.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let delta = if i == j { Poly::one() } else { Poly::zero() };
            if !rules.is_zero(&(entry - &delta))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Determinant by cofactor expansion; used to confirm nondegeneracy.
pub fn determinant<K: Scalar>(m: &MetricMatrix<K>) -> Poly<K> {
    fn det<K: Scalar>(rows: &[usize], cols: &[usize], m: &MetricMatrix<K>) -> Poly<K> {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]].clone();
        }
        let mut acc = Poly::zero();
        for (k, &c) in cols.iter().enumerate() {
            let entry = &m[rows[0]][c];
            if entry.is_zero() {
                continue;
            }
            let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry * &det(&rows[1..], &minor_cols, m);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    det(&[0, 1, 2, 3], &[0, 1, 2, 3], m)
}

/// `L = −ṫ² + A²ẋ² + B²(ẏ² + x²ż² − 2xẏż) + C²ż²`.
pub fn generic_lagrangian<K: Scalar>() -> Poly<K> {
    let v = |d: Dir| Poly::<K>::atom(Atom::Vel(d));
    let (td, xd, yd, zd) = (v(Dir::T), v(Dir::X), v(Dir::Y), v(Dir::Z));
    let x = Poly::atom(Atom::X);
    let (a, b, c) = (f::<K>(Func::A), f::<K>(Func::B), f::<K>(Func::C));
    let block = &(&sq(&yd) + &(&sq(&x) * &sq(&zd))) - &(&(&x * &yd) * &zd).scale(&K::from_int(2));
    -sq(&td) + &sq(&a) * &sq(&xd) + &sq(&b) * &block + &sq(&c) * &sq(&zd)
}

pub fn lagrangian<K: Scalar>(spec: &MetricSpec<K>) -> Result<Poly<K>> {
    rewrite(&spec.rules()?, generic_lagrangian())
}

/// `g_ab ẋᵃ ẋᵇ` from a component matrix.
pub fn quadratic_form<K: Scalar>(g: &MetricMatrix<K>) -> Poly<K> {
    let mut out = Poly::zero();
    for a in Dir::ALL {
        for b in Dir::ALL {
            let vv = &Poly::atom(Atom::Vel(a)) * &Poly::atom(Atom::Vel(b));
            out = &out + &(&g[a.index()][b.index()] * &vv);
        }
    }
    out
}

pub fn christoffel<K: Scalar>(spec: &MetricSpec<K>) -> Result<Christoffel<K>> {
    let rules = spec.rules()?;
    let g = generic_metric::<K>();
    let ginv = generic_inverse::<K>();
    // dg[d][b][c] = ∂_d g_bc
    let mut dg: Christoffel<K> = Default::default();
    for d in Dir::ALL {
        let coord = Atom::Coord(d.coord());
        for b in 0..4 {
            for c in 0..4 {
                dg[d.index()][b][c] = g[b][c].diff(&coord);
            }
        }
    }
    let half = K::from_ratio(1, 2);
    let mut gamma: Christoffel<K> = Default::default();
    for a in 0..4 {
        for b in 0..4 {
            for c in b..4 {
                let mut sum = Poly::zero();
                for d in 0..4 {
                    if ginv[a][d].is_zero() {
                        continue;
                    }
                    let bracket = &(&dg[b][d][c] + &dg[c][d][b]) - &dg[d][b][c];
                    sum = &sum + &(&ginv[a][d] * &bracket);
                }
                let entry = rewrite(&rules, sum.scale(&half))?;
                gamma[a][c][b] = entry.clone();
                gamma[a][b][c] = entry;
            }
        }
    }
    Ok(gamma)
}

/// `ẍᵃ = −Γᵃ_bc ẋᵇ ẋᶜ`.
pub fn accelerations_from_christoffel<K: Scalar>(gamma: &Christoffel<K>) -> [Poly<K>; 4] {
    let mut out: [Poly<K>; 4] = Default::default();
    for a in 0..4 {
        let mut sum = Poly::zero();
        for b in Dir::ALL {
            for c in Dir::ALL {
                let vv = &Poly::atom(Atom::Vel(b)) * &Poly::atom(Atom::Vel(c));
                sum = &sum + &(&gamma[a][b.index()][c.index()] * &vv);
            }
        }
        out[a] = -sum;
    }
    out
}

pub fn geodesic_accelerations<K: Scalar>(spec: &MetricSpec<K>) -> Result<[Poly<K>; 4]> {
    Ok(accelerations_from_christoffel(&christoffel(spec)?))
}

/// Euler–Lagrange expressions `D̂_s(∂L/∂ẋᵃ) − ∂L/∂xᵃ`, which contain the
/// accelerations linearly.
pub fn euler_lagrange<K: Scalar>(lagrangian: &Poly<K>) -> [Poly<K>; 4] {
    let mut out: [Poly<K>; 4] = Default::default();
    for d in Dir::ALL {
        let momentum = lagrangian.diff(&Atom::Vel(d));
        out[d.index()] = &momentum.total_derivative_second() - &lagrangian.diff(&Atom::Coord(d.coord()));
    }
    out
}

/// Substitutes accelerations into `p`.
pub fn on_shell<K: Scalar>(p: &Poly<K>, accelerations: &[Poly<K>; 4]) -> Result<Poly<K>> {
    let bindings = Dir::ALL.iter().map(|d| (Atom::Acc(*d), accelerations[d.index()].clone())).collect();
    p.substitute(&bindings)
}

/// Cross-check: the Christoffel accelerations annihilate the
/// Euler–Lagrange expressions of the Lagrangian.
pub fn accelerations_agree<K: Scalar>(spec: &MetricSpec<K>) -> Result<bool> {
    let rules = spec.rules()?;
    let acc = accelerations_from_christoffel(&christoffel(&MetricSpec::generic())?);
    for el in euler_lagrange(&generic_lagrangian::<K>()) {
        if !rules.is_zero(&on_shell(&el, &acc)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
