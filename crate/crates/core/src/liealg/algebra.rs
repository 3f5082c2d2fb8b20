use std::collections::BTreeMap;

use serde::Serialize;

use super::field::{commutator, VectorField5};
use super::linear::{nullspace, rank, solve_in_span, unit, Matrix, SubspaceQ, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::Monomial;

/// Finite-dimensional Lie algebra of vector fields with its structure
/// constants `[Xᵢ, Xⱼ] = Σₖ c[i][j][k] Xₖ`.
#[derive(Clone, Debug)]
pub struct LieAlgebra<K: Scalar> {
    pub basis: Vec<VectorField5<K>>,
    pub c: Vec<Vec<Vec<K>>>,
}

/// Coordinates of vector fields over `(direction, monomial)` pairs.
struct FieldCoordinates {
    index: BTreeMap<(usize, Monomial), usize>,
}

impl FieldCoordinates {
    fn new<'a, K: Scalar>(fields: impl IntoIterator<Item = &'a VectorField5<K>>) -> Self {
        let mut index = BTreeMap::new();
        for f in fields {
            for (d, p) in f.coeffs.iter().enumerate() {
                for (m, _) in p.terms() {
                    let next = index.len();
                    index.entry((d, m.clone())).or_insert(next);
                }
            }
        }
        FieldCoordinates { index }
    }

    /// `None` when the field uses a pair outside the index.
    fn vector<K: Scalar>(&self, f: &VectorField5<K>) -> Option<Vector<K>> {
        let mut v = vec![K::zero(); self.index.len()];
        for (d, p) in f.coeffs.iter().enumerate() {
            for (m, k) in p.terms() {
                v[*self.index.get(&(d, m.clone()))?] = k.clone();
            }
        }
        Some(v)
    }
}

/// Whether the fields are linearly independent over the constants.
pub fn independent<K: Scalar>(fields: &[VectorField5<K>]) -> bool {
    let coords = FieldCoordinates::new(fields);
    let rows: Matrix<K> = fields.iter().filter_map(|f| coords.vector(f)).collect();
    rank(rows) == fields.len()
}

/// Expresses `target` in terms of `fields` (vector-field parts only).
pub fn express<K: Scalar>(fields: &[VectorField5<K>], target: &VectorField5<K>) -> Option<Vector<K>> {
    let coords = FieldCoordinates::new(fields.iter().chain(std::iter::once(target)));
    let rows: Matrix<K> = fields.iter().map(|f| coords.vector(f).expect("indexed")).collect();
    solve_in_span(&rows, &coords.vector(target).expect("indexed"))
}

/// Structure constants of `basis` by exact expansion of every bracket.
pub fn structure_constants<K: Scalar>(basis: &[VectorField5<K>]) -> Result<LieAlgebra<K>> {
    if !independent(basis) {
        return Err(Error::DependentBasis);
    }
    let n = basis.len();
    let mut c = vec![vec![vec![K::zero(); n]; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let b = commutator(&basis[i], &basis[j]);
            let coeffs = express(basis, &b).ok_or_else(|| Error::NonClosure {
                i: i + 1,
                j: j + 1,
                residual: b.field_string(),
            })?;
            for k in 0..n {
                c[j][i][k] = -coeffs[k].clone();
            }
            c[i][j] = coeffs;
        }
    }
    Ok(LieAlgebra { basis: basis.to_vec(), c })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureExport {
    pub n: usize,
    pub brackets: Vec<BracketEntry>,
}

/// Rational in `p/q` form (integers print without a denominator).
pub fn rational_string<K: Scalar>(k: &K) -> String {
    k.to_string()
}

impl<K: Scalar> LieAlgebra<K> {
    /// Abstract algebra from structure constants alone.
    pub fn from_constants(c: Vec<Vec<Vec<K>>>) -> Self {
        LieAlgebra { basis: Vec::new(), c }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(|k| k.is_zero())
    }

    /// `[u, v]` for coordinate vectors.
    pub fn bracket(&self, u: &[K], v: &[K]) -> Vector<K> {
        let n = self.dim();
        let mut out = vec![K::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let w = u[i].clone() * v[j].clone();
                for k in 0..n {
                    if !self.c[i][j][k].is_zero() {
                        out[k] = out[k].clone() + w.clone() * self.c[i][j][k].clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad u` acting on coordinate columns.
    pub fn ad(&self, u: &[K]) -> Matrix<K> {
        let n = self.dim();
        let cols: Vec<Vector<K>> = (0..n).map(|j| self.bracket(u, &unit(n, j))).collect();
        (0..n).map(|r| (0..n).map(|j| cols[j][r].clone()).collect()).collect()
    }

    pub fn export(&self) -> StructureExport {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.c[i][j].iter().any(|k| !k.is_zero()) {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs: self.c[i][j].iter().map(rational_string).collect(),
                    });
                }
            }
        }
        StructureExport { n, brackets }
    }

    /// `κᵢⱼ = Σ c^m_il c^l_jm`.
    pub fn killing_form(&self) -> Matrix<K> {
        let n = self.dim();
        let mut kappa = vec![vec![K::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut sum = K::zero();
                for m in 0..n {
                    for l in 0..n {
                        let a = &self.c[i][l][m];
                        let b = &self.c[j][m][l];
                        if !a.is_zero() && !b.is_zero() {
                            sum = sum + a.clone() * b.clone();
                        }
                    }
                }
                kappa[j][i] = sum.clone();
                kappa[i][j] = sum;
            }
        }
        kappa
    }

    /// Triples `(i, j, k)` (1-based) that violate the Jacobi identity.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let e = |i| unit::<K>(n, i);
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t1 = self.bracket(&self.bracket(&e(i), &e(j)), &e(k));
                    let t2 = self.bracket(&self.bracket(&e(j), &e(k)), &e(i));
                    let t3 = self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    let zero = (0..n).all(|l| (t1[l].clone() + t2[l].clone() + t3[l].clone()).is_zero());
                    if !zero {
                        bad.push((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        bad
    }

    /// `κ([x,y], z) + κ(y, [x,z]) = 0` on all basis triples.
    pub fn killing_ad_invariant(&self) -> bool {
        let n = self.dim();
        let kappa = self.killing_form();
        let form = |u: &[K], v: &[K]| {
            let mut s = K::zero();
            for a in 0..n {
                for b in 0..n {
                    if !u[a].is_zero() && !v[b].is_zero() {
                        s = s + u[a].clone() * kappa[a][b].clone() * v[b].clone();
                    }
                }
            }
            s
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (ex, ey, ez) = (unit(n, x), unit(n, y), unit(n, z));
                    let lhs = form(&self.bracket(&ex, &ey), &ez) + form(&ey, &self.bracket(&ex, &ez));
                    if !lhs.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `span{[u, v] : u ∈ a, v ∈ b}`.
    pub fn bracket_span(&self, a: &SubspaceQ<K>, b: &SubspaceQ<K>) -> SubspaceQ<K> {
        let mut out = Vec::new();
        for u in a.basis() {
            for v in b.basis() {
                out.push(self.bracket(u, v));
            }
        }
        SubspaceQ::span(self.dim(), out)
    }

    fn series(&self, start: SubspaceQ<K>, step: impl Fn(&SubspaceQ<K>) -> SubspaceQ<K>) -> Vec<SubspaceQ<K>> {
        let mut out = vec![start];
        loop {
            let last = out.last().expect("nonempty");
            if last.dim() == 0 {
                break;
            }
            let next = step(last);
            if next == *last {
                break;
            }
            out.push(next);
        }
        out
    }

    /// `L⁽⁰⁾ = L`, `L⁽ᵏ⁺¹⁾ = [L⁽ᵏ⁾, L⁽ᵏ⁾]`, up to stabilization or zero.
    pub fn derived_series(&self) -> Vec<SubspaceQ<K>> {
        self.derived_series_of(SubspaceQ::full(self.dim()))
    }

    pub fn derived_series_of(&self, s: SubspaceQ<K>) -> Vec<SubspaceQ<K>> {
        self.series(s, |last| self.bracket_span(last, last))
    }

    /// `L₀ = L`, `Lₖ₊₁ = [L, Lₖ]`.
    pub fn lower_central_series(&self) -> Vec<SubspaceQ<K>> {
        let full = SubspaceQ::full(self.dim());
        self.series(full.clone(), |last| self.bracket_span(&full, last))
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.dim() == 0)
    }

    pub fn is_ideal(&self, s: &SubspaceQ<K>) -> bool {
        s.contains_subspace(&self.bracket_span(&SubspaceQ::full(self.dim()), s))
    }

    pub fn is_subalgebra(&self, s: &SubspaceQ<K>) -> bool {
        s.contains_subspace(&self.bracket_span(s, s))
    }

    /// Killing-orthogonal complement of `[L, L]`, re-checked as a solvable
    /// ideal.
    pub fn solvable_radical(&self) -> Result<SubspaceQ<K>> {
        let n = self.dim();
        let kappa = self.killing_form();
        let derived = self.bracket_span(&SubspaceQ::full(n), &SubspaceQ::full(n));
        let constraints: Matrix<K> = derived
            .basis()
            .iter()
            .map(|y| (0..n).map(|a| (0..n).fold(K::zero(), |s, b| s + y[b].clone() * kappa[b][a].clone())).collect())
            .collect();
        let rad = if constraints.is_empty() {
            SubspaceQ::full(n)
        } else {
            SubspaceQ::span(n, nullspace(&constraints, n))
        };
        if !self.is_ideal(&rad) {
            return Err(Error::Internal(format!("radical candidate {rad} is not an ideal")));
        }
        if self.derived_series_of(rad.clone()).last().is_some_and(|s| s.dim() != 0) {
            return Err(Error::Internal(format!("radical candidate {rad} is not solvable")));
        }
        Ok(rad)
    }

    /// Checks that `candidate` is a Levi complement isomorphic to `sl(2)`.
    pub fn levi_check(&self, candidate: &SubspaceQ<K>) -> Result<LeviVerdict<K>> {
        let refuted = |reason: &str| Ok(LeviVerdict::Refuted(reason.to_string()));
        if candidate.dim() != 3 {
            return refuted("candidate is not three-dimensional");
        }
        if !self.is_subalgebra(candidate) {
            return refuted("candidate is not closed under the bracket");
        }
        let rad = self.solvable_radical()?;
        if candidate.intersection_dim(&rad) != 0 {
            return refuted("candidate meets the radical");
        }
        if candidate.sum(&rad).dim() != self.dim() {
            return refuted("candidate and radical do not span the algebra");
        }
        match self.sl2_triple(candidate) {
            Some(t) => Ok(LeviVerdict::Sl2(t)),
            None => refuted("no element with ad-eigenvalues {-2, 0, 2}"),
        }
    }

    /// Searches small integer combinations for a semisimple `h` and builds
    /// a standard triple.
    pub fn sl2_triple(&self, candidate: &SubspaceQ<K>) -> Option<Sl2Triple<K>> {
        let b = candidate.basis();
        if b.len() != 3 {
            return None;
        }
        let local = |v: &[K]| solve_in_span(b, v);
        let combine = |w: &[K]| -> Vector<K> {
            (0..self.dim()).map(|k| (0..3).fold(K::zero(), |s, i| s + w[i].clone() * b[i][k].clone())).collect()
        };
        let mut coeffs: Vec<[i64; 3]> = Vec::new();
        for a in -2..=2 {
            for c in -2..=2 {
                for d in -2..=2 {
                    if (a, c, d) != (0, 0, 0) {
                        coeffs.push([a, c, d]);
                    }
                }
            }
        }
        coeffs.sort_by_key(|w| (w.iter().map(|x| x.abs()).sum::<i64>(), *w));
        for w in coeffs {
            let wk: Vec<K> = w.iter().map(|&x| K::from_int(x)).collect();
            let h = combine(&wk);
            // ad h restricted to the candidate, columns in local coordinates.
            let cols: Option<Vec<Vector<K>>> = b.iter().map(|bj| local(&self.bracket(&h, bj))).collect();
            let cols = cols?;
            let m: Matrix<K> = (0..3).map(|r| (0..3).map(|j| cols[j][r].clone()).collect()).collect();
            let trace = m[0][0].clone() + m[1][1].clone() + m[2][2].clone();
            let det = det3(&m);
            let minors = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
                + m[0][0].clone() * m[2][2].clone()
                - m[0][2].clone() * m[2][0].clone()
                + m[1][1].clone() * m[2][2].clone()
                - m[1][2].clone() * m[2][1].clone();
            if !trace.is_zero() || !det.is_zero() || minors.is_zero() {
                continue;
            }
            // Characteristic polynomial λ³ + minors·λ, so the roots are ±r.
            let Some(r) = (-minors).sqrt_exact() else { continue };
            let scale = K::from_int(2) / r;
            let h2: Vector<K> = h.iter().map(|x| x.clone() * scale.clone()).collect();
            let m2: Matrix<K> = m.iter().map(|row| row.iter().map(|x| x.clone() * scale.clone()).collect()).collect();
            let eigen = |lambda: K| -> Option<Vector<K>> {
                let shifted: Matrix<K> = (0..3)
                    .map(|i| (0..3).map(|j| if i == j { m2[i][j].clone() - lambda.clone() } else { m2[i][j].clone() }).collect())
                    .collect();
                nullspace(&shifted, 3).into_iter().next().map(|v| combine(&v))
            };
            let e = eigen(K::from_int(2))?;
            let f = eigen(K::from_int(-2))?;
            let ef = self.bracket(&e, &f);
            let ratio = local(&ef).and_then(|loc| {
                let hloc = local(&h2)?;
                let p = (0..3).find(|&i| !hloc[i].is_zero())?;
                let ratio = loc[p].clone() / hloc[p].clone();
                (0..3).all(|i| loc[i] == ratio.clone() * hloc[i].clone()).then_some(ratio)
            })?;
            if ratio.is_zero() {
                continue;
            }
            let f: Vector<K> = f.iter().map(|x| x.clone() / ratio.clone()).collect();
            let triple = Sl2Triple { e, h: h2, f };
            if self.is_standard_triple(&triple) {
                return Some(triple);
            }
        }
        None
    }

    pub fn is_standard_triple(&self, t: &Sl2Triple<K>) -> bool {
        let two = K::from_int(2);
        let scaled = |v: &[K], k: &K| v.iter().map(|x| x.clone() * k.clone()).collect::<Vector<K>>();
        self.bracket(&t.h, &t.e) == scaled(&t.e, &two)
            && self.bracket(&t.h, &t.f) == scaled(&t.f, &-two.clone())
            && self.bracket(&t.e, &t.f) == t.h
    }
}

fn det3<K: Scalar>(m: &Matrix<K>) -> K {
    let t = |a: usize, b: usize, c: usize| m[0][a].clone() * m[1][b].clone() * m[2][c].clone();
    t(0, 1, 2) + t(1, 2, 0) + t(2, 0, 1) - t(2, 1, 0) - t(0, 2, 1) - t(1, 0, 2)
}

/// `[h, e] = 2e`, `[h, f] = −2f`, `[e, f] = h`, as coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple<K> {
    pub e: Vector<K>,
    pub h: Vector<K>,
    pub f: Vector<K>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LeviVerdict<K> {
    Sl2(Sl2Triple<K>),
    Refuted(String),
}

impl<K> LeviVerdict<K> {
    pub fn is_sl2(&self) -> bool {
        matches!(self, LeviVerdict::Sl2(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type V = VectorField5<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn v(c: [&str; 5]) -> V {
        V::parse(c, "0").unwrap()
    }

    /// Standard sl(2) as {e, h, f} with [h,e]=2e, [h,f]=-2f, [e,f]=h.
    fn sl2() -> LieAlgebra<Rational> {
        let mut c = vec![vec![vec![q(0); 3]; 3]; 3];
        let set = |c: &mut Vec<Vec<Vec<Rational>>>, i: usize, j: usize, k: usize, x: i64| {
            c[i][j][k] = q(x);
            c[j][i][k] = q(-x);
        };
        set(&mut c, 1, 0, 0, 2);
        set(&mut c, 1, 2, 2, -2);
        set(&mut c, 0, 2, 1, 1);
        LieAlgebra::from_constants(c)
    }

    #[test]
    fn affine_line() {
        let alg = structure_constants(&[v(["0", "0", "1", "0", "0"]), v(["0", "0", "x", "0", "0"])]).unwrap();
        assert_eq!(alg.c[0][1], vec![q(1), q(0)]);
        assert_eq!(alg.c[1][0], vec![q(-1), q(0)]);
        let series: Vec<usize> = alg.derived_series().iter().map(SubspaceQ::dim).collect();
        assert_eq!(series, vec![2, 1, 0]);
    }

    #[test]
    fn closure_and_dependence_errors() {
        let r = structure_constants(&[v(["0", "0", "1", "0", "0"]), v(["0", "0", "x^2", "0", "0"])]);
        assert!(matches!(r, Err(Error::NonClosure { i: 1, j: 2, .. })));
        let r = structure_constants(&[v(["0", "0", "1", "0", "0"]), v(["0", "0", "2", "0", "0"])]);
        assert_eq!(r.unwrap_err(), Error::DependentBasis);
    }

    #[test]
    fn sl2_killing_form_and_levi() {
        let alg = sl2();
        let k = alg.killing_form();
        assert_eq!(k[1][1], q(8));
        assert_eq!(k[0][2], q(4));
        assert_eq!(k[0][0], q(0));
        assert_eq!(k[2][2], q(0));
        assert!(alg.jacobi_violations().is_empty());
        assert!(alg.killing_ad_invariant());
        assert_eq!(alg.solvable_radical().unwrap().dim(), 0);
        let dims: Vec<usize> = alg.derived_series().iter().map(SubspaceQ::dim).collect();
        assert_eq!(dims, vec![3]);
        assert!(alg.levi_check(&SubspaceQ::full(3)).unwrap().is_sl2());
    }

    #[test]
    fn vector_field_sl2() {
        // ∂x, x∂x, x²∂x realize sl(2) on the line.
        let alg = structure_constants(&[
            v(["0", "0", "1", "0", "0"]),
            v(["0", "0", "x", "0", "0"]),
            v(["0", "0", "x^2", "0", "0"]),
        ])
        .unwrap();
        assert!(!alg.is_solvable());
        match alg.levi_check(&SubspaceQ::full(3)).unwrap() {
            LeviVerdict::Sl2(t) => assert!(alg.is_standard_triple(&t)),
            LeviVerdict::Refuted(r) => panic!("{r}"),
        }
    }

    #[test]
    fn abelian_triple_is_not_sl2() {
        let alg = structure_constants(&[
            v(["1", "0", "0", "0", "0"]),
            v(["0", "1", "0", "0", "0"]),
            v(["0", "0", "0", "1", "0"]),
        ])
        .unwrap();
        assert!(alg.is_abelian());
        assert!(alg.killing_form().iter().flatten().all(|k| *k == q(0)));
        assert_eq!(alg.solvable_radical().unwrap().dim(), 3);
        let full = SubspaceQ::full(3);
        assert!(matches!(alg.levi_check(&full).unwrap(), LeviVerdict::Refuted(_)));
        assert!(alg.sl2_triple(&full).is_none());
    }

    #[test]
    fn heisenberg_lower_central_series() {
        let alg = structure_constants(&[
            v(["0", "0", "1", "z", "0"]),
            v(["0", "0", "0", "0", "-1"]),
            v(["0", "0", "0", "1", "0"]),
        ])
        .unwrap();
        let dims: Vec<usize> = alg.lower_central_series().iter().map(SubspaceQ::dim).collect();
        assert_eq!(dims, vec![3, 1, 0]);
        assert_eq!(alg.export().brackets, vec![BracketEntry { i: 1, j: 2, coeffs: vec!["0".into(), "0".into(), "1".into()] }]);
    }
}
