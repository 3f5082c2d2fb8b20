//! Exact Gaussian elimination and subspaces in reduced row-echelon form.

use std::fmt;

use crate::scalar::Scalar;

pub type Vector<K> = Vec<K>;
pub type Matrix<K> = Vec<Vec<K>>;

/// Reduced row-echelon form; returns the nonzero rows and their pivot
/// columns.
pub fn rref<K: Scalar>(mut rows: Matrix<K>) -> (Matrix<K>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = K::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..ncols {
                    let delta = factor.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<K: Scalar>(rows: Matrix<K>) -> usize {
    rref(rows).0.len()
}

/// Coefficients `c` with `Σ cᵢ basis[i] = target`, if any.
pub fn solve_in_span<K: Scalar>(basis: &[Vector<K>], target: &[K]) -> Option<Vector<K>> {
    let n = basis.len();
    // Columns are the basis vectors; last column is the target.
    let m = target.len();
    let rows: Matrix<K> = (0..m)
        .map(|r| basis.iter().map(|b| b[r].clone()).chain(std::iter::once(target[r].clone())).collect())
        .collect();
    let (red, pivots) = rref(rows);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut out = vec![K::zero(); n];
    for (row, &p) in red.iter().zip(&pivots) {
        out[p] = row[n].clone();
    }
    Some(out)
}

/// Basis of `{v : M v = 0}`.
pub fn nullspace<K: Scalar>(m: &Matrix<K>, ncols: usize) -> Vec<Vector<K>> {
    let (red, pivots) = rref(m.clone());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![K::zero(); ncols];
            v[f] = K::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec<K: Scalar>(m: &Matrix<K>, v: &[K]) -> Vector<K> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn dot<K: Scalar>(a: &[K], b: &[K]) -> K {
    a.iter().zip(b).fold(K::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn unit<K: Scalar>(n: usize, i: usize) -> Vector<K> {
    let mut v = vec![K::zero(); n];
    v[i] = K::one();
    v
}

/// A subspace of `Kⁿ` held in canonical reduced row-echelon form.
#[derive(Clone, PartialEq, Debug)]
pub struct SubspaceQ<K: Scalar> {
    ambient: usize,
    rows: Matrix<K>,
}

impl<K: Scalar> SubspaceQ<K> {
    pub fn zero(ambient: usize) -> Self {
        SubspaceQ { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceQ::span(ambient, (0..ambient).map(|i| unit(ambient, i)))
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vector<K>>) -> Self {
        let rows: Matrix<K> = vectors.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
        if rows.is_empty() {
            return SubspaceQ::zero(ambient);
        }
        SubspaceQ { ambient, rows: rref(rows).0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector<K>] {
        &self.rows
    }

    pub fn contains(&self, v: &[K]) -> bool {
        solve_in_span(&self.rows, v).is_some()
    }

    pub fn contains_subspace(&self, other: &SubspaceQ<K>) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &SubspaceQ<K>) -> Self {
        SubspaceQ::span(self.ambient, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn intersection_dim(&self, other: &SubspaceQ<K>) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

impl<K: Scalar> fmt::Display for SubspaceQ<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("span{")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let terms: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| if c.is_one() { format!("X{}", k + 1) } else { format!("{c}*X{}", k + 1) })
                .collect();
            f.write_str(&terms.join(" + "))?;
        }
        f.write_str("}")
    }
}
