//! Sparse exact linear algebra: row echelon, kernels, rank and span
//! membership, plus a dense inverse and characteristic polynomial for small
//! matrices.
//!
//! The kernel and rank routines are written for the invariant-subspace
//! solves, which are run over exact rationals; they work for any [`Scalar`]
//! but do no pivot-magnitude selection, so the float path should only be
//! used for well-conditioned probes.

use std::collections::BTreeMap;

use crate::error::{GeomError, Result};
use crate::linmap::LinMap;
use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices with nonzero coefficients.
pub type SparseVec<S> = Vec<(usize, S)>;

pub fn sparse_from_dense<S: Scalar>(dense: &[S]) -> SparseVec<S> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn sparse_to_dense<S: Scalar>(v: &SparseVec<S>, dim: usize) -> Vec<S> {
    let mut out = vec![S::zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

fn sparse_axpy<S: Scalar>(target: &SparseVec<S>, factor: &S, source: &SparseVec<S>) -> SparseVec<S> {
    // target + factor·source, merged
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0usize, 0usize);
    while a < target.len() || b < source.len() {
        let pick_a = b >= source.len() || (a < target.len() && target[a].0 < source[b].0);
        let pick_b = a >= target.len() || (b < source.len() && source[b].0 < target[a].0);
        if pick_a {
            out.push(target[a].clone());
            a += 1;
        } else if pick_b {
            let v = factor.clone() * source[b].1.clone();
            if !v.is_zero() {
                out.push((source[b].0, v));
            }
            b += 1;
        } else {
            let v = target[a].1.clone() + factor.clone() * source[b].1.clone();
            if !v.is_zero() {
                out.push((target[a].0, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

/// Incremental row-echelon accumulator keyed by pivot column.
pub struct Echelon<S: Scalar> {
    /// pivot column → row with leading coefficient 1 at that column
    rows: BTreeMap<usize, SparseVec<S>>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    /// Reduce `row` against the accumulated pivots; the returned residual is
    /// either empty or has a leading column that is not yet a pivot.
    pub fn reduce(&self, mut row: SparseVec<S>) -> SparseVec<S> {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return row;
            };
            let Some(pivot_row) = self.rows.get(&lead) else {
                return row;
            };
            row = sparse_axpy(&row, &(-coeff), pivot_row);
        }
    }

    /// Insert a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseVec<S>) -> bool {
        let residual = self.reduce(row);
        let Some((lead, coeff)) = residual.first().cloned() else {
            return false;
        };
        let normalized: SparseVec<S> = residual
            .into_iter()
            .map(|(i, v)| (i, v / coeff.clone()))
            .collect();
        self.rows.insert(lead, normalized);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Does `v` lie in the row span?
    pub fn contains(&self, v: SparseVec<S>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Kernel of the matrix whose rows were inserted, as vectors in the
    /// `ncols`-dimensional domain (one basis vector per free column).
    pub fn kernel(&self, ncols: usize) -> Vec<SparseVec<S>> {
        let pivot_cols: Vec<usize> = self.rows.keys().copied().collect();
        let is_pivot = |c: usize| self.rows.contains_key(&c);
        let mut basis = Vec::new();
        for free in 0..ncols {
            if is_pivot(free) {
                continue;
            }
            let mut x: BTreeMap<usize, S> = BTreeMap::new();
            x.insert(free, S::one());
            // back-substitute pivot variables in descending column order
            for &p in pivot_cols.iter().rev() {
                let row = &self.rows[&p];
                let mut acc = S::zero();
                for (c, coeff) in row.iter().skip(1) {
                    if let Some(xc) = x.get(c) {
                        acc = acc + coeff.clone() * xc.clone();
                    }
                }
                if !acc.is_zero() {
                    x.insert(p, -acc);
                }
            }
            basis.push(x.into_iter().collect());
        }
        basis
    }
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// Rank of a collection of sparse vectors.
pub fn rank<S: Scalar>(vectors: &[SparseVec<S>]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}

/// Is `v` in the span of `basis`?
pub fn in_span<S: Scalar>(basis: &[SparseVec<S>], v: &SparseVec<S>) -> bool {
    let mut ech = Echelon::new();
    for b in basis {
        ech.insert(b.clone());
    }
    ech.contains(v.clone())
}

/// Kernel of a linear map `domain → codomain` given by the images of the
/// domain basis vectors (`column(j)` = image of `e_j`), as sparse vectors in
/// the domain.
pub fn kernel_of_map<S: Scalar>(
    ncols: usize,
    nrows: usize,
    column: impl Fn(usize) -> SparseVec<S>,
) -> Vec<SparseVec<S>> {
    // scatter columns into rows
    let mut rows: Vec<SparseVec<S>> = vec![Vec::new(); nrows];
    for j in 0..ncols {
        for (i, v) in column(j) {
            assert!(i < nrows, "row index out of bounds");
            rows[i].push((j, v));
        }
    }
    let mut ech = Echelon::new();
    for row in rows {
        // column scatter preserves ascending j order
        ech.insert(row);
    }
    ech.kernel(ncols)
}

/// Joint kernel of several maps on the same domain, computed by iteratively
/// restricting each map to the kernel of the previous ones.
pub fn joint_kernel<S: Scalar>(
    ncols: usize,
    nrows: usize,
    maps: &[&dyn Fn(usize) -> SparseVec<S>],
) -> Vec<SparseVec<S>> {
    let Some((first, rest)) = maps.split_first() else {
        // no constraints: the full space
        return (0..ncols).map(|j| vec![(j, S::one())]).collect();
    };
    let mut basis = kernel_of_map(ncols, nrows, first);
    for map in rest {
        if basis.is_empty() {
            return basis;
        }
        // restrict: images of the current basis vectors
        let images: Vec<SparseVec<S>> = basis
            .iter()
            .map(|b| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (j, coeff) in b {
                    for (i, v) in map(*j) {
                        let entry = acc.remove(&i).unwrap_or_else(S::zero) + coeff.clone() * v;
                        if !entry.is_zero() {
                            acc.insert(i, entry);
                        }
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        let coeff_kernel = kernel_of_map(basis.len(), nrows, |j| images[j].clone());
        basis = coeff_kernel
            .iter()
            .map(|combo| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (j, c) in combo {
                    for (idx, v) in &basis[*j] {
                        let entry = acc.remove(idx).unwrap_or_else(S::zero) + c.clone() * v.clone();
                        if !entry.is_zero() {
                            acc.insert(*idx, entry);
                        }
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
    }
    basis
}

/// Dense inverse by Gauss–Jordan elimination; errors if singular.
pub fn invert<S: Scalar>(m: &LinMap<S>) -> Result<LinMap<S>> {
    let n = m.dim();
    let mut a: Vec<Vec<S>> = (0..n)
        .map(|r| (0..n).map(|c| m.entry(r, c).clone()).collect())
        .collect();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|r| (0..n).map(|c| if r == c { S::one() } else { S::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else {
            return Err(GeomError::Structure("singular matrix in invert".into()));
        };
        a.swap(col, p);
        inv.swap(col, p);
        let d = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / d.clone();
            inv[col][j] = inv[col][j].clone() / d.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let sub_a = f.clone() * a[col][j].clone();
                a[r][j] = a[r][j].clone() - sub_a;
                let sub_i = f.clone() * inv[col][j].clone();
                inv[r][j] = inv[r][j].clone() - sub_i;
            }
        }
    }
    let mut out = LinMap::zero(n);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, inv[r][c].clone());
        }
    }
    Ok(out)
}

/// Characteristic polynomial by the Faddeev–LeVerrier recursion.
/// Returns coefficients `[c_0, …, c_n]` of `c_0 + c_1 x + … + c_n x^n`
/// with `c_n = 1`.
pub fn char_poly<S: Scalar>(m: &LinMap<S>) -> Vec<S> {
    let n = m.dim();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut mk = m.clone(); // M_1 = M
    for k in 1..=n {
        let ck = -(mk.trace() / S::from_int(k as i64));
        coeffs[n - k] = ck.clone();
        if k < n {
            let mut shifted = mk.clone();
            for i in 0..n {
                let v = shifted.entry(i, i).clone() + ck.clone();
                shifted.set(i, i, v);
            }
            mk = m.compose(&shifted);
        }
    }
    coeffs
}
