//! Sparse exterior algebra over a low-dimensional real vector space.
//!
//! A k-form is stored as a map from index bitmasks (bit `i` = basis covector
//! `e^i`, indices strictly increasing) to coefficients. Evaluation follows
//! the determinant convention with no factorial weights:
//! `(e^1∧…∧e^k)(v_1,…,v_k) = det[e^i(v_j)]`, so for one-forms
//! `(a∧b)(X,Y) = a(X)b(Y) − a(Y)b(X)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{GeomError, Result};
use crate::scalar::Scalar;

/// Alternating k-form on an n-dimensional space, sparse over basis monomials.
#[derive(Clone, PartialEq)]
pub struct AltForm<S: Scalar> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u32, S>,
}

/// Sign of the permutation that merges two disjoint ascending index sets:
/// `(−1)^t` where `t` counts pairs `(i ∈ lhs, j ∈ rhs)` with `i > j`.
fn merge_sign(lhs: u32, rhs: u32) -> i64 {
    let mut transpositions = 0u32;
    let mut r = rhs;
    while r != 0 {
        let j = r.trailing_zeros();
        transpositions += (lhs >> (j + 1)).count_ones();
        r &= r - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<S: Scalar> AltForm<S> {
    /// The zero k-form.
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= 32, "index masks are 32-bit");
        assert!(degree <= dim);
        AltForm { dim, degree, coeffs: BTreeMap::new() }
    }

    /// The basis one-form `e^index`.
    pub fn one_form(dim: usize, index: usize) -> Self {
        let mut f = AltForm::zero(dim, 1);
        f.add_term(1 << index, S::one());
        f
    }

    /// The scalar `value` as a 0-form.
    pub fn constant(dim: usize, value: S) -> Self {
        let mut f = AltForm::zero(dim, 0);
        f.add_term(0, value);
        f
    }

    /// Monomial `coeff · e^{i_1}∧…∧e^{i_k}` with arbitrary index order;
    /// repeated indices give zero, out-of-order indices contribute the
    /// permutation sign.
    pub fn monomial(dim: usize, indices: &[usize], coeff: S) -> Self {
        let mut f = AltForm::zero(dim, indices.len());
        let mut mask = 0u32;
        let mut sign = 1i64;
        for &i in indices {
            assert!(i < dim, "index out of range");
            let bit = 1u32 << i;
            if mask & bit != 0 {
                return f; // repeated index
            }
            sign *= merge_sign(mask, bit);
            mask |= bit;
        }
        f.add_term(mask, coeff * S::from_int(sign));
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Add `coeff` to the monomial `mask`, dropping exact zeros.
    pub fn add_term(&mut self, mask: u32, coeff: S) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        debug_assert!(self.dim == 32 || mask >> self.dim == 0, "mask outside space");
        let entry = self.coeffs.remove(&mask);
        let sum = match entry {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.coeffs.insert(mask, sum);
        }
    }

    /// Coefficient of the ascending monomial `mask` (zero if absent).
    pub fn coeff(&self, mask: u32) -> S {
        self.coeffs.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Iterate stored `(mask, coefficient)` pairs in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient magnitude, as f64 (0.0 for the zero form).
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// All coefficients vanish at tolerance `tol` (exact test for exact scalars).
    pub fn approx_zero(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.approx_zero(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).approx_zero(tol)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::from_int(-1))
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = AltForm::zero(self.dim, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (m, c) in self.terms() {
            out.add_term(m, c.clone() * factor.clone());
        }
        out
    }

    /// Exterior product. Errors on mismatched dimensions or if the degrees
    /// sum past the dimension of the space (where the result is trivially 0
    /// but almost certainly a caller bug).
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(GeomError::Dimension(format!(
                "wedge of forms on spaces of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        if self.degree + other.degree > self.dim {
            return Err(GeomError::Degree(format!(
                "wedge degree {} + {} exceeds dimension {}",
                self.degree, other.degree, self.dim
            )));
        }
        let mut out = AltForm::zero(self.dim, self.degree + other.degree);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                out.add_term(ma | mb, ca.clone() * cb.clone() * S::from_int(sign));
            }
        }
        Ok(out)
    }

    /// Interior product (contraction in the first slot) with the vector `v`,
    /// given by its components in the basis. Errors on 0-forms.
    pub fn interior(&self, v: &[S]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(GeomError::Dimension(format!(
                "vector of length {} contracted into form on dimension {}",
                v.len(),
                self.dim
            )));
        }
        if self.degree == 0 {
            return Err(GeomError::Degree("interior product of a 0-form".into()));
        }
        let mut out = AltForm::zero(self.dim, self.degree - 1);
        for (mask, c) in self.terms() {
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                if v[i].is_zero() {
                    continue;
                }
                // e^i sits at position (# smaller indices in mask); removing it
                // costs that many transpositions.
                let pos = (mask & ((1u32 << i) - 1)).count_ones();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                out.add_term(mask & !(1u32 << i), c.clone() * v[i].clone() * S::from_int(sign));
            }
        }
        Ok(out)
    }

    /// Evaluate on `k` vectors (each given by components). Determinant
    /// convention, no factorial normalization.
    pub fn eval(&self, vectors: &[&[S]]) -> Result<S> {
        if vectors.len() != self.degree {
            return Err(GeomError::Degree(format!(
                "{}-form evaluated on {} vectors",
                self.degree,
                vectors.len()
            )));
        }
        for v in vectors {
            if v.len() != self.dim {
                return Err(GeomError::Dimension("vector length != form dimension".into()));
            }
        }
        if self.degree == 0 {
            return Ok(self.coeff(0));
        }
        let k = self.degree;
        let mut total = S::zero();
        for (mask, c) in self.terms() {
            // minor[r][s] = e^{i_r}(v_s) for ascending indices i_r of mask
            let mut minor = Vec::with_capacity(k * k);
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                for v in vectors {
                    minor.push(v[i].clone());
                }
            }
            total = total + c.clone() * det(&mut minor, k);
        }
        Ok(total)
    }

    /// Relabel basis indices by the permutation `perm` (`e^i ↦ e^{perm[i]}`),
    /// re-sorting monomials with the induced sign.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut out = AltForm::zero(self.dim, self.degree);
        for (mask, c) in self.terms() {
            let mut indices = Vec::with_capacity(self.degree);
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                indices.push(perm[i]);
            }
            let relabeled = AltForm::monomial(self.dim, &indices, c.clone());
            out = out.add(&relabeled);
        }
        out
    }

    /// Pullback `α(A·, …, A·)` along the matrix with rows `row(i) = A*(e^i)`.
    /// `rows[i][j]` is the coefficient of `e^j` in the pullback of `e^i`.
    pub fn pullback_rows(&self, rows: &[Vec<S>]) -> Self {
        assert_eq!(rows.len(), self.dim);
        let mut out = AltForm::zero(self.dim, self.degree);
        for (mask, c) in self.terms() {
            let mut acc = AltForm::constant(self.dim, c.clone());
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                let mut row_form = AltForm::zero(self.dim, 1);
                for (j, entry) in rows[i].iter().enumerate() {
                    if !entry.is_zero() {
                        row_form.add_term(1 << j, entry.clone());
                    }
                }
                acc = acc.wedge(&row_form).expect("degree bounded by original form");
            }
            out = out.add(&acc);
        }
        out
    }

    /// Render with custom index labels, e.g. `-1/2 a∧b + c∧q`.
    pub fn display_with(&self, labels: &[&str]) -> String {
        assert_eq!(labels.len(), self.dim);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (mask, c) in self.terms() {
            let mut names = Vec::new();
            let mut m = mask;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                names.push(labels[i]);
            }
            let mono = if names.is_empty() {
                "1".to_string()
            } else {
                names.join("∧")
            };
            parts.push(format!("({}) {}", c, mono));
        }
        parts.join(" + ")
    }
}

/// Extend an operator given on one-forms (`images[i]` = image of `e^i`) to a
/// derivation on forms: `odd` inserts Koszul signs (exterior-derivative-like,
/// raising degree by the images' degree minus one), even extensions act like
/// Lie derivatives (degree preserved when the images are one-forms).
pub fn extend_derivation<S: Scalar>(
    form: &AltForm<S>,
    images: &[AltForm<S>],
    odd: bool,
) -> Result<AltForm<S>> {
    let dim = form.dim();
    let image_degree = images.first().map_or(1, |f| f.degree());
    let out_degree = form.degree() + image_degree - 1;
    if out_degree > dim {
        // the result degree overflows the space: it is necessarily zero
        return Ok(AltForm::zero(dim, dim));
    }
    let mut acc = AltForm::zero(dim, out_degree);
    for (mask, coeff) in form.terms() {
        let idx = bit_indices(mask);
        for t in 0..idx.len() {
            let prefix = AltForm::monomial(dim, &idx[..t], S::one());
            let suffix = AltForm::monomial(dim, &idx[t + 1..], S::one());
            let replaced = prefix.wedge(&images[idx[t]])?.wedge(&suffix)?;
            let signed = if odd && t % 2 == 1 { replaced.neg() } else { replaced };
            acc = acc.add(&signed.scale(coeff));
        }
    }
    Ok(acc)
}

/// Ascending list of set bit positions.
pub(crate) fn bit_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Determinant of a k×k matrix (row-major, consumed) by Gaussian elimination.
fn det<S: Scalar>(mat: &mut [S], k: usize) -> S {
    debug_assert_eq!(mat.len(), k * k);
    let mut sign_flip = false;
    let mut result = S::one();
    for col in 0..k {
        // pick a pivot: largest |entry| keeps the float path stable and is
        // harmless for exact scalars.
        let mut pivot = None;
        let mut best = 0.0f64;
        for row in col..k {
            let mag = mat[row * k + col].to_f64().abs();
            if !mat[row * k + col].is_zero() && (pivot.is_none() || mag > best) {
                pivot = Some(row);
                best = mag;
            }
        }
        let Some(p) = pivot else { return S::zero() };
        if p != col {
            for j in 0..k {
                mat.swap(col * k + j, p * k + j);
            }
            sign_flip = !sign_flip;
        }
        let d = mat[col * k + col].clone();
        result = result * d.clone();
        for row in (col + 1)..k {
            if mat[row * k + col].is_zero() {
                continue;
            }
            let factor = mat[row * k + col].clone() / d.clone();
            for j in col..k {
                let sub = factor.clone() * mat[col * k + j].clone();
                mat[row * k + j] = mat[row * k + j].clone() - sub;
            }
        }
    }
    if sign_flip {
        -result
    } else {
        result
    }
}

impl<S: Scalar> fmt::Debug for AltForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AltForm(dim={}, k={}, ", self.dim, self.degree)?;
        let mut first = true;
        for (mask, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})e[{:b}]", c, mask)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}
