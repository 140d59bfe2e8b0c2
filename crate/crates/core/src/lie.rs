//! The rank-3 special orthogonal Lie algebra on R⁷, split against the
//! stabilizer of a point on the 6-sphere together with a compatible complex
//! structure on its tangent space.
//!
//! Basis of R⁷: `f0` (the fixed direction) and three complex pairs
//! `f1, f2, f3, f1', f2', f3'`. The unitary stabilizer subalgebra is spanned
//! by eight special-unitary generators plus the central rotation `E` that
//! turns each pair `(fk, fk')` by a quarter turn. Its reductive complement
//! `m` is 12-dimensional and carries the coframe
//!
//! ```text
//! a  b  c  a' b' c'   — motions of f0 toward f1..f3, f1'..f3'
//! p  q  r  p' q' r'   — anti-diagonal rotations of the complex pairs
//! ```
//!
//! Everything downstream (differentials, connection, curvature, torsion) is
//! driven by the structure constants computed here from 7×7 matrix
//! commutators, so a single sign convention is fixed once: `angle(i, j)`
//! maps `f_i ↦ f_j ↦ -f_i`, and brackets are `XY - YX`.

use std::collections::BTreeMap;

use crate::error::{GeomError, Result};
use crate::exterior::{bit_indices, extend_derivation, AltForm};
use crate::linalg::{self, SparseVec};
use crate::linmap::LinMap;
use crate::scalar::{Rational, Scalar};

/// Dimension of the full Lie algebra.
pub const DIM_G: usize = 21;
/// Dimension of the unitary stabilizer (isotropy) subalgebra.
pub const DIM_H: usize = 9;
/// Dimension of the reductive complement `m`.
pub const DIM_M: usize = 12;
/// Dimension of `m ⊕ R·E`, the complement for the special-unitary quotient.
pub const DIM_N: usize = 13;
/// Position of the central rotation `E` in the full basis.
pub const E_INDEX: usize = 9 - 1;
/// Full-basis position of the first `m` element.
pub const M_OFFSET: usize = DIM_H;

/// Coframe labels for `m`, in coordinate order.
pub const M_COFRAME: [&str; DIM_M] = [
    "a", "b", "c", "a'", "b'", "c'", "p", "q", "r", "p'", "q'", "r'",
];
/// Coframe labels for `m ⊕ R·E` (the extra one-form is dual to `E`).
pub const N_COFRAME: [&str; DIM_N] = [
    "a", "b", "c", "a'", "b'", "c'", "p", "q", "r", "p'", "q'", "r'", "e",
];
/// Labels for the full basis.
pub const FULL_LABELS: [&str; DIM_G] = [
    "su1", "su2", "su3", "su4", "su5", "su6", "su7", "su8", "E", "A", "B", "C", "A'", "B'", "C'",
    "P", "Q", "R", "P'", "Q'", "R'",
];

/// Which homogeneous quotient a form lives on: by the full unitary
/// stabilizer (12 coordinates) or by its special-unitary part (13
/// coordinates, the last being dual to `E`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Space {
    U3Quotient,
    Su3Quotient,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::U3Quotient => DIM_M,
            Space::Su3Quotient => DIM_N,
        }
    }

    /// Number of isotropy generators whose action must vanish on an
    /// invariant form (the special-unitary quotient keeps `E` out).
    pub fn isotropy_count(self) -> usize {
        match self {
            Space::U3Quotient => DIM_H,
            Space::Su3Quotient => DIM_H - 1,
        }
    }

    pub fn coframe(self) -> &'static [&'static str] {
        match self {
            Space::U3Quotient => &M_COFRAME,
            Space::Su3Quotient => &N_COFRAME,
        }
    }

    /// Full-basis index of the `i`-th coordinate direction.
    fn full_index(self, i: usize) -> usize {
        if self == Space::Su3Quotient && i == DIM_M {
            E_INDEX
        } else {
            M_OFFSET + i
        }
    }

    /// Coordinate index of a full-basis element, if it lies in the space.
    fn coord_of_full(self, full: usize) -> Option<usize> {
        if full >= M_OFFSET {
            Some(full - M_OFFSET)
        } else if self == Space::Su3Quotient && full == E_INDEX {
            Some(DIM_M)
        } else {
            None
        }
    }
}

/// Bracket tables of the reductive split, converted to a chosen scalar type
/// once so the hot paths never touch exact rationals unless asked to.
pub struct BracketTable<S: Scalar> {
    /// `m`-component of `[m_i, m_j]`, in `m` coordinates.
    pub m_part: Vec<Vec<SparseVec<S>>>,
    /// Isotropy component of `[m_i, m_j]`, in full-basis indices `0..9`.
    pub h_part: Vec<Vec<SparseVec<S>>>,
    /// `ad(h_k)` restricted to `m`, for each isotropy generator `k ∈ 0..9`.
    pub isotropy_on_m: Vec<LinMap<S>>,
}

impl<S: Scalar> BracketTable<S> {
    /// `[x, y]` split into (`m`-part, isotropy part) for vectors in `m`.
    pub fn bracket_m(&self, x: &[S], y: &[S]) -> (Vec<S>, Vec<S>) {
        assert_eq!(x.len(), DIM_M);
        assert_eq!(y.len(), DIM_M);
        let mut m_out = vec![S::zero(); DIM_M];
        let mut h_out = vec![S::zero(); DIM_H];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi.clone() * yj.clone();
                for (k, c) in &self.m_part[i][j] {
                    m_out[*k] = m_out[*k].clone() + f.clone() * c.clone();
                }
                for (k, c) in &self.h_part[i][j] {
                    h_out[*k] = h_out[*k].clone() + f.clone() * c.clone();
                }
            }
        }
        (m_out, h_out)
    }

    /// Action of an isotropy vector (9 coefficients) on `m`.
    pub fn isotropy_rep(&self, h: &[S]) -> LinMap<S> {
        assert_eq!(h.len(), DIM_H);
        let mut out = LinMap::zero(DIM_M);
        for (k, hk) in h.iter().enumerate() {
            if hk.is_zero() {
                continue;
            }
            out = out.add(&self.isotropy_on_m[k].scale(hk));
        }
        out
    }
}

/// The Lie algebra with its fixed basis, structure constants, and the
/// reductive decomposition used by every geometric computation.
pub struct So7 {
    basis: Vec<LinMap<Rational>>,
    /// `consts[i][j]` = coefficients of `[b_i, b_j]` in the full basis.
    consts: Vec<Vec<SparseVec<Rational>>>,
}

/// The elementary rotation `f_i ↦ f_j ↦ -f_i` as a 7×7 matrix.
fn angle(i: usize, j: usize) -> LinMap<Rational> {
    let mut m = LinMap::zero(7);
    m.set(j, i, Rational::one());
    m.set(i, j, -Rational::one());
    m
}

/// The 21 entries below the diagonal of a skew 7×7 matrix, row-scanned by
/// column pairs `(i, j)` with `i < j`; these are coordinates in the
/// `angle(i, j)` basis.
fn skew_coords(m: &LinMap<Rational>) -> Vec<Rational> {
    let mut out = Vec::with_capacity(DIM_G);
    for i in 0..7 {
        for j in (i + 1)..7 {
            out.push(m.entry(j, i).clone());
        }
    }
    out
}

impl So7 {
    pub fn new() -> Self {
        // R⁷ index map: f0 → 0, fk → k, fk' → k + 3 for k = 1, 2, 3.
        let pr = |k: usize| k + 3;

        let mut basis: Vec<LinMap<Rational>> = Vec::with_capacity(DIM_G);

        // Special-unitary part. A complex matrix X + iY acts on the real
        // pairs as the block matrix [[X, -Y], [Y, X]]; skew X gives paired
        // plane rotations, symmetric Y mixes a pair with a primed one.
        for &(j, k) in &[(1usize, 2usize), (1, 3), (2, 3)] {
            basis.push(angle(j, k).add(&angle(pr(j), pr(k))));
        }
        for &(j, k) in &[(1usize, 2usize), (1, 3), (2, 3)] {
            basis.push(angle(j, pr(k)).add(&angle(k, pr(j))));
        }
        // Traceless diagonal part (Y = diag(1,-1,0) and diag(1,1,-2)).
        basis.push(angle(1, pr(1)).sub(&angle(2, pr(2))));
        basis.push(
            angle(1, pr(1))
                .add(&angle(2, pr(2)))
                .sub(&angle(3, pr(3)).scale(&Rational::from_int(2))),
        );
        // Central rotation E = sum of the three quarter turns.
        basis.push(angle(1, pr(1)).add(&angle(2, pr(2))).add(&angle(3, pr(3))));

        // Reductive complement m: first the motions of f0, then the
        // anti-diagonal pair rotations.
        for t in [1, 2, 3, pr(1), pr(2), pr(3)] {
            basis.push(angle(0, t)); // A, B, C, A', B', C'
        }
        basis.push(angle(2, 3).sub(&angle(pr(2), pr(3)))); // P
        basis.push(angle(3, 1).sub(&angle(pr(3), pr(1)))); // Q
        basis.push(angle(1, 2).sub(&angle(pr(1), pr(2)))); // R
        basis.push(angle(2, pr(3)).sub(&angle(3, pr(2)))); // P'
        basis.push(angle(3, pr(1)).sub(&angle(1, pr(3)))); // Q'
        basis.push(angle(1, pr(2)).sub(&angle(2, pr(1)))); // R'

        assert_eq!(basis.len(), DIM_G);
        for b in &basis {
            let transpose_sum: Vec<Rational> = (0..7)
                .flat_map(|r| (0..7).map(move |c| (r, c)))
                .map(|(r, c)| b.entry(r, c).clone() + b.entry(c, r).clone())
                .collect();
            assert!(transpose_sum.iter().all(|v| v.is_zero()), "basis not skew");
        }

        // Change of basis: columns are the skew coordinates of each basis
        // element; inverting it lets us decompose arbitrary commutators.
        let mut change = LinMap::zero(DIM_G);
        for (col, b) in basis.iter().enumerate() {
            for (row, v) in skew_coords(b).into_iter().enumerate() {
                change.set(row, col, v);
            }
        }
        let decompose = linalg::invert(&change).expect("basis spans the algebra");

        let mut consts = vec![vec![SparseVec::new(); DIM_G]; DIM_G];
        for i in 0..DIM_G {
            for j in 0..DIM_G {
                if i == j {
                    continue;
                }
                let comm = basis[i].commutator(&basis[j]);
                let coords = skew_coords(&comm);
                let coeffs = decompose.apply(&coords);
                consts[i][j] = linalg::sparse_from_dense(&coeffs);
                // verify the decomposition reproduces the commutator
                let mut rebuilt = LinMap::zero(7);
                for (k, c) in &consts[i][j] {
                    rebuilt = rebuilt.add(&basis[*k].scale(c));
                }
                assert_eq!(rebuilt, comm, "bracket decomposition failed");
            }
        }

        So7 { basis, consts }
    }

    pub fn basis_matrix(&self, i: usize) -> &LinMap<Rational> {
        &self.basis[i]
    }

    /// `[b_i, b_j]` as coefficients in the full basis.
    pub fn bracket_coeffs(&self, i: usize, j: usize) -> &SparseVec<Rational> {
        &self.consts[i][j]
    }

    /// Bracket of full-basis coefficient vectors.
    pub fn bracket_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), DIM_G);
        assert_eq!(y.len(), DIM_G);
        let mut out = vec![Rational::zero(); DIM_G];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi.clone() * yj.clone();
                for (k, c) in &self.consts[i][j] {
                    out[*k] = out[*k].clone() + f.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Verify the Jacobi identity on all basis triples.
    pub fn jacobi_holds(&self) -> bool {
        let unit = |i: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); DIM_G];
            v[i] = Rational::one();
            v
        };
        for i in 0..DIM_G {
            for j in (i + 1)..DIM_G {
                for k in (j + 1)..DIM_G {
                    let (x, y, z) = (unit(i), unit(j), unit(k));
                    let mut total = self.bracket_vec(&x, &self.bracket_vec(&y, &z));
                    for (t, v) in self
                        .bracket_vec(&y, &self.bracket_vec(&z, &x))
                        .into_iter()
                        .enumerate()
                    {
                        total[t] = total[t].clone() + v;
                    }
                    for (t, v) in self
                        .bracket_vec(&z, &self.bracket_vec(&x, &y))
                        .into_iter()
                        .enumerate()
                    {
                        total[t] = total[t].clone() + v;
                    }
                    if total.iter().any(|v| !v.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The reductive split is genuine: `[h, h] ⊂ h` and `[h, m] ⊂ m`.
    pub fn split_is_reductive(&self) -> bool {
        for i in 0..DIM_H {
            for j in 0..DIM_G {
                let in_h = j < DIM_H;
                for (k, _) in &self.consts[i][j] {
                    if in_h && *k >= DIM_H {
                        return false;
                    }
                    if !in_h && *k < DIM_H {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bracket tables for the reductive split in the requested scalar type.
    pub fn bracket_table<S: Scalar>(&self) -> BracketTable<S> {
        let conv = |v: &SparseVec<Rational>| -> SparseVec<S> {
            v.iter().map(|(k, c)| (*k, S::from_rational(c))).collect()
        };
        let mut m_part = vec![vec![SparseVec::new(); DIM_M]; DIM_M];
        let mut h_part = vec![vec![SparseVec::new(); DIM_M]; DIM_M];
        for i in 0..DIM_M {
            for j in 0..DIM_M {
                let full = &self.consts[M_OFFSET + i][M_OFFSET + j];
                let m: SparseVec<Rational> = full
                    .iter()
                    .filter(|(k, _)| *k >= M_OFFSET)
                    .map(|(k, c)| (k - M_OFFSET, c.clone()))
                    .collect();
                let h: SparseVec<Rational> = full
                    .iter()
                    .filter(|(k, _)| *k < M_OFFSET)
                    .cloned()
                    .collect();
                m_part[i][j] = conv(&m);
                h_part[i][j] = conv(&h);
            }
        }
        let isotropy_on_m = (0..DIM_H).map(|h| self.isotropy_matrix(h)).collect();
        BracketTable { m_part, h_part, isotropy_on_m }
    }

    /// `ad(b_h)` restricted to `m` (well defined: the split is reductive).
    pub fn isotropy_matrix<S: Scalar>(&self, h: usize) -> LinMap<S> {
        assert!(h < DIM_H);
        let mut out = LinMap::zero(DIM_M);
        for j in 0..DIM_M {
            for (k, c) in &self.consts[h][M_OFFSET + j] {
                debug_assert!(*k >= M_OFFSET);
                out.set(k - M_OFFSET, j, S::from_rational(c));
            }
        }
        out
    }

    /// `ad(b_h)` on the coordinates of the given space (the `e` direction is
    /// inert: `E` is central in the stabilizer).
    fn isotropy_matrix_on<S: Scalar>(&self, h: usize, space: Space) -> LinMap<S> {
        let dim = space.dim();
        let mut out = LinMap::zero(dim);
        for j in 0..dim {
            let full_j = space.full_index(j);
            for (k, c) in &self.consts[h][full_j] {
                if let Some(row) = space.coord_of_full(*k) {
                    out.set(row, j, S::from_rational(c));
                }
            }
        }
        out
    }

    /// Degree-preserving action of the `h`-th isotropy generator on a form:
    /// the negative transpose of `ad(b_h)` on each one-form slot, extended
    /// as an even derivation. Invariant forms are exactly those killed by
    /// all generators of the space's stabilizer.
    pub fn isotropy_action<S: Scalar>(
        &self,
        h: usize,
        form: &AltForm<S>,
        space: Space,
    ) -> Result<AltForm<S>> {
        if form.dim() != space.dim() {
            return Err(GeomError::Dimension(format!(
                "form lives in dimension {}, space has {}",
                form.dim(),
                space.dim()
            )));
        }
        let ad: LinMap<S> = self.isotropy_matrix_on(h, space);
        ad.derive_form(form)
    }

    /// Is the form invariant under the stabilizer of the space?
    pub fn is_invariant<S: Scalar>(&self, form: &AltForm<S>, space: Space) -> Result<bool> {
        let tol = if S::EXACT { 0.0 } else { 1e-9 * (1.0 + form.max_abs()) };
        for h in 0..space.isotropy_count() {
            if !self.isotropy_action(h, form, space)?.approx_zero(tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Differentials of the coordinate one-forms on the given space:
    /// `d e^c = -Σ_{i<j} C^c_{ij} e^i ∧ e^j`, with the structure constants
    /// projected to the space's complement. Applied to invariant forms this
    /// computes the honest exterior derivative on the quotient.
    pub fn coframe_differentials<S: Scalar>(&self, space: Space) -> Vec<AltForm<S>> {
        let dim = space.dim();
        let mut out = Vec::with_capacity(dim);
        for c in 0..dim {
            let full_c = space.full_index(c);
            let mut d = AltForm::zero(dim, 2);
            for i in 0..dim {
                for j in (i + 1)..dim {
                    let bracket = &self.consts[space.full_index(i)][space.full_index(j)];
                    for (k, v) in bracket {
                        if *k == full_c {
                            d.add_term((1 << i) | (1 << j), -S::from_rational(v));
                        }
                    }
                }
            }
            out.push(d);
        }
        out
    }

    /// Exterior derivative of an invariant form on the given space. The
    /// operator extends the coframe differentials as an odd derivation; on
    /// non-invariant combinations it is still well defined as that algebraic
    /// extension, which is what the structure-table rows for the individual
    /// coframe one-forms mean.
    pub fn invariant_d<S: Scalar>(&self, form: &AltForm<S>, space: Space) -> Result<AltForm<S>> {
        if form.dim() != space.dim() {
            return Err(GeomError::Dimension(format!(
                "form lives in dimension {}, space has {}",
                form.dim(),
                space.dim()
            )));
        }
        let diffs = self.coframe_differentials::<S>(space);
        extend_derivation(form, &diffs, true)
    }

    /// Basis of the space of stabilizer-invariant `degree`-forms, computed
    /// exactly as the joint kernel of the isotropy generators.
    pub fn invariant_form_basis(&self, degree: usize, space: Space) -> Vec<AltForm<Rational>> {
        let dim = space.dim();
        let monomials: Vec<u32> = (0u32..(1 << dim))
            .filter(|m| m.count_ones() as usize == degree)
            .collect();
        let index_of: BTreeMap<u32, usize> =
            monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let n = monomials.len();

        let column = |h: usize, j: usize| -> SparseVec<Rational> {
            let mono = AltForm::monomial(dim, &bit_indices(monomials[j]), Rational::one());
            let image = self
                .isotropy_action(h, &mono, space)
                .expect("dimension prearranged");
            image
                .terms()
                .map(|(mask, c)| (index_of[&mask], c.clone()))
                .collect()
        };
        // combine a coefficient vector over `vectors` into one vector
        let combine = |coeffs: &SparseVec<Rational>,
                       vectors: &[SparseVec<Rational>]|
         -> SparseVec<Rational> {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (j, c) in coeffs {
                for (idx, w) in &vectors[*j] {
                    let cell =
                        acc.remove(idx).unwrap_or_else(Rational::zero) + c.clone() * w.clone();
                    if !cell.is_zero() {
                        acc.insert(*idx, cell);
                    }
                }
            }
            acc.into_iter().collect()
        };

        // iteratively intersect the kernels of the isotropy generators
        let mut basis: Vec<SparseVec<Rational>> =
            (0..n).map(|j| vec![(j, Rational::one())]).collect();
        for h in 0..space.isotropy_count() {
            if basis.is_empty() {
                break;
            }
            // image of each current basis vector under this generator
            let images: Vec<SparseVec<Rational>> = basis
                .iter()
                .map(|v| {
                    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (j, c) in v {
                        for (i, w) in column(h, *j) {
                            let cell =
                                acc.remove(&i).unwrap_or_else(Rational::zero) + c.clone() * w;
                            if !cell.is_zero() {
                                acc.insert(i, cell);
                            }
                        }
                    }
                    acc.into_iter().collect()
                })
                .collect();
            let combos = linalg::kernel_of_map(basis.len(), n, |j| images[j].clone());
            basis = combos.iter().map(|combo| combine(combo, &basis)).collect();
        }

        basis
            .into_iter()
            .map(|v| {
                let mut f = AltForm::zero(dim, degree);
                for (j, c) in v {
                    f.add_term(monomials[j], c);
                }
                f
            })
            .collect()
    }

    /// Check every row of the built-in differential table for the coframe
    /// one-forms, on both quotients. Returns the first mismatch found.
    pub fn verify_structure_table(&self) -> Result<()> {
        // rows on the 12-dimensional quotient: (form, [(i, j, num, den)])
        // meaning d(form) = Σ (num/den) e^i ∧ e^j  (i, j in coframe order).
        #[rustfmt::skip]
        let m_rows: [(usize, &[(usize, usize, i64, i64)]); DIM_M] = [
            (0,  &[(1, 8, -1, 1), (2, 7, 1, 1), (4, 11, -1, 1), (5, 10, 1, 1)]),
            (1,  &[(2, 6, -1, 1), (0, 8, 1, 1), (5, 9, -1, 1), (3, 11, 1, 1)]),
            (2,  &[(0, 7, -1, 1), (1, 6, 1, 1), (3, 10, -1, 1), (4, 9, 1, 1)]),
            (3,  &[(1, 11, -1, 1), (2, 10, 1, 1), (4, 8, 1, 1), (5, 7, -1, 1)]),
            (4,  &[(2, 9, -1, 1), (0, 11, 1, 1), (5, 6, 1, 1), (3, 8, -1, 1)]),
            (5,  &[(0, 10, -1, 1), (1, 9, 1, 1), (3, 7, 1, 1), (4, 6, -1, 1)]),
            (6,  &[(1, 2, -1, 2), (4, 5, 1, 2)]),
            (7,  &[(2, 0, -1, 2), (5, 3, 1, 2)]),
            (8,  &[(0, 1, -1, 2), (3, 4, 1, 2)]),
            (9,  &[(1, 5, -1, 2), (4, 2, -1, 2)]),
            (10, &[(2, 3, -1, 2), (5, 0, -1, 2)]),
            (11, &[(0, 4, -1, 2), (3, 1, -1, 2)]),
        ];
        for (idx, terms) in m_rows {
            let got = self.invariant_d::<Rational>(
                &AltForm::one_form(DIM_M, idx),
                Space::U3Quotient,
            )?;
            let expected = build_two_form(DIM_M, terms);
            if got != expected {
                return Err(GeomError::Structure(format!(
                    "d({}) = {} but the table says {}",
                    M_COFRAME[idx],
                    got.display_with(&M_COFRAME),
                    expected.display_with(&M_COFRAME),
                )));
            }
        }

        // on the 13-dimensional quotient the same rows acquire e-terms; the
        // weight-1 and weight-2 rows are checked explicitly.
        let n_rows: [(usize, &[(usize, usize, i64, i64)]); 2] = [
            // d a = (12-dim row) + e ∧ a'
            (0, &[(1, 8, -1, 1), (2, 7, 1, 1), (4, 11, -1, 1), (5, 10, 1, 1), (12, 3, 1, 1)]),
            // d p = (12-dim row) + 2 e ∧ p'
            (6, &[(1, 2, -1, 2), (4, 5, 1, 2), (12, 9, 2, 1)]),
        ];
        for (idx, terms) in n_rows {
            let got = self.invariant_d::<Rational>(
                &AltForm::one_form(DIM_N, idx),
                Space::Su3Quotient,
            )?;
            let expected = build_two_form(DIM_N, terms);
            if got != expected {
                return Err(GeomError::Structure(format!(
                    "d({}) on the 13-dim quotient = {} but the table says {}",
                    N_COFRAME[idx],
                    got.display_with(&N_COFRAME),
                    expected.display_with(&N_COFRAME),
                )));
            }
        }
        Ok(())
    }

    /// Copy with one structure constant nudged by `delta` — a deliberately
    /// broken algebra for exercising the self-checks.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, delta: Rational) -> So7 {
        let mut consts = self.consts.clone();
        let bump = |v: &mut SparseVec<Rational>, k: usize, d: Rational| {
            if let Some(pos) = v.iter().position(|(idx, _)| *idx == k) {
                let nv = v[pos].1.clone() + d;
                if nv.is_zero() {
                    v.remove(pos);
                } else {
                    v[pos].1 = nv;
                }
            } else if !d.is_zero() {
                v.push((k, d));
                v.sort_by_key(|(idx, _)| *idx);
            }
        };
        bump(&mut consts[i][j], k, delta.clone());
        bump(&mut consts[j][i], k, -delta);
        So7 { basis: self.basis.clone(), consts }
    }

    /// Machine-readable dump of the basis, coframe differentials, and split
    /// data, for external inspection.
    pub fn structure_json(&self) -> serde_json::Value {
        let dm = self.coframe_differentials::<Rational>(Space::U3Quotient);
        let dn = self.coframe_differentials::<Rational>(Space::Su3Quotient);
        let table = |labels: &[&str], forms: &[AltForm<Rational>]| -> serde_json::Value {
            let mut map = serde_json::Map::new();
            for (i, f) in forms.iter().enumerate() {
                map.insert(
                    labels[i].to_string(),
                    serde_json::Value::String(f.display_with(labels)),
                );
            }
            serde_json::Value::Object(map)
        };
        serde_json::json!({
            "dims": { "algebra": DIM_G, "isotropy": DIM_H, "complement": DIM_M },
            "coframe": M_COFRAME,
            "d_on_u3_quotient": table(&M_COFRAME, &dm),
            "d_on_su3_quotient": table(&N_COFRAME, &dn),
            "jacobi": self.jacobi_holds(),
            "reductive": self.split_is_reductive(),
        })
    }
}

impl Default for So7 {
    fn default() -> Self {
        Self::new()
    }
}

/// The even permutation of the coframe induced by cycling the three complex
/// directions; it preserves every structure built here and is used to
/// propagate single-row checks across the whole table.
pub fn cyclic_coframe_permutation() -> [usize; DIM_M] {
    // a→b→c→a, a'→b'→c'→a', p→q→r→p, p'→q'→r'→p'
    [1, 2, 0, 4, 5, 3, 7, 8, 6, 10, 11, 9]
}

fn build_two_form(dim: usize, terms: &[(usize, usize, i64, i64)]) -> AltForm<Rational> {
    let mut f = AltForm::zero(dim, 2);
    for (i, j, num, den) in terms {
        f = f.add(&AltForm::monomial(dim, &[*i, *j], Rational::from_ratio(*num, *den)));
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn algebra_is_consistent() {
        let g = So7::new();
        assert!(g.jacobi_holds());
        assert!(g.split_is_reductive());
    }

    #[test]
    fn central_rotation_moves_pairs() {
        let g = So7::new();
        // E sends f1 to f1'
        let e = g.basis_matrix(E_INDEX);
        let mut f1 = vec![r(0); 7];
        f1[1] = r(1);
        let image = e.apply(&f1);
        let mut expected = vec![r(0); 7];
        expected[4] = r(1);
        assert_eq!(image, expected);
    }

    #[test]
    fn structure_table_verifies() {
        let g = So7::new();
        g.verify_structure_table().unwrap();
    }

    #[test]
    fn perturbed_algebra_fails_table() {
        let g = So7::new();
        let broken = g.perturbed(M_OFFSET, M_OFFSET + 1, M_OFFSET + 8, Rational::from_ratio(1, 3));
        assert!(broken.verify_structure_table().is_err());
    }

    #[test]
    fn central_rotation_weights() {
        // ad(E) on m has three quarter-turn blocks of weight 1 (the f0
        // motions) and three of weight 2 (the pair rotations): its
        // characteristic polynomial is (x²+1)³ (x²+4)³.
        let g = So7::new();
        let ad_e: LinMap<Rational> = g.isotropy_matrix(E_INDEX);
        let cp = linalg::char_poly(&ad_e);
        let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let pow3 = |p: &[i64]| mul(&mul(p, p), p);
        let expected = mul(&pow3(&[1, 0, 1]), &pow3(&[4, 0, 1]));
        assert_eq!(cp.len(), expected.len());
        for (got, want) in cp.iter().zip(expected.iter()) {
            assert_eq!(*got, r(*want));
        }
    }

    #[test]
    fn differential_squares_to_zero_on_invariant_forms() {
        let g = So7::new();
        // the canonical hermitian 2-form: a'∧a + b'∧b + c'∧c
        let mut omega = AltForm::zero(DIM_M, 2);
        for k in 0..3 {
            omega = omega.add(&AltForm::monomial(DIM_M, &[k + 3, k], r(1)));
        }
        assert!(g.is_invariant(&omega, Space::U3Quotient).unwrap());
        let d1 = g.invariant_d(&omega, Space::U3Quotient).unwrap();
        let d2 = g.invariant_d(&d1, Space::U3Quotient).unwrap();
        assert!(d2.is_zero());
    }

    #[test]
    fn individual_coframe_forms_are_not_invariant() {
        let g = So7::new();
        let a = AltForm::<Rational>::one_form(DIM_M, 0);
        assert!(!g.is_invariant(&a, Space::U3Quotient).unwrap());
    }

    #[test]
    fn cyclic_relabel_commutes_with_d() {
        let g = So7::new();
        let perm = cyclic_coframe_permutation();
        for i in 0..DIM_M {
            let f = AltForm::<Rational>::one_form(DIM_M, i);
            let d_then_relabel = g
                .invariant_d(&f, Space::U3Quotient)
                .unwrap()
                .relabel(&perm);
            let relabel_then_d = g
                .invariant_d(&f.relabel(&perm), Space::U3Quotient)
                .unwrap();
            assert_eq!(d_then_relabel, relabel_then_d, "coframe index {i}");
        }
    }

    #[test]
    fn invariant_one_forms() {
        let g = So7::new();
        // no invariant one-forms on the 12-dim quotient; exactly the dual of
        // E on the 13-dim one
        assert_eq!(g.invariant_form_basis(1, Space::U3Quotient).len(), 0);
        let n1 = g.invariant_form_basis(1, Space::Su3Quotient);
        assert_eq!(n1.len(), 1);
        assert!(!n1[0].coeff(1 << DIM_M).is_zero());
    }

    #[test]
    fn bracket_table_matches_raw_constants() {
        let g = So7::new();
        let table = g.bracket_table::<Rational>();
        // [A, B] recomputed two ways
        let mut x = vec![r(0); DIM_M];
        let mut y = vec![r(0); DIM_M];
        x[0] = r(1);
        y[1] = r(1);
        let (m, h) = table.bracket_m(&x, &y);
        let raw = g.bracket_coeffs(M_OFFSET, M_OFFSET + 1);
        for (k, c) in raw {
            if *k >= M_OFFSET {
                assert_eq!(m[*k - M_OFFSET], *c);
            } else {
                assert_eq!(h[*k], *c);
            }
        }
        // the m-part of [A, B] is R/2 (the table row d r = -(a∧b - a'∧b')/2
        // pairs with it as dr(A, B) = -r([A, B]) = -1/2)
        assert_eq!(m[8], Rational::from_ratio(1, 2));
    }

    #[test]
    fn isotropy_action_kills_invariant_volume() {
        let g = So7::new();
        let vol = AltForm::monomial(DIM_M, &(0..12).collect::<Vec<_>>(), r(1));
        for h in 0..DIM_H {
            let moved = g.isotropy_action(h, &vol, Space::U3Quotient).unwrap();
            assert!(moved.is_zero(), "generator {h} moves the volume form");
        }
    }
}
