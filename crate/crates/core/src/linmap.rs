//! Dense linear maps, trilinear tensors, and the action of almost complex
//! structures on forms.
//!
//! For an endomorphism `A` with `A² = −1`, the action on a k-form is
//! `A·α = (−1)^k α(A·, …, A·)`; in particular `(A·a)(X) = −a(AX)` for
//! one-forms and `(A·α)(X,Y,Z) = −α(AX,AY,AZ)` in degree three.
//!
//! Applying `A` in just two of three slots (`A_(12)α = α(A·,A·,·)` etc.)
//! does not in general produce an alternating tensor, so that operation
//! returns a [`Trilinear`]; the summed operator over all three slot pairs is
//! alternating again and is returned as a form.

use crate::error::{GeomError, Result};
use crate::exterior::{extend_derivation, AltForm};
use crate::scalar::Scalar;

/// Dense endomorphism of an n-dimensional space, row-major storage.
/// `entry(r, c)` is the `e_r`-component of the image of `e_c`.
#[derive(Clone, PartialEq, Debug)]
pub struct LinMap<S: Scalar> {
    dim: usize,
    a: Vec<S>,
}

impl<S: Scalar> LinMap<S> {
    pub fn zero(dim: usize) -> Self {
        LinMap { dim, a: vec![S::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    /// Build from the images of basis vectors: `columns[c]` = image of `e_c`.
    pub fn from_columns(columns: &[Vec<S>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zero(dim);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> &S {
        &self.a[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.a[r * self.dim + c] = v;
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![S::zero(); self.dim];
        for r in 0..self.dim {
            let mut acc = S::zero();
            for c in 0..self.dim {
                if !v[c].is_zero() && !self.entry(r, c).is_zero() {
                    acc = acc + self.entry(r, c).clone() * v[c].clone();
                }
            }
            out[r] = acc;
        }
        out
    }

    /// Image of the basis vector `e_c`.
    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.dim).map(|r| self.entry(r, c).clone()).collect()
    }

    /// Matrix product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zero(n);
        for r in 0..n {
            for k in 0..n {
                let lhs = self.entry(r, k);
                if lhs.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let rhs = other.entry(k, c);
                    if rhs.is_zero() {
                        continue;
                    }
                    let v = out.entry(r, c).clone() + lhs.clone() * rhs.clone();
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for i in 0..self.a.len() {
            out.a[i] = out.a[i].clone() + other.a[i].clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::from_int(-1)))
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = self.clone();
        for v in &mut out.a {
            *v = v.clone() * factor.clone();
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::from_int(-1))
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.dim {
            t = t + self.entry(i, i).clone();
        }
        t
    }

    /// `tr(self ∘ other)` without materializing the product.
    pub fn trace_product(&self, other: &Self) -> S {
        assert_eq!(self.dim, other.dim);
        let mut t = S::zero();
        for r in 0..self.dim {
            for c in 0..self.dim {
                let x = self.entry(r, c);
                let y = other.entry(c, r);
                if !x.is_zero() && !y.is_zero() {
                    t = t + x.clone() * y.clone();
                }
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn approx_zero(&self, tol: f64) -> bool {
        self.a.iter().all(|v| v.approx_zero(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).approx_zero(tol)
    }

    /// Pullback `α(A·, …, A·)` of a form along this map.
    pub fn pullback(&self, alpha: &AltForm<S>) -> AltForm<S> {
        assert_eq!(self.dim, alpha.dim());
        // row i of the matrix, read as the one-form A*(e^i)
        let rows: Vec<Vec<S>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        alpha.pullback_rows(&rows)
    }

    /// Infinitesimal action on a form: the degree-zero derivation
    /// `(A ⊙ α)(X₁, …) = -Σ_t α(X₁, …, A X_t, …)`, the differential of the
    /// pullback along exp(-tA). Endomorphisms act on one-forms by minus the
    /// transpose and extend slot by slot.
    pub fn derive_form(&self, alpha: &AltForm<S>) -> Result<AltForm<S>> {
        if self.dim != alpha.dim() {
            return Err(GeomError::Dimension(format!(
                "endomorphism dimension {} acting on a form in dimension {}",
                self.dim,
                alpha.dim()
            )));
        }
        let images: Vec<AltForm<S>> = (0..self.dim)
            .map(|i| {
                let mut one = AltForm::zero(self.dim, 1);
                for c in 0..self.dim {
                    let v = self.entry(i, c);
                    if !v.is_zero() {
                        one.add_term(1 << c, -v.clone());
                    }
                }
                one
            })
            .collect();
        extend_derivation(alpha, &images, false)
    }
}

/// Action of an almost complex structure on a k-form:
/// `A·α = (−1)^k α(A·, …, A·)`.
pub fn acs_action<S: Scalar>(a: &LinMap<S>, alpha: &AltForm<S>) -> AltForm<S> {
    let pulled = a.pullback(alpha);
    if alpha.degree() % 2 == 0 {
        pulled
    } else {
        pulled.neg()
    }
}

/// Trilinear tensor on an n-dimensional space (not necessarily alternating).
#[derive(Clone, PartialEq, Debug)]
pub struct Trilinear<S: Scalar> {
    dim: usize,
    vals: Vec<S>,
}

impl<S: Scalar> Trilinear<S> {
    pub fn zero(dim: usize) -> Self {
        Trilinear { dim, vals: vec![S::zero(); dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> S) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let v = f(i, j, k);
                    t.vals[(i * dim + j) * dim + k] = v;
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.vals[(i * self.dim + j) * self.dim + k]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for i in 0..self.vals.len() {
            out.vals[i] = out.vals[i].clone() + other.vals[i].clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..self.vals.len() {
            out.vals[i] = out.vals[i].clone() - other.vals[i].clone();
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v = v.clone() * factor.clone();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn approx_zero(&self, tol: f64) -> bool {
        self.vals.iter().all(|v| v.approx_zero(tol))
    }

    /// Full antisymmetrization: `Alt(T) = (1/6) Σ_σ sign(σ) T(X_σ…)`.
    pub fn alternation(&self) -> Self {
        let sixth = S::from_ratio(1, 6);
        Trilinear::from_fn(self.dim, |i, j, k| {
            let plus = self.get(i, j, k).clone() + self.get(j, k, i).clone() + self.get(k, i, j).clone();
            let minus = self.get(j, i, k).clone() + self.get(i, k, j).clone() + self.get(k, j, i).clone();
            (plus - minus) * sixth.clone()
        })
    }

    pub fn is_alternating(&self, tol: f64) -> bool {
        self.sub(&self.alternation()).approx_zero(tol)
    }

    /// Convert an alternating tensor to a 3-form; errors if not alternating
    /// at tolerance `tol`.
    pub fn to_altform(&self, tol: f64) -> Result<AltForm<S>> {
        if !self.is_alternating(tol) {
            return Err(GeomError::Domain(
                "trilinear tensor is not alternating; cannot convert to a 3-form".into(),
            ));
        }
        let mut out = AltForm::zero(self.dim, 3);
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let v = self.get(i, j, k).clone();
                    if !v.is_zero() {
                        out.add_term((1 << i) | (1 << j) | (1 << k), v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Dense view of a 3-form.
    pub fn from_altform(alpha: &AltForm<S>) -> Self {
        assert_eq!(alpha.degree(), 3);
        let dim = alpha.dim();
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    // sign of sorting (i,j,k)
                    let mut idx = [i, j, k];
                    let mut sign = 1i64;
                    if idx[0] > idx[1] {
                        idx.swap(0, 1);
                        sign = -sign;
                    }
                    if idx[1] > idx[2] {
                        idx.swap(1, 2);
                        sign = -sign;
                    }
                    if idx[0] > idx[1] {
                        idx.swap(0, 1);
                        sign = -sign;
                    }
                    let mask = (1u32 << idx[0]) | (1 << idx[1]) | (1 << idx[2]);
                    t.vals[(i * dim + j) * dim + k] = alpha.coeff(mask) * S::from_int(sign);
                }
            }
        }
        t
    }
}

/// Apply `A` in exactly the two argument slots `slots` of a 3-form:
/// e.g. `slots = (0, 1)` gives `T(X,Y,Z) = α(AX, AY, Z)`.
///
/// The result is antisymmetric in the transformed pair but in general not
/// fully alternating, hence a [`Trilinear`].
pub fn slot_action<S: Scalar>(a: &LinMap<S>, alpha: &AltForm<S>, slots: (usize, usize)) -> Result<Trilinear<S>> {
    if alpha.degree() != 3 {
        return Err(GeomError::Degree(format!(
            "slot action requires a 3-form, got degree {}",
            alpha.degree()
        )));
    }
    if a.dim() != alpha.dim() {
        return Err(GeomError::Dimension("slot action: map and form dimensions differ".into()));
    }
    let (s, t) = slots;
    if s >= 3 || t >= 3 || s == t {
        return Err(GeomError::Domain(format!("invalid slot pair ({s}, {t})")));
    }
    let dense = Trilinear::from_altform(alpha);
    let dim = a.dim();
    // matrix columns as vectors
    let cols: Vec<Vec<S>> = (0..dim).map(|c| a.column(c)).collect();
    let out = Trilinear::from_fn(dim, |i, j, k| {
        let args = [i, j, k];
        // transform slots s and t: sum over basis components of A e_args
        let mut acc = S::zero();
        for (p, cp) in cols[args[s]].iter().enumerate() {
            if cp.is_zero() {
                continue;
            }
            for (q, cq) in cols[args[t]].iter().enumerate() {
                if cq.is_zero() {
                    continue;
                }
                let mut idx = args;
                idx[s] = p;
                idx[t] = q;
                let v = dense.get(idx[0], idx[1], idx[2]);
                if !v.is_zero() {
                    acc = acc + cp.clone() * cq.clone() * v.clone();
                }
            }
        }
        acc
    });
    Ok(out)
}

/// The summed slot operator `𝓛_A = A_(12) + A_(13) + A_(23)` on 3-forms.
/// Alternating again, returned as a form.
pub fn slot_sum<S: Scalar>(a: &LinMap<S>, alpha: &AltForm<S>) -> Result<AltForm<S>> {
    let t12 = slot_action(a, alpha, (0, 1))?;
    let t13 = slot_action(a, alpha, (0, 2))?;
    let t23 = slot_action(a, alpha, (1, 2))?;
    let total = t12.add(&t13).add(&t23);
    let tol = if S::EXACT { 0.0 } else { 1e-9 * (1.0 + total.max_abs()) };
    total.to_altform(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    /// Complex structure on R^6 with i·e_k = e_{k+3}.
    fn std_i() -> LinMap<Rational> {
        let mut m = LinMap::zero(6);
        for k in 0..3 {
            m.set(k + 3, k, r(1, 1));
            m.set(k, k + 3, r(-1, 1));
        }
        m
    }

    #[test]
    fn acs_on_one_form_gives_dual_partner() {
        // (I·e^0)(X) = −e^0(IX): nonzero only on X = e_3 where IX = −e_0
        let i = std_i();
        let a = AltForm::one_form(6, 0);
        let ia = acs_action(&i, &a);
        assert_eq!(ia, AltForm::one_form(6, 3));
    }

    #[test]
    fn acs_squares_to_parity_sign() {
        // on k-forms: A·(A·α) = (−1)^k α when A² = −1 … for k = 3: −α
        let i = std_i();
        let alpha = AltForm::monomial(6, &[0, 1, 5], r(2, 1))
            .add(&AltForm::monomial(6, &[2, 3, 4], r(-1, 3)));
        let twice = acs_action(&i, &acs_action(&i, &alpha));
        assert_eq!(twice, alpha.neg());
    }

    #[test]
    fn slot_action_can_be_non_alternating() {
        // α = e^0 ∧ e^5 ∧ e^2 type with a dual pair inside: I_(12)α
        // evaluated on (X, Y, Y) need not vanish.
        let i = std_i();
        // α = e^3∧e^5∧e^2 : contains the I-pair (e_2, e_5)
        let alpha = AltForm::monomial(6, &[3, 5, 2], r(1, 1));
        let t = slot_action(&i, &alpha, (0, 1)).unwrap();
        assert!(!t.is_alternating(0.0));
        // the summed operator is alternating
        let l = slot_sum(&i, &alpha).unwrap();
        let _ = l; // existence is the assertion: to_altform succeeded
    }

    #[test]
    fn slot_sum_eigenvalues_on_pure_types() {
        let i = std_i();
        // (3,0)+(0,3) test form: Re((e^0+ie^3)∧(e^1+ie^4)∧(e^2+ie^5))
        let re = AltForm::monomial(6, &[0, 1, 2], r(1, 1))
            .add(&AltForm::monomial(6, &[0, 4, 5], r(-1, 1)))
            .add(&AltForm::monomial(6, &[3, 1, 5], r(-1, 1)))
            .add(&AltForm::monomial(6, &[3, 4, 2], r(-1, 1)));
        let l = slot_sum(&i, &re).unwrap();
        assert_eq!(l, re.scale(&r(-3, 1)));

        // mixed-type form ω∧θ with ω = Σ e^{k+3}∧e^k, θ = e^0: eigenvalue +1
        let mut omega = AltForm::zero(6, 2);
        for k in 0..3 {
            omega = omega.add(&AltForm::monomial(6, &[k + 3, k], r(1, 1)));
        }
        let mixed = omega.wedge(&AltForm::one_form(6, 0)).unwrap();
        let l2 = slot_sum(&i, &mixed).unwrap();
        assert_eq!(l2, mixed);
    }

    #[test]
    fn commutator_and_traces() {
        let i = std_i();
        let sq = i.compose(&i);
        assert_eq!(sq, LinMap::identity(6).neg());
        assert_eq!(i.trace(), r(0, 1));
        assert_eq!(i.trace_product(&i), r(-6, 1));
        assert!(i.commutator(&i).approx_zero(0.0));
    }
}
