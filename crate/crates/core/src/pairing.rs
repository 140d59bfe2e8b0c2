//! Metric pairings on forms and the Hermitian type decomposition.
//!
//! The inner product of two k-forms is the frame sum
//! `⟨α, β⟩ = Σ_{i_1<…<i_k} α(E_I) β(E_I)` over a g-orthonormal frame.
//! All metrics in this crate are diagonal in the named basis, so the frame
//! sum is computed with inverse-metric weights and stays inside the scalar
//! field — no square roots are ever taken on the exact path.

use crate::error::{GeomError, Result};
use crate::exterior::AltForm;
use crate::linmap::{slot_sum, LinMap};
use crate::scalar::Scalar;

/// Positive diagonal metric on an n-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagMetric<S: Scalar> {
    diag: Vec<S>,
}

impl<S: Scalar> DiagMetric<S> {
    pub fn new(diag: Vec<S>) -> Result<Self> {
        if diag.iter().any(|d| !d.is_positive()) {
            return Err(GeomError::Metric("diagonal metric requires positive entries".into()));
        }
        Ok(DiagMetric { diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn entry(&self, i: usize) -> &S {
        &self.diag[i]
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn inverse_entry(&self, i: usize) -> S {
        S::one() / self.diag[i].clone()
    }

    /// `g(u, v)` for component vectors.
    pub fn pair_vectors(&self, u: &[S], v: &[S]) -> S {
        assert_eq!(u.len(), self.dim());
        assert_eq!(v.len(), self.dim());
        let mut acc = S::zero();
        for i in 0..self.dim() {
            if !u[i].is_zero() && !v[i].is_zero() {
                acc = acc + self.diag[i].clone() * u[i].clone() * v[i].clone();
            }
        }
        acc
    }

    /// Lower an endomorphism to the bilinear form `(X, Y) ↦ g(X, A Y)`,
    /// returned as a 2-form when `A` is g-skew.
    pub fn lower_to_form(&self, a: &LinMap<S>) -> Result<AltForm<S>> {
        let n = self.dim();
        if a.dim() != n {
            return Err(GeomError::Dimension("lowering map of mismatched dimension".into()));
        }
        let tol = if S::EXACT { 0.0 } else { 1e-9 * (1.0 + a.max_abs()) };
        let mut out = AltForm::zero(n, 2);
        for i in 0..n {
            for j in (i + 1)..n {
                // ω(e_i, e_j) = g(e_i, A e_j) = g_ii A_{ij}
                let v = self.diag[i].clone() * a.entry(i, j).clone();
                let opposite = self.diag[j].clone() * a.entry(j, i).clone();
                if !(v.clone() + opposite).approx_zero(tol) {
                    return Err(GeomError::Domain("lower_to_form requires a g-skew endomorphism".into()));
                }
                if !v.is_zero() {
                    out.add_term((1 << i) | (1 << j), v);
                }
            }
        }
        Ok(out)
    }

    /// Raise a 2-form to the endomorphism `A` with `ω(X, Y) = g(X, A Y)`.
    pub fn raise_to_map(&self, omega: &AltForm<S>) -> Result<LinMap<S>> {
        let n = self.dim();
        if omega.dim() != n || omega.degree() != 2 {
            return Err(GeomError::Degree("raise_to_map expects a 2-form on the metric's space".into()));
        }
        let mut a = LinMap::zero(n);
        for (mask, c) in omega.terms() {
            let i = mask.trailing_zeros() as usize;
            let j = (mask & (mask - 1)).trailing_zeros() as usize;
            // ω(e_i,e_j) = g_ii A_ij  and  ω(e_j,e_i) = g_jj A_ji
            a.set(i, j, c.clone() / self.diag[i].clone());
            a.set(j, i, -(c.clone() / self.diag[j].clone()));
        }
        Ok(a)
    }

    /// Whether `a` is infinitesimally orthogonal: `g(AX, Y) = −g(X, AY)`.
    pub fn is_skew(&self, a: &LinMap<S>, tol: f64) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.diag[i].clone() * a.entry(i, j).clone();
                let rhs = self.diag[j].clone() * a.entry(j, i).clone();
                if !(lhs + rhs).approx_zero(tol) {
                    return false;
                }
            }
        }
        true
    }
}

/// Frame-sum inner product of two k-forms: with a diagonal metric this is
/// `Σ_I (Π_{i∈I} g^{ii}) α_I β_I` over ascending multi-indices.
pub fn form_inner<S: Scalar>(alpha: &AltForm<S>, beta: &AltForm<S>, g: &DiagMetric<S>) -> Result<S> {
    if alpha.dim() != beta.dim() || alpha.dim() != g.dim() {
        return Err(GeomError::Dimension("form_inner: mismatched dimensions".into()));
    }
    if alpha.degree() != beta.degree() {
        return Err(GeomError::Degree("form_inner: mismatched degrees".into()));
    }
    let mut acc = S::zero();
    for (mask, ca) in alpha.terms() {
        let cb = beta.coeff(mask);
        if cb.is_zero() {
            continue;
        }
        let mut weight = S::one();
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            weight = weight * g.inverse_entry(i);
        }
        acc = acc + weight * ca.clone() * cb;
    }
    Ok(acc)
}

/// Squared g-norm of a form.
pub fn norm_sq<S: Scalar>(alpha: &AltForm<S>, g: &DiagMetric<S>) -> Result<S> {
    form_inner(alpha, alpha, g)
}

/// g-norm of a form as a float (the exact path computes the square exactly
/// and takes one square root at the boundary).
pub fn norm_f64<S: Scalar>(alpha: &AltForm<S>, g: &DiagMetric<S>) -> Result<f64> {
    Ok(norm_sq(alpha, g)?.to_f64().max(0.0).sqrt())
}

/// Contraction of a 3-form against a 2-form over a g-orthonormal frame:
/// `(Λ_ω β)(X) = ½ Σ_{i,j} ω(E_i, E_j) β(E_i, E_j, X)`.
pub fn contract2<S: Scalar>(omega: &AltForm<S>, beta: &AltForm<S>, g: &DiagMetric<S>) -> Result<AltForm<S>> {
    if omega.degree() != 2 || beta.degree() != 3 {
        return Err(GeomError::Degree("contract2 expects a 2-form and a 3-form".into()));
    }
    if omega.dim() != beta.dim() || omega.dim() != g.dim() {
        return Err(GeomError::Dimension("contract2: mismatched dimensions".into()));
    }
    let n = g.dim();
    let mut out = AltForm::zero(n, 1);
    // ½ Σ_{i,j} g^{ii} g^{jj} ω(e_i,e_j) β(e_i,e_j,·) — run over i<j and drop ½.
    for (mask, w) in omega.terms() {
        let i = mask.trailing_zeros() as usize;
        let j = (mask & (mask - 1)).trailing_zeros() as usize;
        let weight = g.inverse_entry(i) * g.inverse_entry(j) * w.clone();
        // β(e_i, e_j, ·): interior twice
        let mut ei = vec![S::zero(); n];
        ei[i] = S::one();
        let mut ej = vec![S::zero(); n];
        ej[j] = S::one();
        let contracted = beta.interior(&ei)?.interior(&ej)?;
        // interior(e_i) then interior(e_j) yields β(e_i, e_j, ·) up to order:
        // ι_{e_j} ι_{e_i} β (X) = β(e_i, e_j, X)
        out = out.add(&contracted.scale(&weight));
    }
    Ok(out)
}

/// Lee form of `(ω, dω)` on a 2n′-dimensional space:
/// `θ = Λ_ω(dω) / (n′ − 1)`, normalized so `Λ_ω(ω∧θ) = (n′−1)θ`.
pub fn lee_form<S: Scalar>(omega: &AltForm<S>, d_omega: &AltForm<S>, g: &DiagMetric<S>) -> Result<AltForm<S>> {
    let n = g.dim();
    if n % 2 != 0 || n < 4 {
        return Err(GeomError::Dimension("lee form needs even dimension ≥ 4".into()));
    }
    let half = (n / 2) as i64;
    let contracted = contract2(omega, d_omega, g)?;
    Ok(contracted.scale(&(S::one() / S::from_int(half - 1))))
}

/// Hermitian type split of a 2-form with respect to an almost complex
/// structure `a`: returns `((2,0)+(0,2) part, (1,1) part)`, characterized by
/// `β(A·,A·) = −β` and `β(A·,A·) = β` respectively.
pub fn split_2form<S: Scalar>(beta: &AltForm<S>, a: &LinMap<S>) -> Result<(AltForm<S>, AltForm<S>)> {
    if beta.degree() != 2 {
        return Err(GeomError::Degree("split_2form expects a 2-form".into()));
    }
    let pulled = a.pullback(beta); // β(A·, A·)
    let half = S::from_ratio(1, 2);
    let anti = beta.sub(&pulled).scale(&half); // (2,0)+(0,2)
    let herm = beta.add(&pulled).scale(&half); // (1,1)
    Ok((anti, herm))
}

/// Hermitian type split of a 3-form: returns
/// `((3,0)+(0,3) part, (2,1)+(1,2) part)` via the eigenprojections of the
/// summed slot operator (eigenvalue −3 on the first, +1 on the second).
pub fn split_3form<S: Scalar>(alpha: &AltForm<S>, a: &LinMap<S>) -> Result<(AltForm<S>, AltForm<S>)> {
    if alpha.degree() != 3 {
        return Err(GeomError::Degree("split_3form expects a 3-form".into()));
    }
    let l = slot_sum(a, alpha)?;
    let quarter = S::from_ratio(1, 4);
    let p30 = alpha.sub(&l).scale(&quarter);
    let p21 = alpha.scale(&S::from_int(3)).add(&l).scale(&quarter);
    Ok((p30, p21))
}
