//! The two-parameter family of invariant metrics on the 12-dimensional
//! quotient, the associated torsion-free metric connection, curvature,
//! Ricci tensor, and the Einstein condition.
//!
//! The metric weighs the six directions that move the base point by `λ` and
//! the six that rotate the fiber complex structure by `μ`. The connection is
//! encoded by its canonical-frame operator `Λ(X)Y = ½[X,Y]_m + U(X,Y)` with
//! `2 g(U(X,Y), Z) = g([Z,X]_m, Y) + g(X, [Z,Y]_m)`; this is the unique
//! invariant torsion-free metric connection, so curvature and Ricci follow
//! from Lie algebra data alone.

use crate::error::{GeomError, Result};
use crate::exterior::AltForm;
use crate::lie::{BracketTable, So7, DIM_H, DIM_M};
use crate::linmap::LinMap;
use crate::pairing::DiagMetric;
use crate::scalar::Scalar;

/// How a tensor with constant components in the canonical frame is to be
/// interpreted when differentiating it.
///
/// * `Invariant` — the components describe a globally defined invariant
///   tensor field; this is validated (the isotropy action must kill the
///   tensor) and the derivative is again frame-independent.
/// * `Section` — the components describe the local tensor field with those
///   constant coefficients in the canonical frame of the reductive split;
///   no invariance is required. This is how the individual members of the
///   almost-complex-structure triple are differentiated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Frame {
    Invariant,
    Section,
}

/// Metric, connection, and curvature data for one choice of `(λ, μ)`.
pub struct InvariantGeometry<S: Scalar> {
    lambda: S,
    mu: S,
    metric: DiagMetric<S>,
    table: BracketTable<S>,
    /// `Λ(e_i)` for each canonical basis vector.
    nomizu: Vec<LinMap<S>>,
}

impl<S: Scalar> InvariantGeometry<S> {
    pub fn new(algebra: &So7, lambda: S, mu: S) -> Result<Self> {
        let mut diag = Vec::with_capacity(DIM_M);
        for _ in 0..6 {
            diag.push(lambda.clone());
        }
        for _ in 0..6 {
            diag.push(mu.clone());
        }
        let metric = DiagMetric::new(diag)?;
        let table = algebra.bracket_table::<S>();

        let g = |i: usize| metric.diag()[i].clone();
        let sparse_at = |v: &crate::linalg::SparseVec<S>, j: usize| -> S {
            v.iter()
                .find(|(k, _)| *k == j)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(S::zero)
        };

        let two = S::from_int(2);
        let mut nomizu = Vec::with_capacity(DIM_M);
        for i in 0..DIM_M {
            let mut map = LinMap::zero(DIM_M);
            for j in 0..DIM_M {
                // ½ [e_i, e_j]_m
                for (k, c) in &table.m_part[i][j] {
                    map.set(*k, j, c.clone() / two.clone());
                }
                // U(e_i, e_j): 2 g(U, e_z) = g([e_z,e_i]_m, e_j) + g(e_i, [e_z,e_j]_m)
                for z in 0..DIM_M {
                    let term = g(j) * sparse_at(&table.m_part[z][i], j)
                        + g(i) * sparse_at(&table.m_part[z][j], i);
                    if !term.is_zero() {
                        let u = term / (two.clone() * g(z));
                        let v = map.entry(z, j).clone() + u;
                        map.set(z, j, v);
                    }
                }
            }
            nomizu.push(map);
        }

        Ok(InvariantGeometry { lambda, mu, metric, table, nomizu })
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn mu(&self) -> &S {
        &self.mu
    }

    pub fn metric(&self) -> &DiagMetric<S> {
        &self.metric
    }

    pub fn bracket_table(&self) -> &BracketTable<S> {
        &self.table
    }

    /// Connection operator `Λ(e_i)`.
    pub fn nomizu(&self, i: usize) -> &LinMap<S> {
        &self.nomizu[i]
    }

    /// Connection operator for an arbitrary direction.
    pub fn nomizu_of(&self, x: &[S]) -> LinMap<S> {
        assert_eq!(x.len(), DIM_M);
        let mut out = LinMap::zero(DIM_M);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out = out.add(&self.nomizu[i].scale(xi));
            }
        }
        out
    }

    /// Curvature operator `R(e_i, e_j) = [Λ(e_i), Λ(e_j)] - Λ([e_i,e_j]_m)
    /// - ad([e_i,e_j]_h)`.
    pub fn curvature(&self, i: usize, j: usize) -> LinMap<S> {
        let mut r = self.nomizu[i].commutator(&self.nomizu[j]);
        for (k, c) in &self.table.m_part[i][j] {
            r = r.sub(&self.nomizu[*k].scale(c));
        }
        for (k, c) in &self.table.h_part[i][j] {
            r = r.sub(&self.table.isotropy_on_m[*k].scale(c));
        }
        r
    }

    /// Ricci tensor as the matrix `Ric(e_j, e_k) = tr(V ↦ R(V, e_j) e_k)`.
    pub fn ricci(&self) -> LinMap<S> {
        let mut ric: LinMap<S> = LinMap::zero(DIM_M);
        for j in 0..DIM_M {
            // R(e_i, e_j) for all i; the trace picks the e_i-component
            for i in 0..DIM_M {
                if i == j {
                    continue;
                }
                let r = self.curvature(i, j);
                for k in 0..DIM_M {
                    let v = ric.entry(j, k).clone() + r.entry(i, k).clone();
                    ric.set(j, k, v);
                }
            }
        }
        ric
    }

    /// Scalar curvature `g^{jk} Ric_{jk}`.
    pub fn scalar_curvature(&self) -> S {
        let ric = self.ricci();
        let mut s = S::zero();
        for j in 0..DIM_M {
            s = s + ric.entry(j, j).clone() / self.metric.diag()[j].clone();
        }
        s
    }

    /// Squared relative deviation from the Einstein condition:
    /// `‖Ric - (s/12) g‖² / ‖Ric‖²` in the metric norm on symmetric
    /// 2-tensors (zero for a Ricci-flat metric as well).
    pub fn einstein_deviation_sq(&self) -> S {
        let ric = self.ricci();
        let twelve = S::from_int(DIM_M as i64);
        let s = {
            let mut acc = S::zero();
            for j in 0..DIM_M {
                acc = acc + ric.entry(j, j).clone() / self.metric.diag()[j].clone();
            }
            acc
        };
        let mut dev = S::zero();
        let mut size = S::zero();
        for j in 0..DIM_M {
            for k in 0..DIM_M {
                let gjk = if j == k { self.metric.diag()[j].clone() } else { S::zero() };
                let t = ric.entry(j, k).clone() - s.clone() / twelve.clone() * gjk;
                let w = self.metric.diag()[j].clone() * self.metric.diag()[k].clone();
                dev = dev + t.clone() * t / w.clone();
                let r = ric.entry(j, k).clone();
                size = size + r.clone() * r / w;
            }
        }
        if size.is_zero() {
            return S::zero();
        }
        dev / size
    }

    /// Relative deviation from the Einstein condition (square root taken in
    /// floating point at the boundary).
    pub fn einstein_deviation(&self) -> f64 {
        self.einstein_deviation_sq().to_f64().max(0.0).sqrt()
    }

    /// Signed Einstein surrogate: the difference of the two Ricci
    /// eigenvalues (base block minus fiber block, metric-normalized). Its
    /// sign changes across each Einstein parameter, which makes it
    /// bisectable where the deviation itself is a nonnegative cusp.
    pub fn ricci_eigenvalue_gap(&self) -> S {
        let ric = self.ricci();
        ric.entry(0, 0).clone() / self.metric.diag()[0].clone()
            - ric.entry(6, 6).clone() / self.metric.diag()[6].clone()
    }

    fn check_form_invariant(&self, alpha: &AltForm<S>) -> Result<()> {
        let tol = if S::EXACT { 0.0 } else { 1e-9 * (1.0 + alpha.max_abs()) };
        for h in 0..DIM_H {
            if !self.table.isotropy_on_m[h].derive_form(alpha)?.approx_zero(tol) {
                return Err(GeomError::Domain(format!(
                    "form is not isotropy-invariant (generator {h} moves it); \
                     differentiate it as Frame::Section instead"
                )));
            }
        }
        Ok(())
    }

    fn check_endo_invariant(&self, endo: &LinMap<S>) -> Result<()> {
        let tol = if S::EXACT { 0.0 } else { 1e-9 * (1.0 + endo.max_abs()) };
        for h in 0..DIM_H {
            if !self.table.isotropy_on_m[h].commutator(endo).approx_zero(tol) {
                return Err(GeomError::Domain(format!(
                    "endomorphism is not isotropy-invariant (generator {h} moves it); \
                     differentiate it as Frame::Section instead"
                )));
            }
        }
        Ok(())
    }

    /// Covariant derivative of a form with constant canonical-frame
    /// components, in the direction `x`.
    pub fn cov_deriv_form(
        &self,
        x: &[S],
        alpha: &AltForm<S>,
        frame: Frame,
    ) -> Result<AltForm<S>> {
        if alpha.dim() != DIM_M {
            return Err(GeomError::Dimension(format!(
                "expected a form on the 12-dimensional quotient, got dimension {}",
                alpha.dim()
            )));
        }
        if frame == Frame::Invariant {
            self.check_form_invariant(alpha)?;
        }
        self.nomizu_of(x).derive_form(alpha)
    }

    /// Covariant derivative of an endomorphism field with constant
    /// canonical-frame components: `∇_x S = [Λ(x), S]`.
    pub fn cov_deriv_endo(&self, x: &[S], endo: &LinMap<S>, frame: Frame) -> Result<LinMap<S>> {
        if endo.dim() != DIM_M {
            return Err(GeomError::Dimension(format!(
                "expected an endomorphism of the 12-dimensional quotient, got dimension {}",
                endo.dim()
            )));
        }
        if frame == Frame::Invariant {
            self.check_endo_invariant(endo)?;
        }
        Ok(self.nomizu_of(x).commutator(endo))
    }
}

/// Canonical basis vector of the 12-dimensional complement.
pub fn basis_vector<S: Scalar>(i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); DIM_M];
    v[i] = S::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Space;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn geometry(lnum: i64, lden: i64, mnum: i64, mden: i64) -> (So7, InvariantGeometry<Rational>) {
        let g = So7::new();
        let geo = InvariantGeometry::new(
            &g,
            Rational::from_ratio(lnum, lden),
            Rational::from_ratio(mnum, mden),
        )
        .unwrap();
        (g, geo)
    }

    #[test]
    fn koszul_formula_holds() {
        // 2 g(Λ(X)Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y), all basis triples
        let (_, geo) = geometry(2, 1, 3, 1);
        let gg = geo.metric().clone();
        let table = geo.bracket_table();
        let pair_sparse = |v: &crate::linalg::SparseVec<Rational>, j: usize| -> Rational {
            v.iter()
                .find(|(k, _)| *k == j)
                .map(|(_, c)| c.clone() * gg.diag()[j].clone())
                .unwrap_or_else(Rational::zero)
        };
        for x in 0..DIM_M {
            for y in 0..DIM_M {
                let lam = geo.nomizu(x);
                for z in 0..DIM_M {
                    let lhs = r(2) * lam.entry(z, y).clone() * gg.diag()[z].clone();
                    let rhs = pair_sparse(&table.m_part[x][y], z)
                        - pair_sparse(&table.m_part[y][z], x)
                        + pair_sparse(&table.m_part[z][x], y);
                    assert_eq!(lhs, rhs, "triple ({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn connection_is_metric_and_torsion_free() {
        let (_, geo) = geometry(2, 1, 3, 1);
        let diag = geo.metric().diag().to_vec();
        let table = geo.bracket_table();
        for i in 0..DIM_M {
            let lam = geo.nomizu(i);
            // skew with respect to g
            for j in 0..DIM_M {
                for k in 0..DIM_M {
                    let s = lam.entry(k, j).clone() * diag[k].clone()
                        + lam.entry(j, k).clone() * diag[j].clone();
                    assert!(s.is_zero(), "not metric at ({i};{j},{k})");
                }
            }
            // Λ(e_i)e_j - Λ(e_j)e_i = [e_i, e_j]_m
            for j in 0..DIM_M {
                for k in 0..DIM_M {
                    let anti = lam.entry(k, j).clone() - geo.nomizu(j).entry(k, i).clone();
                    let bracket = table.m_part[i][j]
                        .iter()
                        .find(|(t, _)| *t == k)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Rational::zero);
                    assert_eq!(anti, bracket, "torsion at ({i},{j}) comp {k}");
                }
            }
        }
    }

    #[test]
    fn curvature_symmetries_and_first_bianchi() {
        let (_, geo) = geometry(2, 1, 3, 1);
        let diag = geo.metric().diag().to_vec();
        let mut curv = Vec::new();
        for i in 0..DIM_M {
            let mut row = Vec::new();
            for j in 0..DIM_M {
                row.push(geo.curvature(i, j));
            }
            curv.push(row);
        }
        for i in 0..DIM_M {
            for j in 0..DIM_M {
                // antisymmetry in the pair
                assert_eq!(curv[i][j], curv[j][i].neg());
                // g-skewness of each operator
                for a in 0..DIM_M {
                    for b in 0..DIM_M {
                        let s = curv[i][j].entry(a, b).clone() * diag[a].clone()
                            + curv[i][j].entry(b, a).clone() * diag[b].clone();
                        assert!(s.is_zero());
                    }
                }
            }
        }
        // first Bianchi identity: R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0
        for i in 0..DIM_M {
            for j in 0..DIM_M {
                for k in 0..DIM_M {
                    for comp in 0..DIM_M {
                        let total = curv[i][j].entry(comp, k).clone()
                            + curv[j][k].entry(comp, i).clone()
                            + curv[k][i].entry(comp, j).clone();
                        assert!(total.is_zero(), "bianchi ({i},{j},{k})");
                    }
                }
            }
        }
        // pair symmetry g(R(X,Y)Z, W) = g(R(Z,W)X, Y)
        for i in 0..DIM_M {
            for j in 0..DIM_M {
                for k in 0..DIM_M {
                    for l in 0..DIM_M {
                        let lhs = curv[i][j].entry(l, k).clone() * diag[l].clone();
                        let rhs = curv[k][l].entry(j, i).clone() * diag[j].clone();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn ricci_has_two_invariant_eigenvalues() {
        let (_, geo) = geometry(2, 1, 3, 1);
        let ric = geo.ricci();
        for j in 0..DIM_M {
            for k in 0..DIM_M {
                if j != k {
                    assert!(ric.entry(j, k).is_zero(), "off-diagonal Ricci at ({j},{k})");
                }
            }
        }
        for j in 1..6 {
            assert_eq!(ric.entry(j, j), ric.entry(0, 0));
        }
        for j in 7..12 {
            assert_eq!(ric.entry(j, j), ric.entry(6, 6));
        }
    }

    #[test]
    fn einstein_at_one_half() {
        // within the λμ = 1 family the metric at λ = 1/2 is Einstein with
        // positive scalar curvature
        let (_, geo) = geometry(1, 2, 2, 1);
        assert!(geo.einstein_deviation_sq().is_zero());
        assert!(geo.scalar_curvature().is_positive());
        // a nearby member is not Einstein
        let (_, other) = geometry(3, 5, 5, 3);
        assert!(!other.einstein_deviation_sq().is_zero());
    }

    #[test]
    fn differential_matches_frame_sum_of_covariant_derivatives() {
        // dα = Σ_i e^i ∧ ∇_{e_i} α for invariant α: ties the connection to
        // the Lie-theoretic differential
        let (g, geo) = geometry(2, 1, 3, 1);
        let mut omega = AltForm::zero(DIM_M, 2);
        for k in 0..3 {
            // λ-weighted hermitian form of the base block
            omega = omega.add(&AltForm::monomial(DIM_M, &[k + 3, k], r(2)));
            // μ-weighted fiber block
            omega = omega.add(&AltForm::monomial(DIM_M, &[k + 9, k + 6], r(3)));
        }
        let d_lie = g.invariant_d(&omega, Space::U3Quotient).unwrap();
        let mut d_nabla = AltForm::zero(DIM_M, 3);
        for i in 0..DIM_M {
            let grad = geo
                .cov_deriv_form(&basis_vector(i), &omega, Frame::Invariant)
                .unwrap();
            let ei = AltForm::one_form(DIM_M, i);
            d_nabla = d_nabla.add(&ei.wedge(&grad).unwrap());
        }
        assert_eq!(d_lie, d_nabla);
    }

    #[test]
    fn invariant_frame_rejects_noninvariant_input() {
        let (_, geo) = geometry(2, 1, 3, 1);
        let a = AltForm::<Rational>::one_form(DIM_M, 0);
        let err = geo.cov_deriv_form(&basis_vector(0), &a, Frame::Invariant);
        assert!(err.is_err());
        // the same derivative goes through as a section
        assert!(geo.cov_deriv_form(&basis_vector(0), &a, Frame::Section).is_ok());
    }
}
