//! The one-parameter family of compatible triples of almost complex
//! structures on the 12-dimensional quotient, and every torsion quantity
//! attached to it.
//!
//! For a parameter `λ > 0` the metric weighs the base block by `λ` and the
//! fiber block by `μ = 1/λ`. The triple is defined through its Kähler
//! two-forms
//!
//! ```text
//! ω_I = λ (a'∧a + b'∧b + c'∧c) + μ (p'∧p + q'∧q + r'∧r)
//! ω_J = (p∧a - p'∧a') + (q∧b - q'∧b') + (r∧c - r'∧c')
//! ω_K = (p∧a' + p'∧a) + (q∧b' + q'∧b) + (r∧c' + r'∧c)
//! ```
//!
//! raised to endomorphisms through the metric; exactly when `λμ = 1` they
//! satisfy the quaternion relations. All derived objects — exterior
//! derivatives, the cubic torsion forms, the intrinsic torsion, obstruction
//! tensors, Hermitian type flags — are computed from this data and the
//! structure constants, with no table values baked into the library code.

use std::fmt;

use crate::error::{GeomError, Result};
use crate::exterior::{extend_derivation, AltForm};
use crate::homogeneous::InvariantGeometry;
use crate::lie::{So7, Space, DIM_H, DIM_M};
use crate::linalg::{self, SparseVec};
use crate::linmap::{acs_action, slot_sum, LinMap, Trilinear};
use crate::pairing::{contract2, form_inner, lee_form, norm_f64, split_3form, DiagMetric};
use crate::scalar::Scalar;

/// Which member of the almost-complex-structure triple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Acs {
    I,
    J,
    K,
}

impl Acs {
    pub const ALL: [Acs; 3] = [Acs::I, Acs::J, Acs::K];

    pub fn idx(self) -> usize {
        match self {
            Acs::I => 0,
            Acs::J => 1,
            Acs::K => 2,
        }
    }

    /// The other two members, in cyclic order.
    pub fn others(self) -> (Acs, Acs) {
        match self {
            Acs::I => (Acs::J, Acs::K),
            Acs::J => (Acs::K, Acs::I),
            Acs::K => (Acs::I, Acs::J),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Acs::I => "I",
            Acs::J => "J",
            Acs::K => "K",
        }
    }
}

/// Presence flags for the four components of the covariant derivative of a
/// Torsion class flags of an almost Hermitian structure: which of the four
/// standard components of the covariant derivative of the Kähler form are
/// present.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GrayHervella {
    /// totally skew obstruction component
    pub w1: bool,
    /// remaining (non-skew) obstruction component
    pub w2: bool,
    /// primitive mixed-type part of dω
    pub w3: bool,
    /// trace (Lee form) part of dω
    pub w4: bool,
}

impl GrayHervella {
    pub fn is_kahler(self) -> bool {
        !self.w1 && !self.w2 && !self.w3 && !self.w4
    }

    /// The class labels that are present, e.g. `["W1", "W3"]`.
    pub fn labels(self) -> Vec<&'static str> {
        let mut parts = Vec::new();
        if self.w1 {
            parts.push("W1");
        }
        if self.w2 {
            parts.push("W2");
        }
        if self.w3 {
            parts.push("W3");
        }
        if self.w4 {
            parts.push("W4");
        }
        parts
    }
}

impl fmt::Display for GrayHervella {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.labels();
        if parts.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// The structure at one parameter value: metric, connection, the triple,
/// its Kähler forms, and the two invariant reference 3-forms.
pub struct AqhStructure<S: Scalar> {
    lambda: S,
    mu: S,
    geo: InvariantGeometry<S>,
    /// coframe differentials on the 12-dimensional quotient
    d_images: Vec<AltForm<S>>,
    acs: [LinMap<S>; 3],
    omega: [AltForm<S>; 3],
    d_omega: [AltForm<S>; 3],
    omega_base: AltForm<S>,
    omega_fiber: AltForm<S>,
    phi: AltForm<S>,
    psi: AltForm<S>,
}

/// The hermitian form of the base block, `a'∧a + b'∧b + c'∧c`.
fn base_hermitian<S: Scalar>() -> AltForm<S> {
    let mut f = AltForm::zero(DIM_M, 2);
    for k in 0..3 {
        f = f.add(&AltForm::monomial(DIM_M, &[k + 3, k], S::one()));
    }
    f
}

/// The hermitian form of the fiber block, `p'∧p + q'∧q + r'∧r`.
fn fiber_hermitian<S: Scalar>() -> AltForm<S> {
    let mut f = AltForm::zero(DIM_M, 2);
    for k in 6..9 {
        f = f.add(&AltForm::monomial(DIM_M, &[k + 3, k], S::one()));
    }
    f
}

/// The invariant 3-form pairing base pairs with fiber directions; together
/// with [`fiber_cubic`] it spans the image space of every cubic torsion
/// quantity in the family.
pub fn mixed_cubic<S: Scalar>() -> AltForm<S> {
    #[rustfmt::skip]
    let terms: [(usize, usize, usize, i64); 12] = [
        (0, 1, 8, 1), (3, 4, 8, -1), (0, 4, 11, 1), (3, 1, 11, 1),
        (1, 2, 6, 1), (4, 5, 6, -1), (1, 5, 9, 1), (4, 2, 9, 1),
        (2, 0, 7, 1), (5, 3, 7, -1), (2, 3, 10, 1), (5, 0, 10, 1),
    ];
    let mut f = AltForm::zero(DIM_M, 3);
    for (i, j, k, c) in terms {
        f = f.add(&AltForm::monomial(DIM_M, &[i, j, k], S::from_int(c)));
    }
    f
}

/// The invariant 3-form built from fiber directions only.
pub fn fiber_cubic<S: Scalar>() -> AltForm<S> {
    #[rustfmt::skip]
    let terms: [(usize, usize, usize, i64); 4] = [
        (6, 7, 8, 3), (6, 10, 11, -3), (9, 7, 11, -3), (9, 10, 8, -3),
    ];
    let mut f = AltForm::zero(DIM_M, 3);
    for (i, j, k, c) in terms {
        f = f.add(&AltForm::monomial(DIM_M, &[i, j, k], S::from_int(c)));
    }
    f
}

impl<S: Scalar> AqhStructure<S> {
    /// Member of the compatible family: `μ = 1/λ`. Requires `λ > 0`.
    pub fn new(algebra: &So7, lambda: S) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(GeomError::Domain(format!(
                "the family parameter must be positive, got {lambda}"
            )));
        }
        let mu = S::one() / lambda.clone();
        Self::with_metric(algebra, lambda, mu)
    }

    /// Same forms over an arbitrary positive metric pair `(λ, μ)`. The
    /// triple raised this way satisfies the quaternion relations only when
    /// `λμ = 1`; [`Self::check_normalization`] reports the failures.
    pub fn with_metric(algebra: &So7, lambda: S, mu: S) -> Result<Self> {
        if !lambda.is_positive() || !mu.is_positive() {
            return Err(GeomError::Domain(format!(
                "metric weights must be positive, got ({lambda}, {mu})"
            )));
        }
        let geo = InvariantGeometry::new(algebra, lambda.clone(), mu.clone())?;
        let d_images = algebra.coframe_differentials::<S>(Space::U3Quotient);

        let omega_base: AltForm<S> = base_hermitian();
        let omega_fiber: AltForm<S> = fiber_hermitian();
        let omega_i = omega_base.scale(&lambda).add(&omega_fiber.scale(&mu));

        // ω_J = Σ (p∧a - p'∧a') over the three pair families
        let mut omega_j = AltForm::zero(DIM_M, 2);
        let mut omega_k = AltForm::zero(DIM_M, 2);
        for t in 0..3 {
            let (base, basep, fib, fibp) = (t, t + 3, t + 6, t + 9);
            omega_j = omega_j
                .add(&AltForm::monomial(DIM_M, &[fib, base], S::one()))
                .add(&AltForm::monomial(DIM_M, &[fibp, basep], -S::one()));
            omega_k = omega_k
                .add(&AltForm::monomial(DIM_M, &[fib, basep], S::one()))
                .add(&AltForm::monomial(DIM_M, &[fibp, base], S::one()));
        }

        let metric = geo.metric().clone();
        let acs = [
            metric.raise_to_map(&omega_i)?,
            metric.raise_to_map(&omega_j)?,
            metric.raise_to_map(&omega_k)?,
        ];
        let omega = [omega_i, omega_j, omega_k];

        let d_omega = {
            let d = |f: &AltForm<S>| extend_derivation(f, &d_images, true);
            [d(&omega[0])?, d(&omega[1])?, d(&omega[2])?]
        };

        Ok(AqhStructure {
            lambda,
            mu,
            geo,
            d_images,
            acs,
            omega,
            d_omega,
            omega_base,
            omega_fiber,
            phi: mixed_cubic(),
            psi: fiber_cubic(),
        })
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn mu(&self) -> &S {
        &self.mu
    }

    pub fn geometry(&self) -> &InvariantGeometry<S> {
        &self.geo
    }

    pub fn metric(&self) -> &DiagMetric<S> {
        self.geo.metric()
    }

    pub fn acs(&self, a: Acs) -> &LinMap<S> {
        &self.acs[a.idx()]
    }

    pub fn omega(&self, a: Acs) -> &AltForm<S> {
        &self.omega[a.idx()]
    }

    pub fn d_omega(&self, a: Acs) -> &AltForm<S> {
        &self.d_omega[a.idx()]
    }

    pub fn phi(&self) -> &AltForm<S> {
        &self.phi
    }

    pub fn psi(&self) -> &AltForm<S> {
        &self.psi
    }

    pub fn omega_base(&self) -> &AltForm<S> {
        &self.omega_base
    }

    pub fn omega_fiber(&self) -> &AltForm<S> {
        &self.omega_fiber
    }

    /// Exterior derivative on the quotient (invariant-form calculus).
    pub fn d(&self, form: &AltForm<S>) -> Result<AltForm<S>> {
        extend_derivation(form, &self.d_images, true)
    }

    /// `A · dω_A`, the rotated derivative entering the cubic torsion forms.
    pub fn acs_d_omega(&self, a: Acs) -> AltForm<S> {
        acs_action(self.acs(a), self.d_omega(a))
    }

    /// `β_A = B·dω_B + C·dω_C` with `(B, C)` the other two members.
    pub fn beta(&self, a: Acs) -> AltForm<S> {
        let (b, c) = a.others();
        self.acs_d_omega(b).add(&self.acs_d_omega(c))
    }

    /// The cubic torsion form `ψ³ = (β_I + β_J + β_K)/12`.
    pub fn psi3(&self) -> AltForm<S> {
        let sum = self.beta(Acs::I).add(&self.beta(Acs::J)).add(&self.beta(Acs::K));
        sum.scale(&S::from_ratio(1, 12))
    }

    /// The `A`-aligned component `ψ³_A = (-β_A + 6ψ³ + 2 L_A ψ³)/8`, where
    /// `L_A` sums the action of `A` over the three slot pairs.
    pub fn psi3_component(&self, a: Acs) -> Result<AltForm<S>> {
        let p = self.psi3();
        let slots = slot_sum(self.acs(a), &p)?;
        let combined = self
            .beta(a)
            .neg()
            .add(&p.scale(&S::from_int(6)))
            .add(&slots.scale(&S::from_int(2)));
        Ok(combined.scale(&S::from_ratio(1, 8)))
    }

    /// The contraction `Λ_{ω_A} β_B`, a one-form; the full 3×3 grid of these
    /// vanishes across the family.
    pub fn contraction(&self, a: Acs, b: Acs) -> Result<AltForm<S>> {
        contract2(self.omega(a), &self.beta(b), self.metric())
    }

    /// Largest metric norm among the nine contractions.
    pub fn contractions_max(&self) -> Result<f64> {
        let mut max = 0.0f64;
        for a in Acs::ALL {
            for b in Acs::ALL {
                let n = norm_f64(&self.contraction(a, b)?, self.metric())?;
                max = max.max(n);
            }
        }
        Ok(max)
    }

    /// Lee form of the member `A`: `θ_A = Λ_{ω_A}(dω_A)/5`.
    pub fn lee(&self, a: Acs) -> Result<AltForm<S>> {
        lee_form(self.omega(a), self.d_omega(a), self.metric())
    }

    /// The rotation-rate one-form `λ_A`, defined through
    /// `6 λ_A(X) = ⟨∇_X ω_B, ω_C⟩` with `(B, C)` cyclic from `A` and the
    /// derivative taken in the constant-components frame.
    pub fn rotation_rate(&self, a: Acs) -> Result<Vec<S>> {
        let (b, c) = a.others();
        let six = S::from_int(6);
        let mut out = Vec::with_capacity(DIM_M);
        for i in 0..DIM_M {
            let nabla_b = self.geo.nomizu(i).commutator(self.acs(b));
            let lowered = self.metric().lower_to_form(&nabla_b)?;
            out.push(form_inner(&lowered, self.omega(c), self.metric())? / six.clone());
        }
        Ok(out)
    }

    /// Intrinsic torsion endomorphisms `ξ_{e_i}`, one per basis direction:
    /// `ξ_X = -¼ Σ_A A [Λ(X), A] + ½ Σ_A λ_A(X) A`.
    pub fn intrinsic_torsion(&self) -> Result<Vec<LinMap<S>>> {
        let rates: Vec<Vec<S>> = Acs::ALL
            .iter()
            .map(|a| self.rotation_rate(*a))
            .collect::<Result<_>>()?;
        let quarter = S::from_ratio(1, 4);
        let half = S::from_ratio(1, 2);
        let mut out = Vec::with_capacity(DIM_M);
        for i in 0..DIM_M {
            let lam = self.geo.nomizu(i);
            let mut xi = LinMap::zero(DIM_M);
            for a in Acs::ALL {
                let amap = self.acs(a);
                xi = xi.sub(&amap.compose(&lam.commutator(amap)).scale(&quarter));
                xi = xi.add(&amap.scale(&(half.clone() * rates[a.idx()][i].clone())));
            }
            out.push(xi);
        }
        Ok(out)
    }

    /// Projection of an endomorphism onto the centralizer of the triple:
    /// the average `¼ (S - I S I - J S J - K S K)` over the quaternion
    /// conjugations. It kills both the span of the triple and the
    /// complement.
    pub fn centralizer_projection(&self, s: &LinMap<S>) -> LinMap<S> {
        let mut acc = s.clone();
        for a in Acs::ALL {
            let m = self.acs(a);
            acc = acc.sub(&m.compose(s).compose(m));
        }
        acc.scale(&S::from_ratio(1, 4))
    }

    /// Coefficients of an endomorphism along the triple in the trace
    /// pairing: `c_A = -tr(S A)/12`.
    pub fn triple_coefficients(&self, s: &LinMap<S>) -> [S; 3] {
        let twelfth = S::from_ratio(-1, 12);
        [
            s.trace_product(self.acs(Acs::I)) * twelfth.clone(),
            s.trace_product(self.acs(Acs::J)) * twelfth.clone(),
            s.trace_product(self.acs(Acs::K)) * twelfth,
        ]
    }

    /// Lowered integrability obstruction tensor of the member `A`:
    /// `n_A(X, Y, Z) = g(N_A(X, Y), Z)` with
    /// `N_A(X,Y) = [Λ(AX), A]Y - [Λ(AY), A]X + A([Λ(Y), A]X) - A([Λ(X), A]Y)`.
    pub fn obstruction(&self, a: Acs) -> Trilinear<S> {
        let amap = self.acs(a);
        // C_i = [Λ(A e_i), A], D_i = [Λ(e_i), A]
        let mut c_maps = Vec::with_capacity(DIM_M);
        let mut d_maps = Vec::with_capacity(DIM_M);
        for i in 0..DIM_M {
            let a_ei = amap.column(i);
            c_maps.push(self.geo.nomizu_of(&a_ei).commutator(amap));
            d_maps.push(self.geo.nomizu(i).commutator(amap));
        }
        let g = self.metric().diag().to_vec();
        Trilinear::from_fn(DIM_M, |i, j, k| {
            let mut v = c_maps[i].entry(k, j).clone() - c_maps[j].entry(k, i).clone();
            // A([Λ(e_j), A] e_i) - A([Λ(e_i), A] e_j), k-component
            for t in 0..DIM_M {
                v = v + amap.entry(k, t).clone()
                    * (d_maps[j].entry(t, i).clone() - d_maps[i].entry(t, j).clone());
            }
            v * g[k].clone()
        })
    }

    /// Metric norm of a trilinear tensor, scaled so that an alternating
    /// tensor matches the norm of its associated 3-form.
    pub fn trilinear_norm(&self, t: &Trilinear<S>) -> f64 {
        let g = self.metric();
        let mut acc = 0.0f64;
        for i in 0..DIM_M {
            for j in 0..DIM_M {
                for k in 0..DIM_M {
                    let v = t.get(i, j, k).to_f64();
                    let w = (g.entry(i).clone() * g.entry(j).clone() * g.entry(k).clone())
                        .to_f64();
                    acc += v * v / w;
                }
            }
        }
        (acc / 6.0).sqrt()
    }

    /// Hermitian-type flags of the member `A` at the given tolerance.
    pub fn gray_hervella(&self, a: Acs, tol: f64) -> Result<GrayHervella> {
        let n = self.obstruction(a);
        let alt = n.alternation();
        let w1 = self.trilinear_norm(&alt) > tol;
        let w2 = self.trilinear_norm(&n.sub(&alt)) > tol;

        let (_, p21) = split_3form(self.d_omega(a), self.acs(a))?;
        let theta = self.lee(a)?;
        let w4 = norm_f64(&theta, self.metric())? > tol;
        let primitive = p21.sub(&self.omega(a).wedge(&theta)?);
        let w3 = norm_f64(&primitive, self.metric())? > tol;
        Ok(GrayHervella { w1, w2, w3, w4 })
    }

    /// Verify the volume normalizations and quaternion relations that
    /// characterize the compatible family; returns the first failure, which
    /// for `λμ ≠ 1` names the broken relation.
    pub fn check_normalization(&self) -> Result<()> {
        let pow = |f: &AltForm<S>, k: usize| -> Result<AltForm<S>> {
            let mut acc = f.clone();
            for _ in 1..k {
                acc = acc.wedge(f)?;
            }
            Ok(acc)
        };
        let vol_base = AltForm::monomial(DIM_M, &[0, 1, 2, 3, 4, 5], S::from_int(6));
        let vol_fiber = AltForm::monomial(DIM_M, &[6, 7, 8, 9, 10, 11], S::from_int(6));
        let tol = if S::EXACT { 0.0 } else { 1e-9 };

        if !pow(&self.omega_base, 3)?.approx_eq(&vol_base, tol) {
            return Err(GeomError::Structure(
                "cube of the base hermitian form is not 6× the base volume".into(),
            ));
        }
        if !pow(&self.omega_fiber, 3)?.approx_eq(&vol_fiber, tol) {
            return Err(GeomError::Structure(
                "cube of the fiber hermitian form is not 6× the fiber volume".into(),
            ));
        }

        let vol = AltForm::monomial(DIM_M, &(0..12).collect::<Vec<_>>(), S::from_int(720));
        for a in Acs::ALL {
            let sixth = pow(self.omega(a), 6)?;
            let scaled_tol = if S::EXACT { 0.0 } else { 1e-6 };
            if !sixth.approx_eq(&vol, scaled_tol) {
                return Err(GeomError::Structure(format!(
                    "ω_{}⁶ = {} × volume instead of 720 (the pair (λ, μ) = ({}, {}) is \
                     not normalized: λμ must be 1)",
                    a.name(),
                    sixth.coeff((1u32 << 12) - 1),
                    self.lambda,
                    self.mu,
                )));
            }
        }

        let id = LinMap::identity(DIM_M);
        let tol_m = if S::EXACT { 0.0 } else { 1e-9 };
        for a in Acs::ALL {
            let sq = self.acs(a).compose(self.acs(a));
            if !sq.approx_eq(&id.neg(), tol_m) {
                return Err(GeomError::Structure(format!(
                    "{}² ≠ -1 at (λ, μ) = ({}, {}); the raised triple is quaternionic \
                     only when λμ = 1",
                    a.name(),
                    self.lambda,
                    self.mu,
                )));
            }
        }
        let ij = self.acs(Acs::I).compose(self.acs(Acs::J));
        if !ij.approx_eq(self.acs(Acs::K), tol_m) {
            return Err(GeomError::Structure("IJ ≠ K".into()));
        }
        for (a, b) in [(Acs::I, Acs::J), (Acs::J, Acs::K), (Acs::K, Acs::I)] {
            let anti = self
                .acs(a)
                .compose(self.acs(b))
                .add(&self.acs(b).compose(self.acs(a)));
            if !anti.approx_zero(tol_m) {
                return Err(GeomError::Structure(format!(
                    "{} and {} do not anticommute",
                    a.name(),
                    b.name()
                )));
            }
        }
        for a in Acs::ALL {
            if !self.metric().is_skew(self.acs(a), tol_m) {
                return Err(GeomError::Structure(format!(
                    "{} is not metric-compatible",
                    a.name()
                )));
            }
        }
        Ok(())
    }

    /// Basis of the metric-skew endomorphisms: `raise(e^i ∧ e^j)` for
    /// `i < j`, in lexicographic pair order (66 elements).
    /// Basis of the metric-skew endomorphisms: the raised two-form
    /// monomials `e^i ∧ e^j` for `i < j`, in lexicographic order.
    pub fn skew_basis(&self) -> Result<Vec<LinMap<S>>> {
        let mut out = Vec::with_capacity(66);
        for i in 0..DIM_M {
            for j in (i + 1)..DIM_M {
                let f = AltForm::monomial(DIM_M, &[i, j], S::one());
                out.push(self.metric().raise_to_map(&f)?);
            }
        }
        Ok(out)
    }

    /// Coordinates of a metric-skew endomorphism in the [`Self::skew_basis`]
    /// order: the coefficients of its lowered 2-form.
    fn skew_coords(&self, s: &LinMap<S>) -> Result<Vec<S>> {
        let f = self.metric().lower_to_form(s)?;
        let mut out = Vec::with_capacity(66);
        for i in 0..DIM_M {
            for j in (i + 1)..DIM_M {
                out.push(f.coeff((1 << i) | (1 << j)));
            }
        }
        Ok(out)
    }

    /// Dimensions of the three summands the triple cuts out of the
    /// metric-skew endomorphisms: (centralizer, span of the triple,
    /// complement). Exact-scalar computation.
    pub fn stabilizer_dimensions(&self) -> Result<(usize, usize, usize)> {
        let basis = self.skew_basis()?;
        // centralizer: joint kernel of S ↦ [S, A] over the triple
        let columns: Vec<SparseVec<S>> = basis
            .iter()
            .map(|b| {
                let mut dense = Vec::with_capacity(3 * DIM_M * DIM_M);
                for a in Acs::ALL {
                    let comm = b.commutator(self.acs(a));
                    for r in 0..DIM_M {
                        for c in 0..DIM_M {
                            dense.push(comm.entry(r, c).clone());
                        }
                    }
                }
                linalg::sparse_from_dense(&dense)
            })
            .collect();
        let centralizer =
            linalg::kernel_of_map(basis.len(), 3 * DIM_M * DIM_M, |j| columns[j].clone()).len();

        // span of the triple inside the skew endomorphisms
        let triple_vecs: Vec<SparseVec<S>> = Acs::ALL
            .iter()
            .map(|a| Ok(linalg::sparse_from_dense(&self.skew_coords(self.acs(*a))?)))
            .collect::<Result<_>>()?;
        let triple_dim = linalg::rank(&triple_vecs);

        // complement: rank of 1 - P_centralizer - P_triple on the basis
        let mut residual_vecs = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut res = b.sub(&self.centralizer_projection(b));
            let coeffs = self.triple_coefficients(b);
            for (a, cf) in Acs::ALL.iter().zip(coeffs.iter()) {
                res = res.sub(&self.acs(*a).scale(cf));
            }
            residual_vecs.push(linalg::sparse_from_dense(&self.skew_coords(&res)?));
        }
        let complement = linalg::rank(&residual_vecs);
        Ok((centralizer, triple_dim, complement))
    }

    /// Basis of the model space for the intrinsic torsion: stabilizer-
    /// equivariant maps from the tangent space into the metric-skew
    /// endomorphisms, with values constrained to the complement of the
    /// algebra spanned by the triple's centralizer and the triple itself.
    /// Vectors live in the `12 × 66` coordinate space (direction index
    /// major, skew-pair index minor). Exact-scalar computation.
    pub fn equivariant_torsion_basis(&self) -> Result<Vec<SparseVec<S>>> {
        let skew = self.skew_basis()?;
        let n_skew = skew.len();
        let ncols = DIM_M * n_skew;
        let comm_rows = DIM_M * DIM_M * DIM_M; // per generator: 12 blocks of 12×12

        let iso = &self.geo.bracket_table().isotropy_on_m;
        let mut basis: Vec<SparseVec<S>> = (0..ncols).map(|c| vec![(c, S::one())]).collect();

        for gen in iso.iter().take(DIM_H) {
            // constraint for one generator h: for each direction j',
            //   [ad_h, ξ(e_{j'})] - Σ_t (ad_h)_{t,j'} ξ(e_t) = 0
            let column = |col: usize| -> SparseVec<S> {
                let j = col / n_skew;
                let b = col % n_skew;
                let mut dense = vec![S::zero(); comm_rows];
                // block j: [ad_h, B_b]
                let comm = gen.commutator(&skew[b]);
                for r in 0..DIM_M {
                    for c in 0..DIM_M {
                        let v = comm.entry(r, c);
                        if !v.is_zero() {
                            dense[j * DIM_M * DIM_M + r * DIM_M + c] = v.clone();
                        }
                    }
                }
                // blocks j': -(ad_h)_{j, j'} B_b
                for jp in 0..DIM_M {
                    let w = gen.entry(j, jp);
                    if w.is_zero() {
                        continue;
                    }
                    for r in 0..DIM_M {
                        for c in 0..DIM_M {
                            let v = skew[b].entry(r, c);
                            if !v.is_zero() {
                                let slot = jp * DIM_M * DIM_M + r * DIM_M + c;
                                dense[slot] = dense[slot].clone() - w.clone() * v.clone();
                            }
                        }
                    }
                }
                linalg::sparse_from_dense(&dense)
            };
            basis = restrict_basis(basis, ncols, comm_rows, column);
        }

        // final pass: the value on each direction must have no component
        // along the centralizer or the triple span
        let value_constraints: Vec<SparseVec<S>> = skew
            .iter()
            .map(|b| {
                let mut dense = self.skew_coords(&self.centralizer_projection(b))?;
                dense.extend(self.triple_coefficients(b));
                Ok(linalg::sparse_from_dense(&dense))
            })
            .collect::<Result<_>>()?;
        let per_block = n_skew + 3;
        let column = |col: usize| -> SparseVec<S> {
            let j = col / n_skew;
            let b = col % n_skew;
            value_constraints[b]
                .iter()
                .map(|(r, v)| (j * per_block + r, v.clone()))
                .collect()
        };
        Ok(restrict_basis(basis, ncols, DIM_M * per_block, column))
    }

    /// The intrinsic torsion as a vector in the `12 × 66` coordinate space
    /// of [`Self::equivariant_torsion_basis`].
    pub fn torsion_coordinates(&self) -> Result<SparseVec<S>> {
        let xi = self.intrinsic_torsion()?;
        let mut dense = Vec::with_capacity(DIM_M * 66);
        for x in &xi {
            dense.extend(self.skew_coords(x)?);
        }
        Ok(linalg::sparse_from_dense(&dense))
    }

    /// Does the computed intrinsic torsion lie in the equivariant model
    /// space? (Exact-scalar membership test.)
    pub fn torsion_in_equivariant_space(&self) -> Result<bool> {
        let basis = self.equivariant_torsion_basis()?;
        let coords = self.torsion_coordinates()?;
        Ok(linalg::in_span(&basis, &coords))
    }

    /// Real and complex dimensions of the equivariant torsion model space.
    ///
    /// Precomposition with the first member of the triple preserves the
    /// space and squares to minus the identity, so the space is a complex
    /// vector space of half its real dimension; both counts are returned
    /// as `(real, complex)` after certifying that stability exactly.
    pub fn torsion_space_dimensions(&self) -> Result<(usize, usize)> {
        let basis = self.equivariant_torsion_basis()?;
        let i_map = self.acs(Acs::I);
        let n_skew = DIM_M * (DIM_M - 1) / 2;
        for v in &basis {
            // (v ∘ I) on direction j is Σ_t I_{t,j} · (block t of v)
            let mut dense = vec![S::zero(); DIM_M * n_skew];
            for (col, coef) in v {
                let t = col / n_skew;
                let b = col % n_skew;
                for j in 0..DIM_M {
                    let w = i_map.entry(t, j);
                    if !w.is_zero() {
                        let slot = j * n_skew + b;
                        dense[slot] = dense[slot].clone() + w.clone() * coef.clone();
                    }
                }
            }
            let precomposed = linalg::sparse_from_dense(&dense);
            if !linalg::in_span(&basis, &precomposed) {
                return Err(GeomError::Structure(
                    "torsion model space is not stable under precomposition \
                     with the first member"
                        .into(),
                ));
            }
        }
        if basis.len() % 2 != 0 {
            return Err(GeomError::Structure(
                "torsion model space has odd real dimension".into(),
            ));
        }
        Ok((basis.len(), basis.len() / 2))
    }
}

/// Cut `basis` down to the combinations annihilated by the linear
/// constraint whose matrix column for coordinate `col` is `column(col)`.
fn restrict_basis<S: Scalar, F: Fn(usize) -> SparseVec<S>>(
    basis: Vec<SparseVec<S>>,
    ncols: usize,
    nrows: usize,
    column: F,
) -> Vec<SparseVec<S>> {
    if basis.is_empty() {
        return basis;
    }
    let images: Vec<SparseVec<S>> = basis
        .iter()
        .map(|v| {
            let mut dense = vec![S::zero(); nrows];
            for (colidx, coef) in v {
                for (r, w) in column(*colidx) {
                    dense[r] = dense[r].clone() + coef.clone() * w;
                }
            }
            linalg::sparse_from_dense(&dense)
        })
        .collect();
    let combos = linalg::kernel_of_map(basis.len(), nrows, |j| images[j].clone());
    combos
        .iter()
        .map(|combo| {
            let mut dense = vec![S::zero(); ncols];
            for (j, c) in combo {
                for (idx, w) in &basis[*j] {
                    dense[*idx] = dense[*idx].clone() + c.clone() * w.clone();
                }
            }
            linalg::sparse_from_dense(&dense)
        })
        .collect()
}
