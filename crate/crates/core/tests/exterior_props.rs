//! Randomized algebraic laws for the exterior-algebra kernel: graded
//! commutativity and associativity of the wedge, the antiderivation rule for
//! interior products, multilinearity and antisymmetry of evaluation, and
//! functoriality of pullbacks. Everything runs over exact rationals so each
//! law is checked with equality, not a tolerance.

use aqh_core::exterior::AltForm;
use aqh_core::scalar::{Rational, Scalar};
use proptest::prelude::*;

const DIM: usize = 6;

fn rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

/// Random homogeneous form of the requested degree on a 6-dimensional space.
fn form(degree: usize) -> impl Strategy<Value = AltForm<Rational>> {
    let indices: Vec<usize> = (0..DIM).collect();
    prop::collection::vec((prop::sample::subsequence(indices, degree), rat()), 0..4).prop_map(
        move |terms| {
            let mut f = AltForm::zero(DIM, degree);
            for (idx, c) in terms {
                f = f.add(&AltForm::monomial(DIM, &idx, c));
            }
            f
        },
    )
}

fn vector() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rat(), DIM)
}

fn graded_commutator_vanishes(a: &AltForm<Rational>, b: &AltForm<Rational>) -> bool {
    let ab = a.wedge(b).unwrap();
    let ba = b.wedge(a).unwrap();
    let signed = if a.degree() * b.degree() % 2 == 1 { ba.neg() } else { ba };
    ab.sub(&signed).is_zero()
}

proptest! {
    #[test]
    fn wedge_of_odd_degrees_anticommutes(a in form(1), b in form(3)) {
        prop_assert!(graded_commutator_vanishes(&a, &b));
    }

    #[test]
    fn wedge_with_even_degree_commutes(a in form(2), b in form(3)) {
        prop_assert!(graded_commutator_vanishes(&a, &b));
    }

    #[test]
    fn wedge_is_associative(a in form(1), b in form(2), c in form(2)) {
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn wedge_distributes_over_addition(a in form(2), b in form(2), c in form(1)) {
        let left = a.add(&b).wedge(&c).unwrap();
        let right = a.wedge(&c).unwrap().add(&b.wedge(&c).unwrap());
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn interior_product_is_an_antiderivation(
        a in form(1),
        b in form(2),
        v in vector(),
    ) {
        // ι_v(α ∧ β) = ι_v α ∧ β + (−1)^{deg α} α ∧ ι_v β, here with deg α = 1
        let lhs = a.wedge(&b).unwrap().interior(&v).unwrap();
        let rhs = a
            .interior(&v)
            .unwrap()
            .wedge(&b)
            .unwrap()
            .sub(&a.wedge(&b.interior(&v).unwrap()).unwrap());
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn interior_product_squares_to_zero(f in form(3), v in vector()) {
        let twice = f.interior(&v).unwrap().interior(&v).unwrap();
        prop_assert!(twice.is_zero());
    }

    #[test]
    fn evaluation_is_antisymmetric(f in form(3), u in vector(), v in vector(), w in vector()) {
        let base = f.eval(&[&u, &v, &w]).unwrap();
        let swapped = f.eval(&[&v, &u, &w]).unwrap();
        prop_assert!((base + swapped).is_zero());
    }

    #[test]
    fn evaluation_is_linear_in_each_slot(
        f in form(2),
        u in vector(),
        v in vector(),
        w in vector(),
        c in rat(),
    ) {
        let combo: Vec<Rational> = u
            .iter()
            .zip(&v)
            .map(|(x, y)| x.clone() + c.clone() * y.clone())
            .collect();
        let lhs = f.eval(&[&combo, &w]).unwrap();
        let rhs = f.eval(&[&u, &w]).unwrap() + c * f.eval(&[&v, &w]).unwrap();
        prop_assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn evaluation_matches_interior_chain(f in form(2), u in vector(), v in vector()) {
        // f(u, v) = ι_v (ι_u f)
        let direct = f.eval(&[&u, &v]).unwrap();
        let chained = f.interior(&u).unwrap().interior(&v).unwrap();
        prop_assert!((direct - chained.coeff(0)).is_zero());
    }

    #[test]
    fn pullback_is_functorial(
        f in form(2),
        a in prop::collection::vec(prop::collection::vec(rat(), DIM), DIM),
        b in prop::collection::vec(prop::collection::vec(rat(), DIM), DIM),
    ) {
        // pulling back along A and then along B equals pulling back along the
        // matrix product A·B (rows convention: row i = image of the i-th
        // basis one-form)
        let mut product = vec![vec![Rational::zero(); DIM]; DIM];
        for i in 0..DIM {
            for k in 0..DIM {
                let mut acc = Rational::zero();
                for (j, row) in b.iter().enumerate() {
                    acc = acc + a[i][j].clone() * row[k].clone();
                }
                product[i][k] = acc;
            }
        }
        let stepwise = f.pullback_rows(&a).pullback_rows(&b);
        let composite = f.pullback_rows(&product);
        prop_assert!(stepwise.sub(&composite).is_zero());
    }

    #[test]
    fn relabel_by_identity_is_identity(f in form(2)) {
        let idperm: Vec<usize> = (0..DIM).collect();
        prop_assert!(f.relabel(&idperm).sub(&f).is_zero());
    }
}

#[test]
fn monomial_orders_indices_with_sign() {
    let fwd = AltForm::monomial(DIM, &[0, 1], Rational::from_int(1));
    let rev = AltForm::monomial(DIM, &[1, 0], Rational::from_int(1));
    assert!(fwd.add(&rev).is_zero());
    let degenerate = AltForm::monomial(DIM, &[2, 2], Rational::from_int(5));
    assert!(degenerate.is_zero());
}
