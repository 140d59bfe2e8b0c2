//! Integration checks for the Riemannian layer: the canonical connection is
//! metric and torsion-free, its curvature satisfies the first Bianchi
//! identity, the Ricci tensor is block-diagonal with two eigenvalues, and the
//! Einstein condition holds exactly at the closed-form parameter and
//! numerically at the second root.

use aqh_core::homogeneous::{basis_vector, InvariantGeometry};
use aqh_core::lie::{So7, DIM_M};
use aqh_core::scalar::{Rational, Scalar};
use aqh_core::LinMap;

fn geometry(num: i64, den: i64) -> InvariantGeometry<Rational> {
    let lam = Rational::from_ratio(num, den);
    let mu = Rational::from_int(1) / lam.clone();
    InvariantGeometry::new(&So7::new(), lam, mu).unwrap()
}

#[test]
fn connection_is_metric_and_torsion_free() {
    let geo = geometry(2, 3);
    for i in 0..DIM_M {
        assert!(
            geo.metric().is_skew(geo.nomizu(i), 0.0),
            "connection operator {i} is not metric-skew"
        );
    }
    // Λ(x)y − Λ(y)x = [x, y] projected to the complement
    for i in 0..DIM_M {
        for j in 0..DIM_M {
            let xi: Vec<Rational> = basis_vector(i);
            let xj: Vec<Rational> = basis_vector(j);
            let (m_part, _) = geo.bracket_table().bracket_m(&xi, &xj);
            let lhs: Vec<Rational> = geo
                .nomizu(i)
                .column(j)
                .iter()
                .zip(geo.nomizu(j).column(i))
                .map(|(a, b)| a.clone() - b)
                .collect();
            assert_eq!(lhs, m_part, "torsion at directions {i}, {j}");
        }
    }
}

#[test]
fn curvature_is_skew_and_satisfies_first_bianchi() {
    let geo = geometry(1, 1);
    let r: Vec<Vec<LinMap<Rational>>> = (0..DIM_M)
        .map(|i| (0..DIM_M).map(|j| geo.curvature(i, j)).collect())
        .collect();
    for i in 0..DIM_M {
        for j in (i + 1)..DIM_M {
            assert!(
                geo.metric().is_skew(&r[i][j], 0.0),
                "curvature operator ({i},{j}) is not metric-skew"
            );
            assert!(
                r[i][j].add(&r[j][i]).approx_zero(0.0),
                "curvature is not antisymmetric in its arguments"
            );
        }
    }
    // cyclic sum R(i,j)e_k + R(j,k)e_i + R(k,i)e_j = 0 for a torsion-free
    // connection
    for i in 0..DIM_M {
        for j in (i + 1)..DIM_M {
            for k in (j + 1)..DIM_M {
                let mut acc: Vec<Rational> = r[i][j].column(k);
                for (t, v) in r[j][k].column(i).into_iter().enumerate() {
                    acc[t] = acc[t].clone() + v;
                }
                for (t, v) in r[k][i].column(j).into_iter().enumerate() {
                    acc[t] = acc[t].clone() + v;
                }
                assert!(
                    acc.iter().all(|v| v.is_zero()),
                    "first Bianchi identity fails at ({i},{j},{k})"
                );
            }
        }
    }
}

#[test]
fn ricci_is_block_diagonal_with_two_eigenvalues() {
    let geo = geometry(2, 3);
    let ric = geo.ricci();
    for i in 0..DIM_M {
        for j in 0..DIM_M {
            if i != j {
                assert!(ric.entry(i, j).is_zero(), "off-diagonal Ricci entry ({i},{j})");
            }
        }
    }
    for i in 1..6 {
        assert_eq!(ric.entry(i, i), ric.entry(0, 0), "surface block is not isotropic");
    }
    for i in 7..12 {
        assert_eq!(ric.entry(i, i), ric.entry(6, 6), "fiber block is not isotropic");
    }
    // frozen exact values at this parameter
    assert_eq!(*ric.entry(0, 0), Rational::from_ratio(31, 8));
    assert_eq!(*ric.entry(6, 6), Rational::from_ratio(593, 64));
    assert_eq!(geo.scalar_curvature(), Rational::from_ratio(1151, 16));
    assert_eq!(geo.ricci_eigenvalue_gap(), Rational::from_ratio(-35, 96));
}

#[test]
fn einstein_exactly_at_the_closed_form_parameter() {
    let geo = geometry(1, 2);
    assert!(geo.einstein_deviation_sq().is_zero());
    assert_eq!(geo.scalar_curvature(), Rational::from_int(72));
    // Ric = 6 g exactly
    let ric = geo.ricci();
    for i in 0..DIM_M {
        let expected = Rational::from_int(6) * geo.metric().diag()[i].clone();
        assert_eq!(*ric.entry(i, i), expected);
    }
}

#[test]
fn second_einstein_parameter_is_the_expected_square_root() {
    let lam = (3.0f64 / 8.0).sqrt();
    let geo = InvariantGeometry::new(&So7::new(), lam, 1.0 / lam).unwrap();
    assert!(geo.einstein_deviation() < 1e-12);
    // the signed surrogate changes sign across both roots
    let gap = |l: f64| {
        InvariantGeometry::new(&So7::new(), l, 1.0 / l)
            .unwrap()
            .ricci_eigenvalue_gap()
    };
    assert!(gap(0.4) < 0.0);
    assert!(gap(0.55) > 0.0);
    assert!(gap(1.0) < 0.0);
}

#[test]
fn generic_parameters_are_not_einstein() {
    for (n, d) in [(1i64, 1i64), (2, 5), (4, 5), (3, 2)] {
        let geo = geometry(n, d);
        assert!(
            !geo.einstein_deviation_sq().is_zero(),
            "unexpected Einstein metric at {n}/{d}"
        );
    }
}
