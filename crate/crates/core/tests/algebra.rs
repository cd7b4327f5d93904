use bispectra::family::{generate_polynomial, FamilyConfig};
use bispectra::moments::{verify_d_orthogonality, verify_duality};
use bispectra::poly::Poly;
use bispectra::rational::{frac, q, Rational};
use bispectra::toda::{pdo_add, pdo_compose, project_minus, project_plus, PseudoDiffOperator};
use bispectra::weyl::{ad_exp_conjugate, compose, formal_adjoint, DiffOperator};
use num_traits::One;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn weyl_op() -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec((0u32..4, 0u32..4, small_rational()), 1..5).prop_map(|ts| {
        let mut op = DiffOperator::zero();
        for (a, b, c) in ts {
            op.add_term(a, b, c);
        }
        op
    })
}

fn q_config() -> impl Strategy<Value = FamilyConfig> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec(small_rational(), d + 1).prop_map(move |mut cs| {
            if cs[d] == q(0) {
                cs[d] = q(-1);
            }
            FamilyConfig::new(d, cs).unwrap()
        })
    })
}

fn pdo() -> impl Strategy<Value = PseudoDiffOperator> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(-3i64..=3, 1..3)), 1..4).prop_map(
        |ts| {
            let mut p = PseudoDiffOperator::zero(bispectra::toda::OperatorType::Upper);
            for (k, cs) in ts {
                p.add_term(k, Poly::from_i64(&cs));
            }
            p
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_composition_is_associative(a in weyl_op(), b in weyl_op(), c in weyl_op()) {
        prop_assert_eq!(compose(&compose(&a, &b), &c), compose(&a, &compose(&b, &c)));
    }

    #[test]
    fn conjugation_is_an_invertible_homomorphism(cfg in q_config(), a in weyl_op(), b in weyl_op()) {
        let qd = cfg.q_poly();
        let sa = ad_exp_conjugate(&qd, &a).unwrap();
        let sb = ad_exp_conjugate(&qd, &b).unwrap();
        prop_assert_eq!(ad_exp_conjugate(&qd, &compose(&a, &b)).unwrap(), compose(&sa, &sb));
        let back = ad_exp_conjugate(&qd.scale(&-Rational::one()), &sa).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn adjoint_is_an_anti_involution(a in weyl_op(), b in weyl_op()) {
        prop_assert_eq!(formal_adjoint(&formal_adjoint(&a)), a.clone());
        prop_assert_eq!(formal_adjoint(&compose(&a, &b)), compose(&formal_adjoint(&b), &formal_adjoint(&a)));
    }

    #[test]
    fn polynomials_are_monic(cfg in q_config(), n in 0usize..=60) {
        let p = generate_polynomial(&cfg, n);
        prop_assert_eq!(p.degree(), Some(n as u32));
        prop_assert_eq!(p.leading().unwrap().1.clone(), q(1));
    }

    #[test]
    fn pdo_composition_is_associative(a in pdo(), b in pdo(), c in pdo()) {
        let left = pdo_compose(&pdo_compose(&a, &b).unwrap(), &c).unwrap();
        let right = pdo_compose(&a, &pdo_compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn projections_split_and_are_idempotent(a in pdo()) {
        let plus = project_plus(&a);
        let minus = project_minus(&a);
        prop_assert_eq!(pdo_add(&plus, &minus).terms, a.terms.clone());
        prop_assert_eq!(project_plus(&plus), plus.clone());
        prop_assert_eq!(project_minus(&minus), minus.clone());
        prop_assert!(plus.terms.keys().all(|&k| k >= 0) && minus.terms.keys().all(|&k| k < 0));
    }
}

#[test]
fn random_families_are_d_orthogonal() {
    let cfgs = [
        FamilyConfig::new(1, vec![q(2), frac(-1, 3)]).unwrap(),
        FamilyConfig::new(2, vec![q(1), frac(1, 2), q(-1)]).unwrap(),
        FamilyConfig::new(3, vec![q(0), q(1), q(0), frac(3, 4)]).unwrap(),
    ];
    for cfg in &cfgs {
        let dual = verify_duality(cfg, 10);
        assert!(dual.passed, "{:?}", dual.failures.first());
        let orth = verify_d_orthogonality(cfg, 8);
        assert!(orth.passed, "{:?}", orth.failures.first());
    }
}
