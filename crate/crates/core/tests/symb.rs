use kgfint_core::rational::ratio;
use kgfint_core::symb::{Chart, DiffForm, DiffOp, Expr};
use kgfint_core::GaussRational;
use proptest::prelude::*;

const CHART: Chart = Chart {
    dim: 3,
    periodic: Some(2),
};

fn expr() -> impl Strategy<Value = Expr> {
    expr_of_depth(3)
}

fn expr_of_depth(depth: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-5i64..=5, 1i64..=3, -2i64..=2)
            .prop_map(|(n, d, im)| Expr::constant(CHART, GaussRational::new(ratio(n, d), ratio(im, 1)))),
        (0usize..3).prop_map(|i| Expr::var(CHART, i)),
        (1u32..=2).prop_map(|k| Expr::cos(CHART, 2, k).unwrap()),
        (1u32..=2).prop_map(|k| Expr::sin(CHART, 2, k).unwrap()),
    ];
    leaf.prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner).prop_map(|(a, b)| &a * &b),
        ]
    })
}

fn vector_field() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(expr(), 3).prop_map(DiffOp::vector_field)
}

fn first_order() -> impl Strategy<Value = DiffOp> {
    (prop::collection::vec(expr_of_depth(1), 3), expr_of_depth(1))
        .prop_map(|(v, f)| DiffOp::vector_field(v).plus_function(&f))
}

fn one_form() -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(expr(), 3).prop_map(DiffForm::one_form)
}

fn two_form() -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(expr(), 3).prop_map(|c| {
        let mut w = DiffForm::zero(CHART, 2);
        w.set(&[0, 1], c[0].clone());
        w.set(&[0, 2], c[1].clone());
        w.set(&[1, 2], c[2].clone());
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_identities_cancel(a in expr(), b in expr(), c in expr()) {
        prop_assert!((&(&a * &b) - &(&b * &a)).is_zero());
        prop_assert!((&(&(&a + &b) - &b) - &a).is_zero());
        let left = &a * &(&b + &c);
        let right = &(&a * &b) + &(&a * &c);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn equal_values_have_equal_forms(a in expr(), b in expr()) {
        let x = &(&a + &b) * &(&a - &b);
        let y = &(&a * &a) - &(&b * &b);
        prop_assert_eq!(&x, &y);
        for p in [[0.3, -0.7, 1.1], [1.5, 0.2, -2.0]] {
            prop_assert!((x.eval_at(&p) - y.eval_at(&p)).norm() <= 1e-9 * (1.0 + x.eval_at(&p).norm()));
        }
    }

    #[test]
    fn d_squared_vanishes(f in expr(), w in one_form()) {
        prop_assert!(DiffForm::function(f).exterior_d().exterior_d().is_zero());
        prop_assert!(w.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn cartan_formula(v in vector_field(), w1 in one_form(), w2 in two_form()) {
        for w in [w1, w2] {
            let lie = w.lie_derivative(&v).unwrap();
            let cartan = w.exterior_d().interior(&v).unwrap().add(&w.interior(&v).unwrap().exterior_d());
            prop_assert!(lie.sub(&cartan).is_zero());
        }
    }

    #[test]
    fn commutator_antisymmetry_and_jacobi(a in first_order(), b in first_order(), c in first_order()) {
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert!(ab.add(&ba).is_zero());
        let j = a
            .commutator(&b.commutator(&c).unwrap())
            .unwrap()
            .add(&b.commutator(&c.commutator(&a).unwrap()).unwrap())
            .add(&c.commutator(&ab).unwrap());
        prop_assert!(j.is_zero());
    }
}
