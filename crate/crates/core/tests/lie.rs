use kgfint_core::lie::DEFAULT_SEED;
use kgfint_core::rational::ratio;
use kgfint_core::{LieAlgebra, QMatrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn algebras() -> Vec<LieAlgebra> {
    vec![
        LieAlgebra::e2_plus_r(),
        LieAlgebra::so3(),
        LieAlgebra::sl2r(),
        LieAlgebra::heisenberg(),
        LieAlgebra::abelian(3),
    ]
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| !r.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_constant_mutation_is_rejected(
        which in 0usize..5,
        slot in any::<prop::sample::Index>(),
        delta in nonzero_rational(),
    ) {
        let alg = &algebras()[which];
        let mut c = alg.constants().to_vec();
        let i = slot.index(c.len());
        c[i] += delta;
        let mutated = LieAlgebra::new(alg.dim(), c, Vec::new()).unwrap();
        prop_assert!(!mutated.validate().is_valid());
    }

    #[test]
    fn classical_index_is_basis_independent(
        which in 0usize..5,
        entries in prop::collection::vec(small_rational(), 16),
    ) {
        let alg = &algebras()[which];
        let n = alg.dim();
        let rows: Vec<Vec<Rational>> = (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
        let p = QMatrix::from_rows(&rows);
        prop_assume!(!p.determinant().is_zero());
        let other = alg.change_basis(&p).unwrap();
        prop_assert!(other.validate().is_valid());
        prop_assert_eq!(other.classical_index(DEFAULT_SEED), alg.classical_index(DEFAULT_SEED));
    }
}

#[test]
fn known_classical_indices() {
    let got: Vec<usize> = algebras().iter().map(|a| a.classical_index(DEFAULT_SEED)).collect();
    assert_eq!(got, vec![2, 1, 1, 1, 3]);
}
