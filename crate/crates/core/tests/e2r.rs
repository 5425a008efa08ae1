use kgfint_core::e2r::{
    heun_transform, reduce_equation, reduce_symbolic, reduced_residual, series_solution, DFunction, E2RConfig,
    LambdaRep,
};
use kgfint_core::lie::DEFAULT_SEED;
use kgfint_core::rational::{rat, ratio, to_f64};
use kgfint_core::symb::Chart;
use kgfint_core::Rational;
use num_complex::Complex64;
use proptest::prelude::*;

fn rational(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Rational> {
    (lo..=hi, 1..=den).prop_map(|(n, d)| ratio(n, d))
}

/// `(config, rep)` in the canonical class.
fn parameters() -> impl Strategy<Value = (E2RConfig, LambdaRep)> {
    (
        rational(1, 4, 2),
        (3i64..=6).prop_map(|n| ratio(n, 2)),
        -2i64..=2,
        rational(-3, 3, 2),
        rational(0, 4, 2),
    )
        .prop_map(|(charge, vareps, j1, j2, mass)| {
            let cfg = E2RConfig {
                charge: charge.clone(),
                vareps,
                mass,
                ..E2RConfig::default()
            };
            (cfg, LambdaRep::new(rat(j1), j2, charge).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn lambda_rep_brackets(j1 in -5i64..=5, j2 in rational(-6, 6, 4), eps in rational(-6, 6, 4)) {
        prop_assert!(LambdaRep::new(rat(j1), j2, eps).unwrap().verify().is_ok());
    }

    #[test]
    fn d_function_single_valued_iff_integer_j1(j1 in rational(-6, 6, 3), x in -1.0f64..1.0) {
        let d = DFunction::new(Complex64::new(x, 0.2), Complex64::new(0.1, -x), j1.clone(), ratio(1, 2), rat(1));
        prop_assert_eq!(d.is_single_valued(), j1.is_integer());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn symbolic_reduction_commutes_with_substitution((cfg, rep) in parameters()) {
        let values = [cfg.charge.clone(), cfg.vareps.clone(), rep.j1.clone(), rep.j2.clone(), cfg.mass.clone()];
        let numeric = reduce_equation(&cfg, &rep).unwrap();
        prop_assert_eq!(reduce_symbolic().substitute_params(&values), numeric.embed(Chart::flat(6)));
    }

    #[test]
    fn heun_series_solves_the_reduced_equation((cfg, rep) in parameters()) {
        let ode = reduce_equation(&cfg, &rep).unwrap();
        let hp = heun_transform(&ode, &cfg.vareps).unwrap();
        let k = to_f64(&hp.k);
        for s in [rat(0), ratio(1, 2)] {
            let series = series_solution(&hp, &s, 60).unwrap();
            for i in 1..=20 {
                let q = (0.45 * k).sqrt() * i as f64 / 20.0;
                let z = q * q / k;
                let (th, dth) = series.evaluate(z);
                let d2 = series.second_derivative(z);
                let r = reduced_residual(&ode, &hp, z, th, dth, d2);
                prop_assert!(r < 1e-7, "s = {s}, q = {q}: {r}");
            }
        }
    }

    #[test]
    fn d_function_satisfies_its_operators(j1 in -2i64..=2, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let d = DFunction::new(Complex64::new(x, y), Complex64::new(y, 0.3), rat(j1), ratio(1, 2), rat(1));
        let report = d.verify(25, 1e-10, DEFAULT_SEED).unwrap();
        prop_assert!(report.pass, "{report:?}");
    }
}
