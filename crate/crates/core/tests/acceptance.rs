use std::process::ExitCode;
use std::time::{Duration, Instant};

use kgfint_core::cohomology::{cocycle_space, cohomological_index_with, cohomology, TwoCocycle};
use kgfint_core::e2r::{
    compare_reduction, heun_transform, identity_suite_with, integrate_reduced, printed_heun, reduce_equation,
    reproducing_check, series_solution, wronskian_check, DFunction, E2RConfig, LambdaRep,
};
use kgfint_core::lie::DEFAULT_SEED;
use kgfint_core::rational::{rat, ratio};
use kgfint_core::{Execution, LieAlgebra, Rational};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    match (out, limit) {
        (Ok(msg), Some(l)) if took > l => Err(format!("{msg}; took {took:.2?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg} ({took:.2?})")),
        (Err(e), _) => Err(e),
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn e2r_cohomology() -> Outcome {
    let r = cohomology(&LieAlgebra::e2_plus_r());
    let dims = (r.z_dim, r.b_dim, r.h_dim);
    ensure(dims == (4, 2, 2), format!("dims {dims:?}"))?;
    Ok(format!("dims {dims:?}"))
}

fn index_grid(exec: Execution) -> Outcome {
    let alg = LieAlgebra::e2_plus_r();
    let values = [ratio(-2, 1), ratio(-1, 2), rat(0), rat(1), ratio(7, 3)];
    for m1 in &values {
        for m2 in &values {
            let f = TwoCocycle::from_entries(4, &[(0, 1, m1.clone()), (2, 3, m2.clone())]);
            let r = cohomological_index_with(&alg, &f, DEFAULT_SEED, exec).map_err(|e| e.to_string())?;
            let expected = if (m1 * m2).is_zero() { 2 } else { 0 };
            ensure(r.certified_upper, format!("uncertified at ({m1}, {m2})"))?;
            ensure(r.index == expected, format!("index {} at ({m1}, {m2})", r.index))?;
        }
    }
    Ok("25 grid points certified".into())
}

fn whitehead() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for alg in [LieAlgebra::so3(), LieAlgebra::sl2r()] {
        ensure(cohomology(&alg).h_dim == 0, "nonzero H2")?;
        let classical = alg.classical_index(DEFAULT_SEED);
        let basis = cocycle_space(&alg);
        for _ in 0..20 {
            let f = basis
                .iter()
                .fold(TwoCocycle::zero(alg.dim()), |acc, z| acc.add(&z.scale(&random_rational(&mut rng))));
            let r = cohomological_index_with(&alg, &f, DEFAULT_SEED, Execution::default()).map_err(|e| e.to_string())?;
            ensure(r.index == classical, format!("index {} vs classical {classical}", r.index))?;
        }
    }
    Ok("so3 and sl2r, 20 cocycles each".into())
}

fn identity_suites() -> Outcome {
    for mu in [[1, 0, 0, 0], [1, 1, 1, 1]] {
        let cfg = E2RConfig {
            mu: mu.map(rat),
            ..E2RConfig::default()
        };
        let r = identity_suite_with(&cfg, Execution::default()).map_err(|e| e.to_string())?;
        if let Some(bad) = r.checks.iter().find(|c| !c.pass) {
            return Err(format!("mu {mu:?}: {} failed: {:?}", bad.name, bad.residual));
        }
    }
    Ok("mu (1,0,0,0) and (1,1,1,1), all residuals identically zero".into())
}

fn lambda_rep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 5);
    for _ in 0..50 {
        let j1 = rat(rng.gen_range(-6..=6));
        let (j2, eps) = (random_rational(&mut rng), random_rational(&mut rng));
        LambdaRep::new(j1.clone(), j2.clone(), eps.clone())
            .and_then(|r| r.verify())
            .map_err(|e| format!("J1 {j1}, J2 {j2}, eps {eps}: {e}"))?;
    }
    Ok("50 triples".into())
}

fn d_function() -> Outcome {
    let q = Complex64::new(0.3, 0.2);
    let p = Complex64::new(-0.1, 0.4);
    let d = DFunction::new(q, p, rat(1), ratio(1, 2), rat(1));
    let r = d.verify(100, 1e-10, DEFAULT_SEED).map_err(|e| e.to_string())?;
    ensure(r.pass, format!("max relative residual {:.3e}", r.max_relative_residual))?;
    ensure(r.normalization_exact, "normalization")?;
    ensure(r.single_valued, "J1 = 1 not periodic")?;
    let half = DFunction::new(q, p, ratio(1, 2), ratio(1, 2), rat(1));
    ensure(!half.is_single_valued(), "J1 = 1/2 periodic")?;
    Ok(format!("max relative residual {:.2e}", r.max_relative_residual))
}

fn defaults() -> (E2RConfig, LambdaRep) {
    (E2RConfig::default(), LambdaRep::new(rat(1), ratio(1, 2), rat(1)).expect("integer J1"))
}

fn reduction() -> Outcome {
    let (cfg, rep) = defaults();
    let ode = reduce_equation(&cfg, &rep).map_err(|e| e.to_string())?;
    let hp = heun_transform(&ode, &cfg.vareps).map_err(|e| e.to_string())?;
    let (g, d, e) = printed_heun(&cfg, &rep);
    ensure((g, d, e) == (hp.gamma.clone(), hp.delta.clone(), hp.eta.clone()), "printed gamma/delta/eta differ")?;
    let cmp = compare_reduction(&cfg, &rep, &ode, &hp).map_err(|e| e.to_string())?;
    ensure(cmp.resolved_matches, "no symbol reading reproduces the derived equation")?;
    ensure(
        cmp.mismatches.iter().all(|m| !m.derived.is_empty() && !m.printed.is_empty()),
        "mismatch without detail",
    )?;
    let series = series_solution(&hp, &rat(0), 40).map_err(|e| e.to_string())?;
    let worst = (1..=20)
        .map(|i| series.heun_residual(&hp, 0.025 * i as f64))
        .fold(0.0, f64::max);
    ensure(worst < 1e-8, format!("series residual {worst:.3e}"))?;
    Ok(format!(
        "{} printed term(s) differ, resolved reading matches, series residual {worst:.1e}",
        cmp.mismatches.len()
    ))
}

fn numerics() -> Outcome {
    let (cfg, rep) = defaults();
    let ode = reduce_equation(&cfg, &rep).map_err(|e| e.to_string())?;
    let hp = heun_transform(&ode, &cfg.vareps).map_err(|e| e.to_string())?;
    let series = series_solution(&hp, &rat(0), 40).map_err(|e| e.to_string())?;
    let (t0, d0) = series.evaluate(0.1);
    let sol = integrate_reduced(&ode, &hp, [t0, d0], (0.1, 0.9), 1e-12, 80).map_err(|e| e.to_string())?;
    let dev = sol
        .nodes
        .iter()
        .filter(|n| n.z <= 0.5)
        .map(|n| (series.evaluate(n.z).0 - n.theta).norm() / n.theta.norm())
        .fold(0.0, f64::max);
    ensure(dev < 1e-8, format!("series deviation {dev:.3e}"))?;
    ensure(sol.max_residual < 1e-8, format!("residual {:.3e}", sol.max_residual))?;
    let w = wronskian_check(&hp, 0.1, 0.9, 1e-12, 40).map_err(|e| e.to_string())?;
    ensure(w.pass, format!("wronskian min {:.3e}", w.min_abs_w))?;
    Ok(format!(
        "deviation {dev:.1e}, residual {:.1e}, min |W| {:.2}",
        sol.max_residual, w.min_abs_w
    ))
}

fn reproducing() -> Outcome {
    let mut worst = 0.0f64;
    for eps in [1.0, 2.0] {
        let r = reproducing_check(eps, 321, Execution::default());
        ensure(r.pass, format!("eps {eps}: error {:.3e}", r.max_error))?;
        worst = worst.max(r.max_error);
    }
    Ok(format!("max error {worst:.1e}"))
}

fn determinism() -> Outcome {
    let json = |exec: Execution| -> Result<Vec<String>, String> {
        let (cfg, _) = defaults();
        let suite = identity_suite_with(&cfg, exec).map_err(|e| e.to_string())?;
        let d = DFunction::new(Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.4), rat(1), ratio(1, 2), rat(1))
            .verify_with(100, 1e-10, DEFAULT_SEED, exec)
            .map_err(|e| e.to_string())?;
        let rep = reproducing_check(1.0, 161, exec);
        let f = TwoCocycle::from_entries(4, &[(0, 1, rat(1))]);
        let idx = cohomological_index_with(&LieAlgebra::e2_plus_r(), &f, DEFAULT_SEED, exec)
            .map_err(|e| e.to_string())?;
        let ser = |v: serde_json::Result<String>| v.map_err(|e| e.to_string());
        Ok(vec![
            ser(serde_json::to_string(&suite))?,
            ser(serde_json::to_string(&d))?,
            ser(serde_json::to_string(&rep))?,
            format!("{} {} {:?}", idx.index, idx.rank, idx.witness.components()),
        ])
    };
    let a = json(Execution::Parallel)?;
    let b = json(Execution::Parallel)?;
    let c = json(Execution::Sequential)?;
    ensure(a == b, "repeated runs differ")?;
    ensure(a == c, "sequential and parallel runs differ")?;
    Ok(format!("{} reports byte-identical", a.len()))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Outcome)> = vec![
        ("e(2)+R cohomology dimensions", timed(Some(Duration::from_secs(1)), e2r_cohomology)),
        (
            "index law on the (mu1, mu2) grid",
            timed(Some(Duration::from_secs(10)), || index_grid(Execution::default())),
        ),
        ("Whitehead spot checks", timed(None, whitehead)),
        ("exact identity suite", timed(Some(Duration::from_secs(30)), identity_suites)),
        ("lambda-representation brackets", timed(None, lambda_rep)),
        ("D-function", timed(None, d_function)),
        ("reduction fidelity", timed(None, reduction)),
        ("series and integration", timed(Some(Duration::from_secs(5)), numerics)),
        ("reproducing kernel", timed(None, reproducing)),
        ("determinism", timed(None, determinism)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in criteria.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
