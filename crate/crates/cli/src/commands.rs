use std::fs;
use std::path::Path;

use kgfint_core::cohomology::{self, CohomologyError, TwoCocycle, Verdict};
use kgfint_core::e2r::{
    self, compare_reduction, heun_transform, identity_suite_with, integrate_reduced, reduce_equation,
    series_solution, DFunction, DFunctionReport, E2RConfig, E2RError, HeunParams, IdentityReport, IntegrationError,
    LambdaRep, NumericSolution, ReducedOde, ReductionComparison,
};
use kgfint_core::kgf::GroupModel;
use kgfint_core::lie::AlgebraFile;
use kgfint_core::rational::{format_rational, parse_rational, rat, Rational};
use kgfint_core::{par, LieAlgebra};
use num_complex::Complex64;
use serde::Serialize;

use crate::report::{to_json, write_report, write_text, RunManifest};
use crate::{CliError, CocycleArgs, Context, Format, ParamArgs, SolveArgs};

fn manifest(ctx: &Context, command: &str) -> RunManifest {
    RunManifest::new(command, ctx.seed, &ctx.out_dir, ctx.format.as_str(), ctx.exec.is_parallel())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<LieAlgebra, CliError> {
    LieAlgebra::from_json_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn rational(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(format!("--{name} {text}: {e}")))
}

fn parse_mu(text: &str) -> Result<[Rational; 4], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Input(format!("--mu needs four comma-separated values, got {text:?}")));
    }
    let v: Vec<Rational> = parts.iter().map(|p| rational("mu", p)).collect::<Result<_, _>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

fn parse_list(name: &str, text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(|p| rational(name, p.trim())).collect()
}

fn load_cocycle(alg: &LieAlgebra, args: &CocycleArgs, m: &mut RunManifest) -> Result<TwoCocycle, CliError> {
    match (&args.cocycle, &args.mu) {
        (Some(path), _) => {
            m.input(path);
            TwoCocycle::from_json_str(&read(path)?, alg.dim())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        (None, Some(mu)) => {
            if alg.dim() != 4 {
                return Err(CliError::Input(format!(
                    "--mu applies to four-dimensional algebras, this one has dimension {}",
                    alg.dim()
                )));
            }
            m.param("mu", mu);
            let cfg = E2RConfig {
                mu: parse_mu(mu)?,
                ..E2RConfig::default()
            };
            Ok(cfg.cocycle())
        }
        (None, None) => Err(CliError::Input("give --cocycle FILE or --mu a,b,c,d".into())),
    }
}

fn entries(f: &TwoCocycle) -> Vec<(usize, usize, String)> {
    f.nonzero_entries()
        .into_iter()
        .map(|(a, b, v)| (a + 1, b + 1, format_rational(&v)))
        .collect()
}

fn require_cocycle(alg: &LieAlgebra, f: &TwoCocycle) -> Result<(), CliError> {
    let v = f.cocycle_violations(alg);
    if v.is_empty() {
        Ok(())
    } else {
        Err(CliError::Math(format!("not a 2-cocycle; cyclic identity fails at {v:?}")))
    }
}

#[derive(Serialize)]
struct ValidateResult {
    dim: usize,
    valid: bool,
    antisymmetry: Vec<(usize, usize, usize)>,
    jacobi: Vec<(usize, usize, usize, usize)>,
    brackets: Vec<String>,
}

pub fn validate(ctx: &Context, file: &Path) -> Result<(), CliError> {
    let mut m = manifest(ctx, "validate");
    m.input(file);
    let alg = load_algebra(file)?;
    let rep = alg.validate();
    let result = ValidateResult {
        dim: alg.dim(),
        valid: rep.is_valid(),
        antisymmetry: rep.antisymmetry.clone(),
        jacobi: rep.jacobi.clone(),
        brackets: alg.bracket_table(),
    };
    write_report(&m, &result)?;
    if result.valid {
        println!("valid dim={}", alg.dim());
        return Ok(());
    }
    for t in &rep.antisymmetry {
        println!("antisymmetry violated at {t:?}");
    }
    for t in &rep.jacobi {
        println!("jacobi violated at {t:?}");
    }
    Err(CliError::Math(format!(
        "{} antisymmetry and {} Jacobi violations",
        rep.antisymmetry.len(),
        rep.jacobi.len()
    )))
}

#[derive(Serialize)]
struct CohomologyResult {
    z_dim: usize,
    b_dim: usize,
    h_dim: usize,
    z_basis: Vec<Vec<(usize, usize, String)>>,
    b_basis: Vec<Vec<(usize, usize, String)>>,
    h_representatives: Vec<Vec<(usize, usize, String)>>,
}

pub fn cohomology(ctx: &Context, file: &Path) -> Result<(), CliError> {
    let mut m = manifest(ctx, "cohomology");
    m.input(file);
    let alg = load_algebra(file)?;
    if !alg.validate().is_valid() {
        return Err(CliError::Math("algebra fails antisymmetry or Jacobi; run validate".into()));
    }
    let r = cohomology::cohomology(&alg);
    let list = |v: &[TwoCocycle]| v.iter().map(entries).collect();
    let result = CohomologyResult {
        z_dim: r.z_dim,
        b_dim: r.b_dim,
        h_dim: r.h_dim,
        z_basis: list(&r.z_basis),
        b_basis: list(&r.b_basis),
        h_representatives: list(&r.h_representatives),
    };
    write_report(&m, &result)?;
    println!("{r}");
    Ok(())
}

#[derive(Serialize)]
struct IndexReport {
    cocycle: Vec<(usize, usize, String)>,
    index: usize,
    rank: usize,
    witness: Vec<String>,
    certified: bool,
    samples: usize,
    h_dim: usize,
    verdict: Option<Verdict>,
}

pub fn index(ctx: &Context, file: &Path, args: &CocycleArgs, metric_arbitrary: bool) -> Result<(), CliError> {
    let mut m = manifest(ctx, "index");
    m.input(file);
    m.param("metric_arbitrary", metric_arbitrary);
    let alg = load_algebra(file)?;
    let f = load_cocycle(&alg, args, &mut m)?;
    require_cocycle(&alg, &f)?;
    let idx = cohomology::cohomological_index_with(&alg, &f, ctx.seed, ctx.exec).map_err(|e| match e {
        CohomologyError::DimensionMismatch { .. } => CliError::Input(e.to_string()),
        e => CliError::Math(e.to_string()),
    })?;
    let h_dim = cohomology::cohomology(&alg).h_dim;
    let verdict = idx.certified_upper.then(|| Verdict {
        index: idx.index,
        q_dim: idx.q_dim,
        integrable: idx.q_dim <= 1,
        certified: true,
        metric_arbitrary,
        note: (h_dim == 0).then(|| "H2 = 0: the field is pure gauge and the index is the classical index".to_string()),
    });
    let report = IndexReport {
        cocycle: entries(&f),
        index: idx.index,
        rank: idx.rank,
        witness: idx.witness.components().iter().map(format_rational).collect(),
        certified: idx.certified_upper,
        samples: idx.samples,
        h_dim,
        verdict: verdict.clone(),
    };
    write_report(&m, &report)?;
    match verdict {
        Some(v) => {
            println!("{v}");
            if let Some(n) = &v.note {
                println!("note: {n}");
            }
            Ok(())
        }
        None => {
            eprintln!(
                "warning: best rank {} was still improving late in the {} samples",
                idx.rank, idx.samples
            );
            println!("index<={} qdim={} certified=false", idx.index, idx.q_dim);
            Err(CliError::Uncertified("index did not stabilize".into()))
        }
    }
}

#[derive(Serialize)]
struct ExtendResult {
    cocycle: Vec<(usize, usize, String)>,
    dim: usize,
    brackets: Vec<String>,
    algebra: AlgebraFile,
}

pub fn extend(ctx: &Context, file: &Path, args: &CocycleArgs) -> Result<(), CliError> {
    let mut m = manifest(ctx, "extend");
    m.input(file);
    let alg = load_algebra(file)?;
    let f = load_cocycle(&alg, args, &mut m)?;
    require_cocycle(&alg, &f)?;
    let ext = cohomology::extend(&alg, &f).map_err(|e| CliError::Math(e.to_string()))?;
    let result = ExtendResult {
        cocycle: entries(&f),
        dim: ext.extended.dim(),
        brackets: ext.extended.bracket_table(),
        algebra: ext.extended.to_file(),
    };
    write_report(&m, &result)?;
    for line in &result.brackets {
        println!("{line}");
    }
    Ok(())
}

struct Params {
    config: E2RConfig,
    j1: Rational,
    j2: Rational,
}

fn params(p: &ParamArgs, m: &mut RunManifest) -> Result<Params, CliError> {
    let config = E2RConfig {
        mu: parse_mu(&p.mu)?,
        charge: rational("eps", &p.eps)?,
        vareps: rational("vareps", &p.vareps)?,
        mass: rational("m", &p.m)?,
    };
    config.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let j1 = rational("J1", &p.j1)?;
    if !j1.is_integer() {
        return Err(CliError::Input(format!("J1 must be an integer, got {}", p.j1)));
    }
    let j2 = rational("J2", &p.j2)?;
    m.param("eps", format_rational(&config.charge));
    m.param("vareps", format_rational(&config.vareps));
    m.param("m", format_rational(&config.mass));
    m.param("mu", config.mu.iter().map(format_rational).collect::<Vec<_>>().join(","));
    m.param("J1", format_rational(&j1));
    m.param("J2", format_rational(&j2));
    Ok(Params { config, j1, j2 })
}

fn lambda_rep(p: &Params) -> Result<LambdaRep, CliError> {
    LambdaRep::new(p.j1.clone(), p.j2.clone(), p.config.charge.clone()).map_err(|e| CliError::Input(e.to_string()))
}

fn math(e: E2RError) -> CliError {
    match e {
        E2RError::Integration(IntegrationError::SingularApproach { .. })
        | E2RError::MetricParam(_)
        | E2RError::Mass(_)
        | E2RError::NonIntegerJ1(_)
        | E2RError::NotCanonicalClass
        | E2RError::Exponent(_)
        | E2RError::Truncation(_) => CliError::Input(e.to_string()),
        e => CliError::Math(e.to_string()),
    }
}

#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: Option<String>,
}

#[derive(Serialize)]
struct VerifyResult {
    identities: IdentityReport,
    checks: Vec<Check>,
    dfunction: Option<DFunctionReport>,
    pass: bool,
}

pub fn verify_example(
    ctx: &Context,
    p: &ParamArgs,
    model_path: Option<&Path>,
    points: usize,
    tol: f64,
) -> Result<(), CliError> {
    let mut m = manifest(ctx, "verify-example");
    let prm = params(p, &mut m)?;
    m.param("points", points);
    m.param("tol", tol);
    let identities = identity_suite_with(&prm.config, ctx.exec).map_err(math)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, res: Result<(), String>| {
        checks.push(Check {
            name: name.to_string(),
            pass: res.is_ok(),
            detail: res.err(),
        })
    };
    if let Some(path) = model_path {
        m.input(path);
        let res = GroupModel::from_bundle_str(&read(path)?)
            .map_err(|e| e.to_string())
            .and_then(|bundle| {
                bundle.verify().map_err(|e| e.to_string())?;
                let built = e2r::build_model();
                if bundle.xi != built.xi || bundle.eta != built.eta || bundle.extension != built.extension {
                    return Err("bundle frames differ from the built-in model".to_string());
                }
                Ok(())
            });
        push("model bundle", res);
    }
    let mut dfunction = None;
    if prm.config.is_canonical_class() {
        let rep = lambda_rep(&prm)?;
        push("lambda-representation commutators", rep.verify().map_err(|e| e.to_string()));
        let alg = LieAlgebra::e2_plus_r();
        let q_dim = cohomology::cohomological_index_with(&alg, &prm.config.cocycle(), ctx.seed, ctx.exec)
            .map(|r| r.q_dim)
            .map_err(|e| e.to_string());
        push(
            "one variable q matches qdim",
            q_dim.and_then(|q| if q == 1 { Ok(()) } else { Err(format!("qdim = {q}")) }),
        );
        if prm.config.charge != rat(0) {
            let d = DFunction::new(
                Complex64::new(0.3, 0.2),
                Complex64::new(-0.1, 0.4),
                prm.j1.clone(),
                prm.j2.clone(),
                prm.config.charge.clone(),
            );
            let r = d.verify_with(points, tol, ctx.seed, ctx.exec).map_err(math)?;
            let detail = if r.pass {
                Ok(())
            } else {
                Err(format!(
                    "max relative residual {:.3e}, worst {:?}, symbolic {}, normalization {}, single-valued {}",
                    r.max_relative_residual, r.worst, r.symbolic_residuals_zero, r.normalization_exact, r.single_valued
                ))
            };
            push("D-function", detail);
            dfunction = Some(r);
        }
    }
    let pass = identities.pass && checks.iter().all(|c| c.pass);
    let result = VerifyResult {
        identities,
        checks,
        dfunction,
        pass,
    };
    write_report(&m, &result)?;
    let mut failed = Vec::new();
    for c in &result.identities.checks {
        print_check(&c.name, c.pass, c.residual.as_deref(), &mut failed);
    }
    for c in &result.checks {
        print_check(&c.name, c.pass, c.detail.as_deref(), &mut failed);
    }
    if pass {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::Math(failed.join("; ")))
    }
}

fn print_check(name: &str, pass: bool, detail: Option<&str>, failed: &mut Vec<String>) {
    if pass {
        println!("PASS {name}");
    } else {
        let d = detail.unwrap_or("");
        println!("FAIL {name}: {d}");
        failed.push(format!("{name}: {d}"));
    }
}

#[derive(Serialize)]
struct HeunSummary {
    a: String,
    k: String,
    gamma: String,
    delta: String,
    c: String,
    eta: String,
    alpha: String,
    betas: [String; 2],
}

impl From<&HeunParams> for HeunSummary {
    fn from(h: &HeunParams) -> Self {
        let f = format_rational;
        HeunSummary {
            a: f(&h.a),
            k: f(&h.k),
            gamma: f(&h.gamma),
            delta: f(&h.delta),
            c: f(&h.c),
            eta: f(&h.eta),
            alpha: f(&h.alpha),
            betas: [f(&h.betas[0]), f(&h.betas[1])],
        }
    }
}

#[derive(Serialize)]
struct ReduceResult {
    heun: HeunSummary,
    comparison: ReductionComparison,
}

fn reduced(prm: &Params) -> Result<(ReducedOde, HeunParams, ReductionComparison), CliError> {
    if !prm.config.is_canonical_class() {
        return Err(CliError::Input("reduce and solve require --mu 1,0,0,0".into()));
    }
    let rep = lambda_rep(prm)?;
    let ode = reduce_equation(&prm.config, &rep).map_err(math)?;
    let hp = heun_transform(&ode, &prm.config.vareps).map_err(math)?;
    let cmp = compare_reduction(&prm.config, &rep, &ode, &hp).map_err(math)?;
    Ok((ode, hp, cmp))
}

pub fn reduce(ctx: &Context, p: &ParamArgs) -> Result<(), CliError> {
    let mut m = manifest(ctx, "reduce");
    let prm = params(p, &mut m)?;
    let (_, hp, cmp) = reduced(&prm)?;
    for (name, d) in ["d2", "d1", "d0"].iter().zip(&cmp.derived) {
        println!("{name} = {d}");
    }
    println!(
        "a={} gamma={} delta={} eta={}",
        format_rational(&hp.a),
        format_rational(&hp.gamma),
        format_rational(&hp.delta),
        format_rational(&hp.eta)
    );
    for h in &cmp.heun {
        println!("{}: derived {} printed {} match={}", h.name, h.derived, h.printed, h.matches);
    }
    println!("printed mismatches={} resolved_match={}", cmp.mismatches.len(), cmp.resolved_matches);
    if cmp.free_case {
        println!("free case: no charge terms, delta = {}", format_rational(&hp.delta));
    }
    let result = ReduceResult {
        heun: HeunSummary::from(&hp),
        comparison: cmp,
    };
    write_report(&m, &result)?;
    Ok(())
}

#[derive(Serialize)]
struct SolveResult {
    heun: HeunSummary,
    branch: String,
    z0: f64,
    z1: f64,
    tol: f64,
    series_terms: usize,
    series_recurrence_residual: f64,
    series_radius_estimate: f64,
    max_residual: f64,
    /// Largest relative deviation from the series on nodes with `z <= 1/2`.
    max_series_deviation: f64,
    accepted_steps: usize,
    rejected_steps: usize,
    nodes: usize,
    pass: bool,
}

fn solve_pipeline(prm: &Params, s: &SolveArgs) -> Result<(HeunParams, SolveResult, NumericSolution), CliError> {
    let (ode, hp, _) = reduced(prm)?;
    let branch = rational("branch", &s.branch)?;
    let series = series_solution(&hp, &branch, 40).map_err(math)?;
    let (t0, d0) = series.evaluate(s.z0);
    let sol = integrate_reduced(&ode, &hp, [t0, d0], (s.z0, s.z1), s.tol, s.nodes)
        .map_err(|e| math(E2RError::Integration(e)))?;
    let dev = sol
        .nodes
        .iter()
        .filter(|n| n.z <= 0.5)
        .map(|n| (series.evaluate(n.z).0 - n.theta).norm() / n.theta.norm())
        .fold(0.0, f64::max);
    let result = SolveResult {
        heun: HeunSummary::from(&hp),
        branch: format_rational(&branch),
        z0: s.z0,
        z1: s.z1,
        tol: s.tol,
        series_terms: series.coeffs.len(),
        series_recurrence_residual: series.max_recurrence_residual,
        series_radius_estimate: series.radius_estimate,
        max_residual: sol.max_residual,
        max_series_deviation: dev,
        accepted_steps: sol.stats.accepted,
        rejected_steps: sol.stats.rejected,
        nodes: sol.nodes.len(),
        pass: sol.max_residual < s.max_residual,
    };
    Ok((hp, result, sol))
}

fn record_solve(m: &mut RunManifest, s: &SolveArgs) {
    m.param("z0", s.z0);
    m.param("z1", s.z1);
    m.param("tol", s.tol);
    m.param("branch", &s.branch);
    m.param("nodes", s.nodes);
    m.param("max_residual", s.max_residual);
}

pub fn solve(ctx: &Context, p: &ParamArgs, s: &SolveArgs) -> Result<(), CliError> {
    let mut m = manifest(ctx, "solve");
    let prm = params(p, &mut m)?;
    record_solve(&mut m, s);
    let (_, result, sol) = solve_pipeline(&prm, s)?;
    let csv = sol.to_csv();
    write_text(&ctx.out_dir, "solve.csv", &csv)?;
    write_report(&m, &result)?;
    match ctx.format {
        Format::Csv => print!("{csv}"),
        Format::Json => {
            println!("max_residual={:.3e}", result.max_residual);
            println!("max_series_deviation={:.3e}", result.max_series_deviation);
            println!("nodes={} steps={}", result.nodes, result.accepted_steps);
        }
    }
    if result.pass {
        Ok(())
    } else {
        Err(CliError::Math(format!(
            "max residual {:.3e} exceeds {:.1e}",
            result.max_residual, s.max_residual
        )))
    }
}

#[derive(Serialize)]
struct SweepTask {
    task: usize,
    eps: String,
    vareps: String,
    result: Option<SolveResult>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepSummary {
    tasks: Vec<(usize, String, String, bool, Option<f64>)>,
    pass: bool,
}

pub fn sweep(ctx: &Context, p: &ParamArgs, s: &SolveArgs, eps_values: &str, vareps_values: &str) -> Result<(), CliError> {
    let mut m = manifest(ctx, "sweep");
    let base = params(p, &mut m)?;
    record_solve(&mut m, s);
    m.param("eps_values", eps_values);
    m.param("vareps_values", vareps_values);
    let eps = parse_list("eps-values", eps_values)?;
    let vareps = parse_list("vareps-values", vareps_values)?;
    let grid: Vec<(Rational, Rational)> = eps
        .iter()
        .flat_map(|e| vareps.iter().map(move |v| (e.clone(), v.clone())))
        .collect();
    let dir = ctx.out_dir.join("sweep");
    let outcomes = par::map_range(ctx.exec, grid.len(), |i| {
        let (e, v) = &grid[i];
        let prm = Params {
            config: E2RConfig {
                charge: e.clone(),
                vareps: v.clone(),
                ..base.config.clone()
            },
            j1: base.j1.clone(),
            j2: base.j2.clone(),
        };
        let run = prm
            .config
            .validate()
            .map_err(|e| CliError::Input(e.to_string()))
            .and_then(|_| solve_pipeline(&prm, s));
        let task = match run {
            Ok((_, r, _)) => SweepTask {
                task: i,
                eps: format_rational(e),
                vareps: format_rational(v),
                result: Some(r),
                error: None,
            },
            Err(err) => SweepTask {
                task: i,
                eps: format_rational(e),
                vareps: format_rational(v),
                result: None,
                error: Some(err.to_string()),
            },
        };
        let mut tm = m.clone();
        tm.param("eps", &task.eps);
        tm.param("vareps", &task.vareps);
        let written = to_json(&tm, &task).and_then(|t| write_text(&dir, &format!("task_{i:03}.json"), &t));
        (task, written.err())
    });
    let mut tasks = Vec::new();
    for (t, io) in outcomes {
        if let Some(e) = io {
            return Err(e);
        }
        let ok = t.result.as_ref().is_some_and(|r| r.pass);
        let res = t.result.as_ref().map(|r| r.max_residual);
        println!(
            "task {:03} eps={} vareps={} {}",
            t.task,
            t.eps,
            t.vareps,
            match (&t.error, res) {
                (Some(e), _) => format!("error: {e}"),
                (None, Some(r)) => format!("max_residual={r:.3e}"),
                _ => String::new(),
            }
        );
        tasks.push((t.task, t.eps, t.vareps, ok, res));
    }
    let pass = tasks.iter().all(|t| t.3);
    write_report(&m, &SweepSummary { tasks, pass })?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Math("some sweep tasks failed".into()))
    }
}
