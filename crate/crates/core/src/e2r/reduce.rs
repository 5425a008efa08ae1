use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::lie::LieAlgebra;
use crate::rational::{format_rational, rat, ratio, GaussRational, Rational};
use crate::symb::{Chart, DiffOp, Expr};

use super::{lambda_ops, E2RConfig, E2RError, LambdaRep};

/// Variable names of the chart used by [`reduce_symbolic`].
pub const SYMBOLIC_PARAMS: [&str; 6] = ["q", "eps", "vareps", "J1", "J2", "m"];

/// `d2 ψ'' + d1 ψ' + d0 ψ = 0` in the variable `x1 = q`; any further chart
/// variables are parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedOde {
    pub d2: Expr,
    pub d1: Expr,
    pub d0: Expr,
}

type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_scale(a: &Poly, k: &Rational) -> Poly {
    trim(a.iter().map(|x| x * k).collect())
}

fn monomial(k: Rational, n: usize) -> Poly {
    let mut p = vec![Rational::zero(); n + 1];
    p[n] = k;
    trim(p)
}

fn coeff(p: &Poly, i: usize) -> Rational {
    p.get(i).cloned().unwrap_or_else(Rational::zero)
}

fn poly_string(p: &Poly, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = format_rational(&c.abs());
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let body = match (i, mag.as_str()) {
            (0, _) => mag,
            (_, "1") if i == 1 => var.to_string(),
            (_, "1") => format!("{var}^{i}"),
            (1, _) => format!("{mag}*{var}"),
            _ => format!("{mag}*{var}^{i}"),
        };
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl ReducedOde {
    pub fn chart(&self) -> Chart {
        self.d0.chart()
    }

    /// Real rational coefficients in `q`, for a one-variable chart.
    pub fn polys(&self) -> Result<[Poly; 3], E2RError> {
        let conv = |e: &Expr| -> Result<Poly, E2RError> {
            if e.chart().dim != 1 {
                return Err(E2RError::NotPolynomial(format!("{e} has parameters")));
            }
            let cs = e.coefficients_in(0);
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                match c.as_constant() {
                    Some(g) if g.is_real() => out.push(g.re),
                    _ => return Err(E2RError::NotPolynomial(e.to_string())),
                }
            }
            Ok(trim(out))
        };
        Ok([conv(&self.d2)?, conv(&self.d1)?, conv(&self.d0)?])
    }

    /// Substitutes numbers for the parameter variables `x2, x3, ...`.
    pub fn substitute_params(&self, values: &[Rational]) -> ReducedOde {
        let sub = |e: &Expr| {
            values.iter().enumerate().fold(e.clone(), |acc, (i, v)| {
                acc.substitute(i + 1, &GaussRational::real(v.clone()))
                    .expect("parameters are not periodic")
            })
        };
        ReducedOde {
            d2: sub(&self.d2),
            d1: sub(&self.d1),
            d0: sub(&self.d0),
        }
    }

    pub fn embed(&self, chart: Chart) -> ReducedOde {
        ReducedOde {
            d2: self.d2.embed(chart),
            d1: self.d1.embed(chart),
            d0: self.d0.embed(chart),
        }
    }

    /// `d2 ψ'' + d1 ψ' + d0 ψ` and the sum of the term magnitudes.
    pub fn residual(&self, q: Complex64, psi: [Complex64; 3]) -> (Complex64, f64) {
        let point = [q];
        let t2 = self.d2.eval_complex(&point) * psi[2];
        let t1 = self.d1.eval_complex(&point) * psi[1];
        let t0 = self.d0.eval_complex(&point) * psi[0];
        (t2 + t1 + t0, t2.norm() + t1.norm() + t0.norm())
    }
}

/// `Σ G^{ab}(ℓ_a + C_a)ℓ_b + m²` split into its three coefficients.
fn reduce_ops(ops: &[DiffOp], ginv_diag: &[Expr; 4], m2: &Expr) -> ReducedOde {
    let trace = LieAlgebra::e2_plus_r().trace_vector();
    let chart = m2.chart();
    let mut h = DiffOp::multiplication(m2.clone());
    for a in 0..4 {
        let left = ops[a].plus_function(&Expr::constant(chart, trace.0[a].clone()));
        let sq = left.compose(&ops[a]).expect("first-order operators compose to order two");
        h = h.add(&sq.left_mul(&ginv_diag[a]));
    }
    ReducedOde {
        d2: h.coefficient(&[0, 0]),
        d1: h.coefficient(&[0]),
        d0: h.zeroth(),
    }
}

/// The reduced equation `G^{ab}(ℓ_a + C_a)ℓ_b ψ = -m² ψ` with
/// `G^{ab} = diag(-vareps², -1, -1, 1)`.
pub fn reduce_equation(config: &E2RConfig, rep: &LambdaRep) -> Result<ReducedOde, E2RError> {
    config.validate()?;
    if !config.is_canonical_class() {
        return Err(E2RError::NotCanonicalClass);
    }
    let c = LambdaRep::chart();
    let k = |r: Rational| Expr::constant(c, r);
    let v2 = &config.vareps * &config.vareps;
    let g = [k(-v2), k(rat(-1)), k(rat(-1)), k(rat(1))];
    let m2 = &config.mass * &config.mass;
    let ops = lambda_ops(c, 0, &k(config.charge.clone()), &k(rep.j1.clone()), &k(rep.j2.clone()));
    Ok(reduce_ops(&ops, &g, &k(m2)))
}

/// The same reduction with every parameter kept as a chart variable,
/// see [`SYMBOLIC_PARAMS`].
pub fn reduce_symbolic() -> ReducedOde {
    let c = Chart::flat(6);
    let x = |i| Expr::var(c, i);
    let minus_one = Expr::constant(c, rat(-1));
    let g = [-x(2).pow(2), minus_one.clone(), minus_one, Expr::one(c)];
    let ops = lambda_ops(c, 0, &x(1), &x(3), &x(4));
    reduce_ops(&ops, &g, &x(5).pow(2))
}

#[derive(Clone, Debug, Serialize)]
pub struct TermMismatch {
    pub coefficient: String,
    pub power: usize,
    pub derived: String,
    pub printed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReading {
    pub reading: String,
    pub value: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParameterComparison {
    pub name: String,
    pub derived: String,
    pub printed: String,
    pub matches: bool,
}

/// Derived-versus-printed report for the reduced equation and the Heun
/// parameters.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionComparison {
    pub derived: [String; 3],
    pub printed: [String; 3],
    pub mismatches: Vec<TermMismatch>,
    /// The printed coefficients agree once `1 - eps` is read as
    /// `1 - vareps^2` and `eps^2 q^2 / 4` as `eps^2 q^4 / 4`.
    pub resolved_matches: bool,
    pub exponent_readings: Vec<ExponentReading>,
    pub heun: Vec<ParameterComparison>,
    /// The constant numerator is `delta z + (gamma - 1)/4 + eta`.
    pub constant_sign_note: String,
    pub free_case: bool,
}

struct Printed {
    d2: Poly,
    d1: Poly,
    d0: Poly,
}

/// Transcription of the printed reduced equation with `-m²ψ` moved left.
/// `resolved` applies the two symbol readings that make it consistent.
fn printed_polys(config: &E2RConfig, rep: &LambdaRep, resolved: bool) -> Printed {
    let e = &config.charge;
    let j1 = &rep.j1;
    let one = Rational::one();
    let d2_const = if resolved {
        &one - &config.vareps * &config.vareps
    } else {
        &one - e
    };
    let d2 = trim(vec![d2_const, Rational::zero(), one.clone()]);
    let d1 = trim(vec![
        Rational::zero(),
        &one + e * rat(2) + j1 * rat(2),
        Rational::zero(),
        e.clone(),
    ]);
    let quarter_e2 = e * e * ratio(1, 4);
    let q2 = e * (&one + e + j1);
    let constant = j1 * j1 - &rep.j2 * &rep.j2 + e + &config.mass * &config.mass;
    let d0 = if resolved {
        trim(vec![constant, Rational::zero(), q2, Rational::zero(), quarter_e2])
    } else {
        trim(vec![constant, Rational::zero(), q2 + quarter_e2])
    };
    Printed { d2, d1, d0 }
}

pub fn compare_reduction(
    config: &E2RConfig,
    rep: &LambdaRep,
    ode: &ReducedOde,
    hp: &HeunParams,
) -> Result<ReductionComparison, E2RError> {
    let derived = ode.polys()?;
    let printed = printed_polys(config, rep, false);
    let resolved = printed_polys(config, rep, true);
    let names = ["d2", "d1", "d0"];
    let pr = [&printed.d2, &printed.d1, &printed.d0];
    let rs = [&resolved.d2, &resolved.d1, &resolved.d0];
    let mut mismatches = Vec::new();
    for k in 0..3 {
        let n = derived[k].len().max(pr[k].len());
        for power in 0..n {
            let (d, p) = (coeff(&derived[k], power), coeff(pr[k], power));
            if d != p {
                mismatches.push(TermMismatch {
                    coefficient: names[k].to_string(),
                    power,
                    derived: format_rational(&d),
                    printed: format_rational(&p),
                });
            }
        }
    }
    let resolved_matches = (0..3).all(|k| &derived[k] == rs[k]);

    let e = &config.charge;
    let v2 = &config.vareps * &config.vareps;
    let readings = [
        ("eps/4", e * ratio(1, 4)),
        ("eps^2/4 (as printed)", e * e * ratio(1, 4)),
        ("vareps^2/4", &v2 * ratio(1, 4)),
    ];
    let exponent_readings = readings
        .into_iter()
        .map(|(name, v)| ExponentReading {
            reading: name.to_string(),
            matches: v == hp.a,
            value: format_rational(&v),
        })
        .collect();

    let (gp, dp, ep) = printed_heun(config, rep);
    let cmp = |name: &str, d: &Rational, p: &Rational| ParameterComparison {
        name: name.to_string(),
        derived: format_rational(d),
        printed: format_rational(p),
        matches: d == p,
    };
    let heun = vec![
        cmp("gamma", &hp.gamma, &gp),
        cmp("delta", &hp.delta, &dp),
        cmp("eta", &hp.eta, &ep),
        cmp("eta (numerator read as delta z - (gamma-1)/4 + eta)", &hp.eta_minus_reading(), &ep),
    ];
    Ok(ReductionComparison {
        derived: [
            poly_string(&derived[0], "q"),
            poly_string(&derived[1], "q"),
            poly_string(&derived[2], "q"),
        ],
        printed: [
            poly_string(&printed.d2, "q"),
            poly_string(&printed.d1, "q"),
            poly_string(&printed.d0, "q"),
        ],
        mismatches,
        resolved_matches,
        exponent_readings,
        heun,
        constant_sign_note: "constant numerator taken as delta z + (gamma - 1)/4 + eta".into(),
        free_case: config.charge.is_zero(),
    })
}

/// `γ = J1 - 1/2 + (ε/2)(vareps² + 1)`, `δ = -(ε²/16)(vareps² - 1)²`,
/// `η = (J1² - J2² + m² - J1 + 3/2)/4`.
pub fn printed_heun(config: &E2RConfig, rep: &LambdaRep) -> (Rational, Rational, Rational) {
    let e = &config.charge;
    let v2 = &config.vareps * &config.vareps;
    let one = Rational::one();
    let gamma = &rep.j1 - ratio(1, 2) + e * ratio(1, 2) * (&v2 + &one);
    let k = &v2 - &one;
    let delta = -(e * e * ratio(1, 16)) * &k * &k;
    let eta = (&rep.j1 * &rep.j1 - &rep.j2 * &rep.j2 + &config.mass * &config.mass - &rep.j1 + ratio(3, 2))
        * ratio(1, 4);
    (gamma, delta, eta)
}

/// Parameters of `θ'' + ((3/2+γ)z - 1/2)/(z(z-1)) θ' + (δz + c)/(z(z-1)) θ = 0`
/// reached by `ψ = e^{-a q²} θ(z)`, `z = q²/k`, `k = vareps² - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeunParams {
    pub a: Rational,
    pub k: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    /// Constant part `c` of the last numerator.
    pub c: Rational,
    /// `η = c - (γ - 1)/4`.
    pub eta: Rational,
    pub alpha: Rational,
    pub betas: [Rational; 2],
}

impl HeunParams {
    /// `η` if the constant numerator were `δz - (γ - 1)/4 + η`.
    pub fn eta_minus_reading(&self) -> Rational {
        &self.c + (&self.gamma - Rational::one()) * ratio(1, 4)
    }

    /// Builds parameters directly from `(γ, δ, η)` with `c = (γ-1)/4 + η`.
    pub fn from_gde(gamma: Rational, delta: Rational, eta: Rational, k: Rational) -> Self {
        let c = (&gamma - Rational::one()) * ratio(1, 4) + &eta;
        HeunParams {
            a: Rational::zero(),
            k,
            gamma,
            delta,
            c,
            eta,
            alpha: Rational::zero(),
            betas: [ratio(-1, 2), ratio(1, 2)],
        }
    }

    pub fn to_f64(&self) -> (f64, f64, f64) {
        use crate::rational::to_f64;
        (to_f64(&self.gamma), to_f64(&self.delta), to_f64(&self.c))
    }
}

/// Even polynomial in `q` to a polynomial in `z = q²/k`.
fn to_z(p: &Poly, k: &Rational, what: &str) -> Result<Poly, E2RError> {
    let mut out = Vec::new();
    let mut kp = Rational::one();
    for (i, c) in p.iter().enumerate() {
        if i % 2 == 1 {
            if !c.is_zero() {
                return Err(E2RError::HeunShape(format!("{what} has odd power q^{i}")));
            }
            continue;
        }
        out.push(c * &kp);
        kp *= k;
    }
    Ok(trim(out))
}

/// Applies `ψ = e^{-a q²} θ(z)`, `z = q²/k`, choosing `a` so that the
/// first-derivative coefficient has the confluent Heun form, and reads off
/// `(γ, δ, η)`.
pub fn heun_transform(ode: &ReducedOde, vareps: &Rational) -> Result<HeunParams, E2RError> {
    let [p2, p1, p0] = ode.polys()?;
    let k = vareps * vareps - Rational::one();
    if k.is_zero() {
        return Err(E2RError::MetricParam(vareps.to_string()));
    }
    let kinv = Rational::one() / &k;
    let q1 = monomial(Rational::one(), 1);
    let q2 = monomial(Rational::one(), 2);
    let qp1 = poly_mul(&q1, &p1);
    let q2p2 = poly_mul(&q2, &p2);
    // θ_zz coefficient: (4/k²) q² p2
    let a_poly = poly_scale(&q2p2, &(rat(4) * &kinv * &kinv));
    // θ_z coefficient: B0 + a B1
    let b0 = poly_scale(&poly_add(&p2, &qp1), &(rat(2) * &kinv));
    let b1 = poly_scale(&q2p2, &(rat(-8) * &kinv));
    // θ coefficient: p0 - 2a (p2 + q p1) + 4a² q² p2
    let c1 = poly_scale(&poly_add(&p2, &qp1), &rat(-2));
    let c2 = poly_scale(&q2p2, &rat(4));

    let az = to_z(&a_poly, &k, "second-derivative coefficient")?;
    let b0z = to_z(&b0, &k, "first-derivative coefficient")?;
    let b1z = to_z(&b1, &k, "first-derivative coefficient")?;
    let lambda = coeff(&az, 2);
    if lambda.is_zero() || az.len() != 3 || !coeff(&az, 0).is_zero() || coeff(&az, 1) != -lambda.clone() {
        return Err(E2RError::HeunShape(format!(
            "second-derivative coefficient {} is not a multiple of z(z-1)",
            poly_string(&az, "z")
        )));
    }
    let top = b0z.len().max(b1z.len());
    let mut a = None;
    for j in (2..top).rev() {
        let (x, y) = (coeff(&b0z, j), coeff(&b1z, j));
        if !y.is_zero() {
            a = Some(-x / y);
            break;
        }
    }
    let a = a.unwrap_or_else(Rational::zero);
    let bz = poly_add(&b0z, &poly_scale(&b1z, &a));
    let cq = poly_add(&poly_add(&p0, &poly_scale(&c1, &a)), &poly_scale(&c2, &(&a * &a)));
    let cz = to_z(&cq, &k, "zeroth-order coefficient")?;
    if bz.len() > 2 || cz.len() > 2 || coeff(&bz, 0) != -(&lambda * ratio(1, 2)) {
        return Err(E2RError::HeunShape(format!(
            "a = {}: theta_z numerator {}, theta numerator {} over {}*z(z-1)",
            format_rational(&a),
            poly_string(&bz, "z"),
            poly_string(&cz, "z"),
            format_rational(&lambda)
        )));
    }
    let gamma = coeff(&bz, 1) / &lambda - ratio(3, 2);
    let delta = coeff(&cz, 1) / &lambda;
    let c = coeff(&cz, 0) / &lambda;
    let eta = &c - (&gamma - Rational::one()) * ratio(1, 4);
    Ok(HeunParams {
        a,
        k,
        gamma,
        delta,
        c,
        eta,
        alpha: Rational::zero(),
        betas: [ratio(-1, 2), ratio(1, 2)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> (E2RConfig, LambdaRep) {
        (E2RConfig::default(), LambdaRep::new(rat(1), ratio(1, 2), rat(1)).unwrap())
    }

    #[test]
    fn derived_coefficients() {
        let (cfg, rep) = defaults();
        let ode = reduce_equation(&cfg, &rep).unwrap();
        let [p2, p1, p0] = ode.polys().unwrap();
        assert_eq!(p2, vec![rat(-3), rat(0), rat(1)]);
        assert_eq!(p1, vec![rat(0), rat(5), rat(0), rat(1)]);
        // ε²q⁴/4 + ε(1+ε+J1)q² + J1² - J2² + ε + m²
        assert_eq!(p0, vec![ratio(11, 4), rat(0), rat(3), rat(0), ratio(1, 4)]);
    }

    #[test]
    fn heun_parameters_at_defaults() {
        let (cfg, rep) = defaults();
        let ode = reduce_equation(&cfg, &rep).unwrap();
        let hp = heun_transform(&ode, &cfg.vareps).unwrap();
        assert_eq!(hp.a, ratio(1, 4));
        assert_eq!(hp.gamma, rat(3));
        assert_eq!(hp.delta, ratio(-9, 16));
        assert_eq!(hp.c, ratio(17, 16));
        assert_eq!(hp.eta, ratio(9, 16));
        let (g, d, e) = printed_heun(&cfg, &rep);
        assert_eq!((g, d, e), (hp.gamma.clone(), hp.delta.clone(), hp.eta.clone()));
        let cmp = compare_reduction(&cfg, &rep, &ode, &hp).unwrap();
        assert!(cmp.resolved_matches);
        assert!(!cmp.mismatches.is_empty());
        assert!(cmp.mismatches.iter().any(|m| m.coefficient == "d2" && m.power == 0));
        assert!(cmp.mismatches.iter().any(|m| m.coefficient == "d0" && m.power == 4));
        assert!(cmp.exponent_readings[0].matches);
        assert!(!cmp.exponent_readings[1].matches || cfg.charge == rat(1));
        assert_eq!(cmp.derived[0], "q^2 - 3");
        assert_eq!(cmp.derived[2], "1/4*q^4 + 3*q^2 + 11/4");
    }

    #[test]
    fn mass_enters_constant_term_only() {
        let (cfg, rep) = defaults();
        let a = reduce_equation(&cfg, &rep).unwrap();
        let b = reduce_equation(&E2RConfig { mass: rat(3), ..cfg }, &rep).unwrap();
        assert_eq!(a.d2, b.d2);
        assert_eq!(a.d1, b.d1);
        let diff = &b.d0 - &a.d0;
        assert_eq!(diff.as_constant().unwrap(), GaussRational::from_int(8));
    }

    #[test]
    fn free_case_has_no_charge_terms() {
        let cfg = E2RConfig {
            charge: rat(0),
            ..E2RConfig::default()
        };
        let rep = LambdaRep::new(rat(0), ratio(1, 2), rat(0)).unwrap();
        let ode = reduce_equation(&cfg, &rep).unwrap();
        let [p2, p1, p0] = ode.polys().unwrap();
        assert_eq!(p2, vec![rat(-3), rat(0), rat(1)]);
        assert_eq!(p1, vec![rat(0), rat(1)]);
        assert_eq!(p0, vec![ratio(3, 4)]);
        let hp = heun_transform(&ode, &cfg.vareps).unwrap();
        assert!(hp.delta.is_zero());
        assert_eq!(hp.gamma, ratio(-1, 2));
    }

    #[test]
    fn symbolic_reduction_specializes() {
        let (cfg, rep) = defaults();
        let sym = reduce_symbolic();
        let values = [cfg.charge.clone(), cfg.vareps.clone(), rep.j1.clone(), rep.j2.clone(), cfg.mass.clone()];
        let numeric = reduce_equation(&cfg, &rep).unwrap();
        assert_eq!(sym.substitute_params(&values), numeric.embed(Chart::flat(6)));
    }
}
