use serde::Serialize;

use crate::kgf::{
    field_form_from_cocycle, metric_from_tetrad, omega_from_ops, potential_residual, symmetry_ops_with,
    FieldConfig, GroupModel,
};
use crate::par::Execution;
use crate::rational::format_rational;
use crate::symb::Expr;

use super::{build_model, E2RConfig, E2RError};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    /// First nonzero residual expression, when the check fails.
    pub residual: Option<String>,
}

/// Exact identities on E(2)×ℝ for one parameter set. Every residual is an
/// expression compared with zero, never a float.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub mu: [String; 4],
    pub charge: String,
    pub vareps: String,
    pub checks: Vec<IdentityCheck>,
    /// Nonzero `Ω_ab`, 1-based.
    pub omega: Vec<(usize, usize, String)>,
    /// `λ` with `Ω − F = dλ`.
    pub omega_shift: Vec<String>,
    pub pass: bool,
}

fn check(name: &str, residual: Option<String>) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        pass: residual.is_none(),
        residual,
    }
}

fn first_nonzero<'a>(it: impl IntoIterator<Item = (String, &'a Expr)>) -> Option<String> {
    it.into_iter()
        .find(|(_, e)| !e.is_zero())
        .map(|(label, e)| format!("{label}: {e}"))
}

pub fn identity_suite(config: &E2RConfig) -> Result<IdentityReport, E2RError> {
    identity_suite_with(config, Execution::default())
}

pub fn identity_suite_with(config: &E2RConfig, exec: Execution) -> Result<IdentityReport, E2RError> {
    config.validate()?;
    let model = build_model();
    let mut checks = vec![check("frame", model.verify().err().map(|e| e.to_string()))];
    let f = config.cocycle();
    let ff = field_form_from_cocycle(&model, &f)?;
    let d_form = ff.form.exterior_d();
    checks.push(check(
        "dF = 0",
        first_nonzero(d_form.components().map(|(i, e)| (format!("{i:?}"), e))),
    ));
    let mut lie = None;
    for (a, xi) in model.xi.iter().enumerate() {
        let l = ff.form.lie_derivative(xi).map_err(crate::kgf::KgfError::from)?;
        if !l.is_zero() {
            lie = Some(format!("L_xi{} F = {:?}", a + 1, l.components().next().map(|(_, e)| e.to_string())));
            break;
        }
    }
    checks.push(check("L_xi F = 0", lie));
    checks.push(check(
        "L_xi g = 0",
        metric_from_tetrad(&model, &config.metric()).err().map(|e| e.to_string()),
    ));

    let fc = match config.field_config(&model) {
        Ok(fc) => fc,
        Err(e) => {
            checks.push(check("field configuration", Some(e.to_string())));
            return Ok(finish(config, checks, Vec::new(), Vec::new()));
        }
    };
    let pot = potential_residual(&model, &f, &fc.potential);
    checks.push(check(
        "potential equation",
        pot.first().map(|((a, b), r)| format!("({}, {}): {r}", a + 1, b + 1)),
    ));
    checks.push(check("chi equation", chi_residual(&model, &fc)?));
    let ops = match symmetry_ops_with(&model, &fc, exec) {
        Ok(ops) => {
            checks.push(check("[H_eps, xi_eps] = 0", None));
            ops
        }
        Err(e) => {
            checks.push(check("[H_eps, xi_eps] = 0", Some(e.to_string())));
            return Ok(finish(config, checks, Vec::new(), Vec::new()));
        }
    };
    let (omega, shift) = match omega_from_ops(&model, &fc, &ops) {
        Ok(om) => {
            checks.push(check("symmetry algebra with constant Omega", None));
            checks.push(check("Omega - F in B2", None));
            let omega = om
                .omega
                .nonzero_entries()
                .into_iter()
                .map(|(a, b, v)| (a + 1, b + 1, format_rational(&v)))
                .collect();
            (omega, om.shift.components().iter().map(format_rational).collect())
        }
        Err(e) => {
            checks.push(check("symmetry algebra with constant Omega", Some(e.to_string())));
            (Vec::new(), Vec::new())
        }
    };
    Ok(finish(config, checks, omega, shift))
}

/// `∂_j χ_a + (i_{ξ_a} F)_j` for every `a, j`.
fn chi_residual(model: &GroupModel, fc: &FieldConfig) -> Result<Option<String>, E2RError> {
    for (a, xi) in model.xi.iter().enumerate() {
        let w = fc.form.interior(xi).map_err(crate::kgf::KgfError::from)?;
        for j in 0..model.chart.dim {
            let r = &fc.chi[a].partial(j) + &w.component(&[j]);
            if !r.is_zero() {
                return Ok(Some(format!("chi{} along x{}: {r}", a + 1, j + 1)));
            }
        }
    }
    Ok(None)
}

fn finish(
    config: &E2RConfig,
    checks: Vec<IdentityCheck>,
    omega: Vec<(usize, usize, String)>,
    omega_shift: Vec<String>,
) -> IdentityReport {
    IdentityReport {
        mu: config.mu.clone().map(|m| format_rational(&m)),
        charge: format_rational(&config.charge),
        vareps: format_rational(&config.vareps),
        pass: checks.iter().all(|c| c.pass),
        checks,
        omega,
        omega_shift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn canonical_and_generic_classes_pass() {
        for mu in [[1, 0, 0, 0], [1, 1, 1, 1]] {
            let cfg = E2RConfig {
                mu: mu.map(rat),
                ..E2RConfig::default()
            };
            let r = identity_suite(&cfg).unwrap();
            assert!(r.pass, "{r:#?}");
        }
    }
}
