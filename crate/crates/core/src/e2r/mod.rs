//! The group E(2)×ℝ: model, field configuration, λ-representation,
//! D-functions, reduction to the confluent Heun equation and its numerics.

mod dfunction;
mod numeric;
mod reduce;
mod rep;
mod suite;

pub use dfunction::{DFunction, DFunctionReport, DPoint};
pub use numeric::{
    dp45, integrate_reduced, reduced_residual, reproducing_check, series_solution, series_with_leading,
    skew_hermitian_check, wronskian_check, IntegrationError, NumericSolution, OdeNode, ReproducingEntry,
    ReproducingReport, SeriesSolution, SkewReport, StepStats, WronskianReport, SINGULAR_MARGIN,
};
pub use reduce::{
    compare_reduction, heun_transform, printed_heun, reduce_equation, reduce_symbolic, ExponentReading,
    HeunParams, ParameterComparison, ReducedOde, ReductionComparison, TermMismatch, SYMBOLIC_PARAMS,
};
pub use rep::{lambda_ops, LambdaRep};
pub use suite::{identity_suite, identity_suite_with, IdentityCheck, IdentityReport};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cohomology::TwoCocycle;
use crate::kgf::{ExtensionField, FieldConfig, GroupModel, KgfError};
use crate::lie::LieAlgebra;
use crate::linalg::QMatrix;
use crate::rational::{rat, ratio, Rational};
use crate::symb::{Chart, DiffOp, Expr};

/// Constant density of the Haar measure in the second-kind chart.
pub const MEASURE_PREFACTOR: f64 = 1.0 / (2.0 * std::f64::consts::PI);

#[derive(Debug, Error)]
pub enum E2RError {
    #[error("metric parameter must exceed 1, got {0}")]
    MetricParam(String),
    #[error("mass must be nonnegative, got {0}")]
    Mass(String),
    #[error("J1 must be an integer, got {0}")]
    NonIntegerJ1(String),
    #[error("charge must be nonzero")]
    ZeroCharge,
    #[error("the reduction requires mu = (1, 0, 0, 0)")]
    NotCanonicalClass,
    #[error("transformed equation does not have the confluent Heun shape: {0}")]
    HeunShape(String),
    #[error("lambda-representation commutator [l{a}, l{b}] off by {residual}")]
    Commutator { a: usize, b: usize, residual: String },
    #[error("Frobenius exponent must be 0 or 1/2, got {0}")]
    Exponent(String),
    #[error("series truncation must be at least 10, got {0}")]
    Truncation(usize),
    #[error("reduced operator has non-constant-coefficient data: {0}")]
    NotPolynomial(String),
    #[error(transparent)]
    Kgf(#[from] KgfError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
}

/// Parameters of the worked example. `vareps` is the metric parameter,
/// `charge` the coupling constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2RConfig {
    pub mu: [Rational; 4],
    pub charge: Rational,
    pub vareps: Rational,
    pub mass: Rational,
}

impl Default for E2RConfig {
    fn default() -> Self {
        E2RConfig {
            mu: [rat(1), rat(0), rat(0), rat(0)],
            charge: rat(1),
            vareps: rat(2),
            mass: rat(1),
        }
    }
}

impl E2RConfig {
    pub fn validate(&self) -> Result<(), E2RError> {
        if self.vareps <= Rational::one() {
            return Err(E2RError::MetricParam(self.vareps.to_string()));
        }
        if self.mass.is_negative() {
            return Err(E2RError::Mass(self.mass.to_string()));
        }
        Ok(())
    }

    pub fn is_canonical_class(&self) -> bool {
        self.mu[0].is_one() && self.mu[1..].iter().all(Zero::is_zero)
    }

    /// `μ1 e¹∧e² + μ2 e³∧e⁴ + μ3 e¹∧e³ + μ4 e²∧e³`.
    pub fn cocycle(&self) -> TwoCocycle {
        TwoCocycle::from_entries(
            4,
            &[
                (0, 1, self.mu[0].clone()),
                (2, 3, self.mu[1].clone()),
                (0, 2, self.mu[2].clone()),
                (1, 2, self.mu[3].clone()),
            ],
        )
    }

    /// Inverse tetrad metric `G^{ab} = diag(-vareps², -1, -1, 1)`.
    pub fn inverse_metric(&self) -> QMatrix {
        diag(&[-(&self.vareps * &self.vareps), rat(-1), rat(-1), rat(1)])
    }

    /// Tetrad metric `G_ab`, the inverse of [`E2RConfig::inverse_metric`].
    pub fn metric(&self) -> QMatrix {
        let v2 = &self.vareps * &self.vareps;
        diag(&[-(Rational::one() / v2), rat(-1), rat(-1), rat(1)])
    }

    /// `k = vareps² - 1`, the scale of `z = q²/k`.
    pub fn k(&self) -> Rational {
        &self.vareps * &self.vareps - Rational::one()
    }

    pub fn field_config(&self, model: &GroupModel) -> Result<FieldConfig, E2RError> {
        self.validate()?;
        Ok(FieldConfig::build(
            model,
            &self.cocycle(),
            self.charge.clone(),
            self.metric(),
        )?)
    }
}

fn diag(d: &[Rational]) -> QMatrix {
    let mut m = QMatrix::zeros(d.len(), d.len());
    for (i, v) in d.iter().enumerate() {
        m[(i, i)] = v.clone();
    }
    m
}

/// Chart `(x1, x2, x3, x4)` with `x3` periodic.
pub fn chart() -> Chart {
    Chart::new(4, Some(2))
}

/// Left- and right-invariant frames in coordinates of the second kind
/// `g(x) = e^{x1 e1} e^{x2 e2} e^{x3 e3} e^{x4 e4}`, plus the extended
/// right-invariant fields for each elementary cocycle.
pub fn build_model() -> GroupModel {
    let c = chart();
    let zero = Expr::zero(c);
    let one = Expr::one(c);
    let x = |i| Expr::var(c, i);
    let cos = Expr::cos(c, 2, 1).expect("x3 is periodic");
    let sin = Expr::sin(c, 2, 1).expect("x3 is periodic");
    let vf = |v: [&Expr; 4]| DiffOp::vector_field(v.iter().map(|e| (*e).clone()).collect());
    let xi = vec![
        vf([&cos, &-&sin, &zero, &zero]),
        vf([&sin, &cos, &zero, &zero]),
        DiffOp::derivative(c, 2),
        DiffOp::derivative(c, 3),
    ];
    let eta = vec![
        DiffOp::derivative(c, 0),
        DiffOp::derivative(c, 1),
        vf([&x(1), &-&x(0), &one, &zero]),
        DiffOp::derivative(c, 3),
    ];
    let half = ratio(1, 2);
    let w = |comps: [Expr; 4]| comps.to_vec();
    let extension = vec![
        ExtensionField {
            pair: (0, 1),
            w: w([
                zero.clone(),
                -x(0),
                (&x(0).pow(2) - &x(1).pow(2)).scale_rational(&half),
                zero.clone(),
            ]),
        },
        ExtensionField {
            pair: (2, 3),
            w: w([zero.clone(), zero.clone(), zero.clone(), -x(2)]),
        },
        ExtensionField {
            pair: (0, 2),
            w: w([zero.clone(), zero.clone(), -x(0), zero.clone()]),
        },
        ExtensionField {
            pair: (1, 2),
            w: w([zero.clone(), zero.clone(), -x(1), zero.clone()]),
        },
    ];
    GroupModel::new("E(2)xR", LieAlgebra::e2_plus_r(), xi, eta, one)
        .expect("E(2)xR frame has constant pivots")
        .with_extension(extension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgf::{
        build_h, build_h_eps, chi_functions, field_form_from_cocycle, metric_from_tetrad, omega_from_ops,
        symmetry_ops,
    };
    use crate::rational::GaussRational;

    #[test]
    fn model_invariants_and_coframe() {
        let m = build_model();
        m.verify().unwrap();
        assert_eq!(m.sigma[0].to_string(), "(1)*dx1 + (-x2)*dx3");
        assert_eq!(m.sigma[1].to_string(), "(1)*dx2 + (x1)*dx3");
        let r = m.xi[1].commutator(&m.xi[2]).unwrap();
        assert_eq!(r, m.xi[0].scale(&GaussRational::from_int(-1)));
    }

    #[test]
    fn field_form_matches_closed_form() {
        let m = build_model();
        let cfg = E2RConfig {
            mu: [rat(2), rat(3), rat(5), rat(7)],
            ..E2RConfig::default()
        };
        let ff = field_form_from_cocycle(&m, &cfg.cocycle()).unwrap();
        assert!(ff.closed && ff.invariant);
        let c = chart();
        let x = |i| Expr::var(c, i);
        let k = |n| Expr::constant(c, rat(n));
        assert_eq!(ff.form.component(&[0, 1]), k(2));
        assert_eq!(ff.form.component(&[0, 2]), &x(0).scale_rational(&rat(2)) + &k(5));
        assert_eq!(ff.form.component(&[1, 2]), &x(1).scale_rational(&rat(2)) + &k(7));
        assert_eq!(ff.form.component(&[2, 3]), k(3));
        let bad = TwoCocycle::elementary(4, 0, 3);
        let ff = field_form_from_cocycle(&m, &bad).unwrap();
        assert!(!ff.closed);
    }

    #[test]
    fn potentials_and_symmetries_canonical_class() {
        let m = build_model();
        let cfg = E2RConfig::default();
        let fc = cfg.field_config(&m).unwrap();
        let c = chart();
        let x = |i| Expr::var(c, i);
        assert!(fc.potential[0].is_zero());
        assert_eq!(fc.potential[1], x(0));
        assert_eq!(
            fc.potential[2],
            (&x(1).pow(2) - &x(0).pow(2)).scale_rational(&ratio(1, 2))
        );
        let ops = symmetry_ops(&m, &fc).unwrap();
        assert_eq!(ops[2], m.xi[2]);
        assert_eq!(ops[3], m.xi[3]);
        // ξ1^(ε) = ξ1 - iε x2 cos x3
        let shift = (&x(1) * &Expr::cos(c, 2, 1).unwrap()).scale(&GaussRational::imag(rat(-1)));
        assert_eq!(ops[0], m.xi[0].plus_function(&shift));
        let om = omega_from_ops(&m, &fc, &ops).unwrap();
        assert_eq!(om.omega, cfg.cocycle());
    }

    #[test]
    fn hamiltonian_matches_display() {
        let m = build_model();
        let cfg = E2RConfig::default();
        let fc = cfg.field_config(&m).unwrap();
        let h = build_h_eps(&m, &fc).unwrap();
        let c = chart();
        let i = GaussRational::i();
        let x = |k| Expr::var(c, k);
        let d = |k| DiffOp::derivative(c, k);
        let e2 = d(1).plus_function(&x(0).scale(&-i.clone()));
        let e3 = m.eta[2].plus_function(&(&x(0).pow(2) - &x(1).pow(2)).scale(&i.scale(&ratio(1, 2))));
        let expected = d(0)
            .compose(&d(0))
            .unwrap()
            .scale(&GaussRational::from_int(-4))
            .sub(&e2.compose(&e2).unwrap())
            .sub(&e3.compose(&e3).unwrap())
            .add(&d(3).compose(&d(3)).unwrap());
        assert_eq!(h, expected);
        let zero_charge = E2RConfig {
            charge: rat(0),
            ..cfg
        };
        let fc0 = zero_charge.field_config(&m).unwrap();
        assert_eq!(build_h_eps(&m, &fc0).unwrap(), build_h(&m, &zero_charge.metric()).unwrap());
    }

    #[test]
    fn metric_is_killing_and_chi_vanishes_at_origin() {
        let m = build_model();
        let g = diag(&[rat(-4), rat(-1), rat(-1), rat(1)]);
        metric_from_tetrad(&m, &g).unwrap();
        let ff = field_form_from_cocycle(&m, &E2RConfig::default().cocycle()).unwrap();
        let chi = chi_functions(&m, &ff.form).unwrap();
        for x in &chi {
            assert!(x.eval_at(&[0.0; 4]).norm() == 0.0);
        }
    }
}
