//! Group charts with invariant frames, invariant metrics and fields, the
//! KGF operator in an external field and its symmetry operators.

use num_traits::{One, Zero};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::cohomology::{trivialize, CohomologyError, TwoCocycle};
use crate::lie::{AlgebraFile, DualVector, LieAlgebra, LieError};
use crate::linalg::QMatrix;
use crate::par::{self, Execution};
use crate::rational::{GaussRational, Rational};
use crate::symb::{parse_expr, Chart, DiffForm, DiffOp, Expr, ExprParseError, SymbError, TensorField};

#[derive(Debug, Error)]
pub enum KgfError {
    #[error(transparent)]
    Symb(#[from] SymbError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Parse(#[from] ExprParseError),
    #[error("malformed model bundle: {0}")]
    Bundle(String),
    #[error("frame matrix has no constant pivot in column {column}")]
    NonConstantPivot { column: usize },
    #[error("{what} fails: {residual}")]
    InvariantFailure { what: String, residual: String },
    #[error("metric matrix must be {dim}x{dim}")]
    MetricShape { dim: usize },
    #[error("metric matrix is not symmetric at ({a}, {b})")]
    AsymmetricMetric { a: usize, b: usize },
    #[error("metric matrix is degenerate")]
    DegenerateMetric,
    #[error("field form is not closed or not invariant")]
    FieldNotInvariant,
    #[error("chi_{a}: staircase integral is path dependent, d_{j} residual {residual}")]
    PathDependence { a: usize, j: usize, residual: String },
    #[error("no extension realization covers the class of the cocycle")]
    MissingRealization,
    #[error("[H, xi_{a}] = {residual}")]
    Commutation { a: usize, residual: String },
    #[error("Omega_({a},{b}) is not constant: {residual}")]
    NonConstantOmega { a: usize, b: usize, residual: String },
    #[error("Omega from commutators differs from the field formula at ({a}, {b})")]
    OmegaRoutesDisagree { a: usize, b: usize },
    #[error("Omega - F is not a coboundary")]
    OmegaClass,
}

/// Extended right-invariant fields `η̃_a = η_a + w_a ∂_0` for the cocycle
/// `e^a ∧ e^b` (0-based pair); realizations add linearly in `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    pub pair: (usize, usize),
    pub w: Vec<Expr>,
}

/// A Lie group chart with left-invariant fields `ξ_a`, right-invariant
/// fields `η_a` and the right-invariant coframe `σ^a` dual to `η_a`.
#[derive(Clone, Debug)]
pub struct GroupModel {
    pub name: String,
    pub chart: Chart,
    pub alg: LieAlgebra,
    pub xi: Vec<DiffOp>,
    pub eta: Vec<DiffOp>,
    pub sigma: Vec<DiffForm>,
    pub measure_weight: Expr,
    pub extension: Vec<ExtensionField>,
}

/// Inverse of a matrix of expressions, pivoting only on nonzero constants.
fn invert_expr_matrix(m: &[Vec<Expr>], chart: Chart) -> Result<Vec<Vec<Expr>>, KgfError> {
    let n = m.len();
    let mut a: Vec<Vec<Expr>> = m.to_vec();
    let mut inv: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Expr::one(chart) } else { Expr::zero(chart) })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| a[r][col].as_constant().is_some_and(|c| !c.is_zero()))
            .ok_or(KgfError::NonConstantPivot { column: col + 1 })?;
        a.swap(col, p);
        inv.swap(col, p);
        let pivot = a[col][col].as_constant().and_then(|c| c.recip()).expect("nonzero pivot");
        for j in 0..n {
            a[col][j] = a[col][j].scale(&pivot);
            inv[col][j] = inv[col][j].scale(&pivot);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = &factor * &a[col][j];
                a[r][j] = &a[r][j] - &da;
                let di = &factor * &inv[col][j];
                inv[r][j] = &inv[r][j] - &di;
            }
        }
    }
    Ok(inv)
}

fn residual_failure(what: impl Into<String>, residual: impl ToString) -> KgfError {
    KgfError::InvariantFailure {
        what: what.into(),
        residual: residual.to_string(),
    }
}

impl GroupModel {
    /// Builds the model and computes the coframe; invariants are checked
    /// separately by [`GroupModel::verify`].
    pub fn new(
        name: &str,
        alg: LieAlgebra,
        xi: Vec<DiffOp>,
        eta: Vec<DiffOp>,
        measure_weight: Expr,
    ) -> Result<Self, KgfError> {
        let n = alg.dim();
        let chart = measure_weight.chart();
        for v in xi.iter().chain(&eta) {
            if v.chart() != chart || !v.is_vector_field() {
                return Err(KgfError::Bundle(
                    "frame fields must be vector fields on the measure chart".into(),
                ));
            }
        }
        if xi.len() != n || eta.len() != n || chart.dim != n {
            return Err(KgfError::Bundle(format!(
                "algebra dimension {n}, chart dimension {}, {} left and {} right fields",
                chart.dim,
                xi.len(),
                eta.len()
            )));
        }
        // A[i][b] = η_b^i; rows of A^{-1} are the coframe components.
        let a: Vec<Vec<Expr>> = (0..n)
            .map(|i| (0..n).map(|b| eta[b].first(i)).collect())
            .collect();
        let s = invert_expr_matrix(&a, chart)?;
        let sigma = s.into_iter().map(DiffForm::one_form).collect();
        Ok(GroupModel {
            name: name.to_string(),
            chart,
            alg,
            xi,
            eta,
            sigma,
            measure_weight,
            extension: Vec::new(),
        })
    }

    pub fn with_extension(mut self, extension: Vec<ExtensionField>) -> Self {
        self.extension = extension;
        self
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Vector field `Σ_c k_c v_c`.
    fn combination(&self, fields: &[DiffOp], a: usize, b: usize) -> DiffOp {
        let mut out = DiffOp::zero(self.chart);
        for (c, v) in fields.iter().enumerate() {
            let k = self.alg.c(a, b, c);
            if !k.is_zero() {
                out = out.add(&v.scale(&GaussRational::real(k.clone())));
            }
        }
        out
    }

    /// Coframe duality and the three bracket relations, exactly.
    pub fn verify(&self) -> Result<(), KgfError> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                let p = self.sigma[a].evaluate_on(&[&self.eta[b]]);
                let expected = if a == b { Expr::one(self.chart) } else { Expr::zero(self.chart) };
                if p != expected {
                    return Err(residual_failure(format!("<sigma^{}, eta_{}>", a + 1, b + 1), p));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let r = self.xi[a]
                    .commutator(&self.xi[b])?
                    .sub(&self.combination(&self.xi, a, b));
                if !r.is_zero() {
                    return Err(residual_failure(format!("[xi_{}, xi_{}]", a + 1, b + 1), r));
                }
                let r = self.eta[a]
                    .commutator(&self.eta[b])?
                    .add(&self.combination(&self.eta, a, b));
                if !r.is_zero() {
                    return Err(residual_failure(format!("[eta_{}, eta_{}]", a + 1, b + 1), r));
                }
                let r = self.xi[a].commutator(&self.eta[b])?;
                if !r.is_zero() {
                    return Err(residual_failure(format!("[xi_{}, eta_{}]", a + 1, b + 1), r));
                }
            }
        }
        Ok(())
    }

    /// `(Ad_x)^b_a = <σ^b, ξ_a>`, indexed `[b][a]`.
    pub fn ad_matrix(&self) -> Vec<Vec<Expr>> {
        let n = self.dim();
        (0..n)
            .map(|b| (0..n).map(|a| self.sigma[b].evaluate_on(&[&self.xi[a]])).collect())
            .collect()
    }

    /// Flat model on `ℝ^n` with `ξ_a = η_a = ∂_a`.
    pub fn abelian(n: usize) -> Self {
        let chart = Chart::flat(n);
        let d: Vec<DiffOp> = (0..n).map(|i| DiffOp::derivative(chart, i)).collect();
        GroupModel::new("abelian", LieAlgebra::abelian(n), d.clone(), d, Expr::one(chart))
            .expect("flat frame")
    }

    pub fn from_bundle_str(text: &str) -> Result<Self, KgfError> {
        let b: ModelBundle = serde_json::from_str(text).map_err(|e| KgfError::Bundle(e.to_string()))?;
        b.into_model()
    }
}

/// JSON description of a [`GroupModel`]. Coordinates are 1-based; field
/// components are prefix expressions.
#[derive(Clone, Debug, Deserialize)]
pub struct ModelBundle {
    #[serde(default)]
    pub name: String,
    pub chart_dim: usize,
    #[serde(default)]
    pub periodic: Option<usize>,
    pub algebra: AlgebraFile,
    pub xi: Vec<Vec<Value>>,
    pub eta: Vec<Vec<Value>>,
    #[serde(default)]
    pub measure_weight: Option<Value>,
    #[serde(default)]
    pub extension: Vec<ExtensionEntry>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExtensionEntry {
    pub pair: (usize, usize),
    pub w: Vec<Value>,
}

impl ModelBundle {
    pub fn into_model(self) -> Result<GroupModel, KgfError> {
        let periodic = match self.periodic {
            Some(0) => return Err(KgfError::Bundle("periodic coordinate is 1-based".into())),
            Some(p) if p > self.chart_dim => {
                return Err(KgfError::Bundle(format!("periodic coordinate {p} out of range")))
            }
            p => p.map(|p| p - 1),
        };
        let chart = Chart::new(self.chart_dim, periodic);
        let alg = LieAlgebra::from_file(&self.algebra)?;
        let exprs = |row: &[Value]| -> Result<Vec<Expr>, KgfError> {
            if row.len() != self.chart_dim {
                return Err(KgfError::Bundle(format!(
                    "expected {} components, found {}",
                    self.chart_dim,
                    row.len()
                )));
            }
            Ok(row.iter().map(|v| parse_expr(v, chart)).collect::<Result<_, _>>()?)
        };
        let fields = |rows: &[Vec<Value>]| -> Result<Vec<DiffOp>, KgfError> {
            rows.iter().map(|r| Ok(DiffOp::vector_field(exprs(r)?))).collect()
        };
        let xi = fields(&self.xi)?;
        let eta = fields(&self.eta)?;
        let measure = match &self.measure_weight {
            Some(v) => parse_expr(v, chart)?,
            None => Expr::one(chart),
        };
        let mut extension = Vec::new();
        for e in &self.extension {
            let (a, b) = e.pair;
            if a == 0 || b <= a || b > alg.dim() {
                return Err(KgfError::Bundle(format!("bad extension pair ({a}, {b})")));
            }
            extension.push(ExtensionField {
                pair: (a - 1, b - 1),
                w: exprs(&e.w)?,
            });
        }
        let name = if self.name.is_empty() { "model" } else { &self.name };
        Ok(GroupModel::new(name, alg, xi, eta, measure)?.with_extension(extension))
    }
}

fn check_metric(model: &GroupModel, g: &QMatrix) -> Result<QMatrix, KgfError> {
    let n = model.dim();
    if g.rows() != n || g.cols() != n {
        return Err(KgfError::MetricShape { dim: n });
    }
    for a in 0..n {
        for b in a + 1..n {
            if g[(a, b)] != g[(b, a)] {
                return Err(KgfError::AsymmetricMetric { a: a + 1, b: b + 1 });
            }
        }
    }
    g.inverse().ok_or(KgfError::DegenerateMetric)
}

/// `g_ij = G_ab σ^a_i σ^b_j`, checked to be Killing for every `ξ_a`.
pub fn metric_from_tetrad(model: &GroupModel, g: &QMatrix) -> Result<TensorField, KgfError> {
    check_metric(model, g)?;
    let n = model.dim();
    let chart = model.chart;
    let sig: Vec<Vec<Expr>> = model
        .sigma
        .iter()
        .map(|s| (0..n).map(|i| s.component(&[i])).collect())
        .collect();
    let comps: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Expr::zero(chart);
                    for a in 0..n {
                        for b in 0..n {
                            if g[(a, b)].is_zero() {
                                continue;
                            }
                            let t = (&sig[a][i] * &sig[b][j]).scale_rational(&g[(a, b)]);
                            acc = &acc + &t;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let metric = TensorField::from_components(comps)?;
    for (a, xi) in model.xi.iter().enumerate() {
        let l = metric.lie_derivative(xi)?;
        if !l.is_zero() {
            return Err(residual_failure(format!("L_xi{} g", a + 1), l));
        }
    }
    Ok(metric)
}

#[derive(Clone, Debug)]
pub struct FieldForm {
    pub form: DiffForm,
    pub closed: bool,
    pub invariant: bool,
}

/// `Σ_{a<b} F_ab σ^a ∧ σ^b` with its closedness and invariance flags.
pub fn field_form_from_cocycle(model: &GroupModel, f: &TwoCocycle) -> Result<FieldForm, KgfError> {
    let n = model.dim();
    if f.dim() != n {
        return Err(CohomologyError::DimensionMismatch {
            expected: n,
            found: f.dim(),
        }
        .into());
    }
    let mut form = DiffForm::zero(model.chart, 2);
    for (a, b, v) in f.nonzero_entries() {
        let w = model.sigma[a].wedge(&model.sigma[b]);
        form = form.add(&w.scale_expr(&Expr::constant(model.chart, v)));
    }
    let closed = form.exterior_d().is_zero();
    let mut invariant = true;
    for xi in &model.xi {
        if !form.lie_derivative(xi)?.is_zero() {
            invariant = false;
            break;
        }
    }
    Ok(FieldForm {
        form,
        closed,
        invariant,
    })
}

/// `χ_a = -∫ i_{ξ_a} F` along the staircase path from the origin: the
/// `j`-th component is integrated in `x_j` with later coordinates at 0.
pub fn chi_functions(model: &GroupModel, f: &DiffForm) -> Result<Vec<Expr>, KgfError> {
    let n = model.chart.dim;
    let zero = GaussRational::zero();
    let mut out = Vec::with_capacity(model.xi.len());
    for (a, xi) in model.xi.iter().enumerate() {
        let w = f.interior(xi)?;
        let omega: Vec<Expr> = (0..n).map(|j| -w.component(&[j])).collect();
        let mut chi = Expr::zero(model.chart);
        for (j, wj) in omega.iter().enumerate() {
            let mut g = wj.clone();
            for k in j + 1..n {
                g = g.substitute(k, &zero)?;
            }
            chi = &chi + &g.integrate_from_zero(j);
        }
        for (j, wj) in omega.iter().enumerate() {
            let r = &chi.partial(j) - wj;
            if !r.is_zero() {
                return Err(KgfError::PathDependence {
                    a: a + 1,
                    j: j + 1,
                    residual: r.to_string(),
                });
            }
        }
        out.push(chi);
    }
    Ok(out)
}

/// Nonzero entries of `η_a A_b − η_b A_a + C_ab^c A_c − F_ab`, 0-based.
pub fn potential_residual(
    model: &GroupModel,
    f: &TwoCocycle,
    potential: &[Expr],
) -> Vec<((usize, usize), Expr)> {
    let n = model.dim();
    let chart = model.chart;
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut r = &model.eta[a].apply(&potential[b]) - &model.eta[b].apply(&potential[a]);
            for (c, ac) in potential.iter().enumerate() {
                let k = model.alg.c(a, b, c);
                if !k.is_zero() {
                    r = &r + &ac.scale_rational(k);
                }
            }
            r = &r - &Expr::constant(chart, f.get(a, b).clone());
            if !r.is_zero() {
                out.push(((a, b), r));
            }
        }
    }
    out
}

/// Potentials `A_a = -U^{-1} η̃_a U` with `U = e^{x_0}`, i.e. `A_a = -w_a`,
/// from the model's extension realization. The part of `F` not covered by
/// realized pairs must be a coboundary `dλ`, contributing constants `λ_a`.
pub fn potential_from_extension(model: &GroupModel, f: &TwoCocycle) -> Result<Vec<Expr>, KgfError> {
    let n = model.dim();
    let chart = model.chart;
    let m = model.extension.len();
    let pv = f.pair_vector();
    let npairs = pv.len();
    let mut columns: Vec<Vec<Rational>> = model
        .extension
        .iter()
        .map(|e| TwoCocycle::elementary(n, e.pair.0, e.pair.1).pair_vector())
        .collect();
    for c in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[c] = Rational::one();
        columns.push(TwoCocycle::coboundary(&model.alg, &e).pair_vector());
    }
    let coeffs = if npairs == 0 {
        vec![Rational::zero(); m + n]
    } else {
        let rows: Vec<Vec<Rational>> = (0..npairs)
            .map(|r| columns.iter().map(|col| col[r].clone()).collect())
            .collect();
        QMatrix::from_rows(&rows)
            .solve(&pv)
            .ok_or(KgfError::MissingRealization)?
    };
    let mut a: Vec<Expr> = coeffs[m..]
        .iter()
        .map(|l| Expr::constant(chart, l.clone()))
        .collect();
    for (e, c) in model.extension.iter().zip(&coeffs[..m]) {
        if c.is_zero() {
            continue;
        }
        for (ai, wi) in a.iter_mut().zip(&e.w) {
            *ai = &*ai - &wi.scale_rational(c);
        }
    }
    let res = potential_residual(model, f, &a);
    if let Some(((p, q), r)) = res.first() {
        return Err(residual_failure(format!("potential equation ({}, {})", p + 1, q + 1), r));
    }
    Ok(a)
}

/// Field data on a model: cocycle, charge, tetrad metric `G_ab`,
/// potentials and the functions `χ_a`.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    pub cocycle: TwoCocycle,
    pub charge: Rational,
    pub metric: QMatrix,
    pub potential: Vec<Expr>,
    pub chi: Vec<Expr>,
    pub form: DiffForm,
}

impl FieldConfig {
    /// Builds form, `χ` and potentials, requiring a closed invariant form.
    pub fn build(
        model: &GroupModel,
        f: &TwoCocycle,
        charge: Rational,
        metric: QMatrix,
    ) -> Result<Self, KgfError> {
        check_metric(model, &metric)?;
        let ff = field_form_from_cocycle(model, f)?;
        if !ff.closed || !ff.invariant {
            return Err(KgfError::FieldNotInvariant);
        }
        let chi = chi_functions(model, &ff.form)?;
        let potential = potential_from_extension(model, f)?;
        Ok(FieldConfig {
            cocycle: f.clone(),
            charge,
            metric,
            potential,
            chi,
            form: ff.form,
        })
    }

    /// Replaces the potentials after checking the potential equation.
    pub fn with_potential(mut self, model: &GroupModel, potential: Vec<Expr>) -> Result<Self, KgfError> {
        let res = potential_residual(model, &self.cocycle, &potential);
        if let Some(((p, q), r)) = res.first() {
            return Err(residual_failure(format!("potential equation ({}, {})", p + 1, q + 1), r));
        }
        self.potential = potential;
        Ok(self)
    }

    fn i_eps(&self) -> GaussRational {
        GaussRational::imag(self.charge.clone())
    }
}

fn quadratic_form(model: &GroupModel, ginv: &QMatrix, fields: &[DiffOp]) -> Result<DiffOp, KgfError> {
    let n = model.dim();
    let trace = model.alg.trace_vector();
    let mut h = DiffOp::zero(model.chart);
    for a in 0..n {
        let left = fields[a].plus_function(&Expr::constant(model.chart, trace.0[a].clone()));
        for b in 0..n {
            if ginv[(a, b)].is_zero() {
                continue;
            }
            let t = left.compose(&fields[b])?;
            h = h.add(&t.scale(&GaussRational::real(ginv[(a, b)].clone())));
        }
    }
    Ok(h)
}

/// `Ĥ = G^{ab} (η_a + C_a) η_b` with `G^{ab}` the inverse of `G_ab`.
pub fn build_h(model: &GroupModel, g: &QMatrix) -> Result<DiffOp, KgfError> {
    let ginv = check_metric(model, g)?;
    quadratic_form(model, &ginv, &model.eta)
}

/// `η^(ε)_a = η_a − iε A_a`.
pub fn eta_eps(model: &GroupModel, config: &FieldConfig) -> Vec<DiffOp> {
    let k = -config.i_eps();
    model
        .eta
        .iter()
        .zip(&config.potential)
        .map(|(e, a)| e.plus_function(&a.scale(&k)))
        .collect()
}

/// `Ĥ^(ε) = G^{ab} (η^(ε)_a + C_a) η^(ε)_b`.
pub fn build_h_eps(model: &GroupModel, config: &FieldConfig) -> Result<DiffOp, KgfError> {
    let ginv = check_metric(model, &config.metric)?;
    quadratic_form(model, &ginv, &eta_eps(model, config))
}

/// `ξ^(ε)_a = ξ_a + iε(χ_a − (Ad_x)^b_a A_b)` without any verification.
pub fn symmetry_candidates(model: &GroupModel, config: &FieldConfig) -> Vec<DiffOp> {
    let ad = model.ad_matrix();
    let n = model.dim();
    let k = config.i_eps();
    (0..n)
        .map(|a| {
            let mut shift = config.chi[a].clone();
            for b in 0..n {
                if !ad[b][a].is_zero() && !config.potential[b].is_zero() {
                    shift = &shift - &(&ad[b][a] * &config.potential[b]);
                }
            }
            model.xi[a].plus_function(&shift.scale(&k))
        })
        .collect()
}

/// Symmetry operators, each verified to commute with `Ĥ^(ε)` exactly.
pub fn symmetry_ops(model: &GroupModel, config: &FieldConfig) -> Result<Vec<DiffOp>, KgfError> {
    symmetry_ops_with(model, config, Execution::default())
}

pub fn symmetry_ops_with(
    model: &GroupModel,
    config: &FieldConfig,
    exec: Execution,
) -> Result<Vec<DiffOp>, KgfError> {
    let h = build_h_eps(model, config)?;
    let ops = symmetry_candidates(model, config);
    let checks = par::map_range(exec, ops.len(), |a| match h.commutator(&ops[a]) {
        Ok(r) if r.is_zero() => None,
        Ok(r) => Some(r.to_string()),
        Err(e) => Some(e.to_string()),
    });
    for (a, c) in checks.into_iter().enumerate() {
        if let Some(residual) = c {
            return Err(KgfError::Commutation { a: a + 1, residual });
        }
    }
    Ok(ops)
}

#[derive(Clone, Debug)]
pub struct OmegaReport {
    pub omega: TwoCocycle,
    /// `λ` with `Ω − F = dλ`.
    pub shift: DualVector,
}

/// `Ω_ab = F(ξ_a, ξ_b) − C_ab^c χ_c`, required to be constant.
pub fn omega_formula(model: &GroupModel, config: &FieldConfig) -> Result<TwoCocycle, KgfError> {
    let n = model.dim();
    let mut omega = TwoCocycle::zero(n);
    for a in 0..n {
        for b in a + 1..n {
            let mut e = config.form.evaluate_on(&[&model.xi[a], &model.xi[b]]);
            for (c, chi) in config.chi.iter().enumerate() {
                let k = model.alg.c(a, b, c);
                if !k.is_zero() {
                    e = &e - &chi.scale_rational(k);
                }
            }
            let v = e.as_constant().filter(GaussRational::is_real).ok_or_else(|| {
                KgfError::NonConstantOmega {
                    a: a + 1,
                    b: b + 1,
                    residual: e.to_string(),
                }
            })?;
            omega.set(a, b, v.re);
        }
    }
    Ok(omega)
}

/// Extracts `Ω` from `[ξ^(ε)_a, ξ^(ε)_b] − C_ab^c ξ^(ε)_c = iε Ω_ab`,
/// cross-checks the field formula and the class of `F`.
pub fn omega_from_ops(
    model: &GroupModel,
    config: &FieldConfig,
    ops: &[DiffOp],
) -> Result<OmegaReport, KgfError> {
    let n = model.dim();
    let formula = omega_formula(model, config)?;
    let k = config.i_eps();
    for a in 0..n {
        for b in a + 1..n {
            let mut r = ops[a].commutator(&ops[b])?;
            for (c, op) in ops.iter().enumerate() {
                let coeff = model.alg.c(a, b, c);
                if !coeff.is_zero() {
                    r = r.sub(&op.scale(&GaussRational::real(coeff.clone())));
                }
            }
            let expected = Expr::constant(model.chart, k.scale(formula.get(a, b)));
            let diff = r.sub(&DiffOp::multiplication(expected));
            if r.order() > 0 || !r.zeroth().is_constant() {
                return Err(KgfError::NonConstantOmega {
                    a: a + 1,
                    b: b + 1,
                    residual: r.to_string(),
                });
            }
            if !diff.is_zero() {
                return Err(KgfError::OmegaRoutesDisagree { a: a + 1, b: b + 1 });
            }
        }
    }
    if !formula.is_cocycle(&model.alg) {
        return Err(CohomologyError::NotCocycle {
            violations: formula.cocycle_violations(&model.alg),
        }
        .into());
    }
    let shift = trivialize(&model.alg, &formula.sub(&config.cocycle)).ok_or(KgfError::OmegaClass)?;
    Ok(OmegaReport {
        omega: formula,
        shift,
    })
}
