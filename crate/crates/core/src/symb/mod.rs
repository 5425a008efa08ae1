//! Exact symbolic calculus on coordinate charts: trigonometric-polynomial
//! expressions, differential operators, forms and metrics.

mod expr;
mod form;
mod op;
mod parse;

pub use expr::{Chart, Expr, Harmonic};
pub use form::{DiffForm, TensorField};
pub use op::DiffOp;
pub use parse::{parse_expr, parse_expr_str, ExprParseError};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbError {
    #[error("chart mismatch: {left:?} vs {right:?}")]
    ChartMismatch { left: Chart, right: Chart },
    #[error("harmonic in coordinate x{} but the periodic coordinate is {periodic:?}", coordinate + 1)]
    NonPeriodicHarmonic {
        coordinate: usize,
        periodic: Option<usize>,
    },
    #[error("cannot substitute a nonzero value for periodic coordinate x{}", coordinate + 1)]
    PeriodicSubstitution { coordinate: usize },
    #[error(
        "order overflow: order-{order} term d{multi_index:?} with coefficient {coefficient} did not cancel"
    )]
    OrderOverflow {
        order: usize,
        multi_index: Vec<usize>,
        coefficient: String,
    },
    #[error("expected {expected} components, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("second-order coefficients not symmetric at ({i}, {j})")]
    AsymmetricSecondOrder { i: usize, j: usize },
    #[error("form degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("operation requires a homogeneous first-order operator")]
    NotVectorField,
}
