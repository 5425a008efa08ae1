//! Prefix JSON grammar for expressions, e.g. `["*", ["cos", "x3"], "x1"]`.
//!
//! Atoms: integers, rational strings (`"3/4"`), coordinates (`"x1"`,
//! 1-based) and the imaginary unit `"i"`. Operators: `+`, `-` (unary or
//! n-ary), `*`, `/` (divisor must be a nonzero constant), `^` (natural
//! exponent), `cos`/`sin` of an integer multiple of the periodic coordinate.

use serde_json::Value;
use thiserror::Error;

use super::expr::{Chart, Expr};
use crate::rational::{parse_rational, GaussRational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprParseError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("coordinate x{index} outside chart of dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{op}` given {found} arguments")]
    Arity { op: String, found: usize },
    #[error("`{0}` is not a valid expression node")]
    BadNode(String),
    #[error("division by a non-constant or zero expression")]
    BadDivisor,
    #[error("exponent must be a natural number")]
    BadExponent,
    #[error("trigonometric argument must be k * x_p for the periodic coordinate: {0}")]
    BadHarmonicArgument(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

pub fn parse_expr_str(text: &str, chart: Chart) -> Result<Expr, ExprParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ExprParseError::Json(e.to_string()))?;
    parse_expr(&v, chart)
}

pub fn parse_expr(v: &Value, chart: Chart) -> Result<Expr, ExprParseError> {
    match v {
        Value::Number(n) => {
            let text = n.to_string();
            let q = parse_rational(&text).map_err(|_| ExprParseError::UnknownAtom(text))?;
            Ok(Expr::constant(chart, GaussRational::real(q)))
        }
        Value::String(s) => parse_atom(s, chart),
        Value::Array(items) => {
            let Some(Value::String(op)) = items.first() else {
                return Err(ExprParseError::BadNode(v.to_string()));
            };
            let args: Vec<Expr> = items[1..]
                .iter()
                .map(|a| parse_expr(a, chart))
                .collect::<Result<_, _>>()?;
            apply_op(op, args, chart)
        }
        other => Err(ExprParseError::BadNode(other.to_string())),
    }
}

fn parse_atom(s: &str, chart: Chart) -> Result<Expr, ExprParseError> {
    if s == "i" {
        return Ok(Expr::constant(chart, GaussRational::i()));
    }
    if let Some(rest) = s.strip_prefix('x') {
        if let Ok(index) = rest.parse::<usize>() {
            if index == 0 || index > chart.dim {
                return Err(ExprParseError::CoordinateOutOfRange {
                    index,
                    dim: chart.dim,
                });
            }
            return Ok(Expr::var(chart, index - 1));
        }
    }
    parse_rational(s)
        .map(|q| Expr::constant(chart, GaussRational::real(q)))
        .map_err(|_| ExprParseError::UnknownAtom(s.to_string()))
}

fn apply_op(op: &str, args: Vec<Expr>, chart: Chart) -> Result<Expr, ExprParseError> {
    let arity = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(ExprParseError::Arity {
                op: op.to_string(),
                found: args.len(),
            })
        }
    };
    match op {
        "+" => Ok(args.iter().fold(Expr::zero(chart), |acc, a| &acc + a)),
        "*" => Ok(args.iter().fold(Expr::one(chart), |acc, a| &acc * a)),
        "-" => {
            arity(!args.is_empty())?;
            if args.len() == 1 {
                return Ok(-&args[0]);
            }
            Ok(args[1..].iter().fold(args[0].clone(), |acc, a| &acc - a))
        }
        "/" => {
            arity(args.len() == 2)?;
            let d = args[1].as_constant().ok_or(ExprParseError::BadDivisor)?;
            let inv = d.recip().ok_or(ExprParseError::BadDivisor)?;
            Ok(args[0].scale(&inv))
        }
        "^" => {
            arity(args.len() == 2)?;
            let e = args[1].as_constant().ok_or(ExprParseError::BadExponent)?;
            if !e.is_real() || !e.re.is_integer() || e.re < num_traits::Zero::zero() {
                return Err(ExprParseError::BadExponent);
            }
            let n: u32 = e
                .re
                .to_integer()
                .try_into()
                .map_err(|_| ExprParseError::BadExponent)?;
            Ok(args[0].pow(n))
        }
        "cos" | "sin" => {
            arity(args.len() == 1)?;
            harmonic_of(op == "cos", &args[0], chart)
        }
        other => Err(ExprParseError::UnknownOperator(other.to_string())),
    }
}

fn harmonic_of(is_cos: bool, arg: &Expr, chart: Chart) -> Result<Expr, ExprParseError> {
    let bad = || ExprParseError::BadHarmonicArgument(arg.to_string());
    let p = chart.periodic.ok_or_else(bad)?;
    if !arg.is_polynomial() || arg.num_terms() != 1 {
        return Err(bad());
    }
    let coeffs = arg.coefficients_in(p);
    if coeffs.len() != 2 {
        return Err(bad());
    }
    let k = coeffs[1].as_constant().ok_or_else(bad)?;
    if !k.is_real() || !k.re.is_integer() {
        return Err(bad());
    }
    let k: i64 = k.re.to_integer().try_into().map_err(|_| bad())?;
    let m = k.unsigned_abs() as u32;
    let h = if is_cos {
        Expr::cos(chart, p, m)
    } else {
        Expr::sin(chart, p, m)
    }
    .map_err(|_| bad())?;
    Ok(if !is_cos && k < 0 { -h } else { h })
}
