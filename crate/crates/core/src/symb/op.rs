//! Inhomogeneous linear differential operators of order at most two.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::expr::{Chart, Expr};
use super::SymbError;
use crate::rational::{ratio, GaussRational};

/// Derivative multi-index as a sorted list of coordinates, e.g. `[0, 2]`
/// for `∂_1 ∂_3` and `[]` for the identity.
type MultiIndex = Vec<usize>;

/// `Σ_α c_α(x) ∂^α` with `|α| ≤ 2`.
///
/// Stored per multi-index, so the mixed term `∂_i ∂_j` (i ≠ j) appears once.
/// [`DiffOp::second`] exposes the symmetric-matrix view
/// `Σ_{ij} a^{ij} ∂_i ∂_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    chart: Chart,
    terms: BTreeMap<MultiIndex, Expr>,
}

/// Operator of unbounded order, used only while composing.
struct RawOp {
    chart: Chart,
    terms: BTreeMap<MultiIndex, Expr>,
}

impl RawOp {
    fn add_term(&mut self, alpha: MultiIndex, coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(alpha)
            .or_insert_with(|| Expr::zero(self.chart));
        *slot = &*slot + &coeff;
    }

    fn into_diffop(mut self) -> Result<DiffOp, SymbError> {
        self.terms.retain(|_, c| !c.is_zero());
        if let Some((alpha, c)) = self.terms.iter().find(|(a, _)| a.len() > 2) {
            return Err(SymbError::OrderOverflow {
                order: alpha.len(),
                multi_index: alpha.iter().map(|i| i + 1).collect(),
                coefficient: c.to_string(),
            });
        }
        Ok(DiffOp {
            chart: self.chart,
            terms: self.terms,
        })
    }
}

/// `∂^α f` for a sorted multi-index.
fn apply_derivatives(f: &Expr, alpha: &[usize]) -> Expr {
    alpha.iter().fold(f.clone(), |acc, &i| acc.partial(i))
}

fn merge(a: &[usize], b: &[usize]) -> MultiIndex {
    let mut m: MultiIndex = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    m
}

impl DiffOp {
    pub fn zero(chart: Chart) -> Self {
        Self {
            chart,
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: Expr) -> Self {
        let chart = f.chart();
        let mut op = Self::zero(chart);
        op.set(Vec::new(), f);
        op
    }

    pub fn constant(chart: Chart, c: impl Into<GaussRational>) -> Self {
        Self::multiplication(Expr::constant(chart, c))
    }

    /// `∂_i`.
    pub fn derivative(chart: Chart, i: usize) -> Self {
        let mut op = Self::zero(chart);
        op.set(vec![i], Expr::one(chart));
        op
    }

    /// Homogeneous first-order operator `v^i ∂_i`.
    pub fn vector_field(components: Vec<Expr>) -> Self {
        let chart = components[0].chart();
        assert_eq!(components.len(), chart.dim, "vector field length");
        let mut op = Self::zero(chart);
        for (i, c) in components.into_iter().enumerate() {
            op.set(vec![i], c);
        }
        op
    }

    /// Builds `Σ a^{ij} ∂_i∂_j + Σ b^i ∂_i + c` from a symmetric `a`.
    pub fn from_parts(second: &[Vec<Expr>], first: &[Expr], zeroth: Expr) -> Result<Self, SymbError> {
        let chart = zeroth.chart();
        let n = chart.dim;
        if first.len() != n || (!second.is_empty() && second.len() != n) {
            return Err(SymbError::ShapeMismatch {
                expected: n,
                found: first.len(),
            });
        }
        let mut op = Self::multiplication(zeroth);
        for (i, b) in first.iter().enumerate() {
            op.set(vec![i], b.clone());
        }
        for i in 0..second.len() {
            for j in i..n {
                if second[i][j] != second[j][i] {
                    return Err(SymbError::AsymmetricSecondOrder { i: i + 1, j: j + 1 });
                }
                let c = if i == j {
                    second[i][i].clone()
                } else {
                    second[i][j].scale(&GaussRational::from_int(2))
                };
                op.set(vec![i, j], c);
            }
        }
        Ok(op)
    }

    fn set(&mut self, alpha: MultiIndex, coeff: Expr) {
        assert_eq!(coeff.chart(), self.chart, "chart mismatch");
        if coeff.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, coeff);
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Coefficient of `∂^α` for a multi-index given in any order.
    pub fn coefficient(&self, alpha: &[usize]) -> Expr {
        let mut key = alpha.to_vec();
        key.sort_unstable();
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(|| Expr::zero(self.chart))
    }

    /// Symmetric second-order coefficient `a^{ij}`.
    pub fn second(&self, i: usize, j: usize) -> Expr {
        let c = self.coefficient(&[i, j]);
        if i == j {
            c
        } else {
            c.scale_rational(&ratio(1, 2))
        }
    }

    pub fn first(&self, i: usize) -> Expr {
        self.coefficient(&[i])
    }

    pub fn zeroth(&self) -> Expr {
        self.coefficient(&[])
    }

    /// First-order coefficients as a vector.
    pub fn first_order_part(&self) -> Vec<Expr> {
        (0..self.chart.dim).map(|i| self.first(i)).collect()
    }

    /// True for `v^i ∂_i` with no zeroth- or second-order part.
    pub fn is_vector_field(&self) -> bool {
        self.terms.keys().all(|a| a.len() == 1)
    }

    /// The part of order exactly one, as a vector field.
    pub fn principal_vector_field(&self) -> DiffOp {
        DiffOp::vector_field(self.first_order_part())
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = self.clone();
        for (a, c) in &other.terms {
            let sum = &out.coefficient(a) + c;
            out.set(a.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scale(&GaussRational::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRational) -> DiffOp {
        let mut out = DiffOp::zero(self.chart);
        if c.is_zero() {
            return out;
        }
        for (a, e) in &self.terms {
            out.set(a.clone(), e.scale(c));
        }
        out
    }

    /// Left multiplication by a function: `f · A`.
    pub fn left_mul(&self, f: &Expr) -> DiffOp {
        let mut out = DiffOp::zero(self.chart);
        for (a, e) in &self.terms {
            out.set(a.clone(), e * f);
        }
        out
    }

    /// Adds the multiplication operator `f`.
    pub fn plus_function(&self, f: &Expr) -> DiffOp {
        self.add(&DiffOp::multiplication(f.clone()))
    }

    /// `A f` for a function `f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero(self.chart);
        for (a, c) in &self.terms {
            out = &out + &(c * &apply_derivatives(f, a));
        }
        out
    }

    fn compose_raw(&self, other: &DiffOp) -> RawOp {
        let mut out = RawOp {
            chart: self.chart,
            terms: BTreeMap::new(),
        };
        for (alpha, a) in &self.terms {
            let k = alpha.len();
            for (beta, b) in &other.terms {
                // Leibniz: each derivative in α hits either b or the operand.
                for mask in 0..(1u32 << k) {
                    let mut on_b = Vec::new();
                    let mut passed = Vec::new();
                    for (pos, &i) in alpha.iter().enumerate() {
                        if mask & (1 << pos) != 0 {
                            on_b.push(i);
                        } else {
                            passed.push(i);
                        }
                    }
                    let db = apply_derivatives(b, &on_b);
                    if db.is_zero() {
                        continue;
                    }
                    out.add_term(merge(&passed, beta), a * &db);
                }
            }
        }
        out
    }

    /// `A ∘ B`; fails when the product has order above two.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp, SymbError> {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        self.compose_raw(other).into_diffop()
    }

    /// Exact commutator `[A, B] = AB − BA`. Terms above second order are
    /// formed and must cancel; otherwise `OrderOverflow` names the first
    /// surviving one.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp, SymbError> {
        if self.chart != other.chart {
            return Err(SymbError::ChartMismatch {
                left: self.chart,
                right: other.chart,
            });
        }
        let mut ab = self.compose_raw(other);
        let ba = other.compose_raw(self);
        for (a, c) in ba.terms {
            ab.add_term(a, -c);
        }
        ab.into_diffop()
    }

    /// Complex conjugate of every coefficient.
    pub fn conj(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.chart);
        for (a, e) in &self.terms {
            out.set(a.clone(), e.conj());
        }
        out
    }

    /// First-order coefficients evaluated at a real point.
    pub fn first_order_at(&self, point: &[f64]) -> Vec<Complex64> {
        (0..self.chart.dim).map(|i| self.first(i).eval_at(point)).collect()
    }

    pub fn zeroth_at(&self, point: &[f64]) -> Complex64 {
        self.zeroth().eval_at(point)
    }

    /// Coefficients as `(multi-index, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.terms.iter().map(|(a, c)| (a.as_slice(), c))
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest order first reads naturally
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        for (n, alpha) in keys.into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let coeff = &self.terms[alpha];
            let d: String = alpha.iter().map(|i| format!("d{}", i + 1)).collect::<Vec<_>>().join("*");
            let c = coeff.to_string();
            let c = if coeff.num_terms() > 1 { format!("({c})") } else { c };
            if d.is_empty() {
                write!(f, "{c}")?;
            } else if coeff.as_constant().is_some_and(|v| v == GaussRational::from_int(1)) {
                write!(f, "{d}")?;
            } else {
                write!(f, "{c}*{d}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(4, Some(2))
    }

    #[test]
    fn partials_commute() {
        let d1 = DiffOp::derivative(chart(), 0);
        let d2 = DiffOp::derivative(chart(), 1);
        assert!(d1.commutator(&d2).unwrap().is_zero());
    }

    #[test]
    fn x_and_d_give_identity() {
        let c = Chart::flat(1);
        let d = DiffOp::derivative(c, 0);
        let x = DiffOp::multiplication(Expr::var(c, 0));
        assert_eq!(d.commutator(&x).unwrap(), DiffOp::constant(c, 1));
    }

    #[test]
    fn second_order_commutator_with_first_order() {
        let c = Chart::flat(1);
        let d = DiffOp::derivative(c, 0);
        let dd = d.compose(&d).unwrap();
        let x = DiffOp::multiplication(Expr::var(c, 0));
        // [∂², x] = 2∂
        assert_eq!(dd.commutator(&x).unwrap(), d.scale(&GaussRational::from_int(2)));
    }

    #[test]
    fn third_order_residue_is_reported() {
        let c = Chart::flat(1);
        let d = DiffOp::derivative(c, 0);
        let dd = d.compose(&d).unwrap();
        let x2 = DiffOp::vector_field(vec![Expr::var(c, 0)]).compose(&d).unwrap();
        // [∂², x ∂²] = 2 ∂³ + ... does not fit in order two
        let err = dd.commutator(&x2).unwrap_err();
        assert!(matches!(err, SymbError::OrderOverflow { order: 3, .. }));
    }

    #[test]
    fn apply_to_function() {
        let c = chart();
        let v = DiffOp::vector_field(vec![
            Expr::cos(c, 2, 1).unwrap(),
            -Expr::sin(c, 2, 1).unwrap(),
            Expr::zero(c),
            Expr::zero(c),
        ]);
        let f = Expr::var(c, 0);
        assert_eq!(v.apply(&f), Expr::cos(c, 2, 1).unwrap());
    }

    #[test]
    fn from_parts_symmetric_view() {
        let c = Chart::flat(2);
        let one = Expr::one(c);
        let z = Expr::zero(c);
        let a = vec![vec![z.clone(), one.clone()], vec![one.clone(), z.clone()]];
        let op = DiffOp::from_parts(&a, &[z.clone(), z.clone()], z.clone()).unwrap();
        // 2 ∂1∂2 stored once
        assert_eq!(op.coefficient(&[1, 0]), one.scale(&GaussRational::from_int(2)));
        assert_eq!(op.second(0, 1), one);
        let bad = vec![vec![z.clone(), one.clone()], vec![z.clone(), z.clone()]];
        assert!(DiffOp::from_parts(&bad, &[z.clone(), z.clone()], z).is_err());
    }
}
