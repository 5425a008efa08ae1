//! Differential forms and symmetric covariant 2-tensors on a chart.

use std::collections::BTreeMap;
use std::fmt;

use super::expr::{Chart, Expr};
use super::op::DiffOp;
use super::SymbError;

/// `ω = Σ_{i1<…<ip} ω_{i1…ip} dx^{i1}∧…∧dx^{ip}`; only strictly increasing
/// index tuples are stored, other orderings follow by antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    chart: Chart,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
}

/// Sorts `idx` and returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// All strictly increasing `p`-tuples from `0..n`.
fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

impl DiffForm {
    pub fn zero(chart: Chart, degree: usize) -> Self {
        Self {
            chart,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// A function viewed as a 0-form.
    pub fn function(f: Expr) -> Self {
        let mut w = Self::zero(f.chart(), 0);
        w.set(&[], f);
        w
    }

    /// `Σ ω_i dx^i`.
    pub fn one_form(components: Vec<Expr>) -> Self {
        let chart = components[0].chart();
        assert_eq!(components.len(), chart.dim);
        let mut w = Self::zero(chart, 1);
        for (i, c) in components.into_iter().enumerate() {
            w.set(&[i], c);
        }
        w
    }

    /// Sets the component for an index tuple in any order (sign applied).
    pub fn set(&mut self, idx: &[usize], value: Expr) {
        assert_eq!(idx.len(), self.degree, "form degree");
        assert_eq!(value.chart(), self.chart, "chart mismatch");
        let Some((key, sign)) = sort_with_sign(idx) else {
            assert!(value.is_zero(), "nonzero component with repeated index");
            return;
        };
        let v = if sign < 0 { -value } else { value };
        if v.is_zero() {
            self.comps.remove(&key);
        } else {
            self.comps.insert(key, v);
        }
    }

    /// Component `ω_{i1…ip}` for any index order.
    pub fn component(&self, idx: &[usize]) -> Expr {
        match sort_with_sign(idx) {
            None => Expr::zero(self.chart),
            Some((key, sign)) => {
                let c = self
                    .comps
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| Expr::zero(self.chart));
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Nonzero components on increasing index tuples.
    pub fn components(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.comps.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn try_add(&self, other: &DiffForm) -> Result<DiffForm, SymbError> {
        if self.degree != other.degree {
            return Err(SymbError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.comps {
            let s = out.component(k).try_add(v)?;
            out.set(k, s);
        }
        Ok(out)
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        self.try_add(other).expect("form degree or chart mismatch")
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.scale_expr(&-Expr::one(self.chart)))
    }

    /// Multiplies every component by the function `f`.
    pub fn scale_expr(&self, f: &Expr) -> DiffForm {
        let mut out = DiffForm::zero(self.chart, self.degree);
        for (k, v) in &self.comps {
            out.set(k, v * f);
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = DiffForm::zero(self.chart, self.degree + other.degree);
        for (a, u) in &self.comps {
            for (b, v) in &other.comps {
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((key, sign)) = sort_with_sign(&idx) {
                    let mut t = u * v;
                    if sign < 0 {
                        t = -t;
                    }
                    let s = &out.component(&key) + &t;
                    out.set(&key, s);
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn exterior_d(&self) -> DiffForm {
        let n = self.chart.dim;
        let mut out = DiffForm::zero(self.chart, self.degree + 1);
        if self.degree >= n {
            return out;
        }
        for idx in increasing_tuples(n, self.degree + 1) {
            let mut acc = Expr::zero(self.chart);
            for s in 0..idx.len() {
                let mut rest = idx.clone();
                let i = rest.remove(s);
                let term = self.component(&rest).partial(i);
                acc = if s % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            out.set(&idx, acc);
        }
        out
    }

    /// Contraction into the first slot: `(i_v ω)_{J} = v^k ω_{kJ}`.
    pub fn interior(&self, v: &DiffOp) -> Result<DiffForm, SymbError> {
        if !v.is_vector_field() {
            return Err(SymbError::NotVectorField);
        }
        if self.degree == 0 {
            return Ok(DiffForm::zero(self.chart, 0));
        }
        let n = self.chart.dim;
        let mut out = DiffForm::zero(self.chart, self.degree - 1);
        for rest in increasing_tuples(n, self.degree - 1) {
            let mut acc = Expr::zero(self.chart);
            for k in 0..n {
                let vk = v.first(k);
                if vk.is_zero() {
                    continue;
                }
                let mut idx = vec![k];
                idx.extend_from_slice(&rest);
                let c = self.component(&idx);
                if !c.is_zero() {
                    acc = &acc + &(&vk * &c);
                }
            }
            out.set(&rest, acc);
        }
        Ok(out)
    }

    /// Lie derivative from the component formula
    /// `v^k ∂_k ω_I + Σ_s ω_{i1..k..ip} ∂_{i_s} v^k`.
    pub fn lie_derivative(&self, v: &DiffOp) -> Result<DiffForm, SymbError> {
        if !v.is_vector_field() {
            return Err(SymbError::NotVectorField);
        }
        let n = self.chart.dim;
        let vc = v.first_order_part();
        let mut out = DiffForm::zero(self.chart, self.degree);
        for idx in increasing_tuples(n, self.degree) {
            let mut acc = Expr::zero(self.chart);
            let w = self.component(&idx);
            for (k, vk) in vc.iter().enumerate() {
                if !vk.is_zero() && !w.is_zero() {
                    acc = &acc + &(vk * &w.partial(k));
                }
            }
            for s in 0..idx.len() {
                for (k, vk) in vc.iter().enumerate() {
                    let dv = vk.partial(idx[s]);
                    if dv.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[s] = k;
                    let c = self.component(&j);
                    if !c.is_zero() {
                        acc = &acc + &(&c * &dv);
                    }
                }
            }
            out.set(&idx, acc);
        }
        Ok(out)
    }

    /// The form's value on vector fields, `ω(v_1, …, v_p)`.
    pub fn evaluate_on(&self, vectors: &[&DiffOp]) -> Expr {
        assert_eq!(vectors.len(), self.degree);
        let mut w = self.clone();
        for v in vectors {
            w = w.interior(v).expect("vector field expected");
        }
        w.component(&[])
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, v)) in self.comps.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let basis: Vec<String> = k.iter().map(|i| format!("dx{}", i + 1)).collect();
            if basis.is_empty() {
                write!(f, "{v}")?;
            } else {
                write!(f, "({v})*{}", basis.join("^"))?;
            }
        }
        Ok(())
    }
}

/// Symmetric covariant 2-tensor `g_ij dx^i ⊗ dx^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorField {
    chart: Chart,
    comps: Vec<Expr>,
}

impl TensorField {
    pub fn from_components(comps: Vec<Vec<Expr>>) -> Result<Self, SymbError> {
        let n = comps.len();
        let chart = comps[0][0].chart();
        if n != chart.dim || comps.iter().any(|r| r.len() != n) {
            return Err(SymbError::ShapeMismatch {
                expected: chart.dim,
                found: n,
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if comps[i][j] != comps[j][i] {
                    return Err(SymbError::AsymmetricSecondOrder { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Self {
            chart,
            comps: comps.into_iter().flatten().collect(),
        })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.comps[i * self.chart.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// `(L_v T)_ij = v^k ∂_k T_ij + T_kj ∂_i v^k + T_ik ∂_j v^k`.
    pub fn lie_derivative(&self, v: &DiffOp) -> Result<TensorField, SymbError> {
        if !v.is_vector_field() {
            return Err(SymbError::NotVectorField);
        }
        let n = self.chart.dim;
        let vc = v.first_order_part();
        let mut out = vec![vec![Expr::zero(self.chart); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut acc = Expr::zero(self.chart);
                for (k, vk) in vc.iter().enumerate() {
                    acc = &acc + &(vk * &self.get(i, j).partial(k));
                    acc = &acc + &(self.get(k, j) * &vk.partial(i));
                    acc = &acc + &(self.get(i, k) * &vk.partial(j));
                }
                out[i][j] = acc.clone();
                out[j][i] = acc;
            }
        }
        TensorField::from_components(out)
    }

    /// Components evaluated at a real point (real part).
    pub fn at(&self, point: &[f64]) -> Vec<Vec<f64>> {
        let n = self.chart.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).eval_at(point).re).collect())
            .collect()
    }
}

impl fmt::Display for TensorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.chart.dim;
        let mut first = true;
        for i in 0..n {
            for j in i..n {
                let c = self.get(i, j);
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if i == j {
                    write!(f, "({c})*dx{}^2", i + 1)?;
                } else {
                    write!(f, "2*({c})*dx{}*dx{}", i + 1, j + 1)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
