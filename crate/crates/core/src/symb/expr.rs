//! Canonical sums of `coefficient · monomial · harmonic` terms.
//!
//! A term is a Gaussian-rational coefficient times a monomial in every chart
//! coordinate times one of `1`, `cos(k x_p)`, `sin(k x_p)` where `x_p` is the
//! chart's single periodic coordinate. Terms live in a `BTreeMap` keyed by
//! `(exponents, harmonic)` with zero coefficients removed, so structural
//! equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::SymbError;
use crate::rational::{rat, ratio, GaussRational, Rational};

/// Coordinate chart: number of coordinates and the optional periodic one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    pub dim: usize,
    pub periodic: Option<usize>,
}

impl Chart {
    pub fn new(dim: usize, periodic: Option<usize>) -> Self {
        if let Some(p) = periodic {
            assert!(p < dim, "periodic coordinate {p} outside chart of dim {dim}");
        }
        Self { dim, periodic }
    }

    pub fn flat(dim: usize) -> Self {
        Self::new(dim, None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Harmonic {
    One,
    Cos(u32),
    Sin(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct TermKey {
    exps: Vec<u32>,
    harmonic: Harmonic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    chart: Chart,
    terms: BTreeMap<TermKey, GaussRational>,
}

/// `h1 · h2` rewritten by product-to-sum identities.
fn harmonic_product(h1: Harmonic, h2: Harmonic) -> Vec<(Harmonic, Rational, bool)> {
    // (harmonic, coefficient, keep) with sin(0) dropped and sin(-k) = -sin(k)
    use Harmonic::*;
    let half = ratio(1, 2);
    let cos = |k: i64| -> (Harmonic, Rational, bool) {
        let k = k.unsigned_abs() as u32;
        if k == 0 {
            (One, rat(1), true)
        } else {
            (Cos(k), rat(1), true)
        }
    };
    let sin = |k: i64| -> (Harmonic, Rational, bool) {
        match k.signum() {
            0 => (One, rat(0), false),
            1 => (Sin(k as u32), rat(1), true),
            _ => (Sin((-k) as u32), rat(-1), true),
        }
    };
    let scaled = |(h, c, keep): (Harmonic, Rational, bool), s: &Rational| (h, c * s, keep);
    match (h1, h2) {
        (One, h) | (h, One) => vec![(h, rat(1), true)],
        (Cos(a), Cos(b)) => {
            let (a, b) = (a as i64, b as i64);
            vec![scaled(cos(a - b), &half), scaled(cos(a + b), &half)]
        }
        (Sin(a), Sin(b)) => {
            let (a, b) = (a as i64, b as i64);
            vec![scaled(cos(a - b), &half), scaled(cos(a + b), &-half.clone())]
        }
        (Sin(a), Cos(b)) | (Cos(b), Sin(a)) => {
            let (a, b) = (a as i64, b as i64);
            vec![scaled(sin(a + b), &half), scaled(sin(a - b), &half)]
        }
    }
}

impl Expr {
    pub fn zero(chart: Chart) -> Self {
        Self {
            chart,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: Chart, c: impl Into<GaussRational>) -> Self {
        let mut e = Self::zero(chart);
        e.push(vec![0; chart.dim], Harmonic::One, c.into());
        e
    }

    pub fn one(chart: Chart) -> Self {
        Self::constant(chart, GaussRational::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(chart: Chart, i: usize) -> Self {
        assert!(i < chart.dim, "coordinate {i} outside chart");
        let mut exps = vec![0; chart.dim];
        exps[i] = 1;
        let mut e = Self::zero(chart);
        e.push(exps, Harmonic::One, GaussRational::one());
        e
    }

    /// `x_i^n`.
    pub fn var_pow(chart: Chart, i: usize, n: u32) -> Self {
        let mut exps = vec![0; chart.dim];
        exps[i] = n;
        let mut e = Self::zero(chart);
        e.push(exps, Harmonic::One, GaussRational::one());
        e
    }

    /// `cos(k x_i)`; `x_i` must be the chart's periodic coordinate.
    pub fn cos(chart: Chart, i: usize, k: u32) -> Result<Self, SymbError> {
        Self::harmonic(chart, i, k, true)
    }

    /// `sin(k x_i)`; `x_i` must be the chart's periodic coordinate.
    pub fn sin(chart: Chart, i: usize, k: u32) -> Result<Self, SymbError> {
        Self::harmonic(chart, i, k, false)
    }

    fn harmonic(chart: Chart, i: usize, k: u32, is_cos: bool) -> Result<Self, SymbError> {
        if chart.periodic != Some(i) {
            return Err(SymbError::NonPeriodicHarmonic {
                coordinate: i,
                periodic: chart.periodic,
            });
        }
        if k == 0 {
            return Ok(if is_cos {
                Self::one(chart)
            } else {
                Self::zero(chart)
            });
        }
        let h = if is_cos {
            Harmonic::Cos(k)
        } else {
            Harmonic::Sin(k)
        };
        let mut e = Self::zero(chart);
        e.push(vec![0; chart.dim], h, GaussRational::one());
        Ok(e)
    }

    fn push(&mut self, exps: Vec<u32>, harmonic: Harmonic, coeff: GaussRational) {
        if coeff.is_zero() {
            return;
        }
        let key = TermKey { exps, harmonic };
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the expression is the constant `c`.
    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => {
                let (k, v) = self.terms.iter().next().unwrap();
                (k.harmonic == Harmonic::One && k.exps.iter().all(|&e| e == 0)).then(|| v.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Degree of the polynomial part in coordinate `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|k| k.exps[i]).max().unwrap_or(0)
    }

    /// True when no term carries a harmonic factor.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.harmonic == Harmonic::One)
    }

    fn check_chart(&self, other: &Expr) -> Result<(), SymbError> {
        if self.chart != other.chart {
            return Err(SymbError::ChartMismatch {
                left: self.chart,
                right: other.chart,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Expr) -> Result<Expr, SymbError> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.push(k.exps.clone(), k.harmonic, v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Expr) -> Result<Expr, SymbError> {
        self.check_chart(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.push(k.exps.clone(), k.harmonic, -v);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Expr) -> Result<Expr, SymbError> {
        self.check_chart(other)?;
        let mut out = Expr::zero(self.chart);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let exps: Vec<u32> = k1.exps.iter().zip(&k2.exps).map(|(a, b)| a + b).collect();
                let c = v1 * v2;
                for (h, factor, keep) in harmonic_product(k1.harmonic, k2.harmonic) {
                    if keep {
                        out.push(exps.clone(), h, c.scale(&factor));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRational) -> Expr {
        if c.is_zero() {
            return Expr::zero(self.chart);
        }
        Expr {
            chart: self.chart,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Expr {
        self.scale(&GaussRational::real(r.clone()))
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one(self.chart);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate, treating every coordinate as real.
    pub fn conj(&self) -> Expr {
        Expr {
            chart: self.chart,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect(),
        }
    }

    /// `∂ / ∂x_i`.
    pub fn partial(&self, i: usize) -> Expr {
        assert!(i < self.chart.dim, "coordinate {i} outside chart");
        let mut out = Expr::zero(self.chart);
        let periodic = self.chart.periodic == Some(i);
        for (k, v) in &self.terms {
            let n = k.exps[i];
            if n > 0 {
                let mut exps = k.exps.clone();
                exps[i] -= 1;
                out.push(exps, k.harmonic, v.scale(&rat(n as i64)));
            }
            if periodic {
                match k.harmonic {
                    Harmonic::One => {}
                    Harmonic::Cos(m) => {
                        out.push(k.exps.clone(), Harmonic::Sin(m), v.scale(&rat(-(m as i64))))
                    }
                    Harmonic::Sin(m) => {
                        out.push(k.exps.clone(), Harmonic::Cos(m), v.scale(&rat(m as i64)))
                    }
                }
            }
        }
        out
    }

    /// An antiderivative in `x_i` (no constant of integration).
    pub fn antiderivative(&self, i: usize) -> Expr {
        assert!(i < self.chart.dim, "coordinate {i} outside chart");
        let mut out = Expr::zero(self.chart);
        let periodic = self.chart.periodic == Some(i);
        for (k, v) in &self.terms {
            if !periodic || k.harmonic == Harmonic::One {
                let mut exps = k.exps.clone();
                exps[i] += 1;
                let n = exps[i] as i64;
                out.push(exps, k.harmonic, v.scale(&ratio(1, n)));
                continue;
            }
            for (n, h, c) in integrate_power_harmonic(k.exps[i], k.harmonic) {
                let mut exps = k.exps.clone();
                exps[i] = n;
                out.push(exps, h, v.scale(&c));
            }
        }
        out
    }

    /// `x_i ↦ 0`.
    pub fn at_zero(&self, i: usize) -> Expr {
        let periodic = self.chart.periodic == Some(i);
        let mut out = Expr::zero(self.chart);
        for (k, v) in &self.terms {
            if k.exps[i] > 0 {
                continue;
            }
            match (periodic, k.harmonic) {
                (true, Harmonic::Sin(_)) => {}
                (true, Harmonic::Cos(_)) => out.push(k.exps.clone(), Harmonic::One, v.clone()),
                _ => out.push(k.exps.clone(), k.harmonic, v.clone()),
            }
        }
        out
    }

    /// `∫_0^{x_i} f dt` with `t` in slot `i`.
    pub fn integrate_from_zero(&self, i: usize) -> Expr {
        let f = self.antiderivative(i);
        &f - &f.at_zero(i)
    }

    /// Substitutes `x_i = value`. The periodic coordinate only accepts 0.
    pub fn substitute(&self, i: usize, value: &GaussRational) -> Result<Expr, SymbError> {
        if self.chart.periodic == Some(i) {
            if value.is_zero() {
                return Ok(self.at_zero(i));
            }
            return Err(SymbError::PeriodicSubstitution { coordinate: i });
        }
        let mut out = Expr::zero(self.chart);
        for (k, v) in &self.terms {
            let n = k.exps[i];
            let mut c = v.clone();
            for _ in 0..n {
                c = &c * value;
            }
            let mut exps = k.exps.clone();
            exps[i] = 0;
            out.push(exps, k.harmonic, c);
        }
        Ok(out)
    }

    /// Polynomial coefficients in `x_i` (index = power). Requires that
    /// `x_i` is not periodic with harmonics present.
    pub fn coefficients_in(&self, i: usize) -> Vec<Expr> {
        let deg = self.degree_in(i) as usize;
        let mut out = vec![Expr::zero(self.chart); deg + 1];
        for (k, v) in &self.terms {
            let n = k.exps[i] as usize;
            let mut exps = k.exps.clone();
            exps[i] = 0;
            out[n].push(exps, k.harmonic, v.clone());
        }
        out
    }

    /// Evaluates at a complex point (harmonics use the complex cos/sin).
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.chart.dim, "point dimension");
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, v) in &self.terms {
            let mut t = v.to_complex();
            for (x, &e) in point.iter().zip(&k.exps) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            if let Some(p) = self.chart.periodic {
                match k.harmonic {
                    Harmonic::One => {}
                    Harmonic::Cos(m) => t *= (point[p] * m as f64).cos(),
                    Harmonic::Sin(m) => t *= (point[p] * m as f64).sin(),
                }
            }
            sum += t;
        }
        sum
    }

    pub fn eval_at(&self, point: &[f64]) -> Complex64 {
        let z: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.eval_complex(&z)
    }

    /// Moves the expression to a chart with more coordinates (appended).
    pub fn embed(&self, chart: Chart) -> Expr {
        assert!(chart.dim >= self.chart.dim);
        assert!(self.is_polynomial() || chart.periodic == self.chart.periodic);
        let mut out = Expr::zero(chart);
        for (k, v) in &self.terms {
            let mut exps = k.exps.clone();
            exps.resize(chart.dim, 0);
            out.push(exps, k.harmonic, v.clone());
        }
        out
    }

    fn fmt_term(&self, key: &TermKey, coeff: &GaussRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        for (i, &e) in key.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("x{}", i + 1)),
                _ => factors.push(format!("x{}^{}", i + 1, e)),
            }
        }
        let p = self.chart.periodic.map_or(0, |p| p + 1);
        match key.harmonic {
            Harmonic::One => {}
            Harmonic::Cos(1) => factors.push(format!("cos(x{p})")),
            Harmonic::Sin(1) => factors.push(format!("sin(x{p})")),
            Harmonic::Cos(k) => factors.push(format!("cos({k}*x{p})")),
            Harmonic::Sin(k) => factors.push(format!("sin({k}*x{p})")),
        }
        if factors.is_empty() {
            return write!(f, "{coeff}");
        }
        if coeff.is_one() {
            write!(f, "{}", factors.join("*"))
        } else if (-coeff).is_one() {
            write!(f, "-{}", factors.join("*"))
        } else {
            write!(f, "{}*{}", coeff, factors.join("*"))
        }
    }
}

/// `∫ x^n h(kx) dx` as a list of `(power, harmonic, coefficient)` terms.
fn integrate_power_harmonic(n: u32, h: Harmonic) -> Vec<(u32, Harmonic, Rational)> {
    match h {
        Harmonic::One => vec![(n + 1, Harmonic::One, ratio(1, n as i64 + 1))],
        Harmonic::Cos(k) => {
            // x^n sin/k - (n/k) ∫ x^{n-1} sin
            let kq = rat(k as i64);
            let mut out = vec![(n, Harmonic::Sin(k), rat(1) / &kq)];
            if n > 0 {
                let f = -rat(n as i64) / &kq;
                for (m, hh, c) in integrate_power_harmonic(n - 1, Harmonic::Sin(k)) {
                    out.push((m, hh, c * &f));
                }
            }
            out
        }
        Harmonic::Sin(k) => {
            // -x^n cos/k + (n/k) ∫ x^{n-1} cos
            let kq = rat(k as i64);
            let mut out = vec![(n, Harmonic::Cos(k), rat(-1) / &kq)];
            if n > 0 {
                let f = rat(n as i64) / &kq;
                for (m, hh, c) in integrate_power_harmonic(n - 1, Harmonic::Cos(k)) {
                    out.push((m, hh, c * &f));
                }
            }
            out
        }
    }
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        self.try_add(o).expect("chart mismatch")
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, o: &Expr) -> Expr {
        self.try_sub(o).expect("chart mismatch")
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        self.try_mul(o).expect("chart mismatch")
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        &self + &o
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        &self - &o
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        &self * &o
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&GaussRational::from_int(-1))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl fmt::Display for Expr {
    /// Deterministic text form; terms appear in canonical key order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, v)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            self.fmt_term(k, v, f)?;
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
    fn cos_squared_product_to_sum() {
        let c = Expr::cos(chart(), 2, 1).unwrap();
        let expected = &Expr::constant(chart(), GaussRational::real(ratio(1, 2)))
            + &Expr::cos(chart(), 2, 2).unwrap().scale_rational(&ratio(1, 2));
        assert_eq!(&c * &c, expected);
    }

    #[test]
    fn pythagorean_reduction() {
        let c = Expr::cos(chart(), 2, 1).unwrap();
        let s = Expr::sin(chart(), 2, 1).unwrap();
        assert_eq!(&(&c * &c) + &(&s * &s), Expr::one(chart()));
    }

    #[test]
    fn derivative_of_x1_sin_x3() {
        let e = &Expr::var(chart(), 0) * &Expr::sin(chart(), 2, 1).unwrap();
        let expected = &Expr::var(chart(), 0) * &Expr::cos(chart(), 2, 1).unwrap();
        assert_eq!(e.partial(2), expected);
        assert_eq!(e.partial(0), Expr::sin(chart(), 2, 1).unwrap());
        assert!(e.partial(3).is_zero());
    }

    #[test]
    fn harmonics_only_on_periodic_coordinate() {
        assert!(matches!(
            Expr::cos(chart(), 0, 1),
            Err(SymbError::NonPeriodicHarmonic { coordinate: 0, .. })
        ));
        assert!(Expr::sin(Chart::flat(2), 1, 1).is_err());
    }

    #[test]
    fn chart_mismatch_is_error() {
        let a = Expr::var(chart(), 0);
        let b = Expr::var(Chart::flat(4), 0);
        assert!(matches!(a.try_add(&b), Err(SymbError::ChartMismatch { .. })));
    }

    #[test]
    fn antiderivative_inverts_partial() {
        let x3 = Expr::var(chart(), 2);
        let e = &(&x3.pow(2) * &Expr::cos(chart(), 2, 3).unwrap())
            + &(&x3 * &Expr::sin(chart(), 2, 1).unwrap());
        assert_eq!(e.antiderivative(2).partial(2), e);
        let p = &Expr::var(chart(), 0).pow(3) * &Expr::var(chart(), 1);
        assert_eq!(p.antiderivative(0).partial(0), p);
    }

    #[test]
    fn definite_integral_vanishes_at_zero() {
        let e = &Expr::var(chart(), 2) * &Expr::sin(chart(), 2, 1).unwrap();
        let i = e.integrate_from_zero(2);
        assert!(i.at_zero(2).is_zero());
        // ∫_0^x t sin t dt = sin x - x cos x
        let expected = &Expr::sin(chart(), 2, 1).unwrap()
            - &(&Expr::var(chart(), 2) * &Expr::cos(chart(), 2, 1).unwrap());
        assert_eq!(i, expected);
    }

    #[test]
    fn evaluation_matches_float_math() {
        let e = &(&Expr::var(chart(), 0) * &Expr::cos(chart(), 2, 2).unwrap())
            + &Expr::constant(chart(), GaussRational::i());
        let v = e.eval_at(&[1.5, 0.0, 0.3, 0.0]);
        assert!((v.re - 1.5 * (0.6f64).cos()).abs() < 1e-15);
        assert!((v.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn display_is_deterministic() {
        let e = &Expr::var(chart(), 0) - &Expr::sin(chart(), 2, 1).unwrap().scale_rational(&ratio(1, 2));
        assert_eq!(e.to_string(), "-1/2*sin(x3) + x1");
        assert_eq!(Expr::zero(chart()).to_string(), "0");
    }

    #[test]
    fn substitution_and_coefficients() {
        let c = Chart::flat(2);
        let e = &(&Expr::var(c, 0).pow(2) * &Expr::var(c, 1)) + &Expr::var(c, 1);
        let s = e.substitute(0, &GaussRational::from_int(2)).unwrap();
        assert_eq!(s, Expr::var(c, 1).scale_rational(&rat(5)));
        let coeffs = e.coefficients_in(0);
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[0], Expr::var(c, 1));
        assert!(coeffs[1].is_zero());
        assert!(Expr::cos(chart(), 2, 1)
            .unwrap()
            .substitute(2, &GaussRational::one())
            .is_err());
    }
}
