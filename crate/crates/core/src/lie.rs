//! Finite-dimensional real Lie algebras given by exact structure constants.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::QMatrix;
use crate::par::{self, Execution};
use crate::rational::{format_rational, rat, ParseRationalError, Rational, RationalLiteral};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("structure constant array has {found} entries, expected {expected} for dim {dim}")]
    Shape {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("bracket entry {entry}: index {index} out of range 1..={dim}")]
    IndexOutOfRange {
        entry: usize,
        index: usize,
        dim: usize,
    },
    #[error("bracket entry {entry}: expected a < b, got a = {a}, b = {b}")]
    UnorderedPair { entry: usize, a: usize, b: usize },
    #[error("bracket entry {entry}: duplicate C_({a},{b})^{c}")]
    DuplicateBracket {
        entry: usize,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("{0} labels given for dimension {1}")]
    LabelCount(usize, usize),
    #[error("dual vector has length {found}, algebra dimension is {dim}")]
    DualLength { dim: usize, found: usize },
    #[error("basis change matrix is singular or has the wrong size")]
    BadBasisChange,
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("malformed algebra file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Structure constants `C[a][b][c] = C_{ab}^c`, stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    constants: Vec<Rational>,
    labels: Vec<String>,
}

/// Element of the dual space, components `λ_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualVector(pub Vec<Rational>);

impl DualVector {
    pub fn zero(dim: usize) -> Self {
        DualVector(vec![Rational::zero(); dim])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Violations found by [`LieAlgebra::validate`]. Indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// `(a, b, c)` with `a <= b` and `C_{ab}^c + C_{ba}^c != 0`.
    pub antisymmetry: Vec<(usize, usize, usize)>,
    /// `(a, b, c, e)` where the cyclic Jacobi sum is nonzero.
    pub jacobi: Vec<(usize, usize, usize, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

/// On-disk algebra description with 1-based indices; only `a < b` entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub brackets: Vec<(usize, usize, usize, RationalLiteral)>,
}

/// Samples used for generic-rank estimates of `C_{ab}^c f_c`.
pub const CLASSICAL_INDEX_SAMPLES: usize = 25;
/// Sample entries are drawn from `[-BOUND, BOUND]`.
pub const CLASSICAL_INDEX_BOUND: i64 = 100;
pub const DEFAULT_SEED: u64 = 0x6b67_6669_6e74;

impl LieAlgebra {
    /// Builds an algebra from a flat `dim³` array; no identities are checked.
    pub fn new(dim: usize, constants: Vec<Rational>, labels: Vec<String>) -> Result<Self, LieError> {
        if dim == 0 {
            return Err(LieError::ZeroDimension);
        }
        let expected = dim * dim * dim;
        if constants.len() != expected {
            return Err(LieError::Shape {
                dim,
                expected,
                found: constants.len(),
            });
        }
        if !labels.is_empty() && labels.len() != dim {
            return Err(LieError::LabelCount(labels.len(), dim));
        }
        Ok(Self {
            dim,
            constants,
            labels,
        })
    }

    /// From 0-based `[e_a, e_b] ∋ coeff · e_c` entries with antisymmetric completion.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, usize, Rational)]) -> Self {
        let mut constants = vec![Rational::zero(); dim * dim * dim];
        for (a, b, c, v) in brackets {
            constants[(a * dim + b) * dim + c] = v.clone();
            constants[(b * dim + a) * dim + c] = -v.clone();
        }
        Self {
            dim,
            constants,
            labels: Vec::new(),
        }
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn abelian(n: usize) -> Self {
        Self::from_brackets(n, &[])
    }

    /// e(2) ⊕ ℝ: `[e1,e3] = e2`, `[e2,e3] = -e1`, `e4` central.
    pub fn e2_plus_r() -> Self {
        Self::from_brackets(4, &[(0, 2, 1, rat(1)), (1, 2, 0, rat(-1))])
            .with_labels(&["e1", "e2", "e3", "e4"])
    }

    /// so(3): `[e_a, e_b] = ε_{abc} e_c`.
    pub fn so3() -> Self {
        Self::from_brackets(3, &[(0, 1, 2, rat(1)), (1, 2, 0, rat(1)), (2, 0, 1, rat(1))])
            .with_labels(&["e1", "e2", "e3"])
    }

    /// sl(2,ℝ) in the basis (h, e, f): `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2r() -> Self {
        Self::from_brackets(3, &[(0, 1, 1, rat(2)), (0, 2, 2, rat(-2)), (1, 2, 0, rat(1))])
            .with_labels(&["h", "e", "f"])
    }

    /// Three-dimensional Heisenberg algebra `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        Self::from_brackets(3, &[(0, 1, 2, rat(1))]).with_labels(&["e1", "e2", "e3"])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Label of basis element `a` (0-based), falling back to `e{a+1}`.
    pub fn label(&self, a: usize) -> String {
        self.labels
            .get(a)
            .cloned()
            .unwrap_or_else(|| format!("e{}", a + 1))
    }

    /// `C_{ab}^c`, 0-based.
    pub fn c(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.constants[(a * self.dim + b) * self.dim + c]
    }

    pub fn constants(&self) -> &[Rational] {
        &self.constants
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(Zero::is_zero)
    }

    pub fn from_json_str(text: &str) -> Result<Self, LieError> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self, LieError> {
        let dim = file.dim;
        if dim == 0 {
            return Err(LieError::ZeroDimension);
        }
        if !file.labels.is_empty() && file.labels.len() != dim {
            return Err(LieError::LabelCount(file.labels.len(), dim));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut entries = Vec::with_capacity(file.brackets.len());
        for (entry, (a, b, c, v)) in file.brackets.iter().enumerate() {
            for &index in [a, b, c] {
                if index == 0 || index > dim {
                    return Err(LieError::IndexOutOfRange { entry, index, dim });
                }
            }
            if a >= b {
                return Err(LieError::UnorderedPair { entry, a: *a, b: *b });
            }
            if !seen.insert((*a, *b, *c)) {
                return Err(LieError::DuplicateBracket {
                    entry,
                    a: *a,
                    b: *b,
                    c: *c,
                });
            }
            entries.push((a - 1, b - 1, c - 1, v.to_rational()?));
        }
        let mut alg = Self::from_brackets(dim, &entries);
        alg.labels = file.labels.clone();
        Ok(alg)
    }

    /// Inverse of [`LieAlgebra::from_file`]; lists nonzero `C_{ab}^c`, `a < b`.
    pub fn to_file(&self) -> AlgebraFile {
        let n = self.dim;
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in 0..n {
                    let v = self.c(a, b, c);
                    if !v.is_zero() {
                        brackets.push((a + 1, b + 1, c + 1, RationalLiteral::from(v)));
                    }
                }
            }
        }
        AlgebraFile {
            dim: n,
            labels: self.labels.clone(),
            brackets,
        }
    }

    /// Checks antisymmetry and the Jacobi identity exactly.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut report = ValidationReport::default();
        for a in 0..n {
            for b in a..n {
                for c in 0..n {
                    if !(self.c(a, b, c) + self.c(b, a, c)).is_zero() {
                        report.antisymmetry.push((a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        let antisymmetric = report.antisymmetry.is_empty();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let canonical = if antisymmetric {
                        a < b && b < c
                    } else {
                        // one representative per cyclic class
                        (a, b, c) <= (b, c, a) && (a, b, c) <= (c, a, b)
                    };
                    if !canonical {
                        continue;
                    }
                    for e in 0..n {
                        if !self.jacobi_sum(a, b, c, e).is_zero() {
                            report.jacobi.push((a + 1, b + 1, c + 1, e + 1));
                        }
                    }
                }
            }
        }
        report
    }

    fn jacobi_sum(&self, a: usize, b: usize, c: usize, e: usize) -> Rational {
        let mut s = Rational::zero();
        for d in 0..self.dim {
            s += self.c(a, b, d) * self.c(d, c, e);
            s += self.c(b, c, d) * self.c(d, a, e);
            s += self.c(c, a, d) * self.c(d, b, e);
        }
        s
    }

    /// `C_a = Σ_b C_{ab}^b`.
    pub fn trace_vector(&self) -> DualVector {
        DualVector(
            (0..self.dim)
                .map(|a| (0..self.dim).fold(Rational::zero(), |s, b| s + self.c(a, b, b)))
                .collect(),
        )
    }

    pub fn is_unimodular(&self) -> bool {
        self.trace_vector().is_zero()
    }

    /// `M(f)_{ab} = C_{ab}^c f_c`.
    pub fn coadjoint_matrix(&self, f: &[Rational]) -> QMatrix {
        assert_eq!(f.len(), self.dim);
        let n = self.dim;
        let mut m = QMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut s = Rational::zero();
                for (c, fc) in f.iter().enumerate() {
                    let k = self.c(a, b, c);
                    if !k.is_zero() && !fc.is_zero() {
                        s += k * fc;
                    }
                }
                m[(a, b)] = s;
            }
        }
        m
    }

    /// `dim g` minus the generic rank of `C_{ab}^c f_c`, estimated as the
    /// maximum over seeded random integer points.
    pub fn classical_index(&self, seed: u64) -> usize {
        self.classical_index_with(seed, Execution::default())
    }

    pub fn classical_index_with(&self, seed: u64, exec: Execution) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Vec<Rational>> = (0..CLASSICAL_INDEX_SAMPLES)
            .map(|_| {
                (0..self.dim)
                    .map(|_| rat(rng.gen_range(-CLASSICAL_INDEX_BOUND..=CLASSICAL_INDEX_BOUND)))
                    .collect()
            })
            .collect();
        let ranks = par::map(exec, &samples, |f| self.coadjoint_matrix(f).rank());
        self.dim - ranks.into_iter().max().unwrap_or(0)
    }

    /// Structure constants in the basis `e'_i = Σ_j P_{ji} e_j`.
    pub fn change_basis(&self, p: &QMatrix) -> Result<LieAlgebra, LieError> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(LieError::BadBasisChange);
        }
        let pinv = p.inverse().ok_or(LieError::BadBasisChange)?;
        // [e'_a, e'_b] = P_ia P_jb C_ij^k e_k, e_k = (P^-1)_ck e'_c
        let mut constants = vec![Rational::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let mut bracket = vec![Rational::zero(); n];
                for i in 0..n {
                    if p[(i, a)].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if p[(j, b)].is_zero() {
                            continue;
                        }
                        let w = &p[(i, a)] * &p[(j, b)];
                        for (k, slot) in bracket.iter_mut().enumerate() {
                            let cc = self.c(i, j, k);
                            if !cc.is_zero() {
                                *slot += &w * cc;
                            }
                        }
                    }
                }
                for c in 0..n {
                    let mut s = Rational::zero();
                    for (k, v) in bracket.iter().enumerate() {
                        if !v.is_zero() {
                            s += &pinv[(c, k)] * v;
                        }
                    }
                    constants[(a * n + b) * n + c] = s;
                }
            }
        }
        LieAlgebra::new(n, constants, Vec::new())
    }

    /// Bracket of two algebra elements given by coordinates.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let w = &x[a] * &y[b];
                for (c, slot) in out.iter_mut().enumerate() {
                    let k = self.c(a, b, c);
                    if !k.is_zero() {
                        *slot += &w * k;
                    }
                }
            }
        }
        out
    }

    /// Human-readable list of nonzero brackets, e.g. `[e1, e3] = e2`.
    pub fn bracket_table(&self) -> Vec<String> {
        let n = self.dim;
        let mut lines = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let terms: Vec<String> = (0..n)
                    .filter(|&c| !self.c(a, b, c).is_zero())
                    .map(|c| linear_term(self.c(a, b, c), &self.label(c)))
                    .collect();
                if !terms.is_empty() {
                    lines.push(format!(
                        "[{}, {}] = {}",
                        self.label(a),
                        self.label(b),
                        join_terms(&terms)
                    ));
                }
            }
        }
        lines
    }
}

pub(crate) fn linear_term(coeff: &Rational, name: &str) -> String {
    if coeff.is_one() {
        name.to_string()
    } else if (-coeff).is_one() {
        format!("-{name}")
    } else {
        format!("{} {name}", format_rational(coeff))
    }
}

pub(crate) fn join_terms(terms: &[String]) -> String {
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            s.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(t);
        }
    }
    s
}
