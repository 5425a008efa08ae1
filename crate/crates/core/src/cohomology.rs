//! Second Lie algebra cohomology with trivial coefficients, the
//! cohomological index of a cocycle class and one-dimensional central
//! extensions.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lie::{DualVector, LieAlgebra};
use crate::linalg::QMatrix;
use crate::par::{self, Execution};
use crate::rational::{rat, ParseRationalError, Rational, RationalLiteral};
use crate::symb::{Chart, Expr};

/// Random samples drawn by [`cohomological_index`].
pub const INDEX_SAMPLES: usize = 200;
/// Sample numerators are bounded so that entries lie in `[-20, 20]`.
pub const INDEX_SAMPLE_BOUND: i64 = 20;
pub const INDEX_SAMPLE_MAX_DENOM: i64 = 8;
/// Lattice sweep `{-2..=2}^dim` runs only up to this dimension.
pub const LATTICE_MAX_DIM: usize = 5;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("cocycle has dimension {found}, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not skew-symmetric at ({a}, {b})")]
    NotSkew { a: usize, b: usize },
    #[error("cocycle identity fails at triples {violations:?}")]
    NotCocycle { violations: Vec<(usize, usize, usize)> },
    #[error("cocycle entry {entry}: index {index} out of range 1..={dim}")]
    IndexOutOfRange { entry: usize, index: usize, dim: usize },
    #[error("cocycle entry {entry}: expected a < b, got a = {a}, b = {b}")]
    UnorderedPair { entry: usize, a: usize, b: usize },
    #[error("index search did not stabilize (best rank {})", .0.rank)]
    Uncertified(Box<IndexResult>),
    #[error("polynomial lives on {found} variables, expected {expected}")]
    PolynomialShape { expected: usize, found: usize },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("malformed cocycle file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Skew bilinear form `F_{ab}` on a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCocycle {
    matrix: QMatrix,
}

/// On-disk cocycle: `{ "entries": [[a, b, "p/q"], ...] }`, 1-based, `a < b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleFile {
    pub entries: Vec<(usize, usize, RationalLiteral)>,
}

impl TwoCocycle {
    pub fn zero(dim: usize) -> Self {
        TwoCocycle {
            matrix: QMatrix::zeros(dim, dim),
        }
    }

    /// The elementary form `e^a ∧ e^b` (0-based).
    pub fn elementary(dim: usize, a: usize, b: usize) -> Self {
        let mut f = Self::zero(dim);
        f.set(a, b, Rational::one());
        f
    }

    pub fn from_matrix(matrix: QMatrix) -> Result<Self, CohomologyError> {
        if matrix.rows() != matrix.cols() {
            return Err(CohomologyError::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let n = matrix.rows();
        for a in 0..n {
            for b in a..n {
                if matrix[(a, b)] != -matrix[(b, a)].clone() {
                    return Err(CohomologyError::NotSkew { a: a + 1, b: b + 1 });
                }
            }
        }
        Ok(TwoCocycle { matrix })
    }

    /// Skew completion of upper-triangular entries `(a, b, value)`, 0-based.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, Rational)]) -> Self {
        let mut f = Self::zero(dim);
        for (a, b, v) in entries {
            let cur = f.get(*a, *b) + v;
            f.set(*a, *b, cur);
        }
        f
    }

    /// Coordinates on the basis `e^a ∧ e^b`, `a < b`, lexicographic.
    pub fn from_pair_vector(dim: usize, v: &[Rational]) -> Self {
        let mut f = Self::zero(dim);
        for (k, (a, b)) in pairs(dim).into_iter().enumerate() {
            f.set(a, b, v[k].clone());
        }
        f
    }

    pub fn from_json_str(text: &str, dim: usize) -> Result<Self, CohomologyError> {
        Self::from_file(&serde_json::from_str(text)?, dim)
    }

    /// Reads a cocycle file for an algebra of dimension `dim`.
    pub fn from_file(file: &CocycleFile, dim: usize) -> Result<Self, CohomologyError> {
        let mut f = Self::zero(dim);
        for (entry, (a, b, v)) in file.entries.iter().enumerate() {
            for &index in [a, b] {
                if index == 0 || index > dim {
                    return Err(CohomologyError::IndexOutOfRange { entry, index, dim });
                }
            }
            if a >= b {
                return Err(CohomologyError::UnorderedPair {
                    entry,
                    a: *a,
                    b: *b,
                });
            }
            let cur = f.get(a - 1, b - 1) + v.to_rational()?;
            f.set(a - 1, b - 1, cur);
        }
        Ok(f)
    }

    pub fn to_file(&self) -> CocycleFile {
        CocycleFile {
            entries: self
                .nonzero_entries()
                .into_iter()
                .map(|(a, b, v)| (a + 1, b + 1, RationalLiteral::from(&v)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        &self.matrix[(a, b)]
    }

    /// Sets `F_{ab} = v` and `F_{ba} = -v`.
    pub fn set(&mut self, a: usize, b: usize, v: Rational) {
        self.matrix[(b, a)] = -v.clone();
        self.matrix[(a, b)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn pair_vector(&self) -> Vec<Rational> {
        pairs(self.dim())
            .into_iter()
            .map(|(a, b)| self.get(a, b).clone())
            .collect()
    }

    /// Upper-triangular nonzero entries, 0-based.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Rational)> {
        pairs(self.dim())
            .into_iter()
            .filter(|&(a, b)| !self.get(a, b).is_zero())
            .map(|(a, b)| (a, b, self.get(a, b).clone()))
            .collect()
    }

    pub fn add(&self, other: &TwoCocycle) -> TwoCocycle {
        let v: Vec<Rational> = self
            .pair_vector()
            .into_iter()
            .zip(other.pair_vector())
            .map(|(x, y)| x + y)
            .collect();
        Self::from_pair_vector(self.dim(), &v)
    }

    pub fn sub(&self, other: &TwoCocycle) -> TwoCocycle {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> TwoCocycle {
        let v: Vec<Rational> = self.pair_vector().into_iter().map(|x| x * k).collect();
        Self::from_pair_vector(self.dim(), &v)
    }

    /// `(dλ)_{ab} = C_{ab}^c λ_c`.
    pub fn coboundary(alg: &LieAlgebra, lambda: &[Rational]) -> TwoCocycle {
        TwoCocycle {
            matrix: alg.coadjoint_matrix(lambda),
        }
    }

    /// Triples `a < b < c` (1-based) where the cocycle identity fails.
    pub fn cocycle_violations(&self, alg: &LieAlgebra) -> Vec<(usize, usize, usize)> {
        let n = alg.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if !cocycle_sum(alg, &self.matrix, a, b, c).is_zero() {
                        out.push((a + 1, b + 1, c + 1));
                    }
                }
            }
        }
        out
    }

    pub fn is_cocycle(&self, alg: &LieAlgebra) -> bool {
        self.dim() == alg.dim() && self.cocycle_violations(alg).is_empty()
    }

    fn check_cocycle(&self, alg: &LieAlgebra) -> Result<(), CohomologyError> {
        self.check_dim(alg)?;
        let violations = self.cocycle_violations(alg);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(CohomologyError::NotCocycle { violations })
        }
    }

    fn check_dim(&self, alg: &LieAlgebra) -> Result<(), CohomologyError> {
        if self.dim() != alg.dim() {
            return Err(CohomologyError::DimensionMismatch {
                expected: alg.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TwoCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .nonzero_entries()
            .into_iter()
            .map(|(a, b, v)| {
                let name = format!("e{}^e{}", a + 1, b + 1);
                crate::lie::linear_term(&v, &name)
            })
            .collect();
        f.write_str(&crate::lie::join_terms(&terms))
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// `C_{ab}^d F_{dc} + C_{bc}^d F_{da} + C_{ca}^d F_{db}`.
fn cocycle_sum(alg: &LieAlgebra, f: &QMatrix, a: usize, b: usize, c: usize) -> Rational {
    let mut s = Rational::zero();
    for d in 0..alg.dim() {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let k = alg.c(x, y, d);
            if !k.is_zero() && !f[(d, z)].is_zero() {
                s += k * &f[(d, z)];
            }
        }
    }
    s
}

/// Basis of `Z²(g)` from the null space of the cocycle system.
pub fn cocycle_space(alg: &LieAlgebra) -> Vec<TwoCocycle> {
    let n = alg.dim();
    let ps = pairs(n);
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let row: Vec<Rational> = ps
                    .iter()
                    .map(|&(p, q)| {
                        let f = TwoCocycle::elementary(n, p, q);
                        cocycle_sum(alg, &f.matrix, a, b, c)
                    })
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return ps
            .iter()
            .map(|&(a, b)| TwoCocycle::elementary(n, a, b))
            .collect();
    }
    QMatrix::from_rows(&rows)
        .nullspace()
        .into_iter()
        .map(|v| TwoCocycle::from_pair_vector(n, &v))
        .collect()
}

/// Matrix of `λ ↦ dλ`: one row per pair `a < b`, one column per `c`.
fn coboundary_map(alg: &LieAlgebra) -> QMatrix {
    let n = alg.dim();
    let rows: Vec<Vec<Rational>> = pairs(n)
        .into_iter()
        .map(|(a, b)| (0..n).map(|c| alg.c(a, b, c).clone()).collect())
        .collect();
    if rows.is_empty() {
        return QMatrix::zeros(0, n);
    }
    QMatrix::from_rows(&rows)
}

/// Row-reduced basis of `B²(g)`.
pub fn coboundary_space(alg: &LieAlgebra) -> Vec<TwoCocycle> {
    let n = alg.dim();
    let images: Vec<Vec<Rational>> = (0..n)
        .map(|c| {
            let mut e = vec![Rational::zero(); n];
            e[c] = Rational::one();
            TwoCocycle::coboundary(alg, &e).pair_vector()
        })
        .collect();
    span_basis(&images)
        .into_iter()
        .map(|v| TwoCocycle::from_pair_vector(n, &v))
        .collect()
}

fn span_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vectors.is_empty() || vectors[0].is_empty() {
        return Vec::new();
    }
    let ech = QMatrix::from_rows(vectors).rref();
    (0..ech.pivots.len())
        .map(|r| ech.matrix.row(r).to_vec())
        .collect()
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub z_dim: usize,
    pub b_dim: usize,
    pub h_dim: usize,
    pub z_basis: Vec<TwoCocycle>,
    pub b_basis: Vec<TwoCocycle>,
    pub h_representatives: Vec<TwoCocycle>,
}

/// `H²(g) = Z²/B²`; representatives are the `Z²` basis vectors that raise
/// the rank of the running span starting from `B²`, in basis order.
pub fn cohomology(alg: &LieAlgebra) -> CohomologyReport {
    let z_basis = cocycle_space(alg);
    let b_basis = coboundary_space(alg);
    let mut span: Vec<Vec<Rational>> = b_basis.iter().map(|b| b.pair_vector()).collect();
    let mut rank = span.len();
    let mut reps = Vec::new();
    for z in &z_basis {
        span.push(z.pair_vector());
        let r = QMatrix::from_rows(&span).rank();
        if r > rank {
            rank = r;
            reps.push(z.clone());
        } else {
            span.pop();
        }
    }
    CohomologyReport {
        z_dim: z_basis.len(),
        b_dim: b_basis.len(),
        h_dim: z_basis.len() - b_basis.len(),
        z_basis,
        b_basis,
        h_representatives: reps,
    }
}

/// `λ` with `F = dλ`, free components set to zero, or `None` when `F` is
/// not a coboundary.
pub fn trivialize(alg: &LieAlgebra, f: &TwoCocycle) -> Option<DualVector> {
    if f.dim() != alg.dim() {
        return None;
    }
    let m = coboundary_map(alg);
    if m.rows() == 0 {
        return Some(DualVector::zero(alg.dim()));
    }
    m.solve(&f.pair_vector()).map(DualVector)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexResult {
    pub index: usize,
    /// Rank of `F + dλ` at the witness, computed exactly.
    pub rank: usize,
    pub witness: DualVector,
    /// False when the best rank was still improving late in the sampling.
    pub certified_upper: bool,
    pub q_dim: usize,
    pub samples: usize,
}

/// `dim g` minus the maximal rank of `F + dλ` over `λ ∈ g*`, i.e. the
/// smallest kernel dimension in the class of `F`.
///
/// Candidates: `λ = 0`, minus the trivializing functional if any, seeded
/// random rationals and, for `dim ≤ 5`, the lattice `{-2..=2}^dim`.
pub fn cohomological_index(
    alg: &LieAlgebra,
    f: &TwoCocycle,
    seed: u64,
) -> Result<IndexResult, CohomologyError> {
    cohomological_index_with(alg, f, seed, Execution::default())
}

pub fn cohomological_index_with(
    alg: &LieAlgebra,
    f: &TwoCocycle,
    seed: u64,
    exec: Execution,
) -> Result<IndexResult, CohomologyError> {
    f.check_cocycle(alg)?;
    let n = alg.dim();
    let full = n - n % 2;
    let rank_at = |l: &Vec<Rational>| f.add(&TwoCocycle::coboundary(alg, l)).rank();

    let mut fixed = vec![vec![Rational::zero(); n]];
    if let Some(l) = trivialize(alg, f) {
        fixed.push(l.0.iter().map(|x| -x.clone()).collect());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: Vec<Vec<Rational>> = (0..INDEX_SAMPLES)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let d = rng.gen_range(1..=INDEX_SAMPLE_MAX_DENOM);
                    let bound = INDEX_SAMPLE_BOUND * d;
                    Rational::new(rng.gen_range(-bound..=bound).into(), d.into())
                })
                .collect()
        })
        .collect();

    let lattice: Vec<Vec<Rational>> = if n <= LATTICE_MAX_DIM {
        let count = 5usize.pow(n as u32);
        (0..count)
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let v = (k % 5) as i64 - 2;
                        k /= 5;
                        rat(v)
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };

    let fixed_ranks = par::map(exec, &fixed, rank_at);
    let random_ranks = par::map(exec, &random, rank_at);
    let lattice_ranks = par::map(exec, &lattice, rank_at);

    let best = fixed_ranks
        .iter()
        .chain(&random_ranks)
        .chain(&lattice_ranks)
        .copied()
        .max()
        .unwrap_or(0);
    let early = fixed_ranks
        .iter()
        .chain(&random_ranks[..INDEX_SAMPLES / 2])
        .copied()
        .max()
        .unwrap_or(0);
    let certified_upper = best == full || early == best;

    let witness = fixed
        .iter()
        .zip(&fixed_ranks)
        .chain(random.iter().zip(&random_ranks))
        .chain(lattice.iter().zip(&lattice_ranks))
        .find(|(_, &r)| r == best)
        .map(|(l, _)| l.clone())
        .unwrap_or_else(|| vec![Rational::zero(); n]);

    let rank = rank_at(&witness);
    debug_assert_eq!(rank, best);
    Ok(IndexResult {
        index: n - rank,
        rank,
        witness: DualVector(witness),
        certified_upper,
        q_dim: rank / 2,
        samples: fixed.len() + random.len() + lattice.len(),
    })
}

#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub base: LieAlgebra,
    pub cocycle: TwoCocycle,
    /// Basis `(e_0, e_1, ..., e_n)` with `e_0` central.
    pub extended: LieAlgebra,
}

/// Brackets `[e_a, e_b] = C_{ab}^c e_c + F_{ab} e_0` without any check.
pub fn extension_algebra(alg: &LieAlgebra, f: &TwoCocycle) -> LieAlgebra {
    let n = alg.dim();
    let m = n + 1;
    let mut c = vec![Rational::zero(); m * m * m];
    for a in 0..n {
        for b in 0..n {
            let base = ((a + 1) * m + (b + 1)) * m;
            c[base] = f.get(a, b).clone();
            for k in 0..n {
                c[base + k + 1] = alg.c(a, b, k).clone();
            }
        }
    }
    let mut labels = vec!["e0".to_string()];
    labels.extend((0..n).map(|a| alg.label(a)));
    LieAlgebra::new(m, c, labels).expect("extension constants have the right shape")
}

/// One-dimensional central extension; rejects `F` whose extension fails
/// the Jacobi identity.
pub fn extend(alg: &LieAlgebra, f: &TwoCocycle) -> Result<CentralExtension, CohomologyError> {
    f.check_dim(alg)?;
    let extended = extension_algebra(alg, f);
    let report = extended.validate();
    if !report.is_valid() {
        return Err(CohomologyError::NotCocycle {
            violations: f.cocycle_violations(alg),
        });
    }
    Ok(CentralExtension {
        base: alg.clone(),
        cocycle: f.clone(),
        extended,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub index: usize,
    pub q_dim: usize,
    pub integrable: bool,
    pub certified: bool,
    pub metric_arbitrary: bool,
    pub note: Option<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "index={} qdim={} integrable={}",
            self.index, self.q_dim, self.integrable
        )
    }
}

/// The equation reduces to at most one variable, hence is integrable,
/// when `(dim g - ind) / 2 ≤ 1`.
pub fn integrability_verdict(
    alg: &LieAlgebra,
    f: &TwoCocycle,
    metric_arbitrary: bool,
    seed: u64,
) -> Result<Verdict, CohomologyError> {
    let idx = cohomological_index(alg, f, seed)?;
    if !idx.certified_upper {
        return Err(CohomologyError::Uncertified(Box::new(idx)));
    }
    let report = cohomology(alg);
    let note = (report.h_dim == 0).then(|| {
        "every cocycle is trivial: the field can be removed by a gauge and the index is the classical index"
            .to_string()
    });
    Ok(Verdict {
        index: idx.index,
        q_dim: idx.q_dim,
        integrable: idx.q_dim <= 1,
        certified: true,
        metric_arbitrary,
        note,
    })
}

/// True iff `K(f_0, ..., f_n)` is invariant under the coadjoint action of
/// the extension: `Σ C̃_{ab}^c f_c ∂K/∂f_b = 0` for every `a`. Variable
/// `x{k+1}` of the chart stands for `f_k`.
pub fn casimir_check(ext: &CentralExtension, k: &Expr) -> Result<bool, CohomologyError> {
    let g = &ext.extended;
    let m = g.dim();
    let chart = k.chart();
    if chart.dim != m || !k.is_polynomial() {
        return Err(CohomologyError::PolynomialShape {
            expected: m,
            found: chart.dim,
        });
    }
    let grads: Vec<Expr> = (0..m).map(|b| k.partial(b)).collect();
    for a in 0..m {
        let mut s = Expr::zero(chart);
        for (b, grad) in grads.iter().enumerate() {
            for c in 0..m {
                let coeff = g.c(a, b, c);
                if coeff.is_zero() || grad.is_zero() {
                    continue;
                }
                s = &s + &(&Expr::var(chart, c) * grad).scale_rational(coeff);
            }
        }
        if !s.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Flat chart for polynomials in the extension coordinates `f_0..f_n`.
pub fn casimir_chart(ext: &CentralExtension) -> Chart {
    Chart::flat(ext.extended.dim())
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z_dim={} b_dim={} h_dim={}", self.z_dim, self.b_dim, self.h_dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn mu(m: [i64; 4]) -> TwoCocycle {
        TwoCocycle::from_entries(
            4,
            &[
                (0, 1, rat(m[0])),
                (2, 3, rat(m[1])),
                (0, 2, rat(m[2])),
                (1, 2, rat(m[3])),
            ],
        )
    }

    #[test]
    fn e2r_cohomology_is_4_2_2() {
        let r = cohomology(&LieAlgebra::e2_plus_r());
        assert_eq!((r.z_dim, r.b_dim, r.h_dim), (4, 2, 2));
        let g = LieAlgebra::e2_plus_r();
        for z in &r.z_basis {
            assert!(z.is_cocycle(&g));
        }
        // representatives span the mu1, mu2 directions modulo B²
        for h in &r.h_representatives {
            assert!(trivialize(&g, h).is_none());
        }
    }

    #[test]
    fn so3_and_abelian_cohomology() {
        let r = cohomology(&LieAlgebra::so3());
        assert_eq!((r.z_dim, r.b_dim, r.h_dim), (3, 3, 0));
        let r = cohomology(&LieAlgebra::abelian(4));
        assert_eq!((r.z_dim, r.b_dim, r.h_dim), (6, 0, 6));
        let r = cohomology(&LieAlgebra::abelian(2));
        assert_eq!(r.h_dim, 1);
    }

    #[test]
    fn trivialize_e1_e3_gives_e2() {
        let g = LieAlgebra::e2_plus_r();
        let f = TwoCocycle::elementary(4, 0, 2);
        let l = trivialize(&g, &f).unwrap();
        assert_eq!(TwoCocycle::coboundary(&g, &l.0), f);
        assert_eq!(l.0[1], rat(1));
        assert!(trivialize(&g, &TwoCocycle::elementary(4, 0, 1)).is_none());
        assert!(trivialize(&g, &TwoCocycle::zero(4)).unwrap().is_zero());
    }

    #[test]
    fn index_piecewise_on_e2r() {
        let g = LieAlgebra::e2_plus_r();
        let r = cohomological_index(&g, &mu([1, 1, 0, 0]), 7).unwrap();
        assert_eq!((r.index, r.q_dim), (0, 2));
        assert!(r.certified_upper);
        let r = cohomological_index(&g, &mu([1, 0, 0, 0]), 7).unwrap();
        assert_eq!((r.index, r.q_dim), (2, 1));
        assert!(r.certified_upper);
        let f = TwoCocycle::elementary(4, 0, 1);
        let r = cohomological_index(&LieAlgebra::abelian(4), &f, 7).unwrap();
        assert_eq!(r.index, 2);
    }

    #[test]
    fn index_rejects_non_cocycle() {
        let g = LieAlgebra::e2_plus_r();
        let f = TwoCocycle::elementary(4, 0, 3);
        assert!(!f.is_cocycle(&g));
        assert!(matches!(
            cohomological_index(&g, &f, 1),
            Err(CohomologyError::NotCocycle { .. })
        ));
        assert!(extend(&g, &f).is_err());
    }

    #[test]
    fn heisenberg_from_abelian_plane() {
        let ext = extend(&LieAlgebra::abelian(2), &TwoCocycle::elementary(2, 0, 1)).unwrap();
        assert_eq!(ext.extended.bracket_table(), vec!["[e1, e2] = e0".to_string()]);
        let c = casimir_chart(&ext);
        assert!(casimir_check(&ext, &Expr::var(c, 0)).unwrap());
        assert!(!casimir_check(&ext, &Expr::var(c, 1)).unwrap());
    }

    #[test]
    fn e2r_extension_casimir() {
        let ext = extend(&LieAlgebra::e2_plus_r(), &mu([1, 0, 0, 0])).unwrap();
        let c = casimir_chart(&ext);
        let f = |k| Expr::var(c, k);
        let k1 = &(&f(1).pow(2) + &f(2).pow(2)) - &(&f(0) * &f(3)).scale_rational(&rat(2));
        assert!(casimir_check(&ext, &k1).unwrap());
        assert!(casimir_check(&ext, &f(4)).unwrap());
        assert!(!casimir_check(&ext, &f(1)).unwrap());
    }

    #[test]
    fn verdicts() {
        let g = LieAlgebra::e2_plus_r();
        let v = integrability_verdict(&g, &mu([1, 0, 0, 0]), true, 3).unwrap();
        assert_eq!(v.to_string(), "index=2 qdim=1 integrable=true");
        let v = integrability_verdict(&g, &mu([1, 1, 0, 0]), true, 3).unwrap();
        assert_eq!(v.to_string(), "index=0 qdim=2 integrable=false");
        let v = integrability_verdict(&LieAlgebra::abelian(2), &TwoCocycle::zero(2), true, 3).unwrap();
        assert!(v.integrable);
        let v = integrability_verdict(&LieAlgebra::so3(), &TwoCocycle::zero(3), false, 3).unwrap();
        assert!(v.note.is_some());
    }

    #[test]
    fn cocycle_file_round_trip() {
        let f = TwoCocycle::from_entries(4, &[(0, 1, ratio(3, 4)), (1, 2, rat(-2))]);
        let text = serde_json::to_string(&f.to_file()).unwrap();
        assert_eq!(TwoCocycle::from_json_str(&text, 4).unwrap(), f);
        assert!(matches!(
            TwoCocycle::from_json_str(r#"{"entries": [[2, 1, "1"]]}"#, 4),
            Err(CohomologyError::UnorderedPair { .. })
        ));
        assert!(matches!(
            TwoCocycle::from_json_str(r#"{"entries": [[1, 5, 1]]}"#, 4),
            Err(CohomologyError::IndexOutOfRange { index: 5, .. })
        ));
    }
}
