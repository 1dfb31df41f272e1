//! Named families of subspaces `K ⊆ ∧²V`.
//!
//! The geometric families are all "row space of a bilinear alternating map",
//! read in the dual monomial bases: if `d: ∧²H → T` is given on a basis of `H`,
//! then with `V = H^∨` the subspace `K = (ker d)^⊥ ⊆ ∧²V` is spanned by the
//! coordinate functionals of `d`, i.e. the rows of its matrix.

use num_integer::binomial;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bases::pair_index;
use crate::engine::Subspace2;
use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::linalg::rank;
use crate::rng::SplitMix64;
use crate::sparse::SparseMatrix;

/// Resampling cap for the random generators.
pub const MAX_ATTEMPTS: usize = 100;

/// Integer entries of random rational subspaces lie in `[-RATIONAL_SPREAD, RATIONAL_SPREAD]`.
pub const RATIONAL_SPREAD: i64 = 10;

fn random_matrix(
    rows: usize,
    cols: usize,
    field: FieldConfig,
    rng: &mut SplitMix64,
    skip_col: Option<usize>,
) -> SparseMatrix {
    let mut entries = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if Some(c) == skip_col {
                continue;
            }
            let v = match field {
                FieldConfig::Prime(p) => field.from_i64(rng.below(p) as i64),
                FieldConfig::Rational => field.from_i64(rng.range_i64(-RATIONAL_SPREAD, RATIONAL_SPREAD)),
            };
            entries.push((r, c, v));
        }
    }
    SparseMatrix::from_triplets(rows, cols, field, entries).expect("in range")
}

fn sample_full_rank(n: usize, m: usize, field: FieldConfig, seed: u64, skip_col: Option<usize>) -> Result<Subspace2> {
    let width = binomial(n, 2);
    let mut rng = SplitMix64::new(seed);
    for _ in 0..MAX_ATTEMPTS {
        let basis = random_matrix(m, width, field, &mut rng, skip_col);
        if rank(&basis) == m {
            return Subspace2::new(n, basis);
        }
    }
    Err(Error::BudgetExceeded(format!("no full-rank {m}x{width} sample over {field} in {MAX_ATTEMPTS} attempts")))
}

/// Seeded random `m`-dimensional subspace, resampled until full rank.
pub fn random_subspace(n: usize, m: usize, field: FieldConfig, seed: u64) -> Result<Subspace2> {
    if n < 2 || m > binomial(n, 2) {
        return Err(Error::InvalidParameter(format!("need n >= 2 and 0 <= m <= C(n,2), got n = {n}, m = {m}")));
    }
    sample_full_rank(n, m, field, seed, None)
}

/// `K'` spanned by every coordinate pair except `(0, 1)`.
pub fn codim_one(n: usize, field: FieldConfig) -> Result<Subspace2> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("codim-one needs n >= 2, got {n}")));
    }
    let width = binomial(n, 2);
    let entries = (1..width).enumerate().map(|(r, c)| (r, c, field.from_i64(1)));
    Subspace2::new(n, SparseMatrix::from_triplets(width - 1, width, field, entries)?)
}

/// Rows indexed by the degree of the target binary form; `coeff(i, j)` is the
/// coefficient of `e_i ∧ e_j` (with `i < j`) in the row of degree `i + j - shift`.
fn graded_pairs(
    n: usize,
    field: FieldConfig,
    rows: usize,
    shift: usize,
    coeff: impl Fn(usize, usize) -> i64,
) -> Result<SparseMatrix> {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if i + j < shift {
                continue;
            }
            let c = coeff(i, j);
            if c != 0 {
                entries.push((i + j - shift, pair_index(n, i, j), field.from_i64(c)));
            }
        }
    }
    SparseMatrix::from_triplets(rows, binomial(n, 2), field, entries)
}

/// Weyman subspace: `V = Sym^(n-1) U` with monomials `x^i y^(n-1-i)`, and `K` the
/// row space of the first transvectant `f∧g ↦ f_x g_y − f_y g_x` onto
/// `Sym^(2n-4) U`. Here `T(v_i ∧ v_j) = (n-1)(i-j) x^(i+j-1) y^(2n-3-i-j)`.
pub fn weyman(n: usize, field: FieldConfig) -> Result<Subspace2> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("weyman needs n >= 3, got {n}")));
    }
    let d = (n - 1) as i64;
    let t = graded_pairs(n, field, 2 * n - 3, 1, |i, j| {
        let (i, j) = (i as i64, j as i64);
        // f_x g_y − f_y g_x on x^i y^(d-i), x^j y^(d-j)
        i * (d - j) - (d - i) * j
    })?;
    Subspace2::from_spanning(n, t)
}

/// Gaussian map of the rational normal curve of degree `n-1`:
/// `ψ(t^i ∧ t^j) = t^i (t^j)' − t^j (t^i)' = (j − i) t^(i+j−1)`.
pub fn gaussian_rnc(n: usize, field: FieldConfig) -> Result<Subspace2> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("gaussian-rnc needs n >= 3, got {n}")));
    }
    let psi = graded_pairs(n, field, 2 * n - 3, 1, |i, j| j as i64 - i as i64)?;
    Subspace2::from_spanning(n, psi)
}

/// Determinant-map subspace of `O(a) ⊕ O(b)` on the projective line.
///
/// Sections: `(t^i, 0)` for `i ≤ a` then `(0, t^j)` for `j ≤ b`, so `n = a + b + 2`.
/// `d((f1,g1) ∧ (f2,g2)) = f1 g2 − f2 g1` lands in forms of degree `a + b`.
pub fn split_bundle_p1(a: usize, b: usize, field: FieldConfig) -> Result<Subspace2> {
    let n = a + b + 2;
    let mut entries = Vec::new();
    for i in 0..=a {
        for j in 0..=b {
            entries.push((i + j, pair_index(n, i, a + 1 + j), field.from_i64(1)));
        }
    }
    let d = SparseMatrix::from_triplets(a + b + 1, binomial(n, 2), field, entries)?;
    Subspace2::from_spanning(n, d)
}

/// Covector basis of the summand `H^0(O(a))` (first) or `H^0(O(b))` (second)
/// inside `V^∨ = H^0(O(a) ⊕ O(b))`.
pub fn split_summand(a: usize, b: usize, second: bool, field: FieldConfig) -> SparseMatrix {
    let n = a + b + 2;
    let range = if second { a + 1..n } else { 0..a + 1 };
    let entries = range.enumerate().map(|(r, c)| (r, c, field.from_i64(1)));
    let rows = if second { b + 1 } else { a + 1 };
    SparseMatrix::from_triplets(rows, n, field, entries).expect("unit rows")
}

/// Random `(2n-3)`-dimensional `K` with zero `(0, 1)` coordinate, so that
/// `e_0^∨ ∧ e_1^∨ ∈ K^⊥` and `K` is resonant.
pub fn resonant_perturbation(n: usize, seed: u64, field: FieldConfig) -> Result<Subspace2> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("resonant-perturbation needs n >= 4, got {n}")));
    }
    sample_full_rank(n, 2 * n - 3, field, seed, Some(0))
}

/// A family member, as named on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Random { n: usize, m: usize, seed: u64 },
    CodimOne { n: usize },
    Weyman { n: usize },
    GaussianRnc { n: usize },
    SplitP1 { a: usize, b: usize },
    ResonantPerturbation { n: usize, seed: u64 },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Random { .. } => "random",
            FamilySpec::CodimOne { .. } => "codim-one",
            FamilySpec::Weyman { .. } => "weyman",
            FamilySpec::GaussianRnc { .. } => "gaussian-rnc",
            FamilySpec::SplitP1 { .. } => "split-p1",
            FamilySpec::ResonantPerturbation { .. } => "resonant-perturbation",
        }
    }

    pub fn build(&self, field: FieldConfig) -> Result<Subspace2> {
        match *self {
            FamilySpec::Random { n, m, seed } => random_subspace(n, m, field, seed),
            FamilySpec::CodimOne { n } => codim_one(n, field),
            FamilySpec::Weyman { n } => weyman(n, field),
            FamilySpec::GaussianRnc { n } => gaussian_rnc(n, field),
            FamilySpec::SplitP1 { a, b } => split_bundle_p1(a, b, field),
            FamilySpec::ResonantPerturbation { n, seed } => resonant_perturbation(n, seed, field),
        }
    }
}

/// The decomposable form `e_i^∨ ∧ e_j^∨` as a vector in `∧²V^∨`.
pub fn decomposable_unit(n: usize, i: usize, j: usize, field: FieldConfig) -> Vec<BigRational> {
    let mut v = vec![field.from_i64(0); binomial(n, 2)];
    v[pair_index(n, i, j)] = field.from_i64(1);
    v
}
