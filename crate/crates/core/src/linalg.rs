//! Exact rank, kernels, row spaces and subspace intersection.
//!
//! `rank` runs the structured sparse eliminator in [`crate::elim`]; the other
//! routines reduce to a dense reduced row echelon form and are meant for the
//! small matrices that describe subspaces (bases of `K`, `K^⊥`, fibers).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::elim::{structured_rank, IntRing, ModRing, SparseRow};
use crate::error::{Error, Result};
use crate::field::{reduce_mod, Arith, FieldConfig, ModArith, RationalArith};
use crate::rng::SplitMix64;
use crate::sparse::SparseMatrix;

/// Exact rank over the matrix's field.
pub fn rank(m: &SparseMatrix) -> usize {
    match m.field() {
        FieldConfig::Prime(p) => {
            let rows = m.row_data().iter().map(|row| row.iter().map(|(c, v)| (*c, residue(v))).collect()).collect();
            structured_rank(&ModRing(p), m.cols(), rows)
        }
        FieldConfig::Rational => {
            let rows = m.row_data().iter().map(|row| integer_row(row)).collect();
            structured_rank(&IntRing, m.cols(), rows)
        }
    }
}

fn residue(v: &BigRational) -> u64 {
    v.numer().to_u64().expect("canonical residue")
}

/// Clears denominators of one row.
fn integer_row(row: &[(usize, BigRational)]) -> SparseRow<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    row.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect()
}

/// Outcome of multi-prime rank computation for a rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedRank {
    /// Maximum of the modular ranks: a lower bound on the rank over `Q`, equal
    /// to it for all but finitely many primes.
    pub rank: usize,
    pub primes: Vec<u64>,
    pub ranks: Vec<usize>,
    /// True when every prime reported the same rank.
    pub agree: bool,
}

/// Draws a seeded random prime in `(2^60, 2^62)`.
pub fn random_large_prime(rng: &mut SplitMix64) -> u64 {
    loop {
        let candidate = ((1u64 << 60) + rng.below(3 << 60)) | 1;
        if primal_check::miller_rabin(candidate) {
            return candidate;
        }
    }
}

/// Rank of a rational matrix reduced modulo `k` seeded random primes in
/// `(2^60, 2^62)`. Primes dividing an entry's denominator are skipped.
pub fn certified_rank(m: &SparseMatrix, k: usize, seed: u64) -> Result<CertifiedRank> {
    if m.field() != FieldConfig::Rational {
        return Err(Error::FieldMismatch("certified rank needs a rational matrix".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("at least one prime is required".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut primes = Vec::with_capacity(k);
    let mut ranks = Vec::with_capacity(k);
    while primes.len() < k {
        let p = random_large_prime(&mut rng);
        if primes.contains(&p) {
            continue;
        }
        let Ok(reduced) = reduce_matrix(m, p) else {
            continue;
        };
        primes.push(p);
        ranks.push(rank(&reduced));
    }
    let max = *ranks.iter().max().expect("k > 0");
    let agree = ranks.iter().all(|&r| r == max);
    Ok(CertifiedRank { rank: max, primes, ranks, agree })
}

/// Image of a rational matrix in `F_p`.
pub fn reduce_matrix(m: &SparseMatrix, p: u64) -> Result<SparseMatrix> {
    let field = FieldConfig::prime(p)?;
    if m.field() != FieldConfig::Rational {
        return Err(Error::FieldMismatch(format!("cannot reduce a matrix over {}", m.field())));
    }
    let mut entries = Vec::with_capacity(m.nnz());
    for (r, c, v) in m.entries() {
        let x = reduce_mod(v, p)
            .ok_or_else(|| Error::InvalidParameter(format!("denominator of entry ({r}, {c}) vanishes modulo {p}")))?;
        entries.push((r, c, BigRational::from_integer(BigInt::from(x))));
    }
    SparseMatrix::from_triplets(m.rows(), m.cols(), field, entries)
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub(crate) fn rref<A: Arith>(ar: &A, mut rows: Vec<Vec<A::E>>, ncols: usize) -> (Vec<Vec<A::E>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !ar.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ar.inv(&rows[r][c]);
        for j in c..ncols {
            if !ar.is_zero(&rows[r][j]) {
                rows[r][j] = ar.mul(&rows[r][j], &inv);
            }
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || ar.is_zero(&row[c]) {
                continue;
            }
            let t = row[c].clone();
            for j in c..ncols {
                if !ar.is_zero(&pivot[j]) {
                    row[j] = ar.sub(&row[j], &ar.mul(&t, &pivot[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn lift_rows<A: Arith>(ar: &A, m: &SparseMatrix) -> Vec<Vec<A::E>> {
    m.row_data()
        .iter()
        .map(|row| {
            let mut d = vec![ar.zero(); m.cols()];
            for (c, v) in row {
                d[*c] = ar.lift(v);
            }
            d
        })
        .collect()
}

fn project_rows<A: Arith>(ar: &A, field: FieldConfig, cols: usize, rows: &[Vec<A::E>]) -> SparseMatrix {
    let data = rows
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, v)| !ar.is_zero(v)).map(|(c, v)| (c, ar.project(v))).collect())
        .collect();
    SparseMatrix::from_sorted_rows(cols, field, data)
}

fn row_space_with<A: Arith>(ar: &A, m: &SparseMatrix) -> SparseMatrix {
    let (rows, _) = rref(ar, lift_rows(ar, m), m.cols());
    project_rows(ar, m.field(), m.cols(), &rows)
}

fn kernel_with<A: Arith>(ar: &A, m: &SparseMatrix) -> SparseMatrix {
    let n = m.cols();
    let (rows, pivots) = rref(ar, lift_rows(ar, m), n);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<Vec<A::E>> = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![ar.zero(); n];
            v[free] = ar.one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = ar.neg(&row[free]);
            }
            v
        })
        .collect();
    project_rows(ar, m.field(), n, &vectors).transpose()
}

/// Canonical basis (reduced echelon rows) of the row space.
pub fn row_space_basis(m: &SparseMatrix) -> SparseMatrix {
    match m.field() {
        FieldConfig::Prime(p) => row_space_with(&ModArith(p), m),
        FieldConfig::Rational => row_space_with(&RationalArith, m),
    }
}

/// Kernel of `m` as the columns of a `cols(m) x (cols(m) - rank(m))` matrix.
pub fn kernel_basis(m: &SparseMatrix) -> SparseMatrix {
    match m.field() {
        FieldConfig::Prime(p) => kernel_with(&ModArith(p), m),
        FieldConfig::Rational => kernel_with(&RationalArith, m),
    }
}

/// Basis (as rows) of the intersection of the row spaces of `a` and `b`.
///
/// Solves `x·A = y·B` through the kernel of the stacked system `[A; -B]^T`.
pub fn intersect(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    a.check_field(b)?;
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!("subspaces of dimension {} and {}", a.cols(), b.cols())));
    }
    let field = a.field();
    let stacked = a.vstack(&b.scale(&field.from_i64(-1)))?;
    let kernel = kernel_basis(&stacked.transpose());
    // each kernel column (x, y) yields the common vector x·A
    let ka = a.rows();
    let combos: Vec<(usize, usize, BigRational)> =
        kernel.entries().filter(|(r, _, _)| *r < ka).map(|(r, c, v)| (c, r, v.clone())).collect();
    let x = SparseMatrix::from_triplets(kernel.cols(), ka, field, combos)?;
    Ok(row_space_basis(&x.mul(a)?))
}

/// Whether `v` lies in the row space of `a`.
pub fn contains(a: &SparseMatrix, v: &[BigRational]) -> Result<bool> {
    if v.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against subspace of dimension {}",
            v.len(),
            a.cols()
        )));
    }
    let field = a.field();
    let entries = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (0, c, x.clone()));
    let row = SparseMatrix::from_triplets(1, a.cols(), field, entries)?;
    let base = rank(a);
    Ok(rank(&a.vstack(&row)?) == base)
}
