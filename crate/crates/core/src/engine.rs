//! Graded pieces of Koszul modules `W(V, K)` and resonance of `K ⊆ ∧²V`.
//!
//! Coordinates: `V` has basis `e_0 … e_(n-1)`, `V^∨` the dual basis, and both
//! `∧²V` and `∧²V^∨` use lex-ordered pairs. The pairing is
//! `⟨e_i ∧ e_j, a ∧ b⟩ = a_i b_j − a_j b_i`, so `K^⊥` is the kernel of the basis
//! matrix of `K` read in these coordinates.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bases::{delta_matrix, sym_dim};
use crate::error::{Error, Result};
use crate::field::{inv_mod, mul_mod, reduce_mod, sub_mod, FieldConfig};
use crate::linalg::{contains, intersect, kernel_basis, rank, row_space_basis};
use crate::sparse::SparseMatrix;

/// Enumeration cap for [`resonance_points_count`].
pub const POINT_BUDGET: u64 = 10_000_000;

/// A subspace `K ⊆ ∧²V`, stored as a full-row-rank `m × C(n,2)` basis matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace2 {
    n: usize,
    basis: SparseMatrix,
}

impl Subspace2 {
    /// Checks shape and full row rank.
    pub fn new(n: usize, basis: SparseMatrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("ambient dimension must be positive".into()));
        }
        let width = binomial(n, 2);
        if basis.cols() != width {
            return Err(Error::DimensionMismatch(format!(
                "basis rows have {} entries, expected C({n},2) = {width}",
                basis.cols()
            )));
        }
        let r = rank(&basis);
        if r != basis.rows() {
            return Err(Error::RankDeficient { expected: basis.rows(), found: r });
        }
        Ok(Subspace2 { n, basis })
    }

    /// Span of arbitrary rows; dependent rows are reduced to an echelon basis.
    pub fn from_spanning(n: usize, rows: SparseMatrix) -> Result<Self> {
        let r = rank(&rows);
        if r == rows.rows() {
            Subspace2::new(n, rows)
        } else {
            Subspace2::new(n, row_space_basis(&rows))
        }
    }

    pub fn full(n: usize, field: FieldConfig) -> Self {
        Subspace2 { n, basis: SparseMatrix::identity(binomial(n, 2), field) }
    }

    pub fn zero(n: usize, field: FieldConfig) -> Self {
        Subspace2 { n, basis: SparseMatrix::zeros(0, binomial(n, 2), field) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m = dim K`.
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> FieldConfig {
        self.basis.field()
    }

    pub fn basis(&self) -> &SparseMatrix {
        &self.basis
    }

    /// `C(n, 2)`.
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis of `K^⊥ ⊆ ∧²V^∨`, one vector per row.
    pub fn perp(&self) -> SparseMatrix {
        kernel_basis(&self.basis).transpose()
    }

    /// `K + span(extra)`.
    pub fn extended(&self, extra: &SparseMatrix) -> Result<Subspace2> {
        Subspace2::from_spanning(self.n, self.basis.vstack(extra)?)
    }

    /// Same span, compared through reduced echelon forms.
    pub fn same_span(&self, other: &Subspace2) -> bool {
        self.n == other.n
            && self.field() == other.field()
            && row_space_basis(&self.basis) == row_space_basis(&other.basis)
    }

    /// Whether `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Subspace2) -> Result<bool> {
        for r in 0..self.dim() {
            if !contains(other.basis(), &self.basis.row_dense(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image of a rational subspace in `F_p`; fails if the rank drops.
    pub fn reduce_mod(&self, p: u64) -> Result<Subspace2> {
        let reduced = crate::linalg::reduce_matrix(&self.basis, p)?;
        Subspace2::new(self.n, reduced)
    }

    fn check_covector(&self, a: &[BigRational]) -> Result<Vec<BigRational>> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "covector of length {} in a space of dimension {}",
                a.len(),
                self.n
            )));
        }
        a.iter().map(|x| self.field().normalize(x)).collect()
    }
}

/// `a ∧ b` in lex pair coordinates.
pub fn wedge(field: FieldConfig, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len();
    let mut out = Vec::with_capacity(binomial(n, 2));
    for i in 0..n {
        for j in i + 1..n {
            out.push(field.add(&field.mul(&a[i], &b[j]), &field.neg(&field.mul(&a[j], &b[i]))));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Middle cohomology of `K ⊗ Sym^q → V ⊗ Sym^(q+1) → Sym^(q+2)`.
    Complex,
    /// Cokernel of `∧³V ⊗ Sym^(q-1) → (∧²V/K) ⊗ Sym^q`.
    Presentation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WqReport {
    pub q: usize,
    pub dim: usize,
    /// Rank of the map out of `K ⊗ Sym^q` (complex route) or out of
    /// `∧³V ⊗ Sym^(q-1)` (presentation route).
    pub rank: usize,
    /// Rank of the multiplication map `V ⊗ Sym^(q+1) → Sym^(q+2)`; computed
    /// only in paranoid mode, otherwise its known value `dim Sym^(q+2)`.
    pub multiplication_rank: Option<usize>,
    pub multiplication_checked: bool,
    pub route: Route,
}

/// `dim W_q(V, K)`, complex route.
pub fn wq_dimension(k: &Subspace2, q: usize) -> usize {
    wq_report(k, q, false).dim
}

/// Complex-route computation with its ranks; `paranoid` recomputes the rank of
/// the multiplication map instead of using surjectivity.
pub fn wq_report(k: &Subspace2, q: usize, paranoid: bool) -> WqReport {
    let n = k.n();
    let field = k.field();
    let s_q = sym_dim(n, q);
    let delta2 = delta_matrix(2, q, n, field).expect("degree 2 supported");
    let inclusion = k.basis().transpose().kron_identity(s_q);
    let restricted = delta2.mul(&inclusion).expect("conformable");
    let r = rank(&restricted);
    let mult =
        if paranoid { rank(&delta_matrix(1, q + 1, n, field).expect("degree 1 supported")) } else { sym_dim(n, q + 2) };
    let middle = n * sym_dim(n, q + 1);
    WqReport {
        q,
        dim: middle - mult - r,
        rank: r,
        multiplication_rank: paranoid.then_some(mult),
        multiplication_checked: paranoid,
        route: Route::Complex,
    }
}

/// `dim W_q(V, K)` from the cokernel presentation.
pub fn wq_dimension_presentation(k: &Subspace2, q: usize) -> usize {
    wq_report_presentation(k, q).dim
}

pub fn wq_report_presentation(k: &Subspace2, q: usize) -> WqReport {
    let quotient_dim = k.ambient_dim() - k.dim();
    let report = |dim, rank| WqReport {
        q,
        dim,
        rank,
        multiplication_rank: None,
        multiplication_checked: false,
        route: Route::Presentation,
    };
    if q == 0 {
        return report(quotient_dim, 0);
    }
    let n = k.n();
    let projection = quotient_projection(k);
    let lifted = projection.kron_identity(sym_dim(n, q));
    let delta3 = delta_matrix(3, q - 1, n, k.field()).expect("degree 3 supported");
    let r = rank(&lifted.mul(&delta3).expect("conformable"));
    report(quotient_dim * sym_dim(n, q) - r, r)
}

/// Matrix of `∧²V → ∧²V/K` in coordinates given by the non-pivot pairs of the
/// reduced echelon form of `K`.
fn quotient_projection(k: &Subspace2) -> SparseMatrix {
    let field = k.field();
    let width = k.ambient_dim();
    let echelon = row_space_basis(k.basis());
    let pivots: Vec<usize> = (0..echelon.rows()).map(|r| echelon.row(r)[0].0).collect();
    let mut slot = vec![None; width];
    let mut next = 0;
    for (c, s) in slot.iter_mut().enumerate() {
        if !pivots.contains(&c) {
            *s = Some(next);
            next += 1;
        }
    }
    let mut entries = Vec::new();
    for (c, s) in slot.iter().enumerate() {
        if let Some(s) = *s {
            entries.push((s, c, field.from_i64(1)));
        }
    }
    // e_pivot ≡ −Σ_f R[r][f] e_f  modulo K
    for (r, &pc) in pivots.iter().enumerate() {
        for (c, v) in echelon.row(r) {
            if *c != pc {
                entries.push((slot[*c].expect("non-pivot column"), pc, field.neg(v)));
            }
        }
    }
    SparseMatrix::from_triplets(next, width, field, entries).expect("distinct coordinates")
}

/// `[dim W_0, …, dim W_qmax]`.
pub fn hilbert_prefix(k: &Subspace2, qmax: usize) -> Vec<usize> {
    (0..=qmax).into_par_iter().map(|q| wq_dimension(k, q)).collect()
}

/// Degree whose vanishing decides resonance: `max(n − 3, 0)`.
pub fn resonance_threshold(n: usize) -> usize {
    n.saturating_sub(3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceReport {
    pub trivial: bool,
    pub q: usize,
    pub dim: usize,
}

pub fn resonance_report(k: &Subspace2) -> ResonanceReport {
    let q = resonance_threshold(k.n());
    let dim = wq_dimension(k, q);
    ResonanceReport { trivial: dim == 0, q, dim }
}

/// `R(V, K) = {0}`, decided by `W_max(n−3, 0)(V, K) = 0`.
pub fn resonance_trivial(k: &Subspace2) -> bool {
    resonance_report(k).trivial
}

/// The `m × n` matrix `b ↦ (⟨k_l, a ∧ b⟩)_l`.
pub fn fiber_matrix(k: &Subspace2, a: &[BigRational]) -> Result<SparseMatrix> {
    let a = k.check_covector(a)?;
    let (n, field) = (k.n(), k.field());
    let mut entries = Vec::new();
    for l in 0..k.dim() {
        // ⟨e_s∧e_t, a∧e_j⟩ = a_s [t = j] − a_t [s = j]
        for (c, v) in k.basis().row(l) {
            let (s, t) = pair_from_index(n, *c);
            entries.push((l, t, field.mul(v, &a[s])));
            entries.push((l, s, field.neg(&field.mul(v, &a[t]))));
        }
    }
    Ok(SparseMatrix::accumulate(k.dim(), n, field, entries))
}

/// `dim F(a)` where `F(a) = {b : a ∧ b ∈ K^⊥}`.
pub fn fiber_dimension(k: &Subspace2, a: &[BigRational]) -> Result<usize> {
    Ok(k.n() - rank(&fiber_matrix(k, a)?))
}

/// Inverse of [`crate::bases::pair_index`].
pub fn pair_from_index(n: usize, idx: usize) -> (usize, usize) {
    let mut i = 0;
    let mut start = 0;
    while start + (n - i - 1) <= idx {
        start += n - i - 1;
        i += 1;
    }
    (i, i + 1 + (idx - start))
}

/// Number of points `[a] ∈ P(V^∨)(F_p)` whose fiber has dimension at least 2.
pub fn resonance_points_count(k: &Subspace2) -> Result<u64> {
    let p = match k.field() {
        FieldConfig::Prime(p) => p,
        FieldConfig::Rational => return Err(Error::FieldMismatch("point counts need a prime field".into())),
    };
    let n = k.n();
    let blocks = projective_blocks(p, n)?;
    let total: u64 = blocks.iter().sum();
    let pairs: Vec<(usize, usize)> = (0..k.ambient_dim()).map(|c| pair_from_index(n, c)).collect();
    let basis: Vec<Vec<(usize, u64)>> = (0..k.dim())
        .map(|l| k.basis().row(l).iter().map(|(c, v)| (*c, v.numer().to_u64().expect("canonical residue"))).collect())
        .collect();

    let count = (0..total)
        .into_par_iter()
        .filter(|&t| {
            let a = decode_point(t, p, n, &blocks);
            let mut m = vec![vec![0u64; n]; basis.len()];
            for (row, kl) in m.iter_mut().zip(&basis) {
                for &(c, v) in kl {
                    let (s, u) = pairs[c];
                    row[u] = (row[u] + mul_mod(v, a[s], p)) % p;
                    row[s] = sub_mod(row[s], mul_mod(v, a[u], p), p);
                }
            }
            n - dense_rank_mod(m, p) >= 2
        })
        .count();
    Ok(count as u64)
}

/// Sizes of the affine charts: points whose first nonzero coordinate is `k`.
fn projective_blocks(p: u64, n: usize) -> Result<Vec<u64>> {
    let mut blocks = Vec::with_capacity(n);
    let mut total: u64 = 0;
    for k in 0..n {
        let size = p.checked_pow((n - 1 - k) as u32).unwrap_or(u64::MAX);
        total = total.saturating_add(size);
        if total > POINT_BUDGET {
            return Err(Error::BudgetExceeded(format!("P^{}(F_{p}) has more than {POINT_BUDGET} points", n - 1)));
        }
        blocks.push(size);
    }
    Ok(blocks)
}

fn decode_point(mut t: u64, p: u64, n: usize, blocks: &[u64]) -> Vec<u64> {
    let mut a = vec![0u64; n];
    let mut lead = 0;
    while t >= blocks[lead] {
        t -= blocks[lead];
        lead += 1;
    }
    a[lead] = 1;
    for x in a[lead + 1..].iter_mut() {
        *x = t % p;
        t /= p;
    }
    a
}

fn dense_rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for i in r + 1..m.len() {
            let t = mul_mod(m[i][c], inv, p);
            if t != 0 {
                for j in c..cols {
                    m[i][j] = sub_mod(m[i][j], mul_mod(t, m[r][j], p), p);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn check_vbar(k: &Subspace2, vbar: &SparseMatrix) -> Result<()> {
    if vbar.field() != k.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", vbar.field(), k.field())));
    }
    if vbar.cols() != k.n() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of V^∨ given in {} coordinates, expected {}",
            vbar.cols(),
            k.n()
        )));
    }
    let r = rank(vbar);
    if r != vbar.rows() {
        return Err(Error::RankDeficient { expected: vbar.rows(), found: r });
    }
    Ok(())
}

fn wedge_span(
    field: FieldConfig,
    cols: usize,
    left: &SparseMatrix,
    right: &[Vec<BigRational>],
    distinct: bool,
) -> SparseMatrix {
    let mut rows = Vec::new();
    for i in 0..left.rows() {
        let a = left.row_dense(i);
        for (j, b) in right.iter().enumerate() {
            if distinct && j <= i {
                continue;
            }
            rows.push(wedge(field, &a, b));
        }
    }
    SparseMatrix::from_dense(field, cols, &rows).expect("consistent widths")
}

/// `∧² V̄ ⊆ K^⊥`.
pub fn is_isotropic(k: &Subspace2, vbar: &SparseMatrix) -> Result<bool> {
    check_vbar(k, vbar)?;
    let field = k.field();
    let vectors: Vec<Vec<BigRational>> = (0..vbar.rows()).map(|i| vbar.row_dense(i)).collect();
    let wedges = wedge_span(field, k.ambient_dim(), vbar, &vectors, true);
    Ok(k.basis().mul(&wedges.transpose())?.is_zero())
}

/// `K^⊥ ∩ (V̄ ∧ V^∨) ⊆ ∧² V̄`, checked in degree 2.
pub fn is_separable(k: &Subspace2, vbar: &SparseMatrix) -> Result<bool> {
    check_vbar(k, vbar)?;
    let field = k.field();
    let n = k.n();
    let units: Vec<Vec<BigRational>> =
        (0..n).map(|j| (0..n).map(|i| field.from_i64(i64::from(i == j))).collect()).collect();
    let vectors: Vec<Vec<BigRational>> = (0..vbar.rows()).map(|i| vbar.row_dense(i)).collect();
    let ideal = wedge_span(field, k.ambient_dim(), vbar, &units, false);
    let square = wedge_span(field, k.ambient_dim(), vbar, &vectors, true);
    let meet = intersect(&k.perp(), &ideal)?;
    for r in 0..meet.rows() {
        if !contains(&square, &meet.row_dense(r))? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_strongly_isotropic(k: &Subspace2, vbar: &SparseMatrix) -> Result<bool> {
    Ok(is_isotropic(k, vbar)? && is_separable(k, vbar)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub resonant: bool,
    pub q: usize,
    pub dim: usize,
    pub required: usize,
    pub passes: bool,
}

/// For resonant `K`, `dim W_(n−3) ≥ n − 2`; vacuous otherwise.
pub fn multiplicity_lower_bound_check(k: &Subspace2) -> MultiplicityReport {
    let res = resonance_report(k);
    let required = res.q + 1;
    MultiplicityReport {
        resonant: !res.trivial,
        q: res.q,
        dim: res.dim,
        required,
        passes: res.trivial || res.dim >= required,
    }
}

/// Unit covector `e_i^∨` over `field`.
pub fn unit_covector(field: FieldConfig, n: usize, i: usize) -> Vec<BigRational> {
    (0..n).map(|j| field.from_i64(i64::from(i == j))).collect()
}

/// Covector from integer coordinates.
pub fn covector(field: FieldConfig, coords: &[i64]) -> Vec<BigRational> {
    coords.iter().map(|&x| field.from_i64(x)).collect()
}

/// Residues of a covector over `F_p`, for callers holding rational input.
pub fn covector_mod(a: &[BigRational], p: u64) -> Option<Vec<BigRational>> {
    a.iter().map(|x| reduce_mod(x, p).map(|r| BigRational::from_integer(BigInt::from(r)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::pair_index;
    use num_traits::Zero;

    fn zero_vec(len: usize) -> Vec<BigRational> {
        vec![BigRational::zero(); len]
    }

    #[test]
    fn pair_index_round_trip() {
        for n in 2..9 {
            for idx in 0..binomial(n, 2) {
                let (i, j) = pair_from_index(n, idx);
                assert!(i < j && j < n);
                assert_eq!(pair_index(n, i, j), idx);
            }
        }
    }

    #[test]
    fn degenerate_subspaces() {
        for n in 2..6 {
            let f = FieldConfig::Rational;
            let full = Subspace2::full(n, f);
            assert_eq!(hilbert_prefix(&full, 3), vec![0; 4]);
            assert!(resonance_trivial(&full));
            let zero = Subspace2::zero(n, f);
            // W(V, 0) = coker(∧³⊗Sym^(q−1) → ∧²⊗Sym^q) = image of δ2
            for q in 0..3 {
                let expected = binomial(n, 2) * sym_dim(n, q)
                    - rank(&delta_matrix(3, q.saturating_sub(1), n, f).unwrap()) * usize::from(q > 0);
                assert_eq!(wq_dimension(&zero, q), expected, "n={n} q={q}");
                assert_eq!(wq_dimension_presentation(&zero, q), expected);
            }
        }
    }

    #[test]
    fn rejects_bad_bases() {
        let f = FieldConfig::Rational;
        let dup = SparseMatrix::from_i64_rows(f, &[&[1, 0, 0], &[2, 0, 0]]).unwrap();
        assert!(matches!(Subspace2::new(3, dup), Err(Error::RankDeficient { .. })));
        let short = SparseMatrix::from_i64_rows(f, &[&[1, 0]]).unwrap();
        assert!(matches!(Subspace2::new(3, short), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn fiber_examples() {
        let f = FieldConfig::Rational;
        let full = Subspace2::full(4, f);
        assert_eq!(fiber_dimension(&full, &zero_vec(4)).unwrap(), 4);
        assert_eq!(fiber_dimension(&full, &covector(f, &[1, 2, 0, -1])).unwrap(), 1);
        assert!(fiber_dimension(&full, &zero_vec(3)).is_err());
    }

    #[test]
    fn points_require_prime_field_and_budget() {
        let k = Subspace2::full(4, FieldConfig::Rational);
        assert!(matches!(resonance_points_count(&k), Err(Error::FieldMismatch(_))));
        let big = Subspace2::full(12, FieldConfig::prime(7).unwrap());
        assert!(matches!(resonance_points_count(&big), Err(Error::BudgetExceeded(_))));
        let huge = Subspace2::zero(7, FieldConfig::prime(crate::field::DEFAULT_PRIME).unwrap());
        assert!(matches!(resonance_points_count(&huge), Err(Error::BudgetExceeded(_))));
        let k = Subspace2::full(3, FieldConfig::prime(5).unwrap());
        assert_eq!(resonance_points_count(&k).unwrap(), 0);
        let k = Subspace2::zero(3, FieldConfig::prime(5).unwrap());
        assert_eq!(resonance_points_count(&k).unwrap(), 31);
    }

    #[test]
    fn point_decoding_covers_projective_space() {
        let (p, n) = (3, 3);
        let blocks = projective_blocks(p, n).unwrap();
        let total: u64 = blocks.iter().sum();
        assert_eq!(total, 13);
        let pts: std::collections::BTreeSet<Vec<u64>> = (0..total).map(|t| decode_point(t, p, n, &blocks)).collect();
        assert_eq!(pts.len(), 13);
        assert!(pts.iter().all(|a| a.iter().find(|&&x| x != 0) == Some(&1)));
    }

    #[test]
    fn isotropy_basics() {
        let f = FieldConfig::Rational;
        let full = Subspace2::full(4, f);
        let line = SparseMatrix::from_i64_rows(f, &[&[1, 1, 0, 0]]).unwrap();
        assert!(is_isotropic(&full, &line).unwrap());
        let everything = SparseMatrix::identity(4, f);
        assert!(!is_isotropic(&full, &everything).unwrap());
        let dependent = SparseMatrix::from_i64_rows(f, &[&[1, 0, 0, 0], &[2, 0, 0, 0]]).unwrap();
        assert!(is_isotropic(&full, &dependent).is_err());
    }
}
