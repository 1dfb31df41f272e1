//! Immutable sparse matrices over a [`FieldConfig`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::FieldConfig;

/// Row-major sparse matrix. Each row is sorted by column, with no stored zeros
/// and no repeated column. Entries are canonical for the matrix's field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    data: Vec<Vec<(usize, BigRational)>>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Zero values are
    /// dropped; a repeated `(row, col)` key is an error.
    pub fn from_triplets<I>(rows: usize, cols: usize, field: FieldConfig, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigRational)>,
    {
        let mut data: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
            }
            let v = field.normalize(&v)?;
            if data[r].insert(c, v).is_some() {
                return Err(Error::Malformed(format!("duplicate entry at ({r}, {c})")));
            }
        }
        let data = data.into_iter().map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Ok(SparseMatrix { rows, cols, field, data })
    }

    /// Like [`from_triplets`](Self::from_triplets) but repeated keys are summed.
    pub(crate) fn accumulate<I>(rows: usize, cols: usize, field: FieldConfig, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigRational)>,
    {
        let mut data: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of range");
            let slot = data[r].entry(c).or_insert_with(BigRational::zero);
            *slot = field.add(slot, &v);
        }
        let data = data.into_iter().map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        SparseMatrix { rows, cols, field, data }
    }

    /// Wraps rows that are already sorted, canonical and zero-free.
    pub(crate) fn from_sorted_rows(cols: usize, field: FieldConfig, data: Vec<Vec<(usize, BigRational)>>) -> Self {
        debug_assert!(data.iter().all(|row| row.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(data.iter().flatten().all(|(c, v)| *c < cols && !v.is_zero()));
        SparseMatrix { rows: data.len(), cols, field, data }
    }

    pub fn from_dense(field: FieldConfig, cols: usize, dense: &[Vec<BigRational>]) -> Result<Self> {
        let mut entries = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {r} has {} entries, expected {cols}", row.len())));
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(dense.len(), cols, field, entries)
    }

    /// Convenience for small literal matrices in tests and examples.
    pub fn from_i64_rows(field: FieldConfig, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_dense(field, cols, &dense)
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldConfig) -> Self {
        SparseMatrix { rows, cols, field, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize, field: FieldConfig) -> Self {
        let one = field.from_i64(1);
        let data = (0..n).map(|i| vec![(i, one.clone())]).collect();
        SparseMatrix { rows: n, cols: n, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, BigRational)] {
        &self.data[r]
    }

    pub(crate) fn row_data(&self) -> &[Vec<(usize, BigRational)>] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    /// All nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    /// Number of nonzeros in each column.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for (_, c, _) in self.entries() {
            counts[c] += 1;
        }
        counts
    }

    pub fn row_dense(&self, r: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.cols];
        for (c, v) in &self.data[r] {
            out[*c] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| self.row_dense(r)).collect()
    }

    pub fn column_dense(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, field: self.field, data }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let field = self.field;
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &rhs.data[*k] {
                        let slot = acc.entry(*c).or_insert_with(BigRational::zero);
                        *slot = field.add(slot, &field.mul(a, b));
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, field, data })
    }

    /// Kronecker product `self ⊗ I_s`; index `(i, x)` maps to `i * s + x`.
    pub fn kron_identity(&self, s: usize) -> SparseMatrix {
        let mut data = Vec::with_capacity(self.rows * s);
        for row in &self.data {
            for x in 0..s {
                data.push(row.iter().map(|(c, v)| (c * s + x, v.clone())).collect());
            }
        }
        SparseMatrix { rows: self.rows * s, cols: self.cols * s, field: self.field, data }
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(SparseMatrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data })
    }

    pub fn scale(&self, k: &BigRational) -> SparseMatrix {
        let field = self.field;
        let k = field.normalize(k).expect("scale factor reduces");
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, field.mul(v, &k))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, field, data }
    }

    /// Applies the matrix to a dense column vector.
    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let field = self.field;
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().fold(BigRational::zero(), |acc, (c, a)| field.add(&acc, &field.mul(a, &v[*c]))))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub(crate) fn check_field(&self, other: &SparseMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_reject_duplicates_and_out_of_range() {
        let f = FieldConfig::Rational;
        let one = f.from_i64(1);
        assert!(SparseMatrix::from_triplets(2, 2, f, [(0, 0, one.clone()), (0, 0, one.clone())]).is_err());
        assert!(SparseMatrix::from_triplets(2, 2, f, [(2, 0, one.clone())]).is_err());
        let m = SparseMatrix::from_triplets(2, 2, f, [(0, 1, one), (1, 0, f.from_i64(0))]).unwrap();
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn prime_entries_are_canonical() {
        let f = FieldConfig::prime(7).unwrap();
        let m = SparseMatrix::from_i64_rows(f, &[&[-1, 7, 15]]).unwrap();
        assert_eq!(m.get(0, 0), f.from_i64(6));
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 2), f.from_i64(1));
    }

    #[test]
    fn product_and_kronecker() {
        let f = FieldConfig::Rational;
        let a = SparseMatrix::from_i64_rows(f, &[&[1, 2], &[0, 1]]).unwrap();
        let b = SparseMatrix::from_i64_rows(f, &[&[1, -2], &[0, 1]]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2, f));
        let k = a.kron_identity(3);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(1, 4), f.from_i64(2));
        assert_eq!(k.get(1, 3), f.from_i64(0));
        assert_eq!(a.transpose().get(1, 0), f.from_i64(2));
    }
}
