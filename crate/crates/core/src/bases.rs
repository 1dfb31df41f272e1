//! Ordered bases of `Sym^d V` and `∧^p V`, and the Koszul differentials.
//!
//! Frozen conventions (every file format and matrix in this crate uses them):
//!
//! * monomials of a fixed degree are in graded-lex order with
//!   `x0 > x1 > … > x(n-1)`, i.e. exponent vectors in decreasing lex order;
//! * exterior indices `i1 < … < ip` are in increasing lex order;
//! * a tensor basis `∧^p V ⊗ Sym^q V` is ordered by the pair
//!   (exterior index, monomial), so `(e, f)` sits at `e * dim Sym^q + f`.
//!
//! The differential is
//! `δ(v1 ∧ … ∧ vp ⊗ f) = Σ_j (-1)^(j-1) v1 ∧ … v̂j … ∧ vp ⊗ vj·f`.
//! With three variables `x0, x1, x2`:
//!
//! ```text
//! δ2(e0∧e2 ⊗ x1) = e2 ⊗ x0x1 − e0 ⊗ x1x2
//! δ3(e0∧e1∧e2 ⊗ 1) = e1∧e2 ⊗ x0 − e0∧e2 ⊗ x1 + e0∧e1 ⊗ x2
//! ```

use std::collections::HashMap;
use std::fmt;

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::sparse::SparseMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `x_i · self`
    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Strictly increasing index tuple naming `e_{i1} ∧ … ∧ e_{ip}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExteriorIndex(Vec<usize>);

impl ExteriorIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!("{indices:?} is not strictly increasing")));
        }
        Ok(ExteriorIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// The index with position `j` removed.
    pub fn omit(&self, j: usize) -> ExteriorIndex {
        let mut v = self.0.clone();
        v.remove(j);
        ExteriorIndex(v)
    }
}

pub fn sym_dim(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial(n + d - 1, d)
}

/// Monomials of degree `d` in `n` variables, in graded-lex order.
pub fn sym_basis(n: usize, d: usize) -> Vec<Monomial> {
    fn fill(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            fill(prefix, left - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(sym_dim(n, d));
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(n), d as u32, n, &mut out);
    out
}

fn check_degree(p: usize) -> Result<()> {
    if !(1..=3).contains(&p) {
        return Err(Error::UnsupportedDegree(p));
    }
    Ok(())
}

fn wedge_list(n: usize, p: usize) -> Vec<ExteriorIndex> {
    fn fill(start: usize, n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<ExteriorIndex>) {
        if left == 0 {
            out.push(ExteriorIndex(prefix.clone()));
            return;
        }
        for i in start..n {
            prefix.push(i);
            fill(i + 1, n, left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Exterior indices of `∧^p V` for `p ∈ {1, 2, 3}`, in lex order.
pub fn wedge_basis(n: usize, p: usize) -> Result<Vec<ExteriorIndex>> {
    check_degree(p)?;
    Ok(wedge_list(n, p))
}

/// Position of the pair `(i, j)`, `i < j`, in the lex order of `∧^2` of an
/// `n`-dimensional space.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Indexed basis with reverse lookup.
#[derive(Clone, Debug)]
pub struct IndexedBasis<T> {
    items: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Clone + Eq + std::hash::Hash> IndexedBasis<T> {
    pub fn new(items: Vec<T>) -> Self {
        let index = items.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        IndexedBasis { items, index }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn position(&self, t: &T) -> Option<usize> {
        self.index.get(t).copied()
    }
}

pub fn monomial_basis(n: usize, d: usize) -> IndexedBasis<Monomial> {
    IndexedBasis::new(sym_basis(n, d))
}

/// Matrix of `δ_{p,q}: ∧^p V ⊗ Sym^q V → ∧^{p-1} V ⊗ Sym^{q+1} V`.
pub fn delta_matrix(p: usize, q: usize, n: usize, field: FieldConfig) -> Result<SparseMatrix> {
    check_degree(p)?;
    let domain_ext = wedge_list(n, p);
    let target_ext = IndexedBasis::new(wedge_list(n, p - 1));
    let monos = sym_basis(n, q);
    let target_monos = monomial_basis(n, q + 1);
    let (s_q, s_q1) = (monos.len(), target_monos.len());
    let one = field.from_i64(1);
    let minus_one = field.from_i64(-1);

    let mut entries = Vec::with_capacity(domain_ext.len() * s_q * p);
    for (ei, ext) in domain_ext.iter().enumerate() {
        for (fi, f) in monos.iter().enumerate() {
            let col = ei * s_q + fi;
            for (j, &var) in ext.indices().iter().enumerate() {
                let t_ext = target_ext.position(&ext.omit(j)).expect("face of a basis wedge");
                let t_mono = target_monos.position(&f.times_var(var)).expect("degree q+1 monomial");
                let sign = if j % 2 == 0 { one.clone() } else { minus_one.clone() };
                entries.push((t_ext * s_q1 + t_mono, col, sign));
            }
        }
    }
    SparseMatrix::from_triplets(target_ext.len() * s_q1, domain_ext.len() * s_q, field, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;

    #[test]
    fn sym_basis_examples() {
        let b: Vec<String> = sym_basis(2, 2).iter().map(|m| m.to_string()).collect();
        assert_eq!(b, ["x0^2", "x0*x1", "x1^2"]);
        assert_eq!(sym_dim(4, 3), 20);
        assert_eq!(sym_basis(4, 3).len(), 20);
        assert_eq!(sym_basis(3, 0), vec![Monomial(vec![0, 0, 0])]);
        let b = sym_basis(3, 2);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn wedge_basis_examples() {
        let b = wedge_basis(4, 2).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b[0].indices(), &[0, 1]);
        assert_eq!(b[5].indices(), &[2, 3]);
        for (k, e) in b.iter().enumerate() {
            assert_eq!(pair_index(4, e.indices()[0], e.indices()[1]), k);
        }
        assert_eq!(wedge_basis(5, 3).unwrap().len(), 10);
        assert!(matches!(wedge_basis(5, 4), Err(Error::UnsupportedDegree(4))));
        assert!(matches!(delta_matrix(0, 1, 3, FieldConfig::Rational), Err(Error::UnsupportedDegree(0))));
    }

    #[test]
    fn delta_one_zero_is_identity() {
        for n in 1..6 {
            let d = delta_matrix(1, 0, n, FieldConfig::Rational).unwrap();
            assert_eq!(d, SparseMatrix::identity(n, FieldConfig::Rational));
        }
    }

    #[test]
    fn delta_two_zero_in_three_variables() {
        let f = FieldConfig::Rational;
        let d = delta_matrix(2, 0, 3, f).unwrap();
        assert_eq!((d.rows(), d.cols()), (9, 3));
        assert!(d.column_counts().iter().all(|&c| c == 2));
        // e0∧e2 ↦ e2⊗x0 − e0⊗x2 ; rows are (i, monomial) with Sym^1 = [x0, x1, x2]
        let col = pair_index(3, 0, 2);
        assert_eq!(d.get(2 * 3, col), f.from_i64(1));
        assert_eq!(d.get(2, col), f.from_i64(-1));
    }

    #[test]
    fn delta_three_signs() {
        let f = FieldConfig::Rational;
        let d = delta_matrix(3, 0, 3, f).unwrap();
        // e0∧e1∧e2 ↦ e1∧e2⊗x0 − e0∧e2⊗x1 + e0∧e1⊗x2
        assert_eq!(d.get(2 * 3, 0), f.from_i64(1));
        assert_eq!(d.get(3 + 1, 0), f.from_i64(-1));
        assert_eq!(d.get(2, 0), f.from_i64(1));
    }

    #[test]
    fn delta_one_is_surjective() {
        for n in 1..=4 {
            for q in 0..=3 {
                let d = delta_matrix(1, q + 1, n, FieldConfig::Rational).unwrap();
                assert_eq!(rank(&d), sym_dim(n, q + 2), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn complex_property() {
        for field in [FieldConfig::Rational, FieldConfig::prime(7).unwrap()] {
            for n in 1..=6 {
                for q in 0..=4 {
                    let d1 = delta_matrix(1, q + 1, n, field).unwrap();
                    let d2 = delta_matrix(2, q, n, field).unwrap();
                    assert!(d1.mul(&d2).unwrap().is_zero(), "n={n} q={q}");
                    let d2b = delta_matrix(2, q + 1, n, field).unwrap();
                    let d3 = delta_matrix(3, q, n, field).unwrap();
                    assert!(d2b.mul(&d3).unwrap().is_zero(), "n={n} q={q}");
                    for (p, d) in [(1, &d1), (2, &d2), (3, &d3)] {
                        assert!(d.column_counts().iter().all(|&c| c == p));
                    }
                }
            }
        }
    }
}
