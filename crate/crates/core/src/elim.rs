//! Structured Gaussian elimination for exact rank.
//!
//! The matrix is first split into the connected components of its row/column
//! incidence graph; the rank is the sum over components. Inside a component the
//! pivot column is the one with the fewest live entries and the pivot row is the
//! shortest row meeting it (a cheap Markowitz rule). Once the live part of a
//! component has filled in past [`DENSE_SWITCH`] it is finished densely.
//!
//! Over `F_p` rows are `u64` residues. Over `Q` rows are cleared to primitive
//! integer vectors and combined fraction-free; the dense tail uses Bareiss.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::field::{inv_mod, mul_mod, sub_mod};

/// Live density at which a component is handed to the dense kernel.
const DENSE_SWITCH: f64 = 0.2;
const DENSE_MIN_ROWS: usize = 48;

pub(crate) type SparseRow<V> = Vec<(usize, V)>;

pub(crate) trait PivotRing: Sync {
    type V: Clone + Send + Sync;

    fn prepare_pivot(&self, row: &mut SparseRow<Self::V>, col: usize);

    /// Removes `col` from `target` using `pivot`, which contains `col`.
    fn eliminate(&self, pivot: &[(usize, Self::V)], target: &[(usize, Self::V)], col: usize) -> SparseRow<Self::V>;

    fn zero(&self) -> Self::V;

    fn dense_rank(&self, rows: Vec<Vec<Self::V>>) -> usize;
}

/// Arithmetic modulo an odd prime.
pub(crate) struct ModRing(pub u64);

impl PivotRing for ModRing {
    type V = u64;

    fn prepare_pivot(&self, row: &mut SparseRow<u64>, col: usize) {
        let p = self.0;
        let lead = row.iter().find(|(c, _)| *c == col).expect("pivot present").1;
        let inv = inv_mod(lead, p);
        for (_, v) in row.iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
    }

    fn eliminate(&self, pivot: &[(usize, u64)], target: &[(usize, u64)], col: usize) -> SparseRow<u64> {
        let p = self.0;
        let t = target.iter().find(|(c, _)| *c == col).expect("target meets pivot column").1;
        merge(pivot, target, |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(sub_mod(b, mul_mod(t, a, p), p)),
            (Some(a), None) => Some(sub_mod(0, mul_mod(t, a, p), p)),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        })
        .into_iter()
        .filter(|(_, v)| *v != 0)
        .collect()
    }

    fn zero(&self) -> u64 {
        0
    }

    fn dense_rank(&self, mut rows: Vec<Vec<u64>>) -> usize {
        let p = self.0;
        let ncols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            let inv = inv_mod(rows[rank][c], p);
            let pivot: Vec<u64> = rows[rank].iter().map(|&v| mul_mod(v, inv, p)).collect();
            rows[rank + 1..].par_iter_mut().for_each(|row| {
                let t = row[c];
                if t != 0 {
                    for j in c..ncols {
                        if pivot[j] != 0 {
                            row[j] = sub_mod(row[j], mul_mod(t, pivot[j], p), p);
                        }
                    }
                }
            });
            rows[rank] = pivot;
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

/// Fraction-free integer arithmetic for rational matrices.
pub(crate) struct IntRing;

impl PivotRing for IntRing {
    type V = BigInt;

    fn prepare_pivot(&self, row: &mut SparseRow<BigInt>, _col: usize) {
        make_primitive(row);
    }

    fn eliminate(&self, pivot: &[(usize, BigInt)], target: &[(usize, BigInt)], col: usize) -> SparseRow<BigInt> {
        let a = &pivot.iter().find(|(c, _)| *c == col).expect("pivot present").1;
        let t = &target.iter().find(|(c, _)| *c == col).expect("target meets pivot column").1;
        let g = a.gcd(t);
        let (a, t) = (a / &g, t / &g);
        let mut out: SparseRow<BigInt> = merge(pivot, target, |x, y| match (x, y) {
            (Some(x), Some(y)) => Some(&a * y - &t * x),
            (Some(x), None) => Some(-(&t * x)),
            (None, Some(y)) => Some(&a * y),
            (None, None) => None,
        })
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .collect();
        make_primitive(&mut out);
        out
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    /// Bareiss one-step fraction-free elimination.
    fn dense_rank(&self, mut rows: Vec<Vec<BigInt>>) -> usize {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..ncols {
            let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, pr);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            let piv = pivot[c].clone();
            tail.par_iter_mut().for_each(|row| {
                let t = row[c].clone();
                for j in c..ncols {
                    let v = &piv * &row[j] - &t * &pivot[j];
                    row[j] = v / &prev;
                }
            });
            prev = piv;
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

fn make_primitive(row: &mut SparseRow<BigInt>) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Merges two column-sorted rows, combining entries column by column.
fn merge<V: Clone, F>(a: &[(usize, V)], b: &[(usize, V)], mut f: F) -> SparseRow<V>
where
    F: FnMut(Option<V>, Option<V>) -> Option<V>,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (c, v) = match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                (*ca, f(Some(va.clone()), Some(vb.clone())))
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                i += 1;
                (*ca, f(Some(va.clone()), None))
            }
            (Some((ca, va)), None) => {
                i += 1;
                (*ca, f(Some(va.clone()), None))
            }
            (_, Some((cb, vb))) => {
                j += 1;
                (*cb, f(None, Some(vb.clone())))
            }
            (None, None) => unreachable!(),
        };
        if let Some(v) = v {
            out.push((c, v));
        }
    }
    out
}

/// Exact rank of the matrix whose rows are `rows` (column indices `< ncols`).
pub(crate) fn structured_rank<R: PivotRing>(ring: &R, ncols: usize, rows: Vec<SparseRow<R::V>>) -> usize {
    let rows: Vec<SparseRow<R::V>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    if rows.is_empty() {
        return 0;
    }
    components(ncols, rows).into_par_iter().map(|(width, block)| eliminate_component(ring, width, block)).sum()
}

/// Splits rows into connected blocks, relabelling columns locally.
fn components<V>(ncols: usize, rows: Vec<SparseRow<V>>) -> Vec<(usize, Vec<SparseRow<V>>)> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for row in &rows {
        for (c, _) in &row[1..] {
            let (ra, rb) = (find(&mut parent, row[0].0), find(&mut parent, *c));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut block_of_root = vec![usize::MAX; ncols];
    let mut local_col = vec![usize::MAX; ncols];
    let mut widths: Vec<usize> = Vec::new();
    for c in 0..ncols {
        let root = find(&mut parent, c);
        if block_of_root[root] == usize::MAX {
            block_of_root[root] = widths.len();
            widths.push(0);
        }
        let b = block_of_root[root];
        local_col[c] = widths[b];
        widths[b] += 1;
    }
    let mut blocks: Vec<Vec<SparseRow<V>>> = (0..widths.len()).map(|_| Vec::new()).collect();
    for row in rows {
        let b = block_of_root[find(&mut parent, row[0].0)];
        blocks[b].push(row.into_iter().map(|(c, v)| (local_col[c], v)).collect());
    }
    widths.into_iter().zip(blocks).filter(|(_, rows)| !rows.is_empty()).collect()
}

struct ColumnQueue {
    col_rows: Vec<BTreeSet<usize>>,
    order: BTreeSet<(usize, usize)>,
}

impl ColumnQueue {
    fn insert(&mut self, col: usize, row: usize) {
        let old = self.col_rows[col].len();
        if self.col_rows[col].insert(row) {
            self.order.remove(&(old, col));
            self.order.insert((old + 1, col));
        }
    }

    fn remove(&mut self, col: usize, row: usize) {
        let old = self.col_rows[col].len();
        if self.col_rows[col].remove(&row) {
            self.order.remove(&(old, col));
            if old > 1 {
                self.order.insert((old - 1, col));
            }
        }
    }
}

fn eliminate_component<R: PivotRing>(ring: &R, ncols: usize, rows: Vec<SparseRow<R::V>>) -> usize {
    let mut queue = ColumnQueue { col_rows: vec![BTreeSet::new(); ncols], order: BTreeSet::new() };
    let mut live_nnz = 0usize;
    for (i, row) in rows.iter().enumerate() {
        live_nnz += row.len();
        for (c, _) in row {
            queue.col_rows[*c].insert(i);
        }
    }
    for (c, set) in queue.col_rows.iter().enumerate() {
        if !set.is_empty() {
            queue.order.insert((set.len(), c));
        }
    }
    let mut live_rows = rows.len();
    let mut rows: Vec<Option<SparseRow<R::V>>> = rows.into_iter().map(Some).collect();
    let mut rank = 0;

    while let Some(&(_, col)) = queue.order.iter().next() {
        let live_cols = queue.order.len();
        if live_rows >= DENSE_MIN_ROWS && live_nnz as f64 > DENSE_SWITCH * live_rows as f64 * live_cols as f64 {
            return rank + finish_dense(ring, &queue, rows);
        }

        let r = *queue.col_rows[col]
            .iter()
            .min_by_key(|&&i| (rows[i].as_ref().map_or(usize::MAX, Vec::len), i))
            .expect("column in queue has rows");
        let mut pivot = rows[r].take().expect("live row");
        for (c, _) in &pivot {
            queue.remove(*c, r);
        }
        live_rows -= 1;
        live_nnz -= pivot.len();
        ring.prepare_pivot(&mut pivot, col);
        rank += 1;

        let targets: Vec<usize> = queue.col_rows[col].iter().copied().collect();
        for i in targets {
            let old = rows[i].take().expect("live row");
            let new = ring.eliminate(&pivot, &old, col);
            let (mut a, mut b) = (0, 0);
            while a < old.len() || b < new.len() {
                match (old.get(a), new.get(b)) {
                    (Some((ca, _)), Some((cb, _))) if ca == cb => {
                        a += 1;
                        b += 1;
                    }
                    (Some((ca, _)), Some((cb, _))) if ca < cb => {
                        queue.remove(*ca, i);
                        a += 1;
                    }
                    (Some((ca, _)), None) => {
                        queue.remove(*ca, i);
                        a += 1;
                    }
                    (_, Some((cb, _))) => {
                        queue.insert(*cb, i);
                        b += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            live_nnz = live_nnz - old.len() + new.len();
            if new.is_empty() {
                live_rows -= 1;
            } else {
                rows[i] = Some(new);
            }
        }
    }
    rank
}

fn finish_dense<R: PivotRing>(ring: &R, queue: &ColumnQueue, rows: Vec<Option<SparseRow<R::V>>>) -> usize {
    let live_cols: Vec<usize> =
        queue.col_rows.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, _)| c).collect();
    let mut local = vec![usize::MAX; queue.col_rows.len()];
    for (i, &c) in live_cols.iter().enumerate() {
        local[c] = i;
    }
    let dense: Vec<Vec<R::V>> = rows
        .into_iter()
        .flatten()
        .map(|row| {
            let mut d = vec![ring.zero(); live_cols.len()];
            for (c, v) in row {
                d[local[c]] = v;
            }
            d
        })
        .collect();
    ring.dense_rank(dense)
}
