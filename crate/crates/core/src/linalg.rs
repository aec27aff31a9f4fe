//! Exact linear algebra over the rationals.
//!
//! Sparse row-major matrices with Gaussian elimination; all pivoting is
//! deterministic (first usable row for the leftmost unused column), so rank
//! profiles, kernel bases and solutions are reproducible across runs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::Rational;

type Row = BTreeMap<usize, Rational>;

/// Sparse matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

impl QMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Row::new(); rows],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Build from dense rows. All rows must share a length.
    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Set entry `(i, j)`, removing it when zero.
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    /// Add `v` into entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, v: &Rational) {
        if v.is_zero() {
            return;
        }
        assert!(i < self.rows && j < self.cols, "index out of range");
        let entry = self.data[i].entry(j).or_insert_with(Rational::zero);
        *entry += v;
        if entry.is_zero() {
            self.data[i].remove(&j);
        }
    }

    /// Entry `(i, j)` (zero if absent).
    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i]
            .get(&j)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Matrix-vector product `A v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = vec![Rational::zero(); self.rows];
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Rational::zero();
            for (j, a) in row {
                if !v[*j].is_zero() {
                    acc += a * &v[*j];
                }
            }
            out[i] = acc;
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &rhs.data[*k] {
                    out.add_to(i, *j, &(a * b));
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Row> = self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut rank = 0;
        let mut next = 0usize;
        while next < rows.len() {
            // Deterministic pivot: among remaining rows, the one whose leading
            // column is smallest; ties broken by row order.
            let (best_idx, lead) = match rows[next..]
                .iter()
                .enumerate()
                .filter_map(|(k, r)| r.keys().next().map(|&c| (k + next, c)))
                .min_by_key(|&(k, c)| (c, k))
            {
                Some(v) => v,
                None => break,
            };
            rows.swap(next, best_idx);
            let pivot_val = rows[next][&lead].clone();
            for i in (next + 1)..rows.len() {
                if let Some(v) = rows[i].get(&lead).cloned() {
                    let factor = &v / &pivot_val;
                    let pivot_row = rows[next].clone();
                    let target = &mut rows[i];
                    for (j, pv) in &pivot_row {
                        let entry = target.entry(*j).or_insert_with(Rational::zero);
                        *entry -= &factor * pv;
                        if entry.is_zero() {
                            target.remove(j);
                        }
                    }
                }
            }
            rank += 1;
            next += 1;
            rows.retain(|r| !r.is_empty());
        }
        rank
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut data = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| data[i].contains_key(&c)) else {
                continue;
            };
            data.swap(r, p);
            let inv = data[r][&c].recip();
            for v in data[r].values_mut() {
                *v *= &inv;
            }
            let pivot_row = data[r].clone();
            for (i, row) in data.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                if let Some(f) = row.get(&c).cloned() {
                    for (j, pv) in &pivot_row {
                        let entry = row.entry(*j).or_insert_with(Rational::zero);
                        *entry -= &f * pv;
                        if entry.is_zero() {
                            row.remove(j);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            QMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        )
    }

    /// Basis of the right kernel `{v : A v = 0}` as dense vectors, one per
    /// free column, in increasing free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (rref, pivots) = self.rref();
        let pivot_set: BTreeMap<usize, usize> = pivots
            .iter()
            .enumerate()
            .map(|(row, &col)| (col, row))
            .collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains_key(&f) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (&pc, &pr) in &pivot_set {
                let coeff = rref.data[pr].get(&f).cloned().unwrap_or_else(Rational::zero);
                if !coeff.is_zero() {
                    v[pc] = -coeff;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `A x = b`. Returns one solution (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        // Eliminate the augmented matrix [A | b].
        let mut aug = QMatrix::zero(self.rows, self.cols + 1);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                aug.set(i, *j, v.clone());
            }
            if !b[i].is_zero() {
                aug.set(i, self.cols, b[i].clone());
            }
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = rref
                .data[row]
                .get(&self.cols)
                .cloned()
                .unwrap_or_else(Rational::zero);
        }
        Some(x)
    }

    /// The matrix formed by the rows `i` with `keep[i]` true.
    pub fn row_submatrix(&self, keep: &[bool]) -> QMatrix {
        assert_eq!(keep.len(), self.rows, "row mask length mismatch");
        let data: Vec<Row> = self
            .data
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.clone())
            .collect();
        QMatrix {
            rows: data.len(),
            cols: self.cols,
            data,
        }
    }

    /// Row-stack `self` on top of `other` (column counts must agree).
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Insert a dense column on the right and return the extended matrix.
    pub fn with_column(&self, col: &[Rational]) -> QMatrix {
        assert_eq!(col.len(), self.rows, "dimension mismatch");
        let mut out = QMatrix::zero(self.rows, self.cols + 1);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out.set(i, *j, v.clone());
            }
            if !col[i].is_zero() {
                out.set(i, self.cols, col[i].clone());
            }
        }
        out
    }
}

/// Incremental rank tracker: feed vectors one at a time and learn whether
/// each enlarges the span so far. Used for completing coboundary bases to
/// cocycle bases and for independence checks modulo a subspace.
#[derive(Clone, Debug, Default)]
pub struct SpanBuilder {
    /// Reduced rows keyed by leading column.
    rows: BTreeMap<usize, Vec<Rational>>,
    dim: usize,
}

impl SpanBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current dimension of the span.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduce `v` against the span; returns the residual (empty-support means
    /// `v` was already in the span).
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (lead, row) in &self.rows {
            if !v[*lead].is_zero() {
                let f = v[*lead].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &f * b;
                }
            }
        }
        v
    }

    /// True if `v` lies in the current span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Rational::is_zero)
    }

    /// Try to add `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v.to_vec());
        let Some(lead) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[lead].recip();
        for c in r.iter_mut() {
            *c *= &inv;
        }
        // Keep rows mutually reduced so later reductions are cheap.
        let mut updates = Vec::new();
        for (l, row) in &self.rows {
            if !row[lead].is_zero() {
                let f = row[lead].clone();
                let new_row: Vec<Rational> = row
                    .iter()
                    .zip(&r)
                    .map(|(a, b)| a - &(&f * b))
                    .collect();
                updates.push((*l, new_row));
            }
        }
        for (l, row) in updates {
            self.rows.insert(l, row);
        }
        self.rows.insert(lead, r);
        self.dim += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn dense(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(dense(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(dense(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(dense(&[&[0, 0], &[0, 0]]).rank(), 0);
        // 3x3 with one dependent row.
        assert_eq!(dense(&[&[1, 2, 3], &[4, 5, 6], &[5, 7, 9]]).rank(), 2);
    }

    #[test]
    fn kernel_satisfies_definition() {
        let a = dense(&[&[1, 2, 3], &[4, 5, 6]]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(a.mul_vec(v).iter().all(Rational::is_zero));
        }
        // Exact kernel direction of [[1,2,3],[4,5,6]] is (1,-2,1).
        let v = &ker[0];
        let scale = v[2].clone();
        assert_eq!(&v[0] / &scale, rat(1));
        assert_eq!(&v[1] / &scale, rat(-2));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = dense(&[&[2, 0], &[0, 4]]);
        let x = a.solve(&[rat(1), rat(2)]).unwrap();
        assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]);

        let b = dense(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[rat(0), rat(1)]).is_none());
        let x = b.solve(&[rat(1), rat(2)]).unwrap();
        assert!(b
            .mul_vec(&x)
            .iter()
            .zip([rat(1), rat(2)])
            .all(|(l, r)| *l == r));
    }

    #[test]
    fn rank_is_invariant_under_row_permutation_and_scaling() {
        let a = dense(&[&[1, 2, 3], &[0, 1, 1], &[2, 5, 7]]);
        let b = dense(&[&[2, 5, 7], &[2, 4, 6], &[0, 3, 3]]);
        assert_eq!(a.rank(), b.rank());
    }

    #[test]
    fn span_builder_tracks_rank_incrementally() {
        let mut sb = SpanBuilder::new();
        assert!(sb.insert(&[rat(1), rat(0), rat(1)]));
        assert!(sb.insert(&[rat(0), rat(1), rat(1)]));
        // Dependent vector.
        assert!(!sb.insert(&[rat(2), rat(3), rat(5)]));
        assert_eq!(sb.dim(), 2);
        assert!(sb.contains(&[rat(1), rat(1), rat(2)]));
        assert!(!sb.contains(&[rat(1), rat(1), rat(0)]));
        assert!(sb.insert(&[rat(1), rat(1), rat(0)]));
        assert_eq!(sb.dim(), 3);
    }
}
