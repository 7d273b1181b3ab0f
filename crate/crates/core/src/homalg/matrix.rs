//! Immutable sparse matrices over a [`CoeffRing`], stored row-compressed.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ring::{Arith, CoeffRing, Scalar};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<Scalar>,
}

/// Coordinate-list form used for interchange.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Triplets {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Scalar)>,
}

impl SparseMatrix {
    /// Builds a matrix from arbitrary triplets: duplicates are summed, zeros dropped.
    pub fn from_triplets<I>(ring: CoeffRing, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let ar = ring.arith();
        let mut per_row: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            per_row[r].push((c, ar.normalize(v)));
        }
        Self::from_rows(ring, cols, per_row, &ar)
    }

    fn from_rows(
        ring: CoeffRing,
        cols: usize,
        per_row: Vec<Vec<(usize, Scalar)>>,
        ar: &Arith,
    ) -> Self {
        let rows = per_row.len();
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in per_row {
            row.sort_unstable_by_key(|e| e.0);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                let mut v = row[i].1;
                i += 1;
                while i < row.len() && row[i].0 == c {
                    v = ar.add(v, row[i].1);
                    i += 1;
                }
                if v != 0 {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            ring,
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        }
    }

    /// Rows given as already-normalized sparse vectors.
    pub fn from_sparse_rows(ring: CoeffRing, cols: usize, rows: Vec<Vec<(usize, Scalar)>>) -> Self {
        let ar = ring.arith();
        Self::from_rows(ring, cols, rows, &ar)
    }

    pub fn zeros(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            ring,
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        Self::from_triplets(ring, n, n, (0..n).map(|i| (i, i, 1)))
    }

    pub fn from_dense(ring: CoeffRing, rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_triplets(
            ring,
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v))),
        )
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }
    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Scalar)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn row_vec(&self, r: usize) -> Vec<(usize, Scalar)> {
        self.row(r).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.col_idx[a..b].binary_search(&c) {
            Ok(i) => self.vals[a + i],
            Err(_) => 0,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn to_triplets(&self) -> Triplets {
        Triplets {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries().collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut per_row: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            per_row[c].push((r, v));
        }
        SparseMatrix::from_sparse_rows(self.ring, self.rows, per_row)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Shape(format!(
                "ring mismatch: {} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ar = self.ring.arith();
        let rows = par::map_range(self.rows, |r| {
            let mut acc: HashMap<usize, Scalar> = HashMap::new();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    let e = acc.entry(c).or_insert(0);
                    *e = ar.add(*e, ar.mul(a, b));
                }
            }
            acc.into_iter().filter(|e| e.1 != 0).collect::<Vec<_>>()
        });
        Ok(SparseMatrix::from_rows(self.ring, other.cols, rows, &ar))
    }

    fn combine(&self, other: &Self, sign: Scalar) -> Result<Self> {
        self.check_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let ar = self.ring.arith();
        let neg = sign < 0;
        let rows = (0..self.rows)
            .map(|r| {
                let mut v: Vec<(usize, Scalar)> = self.row(r).collect();
                v.extend(other.row(r).map(|(c, x)| (c, if neg { ar.neg(x) } else { x })));
                v
            })
            .collect();
        Ok(SparseMatrix::from_rows(self.ring, self.cols, rows, &ar))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scale(&self, s: Scalar) -> Self {
        let ar = self.ring.arith();
        let s = ar.normalize(s);
        let rows = (0..self.rows)
            .map(|r| self.row(r).map(|(c, v)| (c, ar.mul(s, v))).collect())
            .collect();
        SparseMatrix::from_rows(self.ring, self.cols, rows, &ar)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ring.arith().from_int(-1))
    }

    /// Applies the matrix to a sparse column vector.
    pub fn apply(&self, v: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        let ar = self.ring.arith();
        let mut dense: HashMap<usize, Scalar> = HashMap::new();
        let lookup: HashMap<usize, Scalar> = v.iter().copied().collect();
        for r in 0..self.rows {
            let mut s = 0;
            for (c, a) in self.row(r) {
                if let Some(&x) = lookup.get(&c) {
                    s = ar.add(s, ar.mul(a, x));
                }
            }
            if s != 0 {
                dense.insert(r, s);
            }
        }
        let mut out: Vec<_> = dense.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.cols];
        for (j, &c) in cols.iter().enumerate() {
            col_map[c] = j;
        }
        let new_rows = rows
            .iter()
            .map(|&r| {
                self.row(r)
                    .filter(|(c, _)| col_map[*c] != usize::MAX)
                    .map(|(c, v)| (col_map[c], v))
                    .collect()
            })
            .collect();
        SparseMatrix::from_sparse_rows(self.ring, cols.len(), new_rows)
    }

    /// Reinterprets the entries over a different ring (e.g. Z -> F_p).
    pub fn change_ring(&self, ring: CoeffRing) -> Self {
        let ar = ring.arith();
        let rows = (0..self.rows)
            .map(|r| self.row(r).map(|(c, v)| (c, ar.from_int(v))).collect())
            .collect();
        SparseMatrix::from_rows(ring, self.cols, rows, &ar)
    }

    /// Block-diagonal / general placement: embeds `self` into a larger zero matrix.
    pub fn embed(&self, rows: usize, cols: usize, row_off: usize, col_off: usize) -> Self {
        assert!(row_off + self.rows <= rows && col_off + self.cols <= cols);
        SparseMatrix::from_triplets(
            self.ring,
            rows,
            cols,
            self.entries().map(|(r, c, v)| (r + row_off, c + col_off, v)),
        )
    }

    pub fn hstack(blocks: &[&SparseMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Shape("empty hstack".into()))?;
        let rows = first.rows;
        let mut cols = 0;
        let mut ents = Vec::new();
        for b in blocks {
            if b.rows != rows {
                return Err(Error::Shape("hstack row mismatch".into()));
            }
            ents.extend(b.entries().map(|(r, c, v)| (r, c + cols, v)));
            cols += b.cols;
        }
        Ok(SparseMatrix::from_triplets(first.ring, rows, cols, ents))
    }

    pub fn vstack(blocks: &[&SparseMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::Shape("empty vstack".into()))?;
        let cols = first.cols;
        let mut rows = 0;
        let mut ents = Vec::new();
        for b in blocks {
            if b.cols != cols {
                return Err(Error::Shape("vstack column mismatch".into()));
            }
            ents.extend(b.entries().map(|(r, c, v)| (r + rows, c, v)));
            rows += b.rows;
        }
        Ok(SparseMatrix::from_triplets(first.ring, rows, cols, ents))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_summed_and_zeros_dropped() {
        let m = SparseMatrix::from_triplets(
            CoeffRing::IntegersModN { n: 3 },
            2,
            2,
            vec![(0, 0, 1), (0, 0, 2), (1, 1, 4)],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), 1);
    }

    #[test]
    fn product_and_transpose() {
        let z = CoeffRing::Integers;
        let a = SparseMatrix::from_dense(z, &[vec![1, 2], vec![0, 3]]);
        let b = SparseMatrix::from_dense(z, &[vec![4, 0], vec![5, 6]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.to_dense(), vec![vec![14, 12], vec![15, 18]]);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![2, 3]]);
        assert!(a.mul(&SparseMatrix::zeros(z, 3, 3)).is_err());
        assert!(ab.sub(&ab).unwrap().is_zero());
    }
}
