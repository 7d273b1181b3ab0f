//! Sparse elimination on unit pivots. Every row and column operation used is
//! invertible over the coefficient ring, so the matrix is equivalent to
//! `I_r ⊕ remainder`. Over a field the remainder is zero.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::dense::{self, DenseMat};
use super::matrix::SparseMatrix;
use super::ring::{gcd, Arith, CoeffRing, Scalar};
use crate::error::{Error, Result};

pub struct Eliminated {
    pub unit_pivots: usize,
    /// Surviving rows restricted to surviving nonzero columns.
    pub remainder: DenseMat,
    pub remainder_cols: usize,
}

type Row = Vec<(usize, Scalar)>;

fn axpy(ar: &Arith, target: &Row, f: Scalar, pivot: &Row) -> Row {
    // target - f * pivot
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i]);
            i += 1;
        } else if cj < ci {
            let v = ar.neg(ar.mul(f, pivot[j].1));
            if v != 0 {
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = ar.sub(target[i].1, ar.mul(f, pivot[j].1));
            if v != 0 {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Max number of dense remainder cells we are willing to allocate.
const DENSE_LIMIT: usize = 1 << 26;

pub fn unit_eliminate(m: &SparseMatrix) -> Result<Eliminated> {
    let ar = m.ring().arith();
    let ncols = m.cols();
    let mut rows: Vec<Option<Row>> = (0..m.rows()).map(|r| Some(m.row_vec(r))).collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut col_cnt = vec![0usize; ncols];
    let mut col_dead = vec![false; ncols];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row.as_ref().unwrap() {
            col_rows[c].push(r);
            col_cnt[c] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = rows
        .iter()
        .enumerate()
        .filter_map(|(r, row)| {
            let l = row.as_ref().unwrap().len();
            (l > 0).then_some(Reverse((l, r)))
        })
        .collect();
    let mut pivots = 0;
    while let Some(Reverse((len, r))) = heap.pop() {
        let Some(row) = rows[r].as_ref() else { continue };
        if row.len() != len || len == 0 {
            continue;
        }
        let Some(&(pc, pv)) = row
            .iter()
            .filter(|(_, v)| ar.is_unit(*v))
            .min_by_key(|(c, _)| col_cnt[*c])
        else {
            continue;
        };
        let pivot = rows[r].take().unwrap();
        for &(c, _) in &pivot {
            col_cnt[c] -= 1;
        }
        let inv = ar.inv(pv).unwrap();
        let mut targets = std::mem::take(&mut col_rows[pc]);
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            let Some(trow) = rows[t].as_ref() else { continue };
            let Ok(pos) = trow.binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let f = ar.mul(trow[pos].1, inv);
            let new = axpy(&ar, trow, f, &pivot);
            // column bookkeeping
            let old = rows[t].take().unwrap();
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < new.len() {
                let ci = old.get(i).map_or(usize::MAX, |e| e.0);
                let cj = new.get(j).map_or(usize::MAX, |e| e.0);
                if ci < cj {
                    col_cnt[ci] -= 1;
                    i += 1;
                } else if cj < ci {
                    col_cnt[cj] += 1;
                    col_rows[cj].push(t);
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
            if !new.is_empty() {
                heap.push(Reverse((new.len(), t)));
            }
            rows[t] = Some(new);
        }
        col_dead[pc] = true;
        pivots += 1;
    }
    let live: Vec<Row> = rows.into_iter().flatten().filter(|r| !r.is_empty()).collect();
    let mut col_map = vec![usize::MAX; ncols];
    let mut nc = 0;
    for row in &live {
        for &(c, _) in row {
            debug_assert!(!col_dead[c]);
            if col_map[c] == usize::MAX {
                col_map[c] = nc;
                nc += 1;
            }
        }
    }
    if live.len().saturating_mul(nc) > DENSE_LIMIT {
        return Err(Error::Guard(format!(
            "sparse elimination left a {}x{} non-unit remainder",
            live.len(),
            nc
        )));
    }
    let mut remainder = dense::zeros(live.len(), nc);
    for (i, row) in live.iter().enumerate() {
        for &(c, v) in row {
            remainder[i][col_map[c]] = v;
        }
    }
    Ok(Eliminated {
        unit_pivots: pivots,
        remainder,
        remainder_cols: nc,
    })
}

/// Nonzero invariant factors, in divisibility order. Over Z these are
/// positive integers; over Z/n they are divisors of n (units included as 1);
/// over a field they are all 1.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<Scalar>> {
    let e = unit_eliminate(m)?;
    let mut out = vec![1; e.unit_pivots];
    match m.ring() {
        CoeffRing::FiniteField { .. } => {
            debug_assert!(e.remainder.is_empty());
        }
        CoeffRing::Integers => {
            let s = dense::snf_z(&e.remainder, e.remainder_cols, false);
            out.extend(s.diag.into_iter().filter(|&d| d != 0));
        }
        CoeffRing::IntegersModN { n } => {
            let n = n as i128;
            let s = dense::snf_z(&e.remainder, e.remainder_cols, false);
            out.extend(
                s.diag
                    .into_iter()
                    .map(|d| gcd(d, n))
                    .filter(|&g| g != n),
            );
        }
    }
    Ok(out)
}

/// Rank over a field, or the rank over Q of an integer matrix.
pub fn rank(m: &SparseMatrix) -> Result<usize> {
    match m.ring() {
        CoeffRing::IntegersModN { n } if !super::ring::is_prime(n) => Err(Error::UnsupportedRing(
            format!("rank is not defined over {}", m.ring()),
        )),
        _ => Ok(invariant_factors(m)?.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_invariants() {
        let z = CoeffRing::Integers;
        let m = SparseMatrix::from_dense(z, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(invariant_factors(&m).unwrap(), vec![2, 6, 12]);
        let m = SparseMatrix::from_dense(z, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(invariant_factors(&m).unwrap(), vec![1, 1, 2]);
    }

    #[test]
    fn field_rank() {
        let f2 = CoeffRing::prime_field(2);
        let m = SparseMatrix::from_dense(f2, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank(&m).unwrap(), 2);
    }

    #[test]
    fn mod_n_invariants() {
        let r = CoeffRing::IntegersModN { n: 4 };
        let m = SparseMatrix::from_dense(r, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(invariant_factors(&m).unwrap(), vec![2, 2]);
        let r6 = CoeffRing::IntegersModN { n: 6 };
        let m = SparseMatrix::from_dense(r6, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(invariant_factors(&m).unwrap(), vec![1]);
    }
}
