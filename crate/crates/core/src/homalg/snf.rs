//! Smith normal form with transforms over Z and Z/n.

use super::dense::{self, DenseMat};
use super::matrix::SparseMatrix;
use super::ring::{ext_gcd, gcd, CoeffRing, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Snf {
    pub u: SparseMatrix,
    pub s: SparseMatrix,
    pub v: SparseMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i))
            .collect()
    }
}

/// A unit `u` of Z/n with `d ≡ gcd(d, n)·u (mod n)`.
fn unit_part(d: i128, n: i128) -> i128 {
    let g = gcd(d, n);
    if g == n {
        return 1;
    }
    let step = n / g;
    let t0 = (d / g).rem_euclid(step);
    (0..g)
        .map(|j| t0 + j * step)
        .find(|&t| gcd(t, n) == 1)
        .expect("unit decomposition exists in Z/n")
}

/// `U·M·V = S` with `U`, `V` invertible and `S` diagonal with successive
/// divisibility. Over Z/n the diagonal entries are divisors of `n`
/// (zero standing for `n`).
pub fn smith_normal_form(m: &SparseMatrix) -> Result<Snf> {
    let ring = m.ring();
    let (rows, cols) = m.shape();
    let lifted: DenseMat = m.to_dense();
    let s = dense::snf_z(&lifted, cols, true);
    let mut u = s.u.unwrap();
    let v = s.v.unwrap();
    let mut diag = s.diag;
    match ring {
        CoeffRing::Integers => {}
        CoeffRing::IntegersModN { n } => {
            let n = n as i128;
            for (i, d) in diag.iter_mut().enumerate() {
                let dm = d.rem_euclid(n);
                let unit = unit_part(dm, n);
                let (_, inv, _) = ext_gcd(unit, n);
                for x in u[i].iter_mut() {
                    *x = (*x * inv).rem_euclid(n);
                }
                *d = gcd(dm, n) % n;
            }
            // reduction mod n can break the "nonzero first" ordering only by
            // turning entries into zero, which are already divisible by all
            // preceding ones; divisibility chain is preserved.
        }
        CoeffRing::FiniteField { .. } => {
            return Err(Error::UnsupportedRing(
                "Smith normal form over a finite field; use the rank instead".into(),
            ))
        }
    }
    let to_sparse = |d: &DenseMat, c: usize| {
        SparseMatrix::from_triplets(
            ring,
            d.len(),
            c,
            d.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &x)| (i, j, x))),
        )
    };
    let s_mat = SparseMatrix::from_triplets(
        ring,
        rows,
        cols,
        diag.iter().enumerate().map(|(i, &d)| (i, i, d)),
    );
    Ok(Snf {
        u: to_sparse(&u, rows),
        s: s_mat,
        v: to_sparse(&v, cols),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &SparseMatrix, snf: &Snf) {
        let prod = snf.u.mul(m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(prod, snf.s);
    }

    #[test]
    fn zero_one_by_one() {
        let m = SparseMatrix::from_dense(CoeffRing::Integers, &[vec![0]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal(), vec![0]);
        check(&m, &s);
    }

    #[test]
    fn diag_2_3_over_z() {
        let m = SparseMatrix::from_dense(CoeffRing::Integers, &[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal(), vec![1, 6]);
        check(&m, &s);
    }

    #[test]
    fn twos_over_z4() {
        let r = CoeffRing::IntegersModN { n: 4 };
        let m = SparseMatrix::from_dense(r, &[vec![2, 0], vec![0, 2]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal(), vec![2, 2]);
        check(&m, &s);
    }

    #[test]
    fn unit_normalization_mod_n() {
        let r = CoeffRing::IntegersModN { n: 12 };
        let m = SparseMatrix::from_dense(r, &[vec![10, 0], vec![0, 9]]);
        let s = smith_normal_form(&m).unwrap();
        check(&m, &s);
        let d = s.diagonal();
        assert!(d.iter().all(|&x| x == 0 || 12 % x == 0));
        assert_eq!(d, vec![1, 6]);
    }

    #[test]
    fn rejects_fields() {
        let m = SparseMatrix::from_dense(CoeffRing::prime_field(5), &[vec![1]]);
        assert!(smith_normal_form(&m).is_err());
    }
}
