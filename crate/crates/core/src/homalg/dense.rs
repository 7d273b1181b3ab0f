//! Dense linear algebra: Gaussian elimination over fields and Smith normal
//! form over Z. Used for small blocks and for the remainder left after
//! sparse elimination.

use super::ring::{Arith, Scalar};

pub type DenseMat = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> DenseMat {
    vec![vec![0; cols]; rows]
}

pub fn identity(ar: &Arith, n: usize) -> DenseMat {
    let one = ar.from_int(1);
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = one;
    }
    m
}

pub fn transpose(m: &DenseMat, cols: usize) -> DenseMat {
    let mut t = zeros(cols, m.len());
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j][i] = v;
        }
    }
    t
}

pub fn mat_mul(ar: &Arith, a: &DenseMat, b: &DenseMat, b_cols: usize) -> DenseMat {
    let mut out = zeros(a.len(), b_cols);
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b[k].iter().enumerate() {
                if y != 0 {
                    out[i][j] = ar.add(out[i][j], ar.mul(x, y));
                }
            }
        }
    }
    out
}

pub fn mat_vec(ar: &Arith, a: &DenseMat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0, |acc, (&x, &y)| ar.add(acc, ar.mul(x, y)))
        })
        .collect()
}

/// Reduced row echelon form over a field.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Nonzero rows of the reduced matrix, one per pivot.
    pub rows: DenseMat,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Non-pivot column indices, in increasing order.
    pub fn free_cols(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces `v` against the row space; the result vanishes on pivot columns.
    pub fn reduce(&self, ar: &Arith, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = ar.sub(*x, ar.mul(c, y));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, ar: &Arith, v: &[Scalar]) -> bool {
        self.reduce(ar, v).iter().all(|&x| x == 0)
    }
}

pub fn rref(ar: &Arith, m: &DenseMat, cols: usize) -> Rref {
    let mut a: DenseMat = m.iter().map(|r| r.iter().map(|&x| ar.normalize(x)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = ar.inv(a[r][c]).expect("rref requires a field");
        for x in a[r].iter_mut() {
            *x = ar.mul(*x, inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if y != 0 {
                        *x = ar.sub(*x, ar.mul(f, y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Rref { rows: a, pivots, cols }
}

pub fn rank(ar: &Arith, m: &DenseMat, cols: usize) -> usize {
    rref(ar, m, cols).rank()
}

/// Basis of `{x : m x = 0}` over a field, as vectors of length `cols`.
pub fn kernel(ar: &Arith, m: &DenseMat, cols: usize) -> Vec<Vec<Scalar>> {
    let e = rref(ar, m, cols);
    e.free_cols()
        .into_iter()
        .map(|f| {
            let mut v = vec![0; cols];
            v[f] = ar.from_int(1);
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = ar.neg(row[f]);
            }
            v
        })
        .collect()
}

/// Some `x` with `a x = b` over a field, if one exists.
pub fn solve(ar: &Arith, a: &DenseMat, cols: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let aug: DenseMat = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let e = rref(ar, &aug, cols + 1);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0; cols];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        x[p] = row[cols];
    }
    Some(x)
}

pub fn inverse(ar: &Arith, a: &DenseMat) -> Option<DenseMat> {
    let n = a.len();
    let aug: DenseMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ar.from_int(1) } else { 0 }));
            r
        })
        .collect();
    let e = rref(ar, &aug, 2 * n);
    if e.rank() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rows.iter().map(|r| r[n..].to_vec()).collect())
}

fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in Smith normal form")
}

fn ck_sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect("integer overflow in Smith normal form")
}

/// Smith normal form over Z with optional transforms.
#[derive(Clone, Debug)]
pub struct IntSnf {
    /// Diagonal of `S`, length `min(rows, cols)`; nonzero entries come first
    /// and each divides the next.
    pub diag: Vec<Scalar>,
    /// `u · m · v = S`.
    pub u: Option<DenseMat>,
    pub v: Option<DenseMat>,
    pub u_inv: Option<DenseMat>,
    pub v_inv: Option<DenseMat>,
}

impl IntSnf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }
}

struct Tracker {
    on: bool,
    u: DenseMat,
    u_inv: DenseMat,
    v: DenseMat,
    v_inv: DenseMat,
}

impl Tracker {
    // row_i += q row_j
    fn row_add(&mut self, i: usize, j: usize, q: i128) {
        if !self.on {
            return;
        }
        let rj = self.u[j].clone();
        for (x, y) in self.u[i].iter_mut().zip(rj) {
            *x = ck_sub(*x, ck_mul(-q, y));
        }
        // inverse: col_j -= q col_i
        for row in self.u_inv.iter_mut() {
            row[j] = ck_sub(row[j], ck_mul(q, row[i]));
        }
    }
    fn row_swap(&mut self, i: usize, j: usize) {
        if self.on {
            self.u.swap(i, j);
            for row in self.u_inv.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    fn row_neg(&mut self, i: usize) {
        if self.on {
            for x in self.u[i].iter_mut() {
                *x = -*x;
            }
            for row in self.u_inv.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    // col_i += q col_j
    fn col_add(&mut self, i: usize, j: usize, q: i128) {
        if !self.on {
            return;
        }
        for row in self.v.iter_mut() {
            row[i] = ck_sub(row[i], ck_mul(-q, row[j]));
        }
        let ri = self.v_inv[i].clone();
        for (x, y) in self.v_inv[j].iter_mut().zip(ri) {
            *x = ck_sub(*x, ck_mul(q, y));
        }
    }
    fn col_swap(&mut self, i: usize, j: usize) {
        if self.on {
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }
}

/// Smith normal form of an integer matrix, pivoting on the entry of least
/// absolute value.
pub fn snf_z(m: &DenseMat, cols: usize, transforms: bool) -> IntSnf {
    let rows = m.len();
    let mut a = m.clone();
    let z = Arith::Z;
    let mut tr = Tracker {
        on: transforms,
        u: if transforms { identity(&z, rows) } else { Vec::new() },
        u_inv: if transforms { identity(&z, rows) } else { Vec::new() },
        v: if transforms { identity(&z, cols) } else { Vec::new() },
        v_inv: if transforms { identity(&z, cols) } else { Vec::new() },
    };
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        // global least nonzero |entry| in the trailing block
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a[i][j].abs();
                if x != 0 && best.map_or(true, |b| x < b.0) {
                    best = Some((x, i, j));
                    if x == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|b| b.0 == 1) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else {
            diag.extend(std::iter::repeat(0).take(n - t));
            break;
        };
        swap_rows(&mut a, &mut tr, t, pi);
        swap_cols(&mut a, &mut tr, t, pj);
        loop {
            let mut clean = true;
            let p = a[t][t];
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(p);
                    add_row(&mut a, &mut tr, i, t, -q, t);
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(p);
                    add_col(&mut a, &mut tr, j, t, -q, t);
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (a[t][t].abs(), t, t);
                for i in t + 1..rows {
                    let x = a[i][t].abs();
                    if x != 0 && x < best.0 {
                        best = (x, i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = a[t][j].abs();
                    if x != 0 && x < best.0 {
                        best = (x, t, j);
                    }
                }
                swap_rows(&mut a, &mut tr, t, best.1);
                swap_cols(&mut a, &mut tr, t, best.2);
                continue;
            }
            let p = a[t][t];
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => add_row(&mut a, &mut tr, t, i, 1, t),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            tr.row_neg(t);
        }
        diag.push(a[t][t]);
    }
    let (u, u_inv, v, v_inv) = if transforms {
        (Some(tr.u), Some(tr.u_inv), Some(tr.v), Some(tr.v_inv))
    } else {
        (None, None, None, None)
    };
    IntSnf { diag, u, v, u_inv, v_inv }
}

fn swap_rows(a: &mut DenseMat, tr: &mut Tracker, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        tr.row_swap(i, j);
    }
}

fn swap_cols(a: &mut DenseMat, tr: &mut Tracker, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        tr.col_swap(i, j);
    }
}

// row_i += q row_j, touching columns >= from
fn add_row(a: &mut DenseMat, tr: &mut Tracker, i: usize, j: usize, q: i128, from: usize) {
    if q == 0 {
        return;
    }
    let (ri, rj) = if i < j {
        let (lo, hi) = a.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for c in from..ri.len() {
        if rj[c] != 0 {
            ri[c] = ck_sub(ri[c], ck_mul(-q, rj[c]));
        }
    }
    tr.row_add(i, j, q);
}

// col_i += q col_j, touching rows >= from
fn add_col(a: &mut DenseMat, tr: &mut Tracker, i: usize, j: usize, q: i128, from: usize) {
    if q == 0 {
        return;
    }
    for row in a.iter_mut().skip(from) {
        if row[j] != 0 {
            row[i] = ck_sub(row[i], ck_mul(-q, row[j]));
        }
    }
    tr.col_add(i, j, q);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_diag_2_3() {
        let s = snf_z(&vec![vec![2, 0], vec![0, 3]], 2, true);
        assert_eq!(s.diag, vec![1, 6]);
        let z = Arith::Z;
        let m = vec![vec![2, 0], vec![0, 3]];
        let um = mat_mul(&z, s.u.as_ref().unwrap(), &m, 2);
        let umv = mat_mul(&z, &um, s.v.as_ref().unwrap(), 2);
        assert_eq!(umv, vec![vec![1, 0], vec![0, 6]]);
        let uu = mat_mul(&z, s.u.as_ref().unwrap(), s.u_inv.as_ref().unwrap(), 2);
        assert_eq!(uu, identity(&z, 2));
        let vv = mat_mul(&z, s.v.as_ref().unwrap(), s.v_inv.as_ref().unwrap(), 2);
        assert_eq!(vv, identity(&z, 2));
    }

    #[test]
    fn kernel_and_solve_over_f3() {
        let f3 = Arith::Mod(3);
        let a = vec![vec![1, 2, 0], vec![2, 1, 0]];
        let k = kernel(&f3, &a, 3);
        for v in &k {
            assert!(mat_vec(&f3, &a, v).iter().all(|&x| x == 0));
        }
        assert_eq!(k.len(), 2);
        let x = solve(&f3, &a, 3, &[1, 2]).unwrap();
        assert_eq!(mat_vec(&f3, &a, &x), vec![1, 2]);
        let inv = inverse(&f3, &vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(inv, vec![vec![1, 2], vec![0, 1]]);
    }
}
