//! Black-box functors on finite free modules over a finite field. A map
//! `f: F_q^n → F_q^m` is an `m × n` matrix.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::homalg::dense::{identity, mat_mul, DenseMat};
use crate::homalg::{Arith, CoeffRing, Scalar};

pub trait Functor: Send + Sync {
    fn name(&self) -> String;
    fn field(&self) -> CoeffRing;
    fn dim(&self, n: usize) -> usize;
    /// `F(f)` for `f` of shape `m × n`.
    fn on_map(&self, f: &DenseMat, n: usize, m: usize) -> DenseMat;
}

pub type FunctorRef = Arc<dyn Functor>;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub struct Identity(pub CoeffRing);

impl Functor for Identity {
    fn name(&self) -> String {
        "id".into()
    }
    fn field(&self) -> CoeffRing {
        self.0
    }
    fn dim(&self, n: usize) -> usize {
        n
    }
    fn on_map(&self, f: &DenseMat, _: usize, _: usize) -> DenseMat {
        f.clone()
    }
}

/// `X ↦ X^{⊗k}`, words in lexicographic order.
pub struct TensorPower(pub CoeffRing, pub usize);

pub fn kron(ar: &Arith, a: &DenseMat, a_cols: usize, b: &DenseMat, b_cols: usize) -> DenseMat {
    let mut out = vec![vec![0; a_cols * b_cols]; a.len() * b.len()];
    for (i, ra) in a.iter().enumerate() {
        for (j, &x) in ra.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, rb) in b.iter().enumerate() {
                let row = &mut out[i * b.len() + k];
                for (l, &y) in rb.iter().enumerate() {
                    row[j * b_cols + l] = ar.mul(x, y);
                }
            }
        }
    }
    out
}

impl Functor for TensorPower {
    fn name(&self) -> String {
        format!("tensor{}", self.1)
    }
    fn field(&self) -> CoeffRing {
        self.0
    }
    fn dim(&self, n: usize) -> usize {
        n.pow(self.1 as u32)
    }
    fn on_map(&self, f: &DenseMat, n: usize, m: usize) -> DenseMat {
        let ar = self.0.arith();
        let mut acc = identity(&ar, 1);
        let mut cols = 1;
        for _ in 0..self.1 {
            acc = kron(&ar, &acc, cols, f, n);
            cols *= n;
        }
        debug_assert_eq!(acc.len(), m.pow(self.1 as u32));
        acc
    }
}

/// Sorted words of length `k` in `0..n` (multisets), lexicographic.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Distinct rearrangements of a sorted word.
fn rearrangements(w: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = w.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Symmetric tensors `(X^{⊗k})^{Σ_k}`, with basis the orbit sums of words.
pub struct SymTensors(pub CoeffRing, pub usize);

impl Functor for SymTensors {
    fn name(&self) -> String {
        format!("sym{}", self.1)
    }
    fn field(&self) -> CoeffRing {
        self.0
    }
    fn dim(&self, n: usize) -> usize {
        if self.1 == 0 {
            1
        } else {
            binom(n + self.1 - 1, self.1)
        }
    }
    fn on_map(&self, f: &DenseMat, n: usize, m: usize) -> DenseMat {
        let ar = self.0.arith();
        let (src, dst) = (multisets(n, self.1), multisets(m, self.1));
        let mut out = vec![vec![0; src.len()]; dst.len()];
        for (j, a) in src.iter().enumerate() {
            let words = rearrangements(a);
            for (i, b) in dst.iter().enumerate() {
                // the image is symmetric; read its coefficient at the sorted word b
                let mut s = 0;
                for u in &words {
                    let mut t = 1;
                    for (&bi, &ui) in b.iter().zip(u) {
                        t = ar.mul(t, f[bi][ui]);
                        if t == 0 {
                            break;
                        }
                    }
                    s = ar.add(s, t);
                }
                out[i][j] = s;
            }
        }
        out
    }
}

/// The symmetric power `X^{⊗k}/Σ_k`, with the monomial basis.
pub struct SymPower(pub CoeffRing, pub usize);

impl Functor for SymPower {
    fn name(&self) -> String {
        format!("symq{}", self.1)
    }
    fn field(&self) -> CoeffRing {
        self.0
    }
    fn dim(&self, n: usize) -> usize {
        SymTensors(self.0, self.1).dim(n)
    }
    fn on_map(&self, f: &DenseMat, n: usize, m: usize) -> DenseMat {
        let ar = self.0.arith();
        let (src, dst) = (multisets(n, self.1), multisets(m, self.1));
        let pos: HashMap<&[usize], usize> = dst.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
        let mut out = vec![vec![0; src.len()]; dst.len()];
        for (j, a) in src.iter().enumerate() {
            // Π_i f(x_{a_i}), expanded factor by factor over sorted words
            let mut poly: HashMap<Vec<usize>, Scalar> = HashMap::from([(Vec::new(), 1)]);
            for &ai in a {
                let mut next: HashMap<Vec<usize>, Scalar> = HashMap::new();
                for (mono, c) in &poly {
                    for (r, row) in f.iter().enumerate() {
                        if row[ai] == 0 {
                            continue;
                        }
                        let mut mm = mono.clone();
                        let at = mm.partition_point(|&x| x <= r);
                        mm.insert(at, r);
                        let e = next.entry(mm).or_insert(0);
                        *e = ar.add(*e, ar.mul(*c, row[ai]));
                    }
                }
                poly = next;
            }
            for (mono, c) in poly {
                if c != 0 {
                    out[pos[mono.as_slice()]][j] = c;
                }
            }
        }
        out
    }
}

/// `F ∘ G`.
pub struct Compose(pub FunctorRef, pub FunctorRef);

impl Functor for Compose {
    fn name(&self) -> String {
        format!("{}∘{}", self.0.name(), self.1.name())
    }
    fn field(&self) -> CoeffRing {
        self.0.field()
    }
    fn dim(&self, n: usize) -> usize {
        self.0.dim(self.1.dim(n))
    }
    fn on_map(&self, f: &DenseMat, n: usize, m: usize) -> DenseMat {
        let g = self.1.on_map(f, n, m);
        self.0.on_map(&g, self.1.dim(n), self.1.dim(m))
    }
}

/// Registry names: `id`, `tensor<k>`, `sym<k>`, `symq<k>`, and composites
/// joined by `∘` or `.` (outermost first).
pub fn functor_by_name(name: &str, field: CoeffRing) -> Result<FunctorRef> {
    if !field.is_field() {
        return Err(Error::UnsupportedRing(format!("functors are defined over finite fields, not {field}")));
    }
    let parts: Vec<&str> = name.split(['∘', '.']).map(str::trim).collect();
    if parts.len() > 1 {
        let mut acc = functor_by_name(parts[parts.len() - 1], field)?;
        for p in parts[..parts.len() - 1].iter().rev() {
            acc = Arc::new(Compose(functor_by_name(p, field)?, acc));
        }
        return Ok(acc);
    }
    let degree = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
    if name == "id" {
        Ok(Arc::new(Identity(field)))
    } else if let Some(k) = degree("tensor") {
        Ok(Arc::new(TensorPower(field, k)))
    } else if let Some(k) = degree("symq") {
        Ok(Arc::new(SymPower(field, k)))
    } else if let Some(k) = degree("sym") {
        Ok(Arc::new(SymTensors(field, k)))
    } else {
        Err(Error::Invalid(format!("unknown functor {name:?} (id, tensor<k>, sym<k>, symq<k>, F∘G)")))
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: CoeffRing, rows: usize, cols: usize) -> DenseMat {
    let q = field.order().expect("finite field") as Scalar;
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..q)).collect()).collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FunctorLawReport {
    pub functor: String,
    pub reduced: bool,
    pub identities: bool,
    pub compositions: usize,
    pub failures: Vec<String>,
}

impl FunctorLawReport {
    pub fn pass(&self) -> bool {
        self.reduced && self.identities && self.failures.is_empty()
    }
}

/// `F(0) = 0`, `F(id) = id` and `F(g∘f) = F(g)F(f)` on random maps between
/// dimensions up to `max_dim`.
pub fn check_functor_laws<R: Rng>(f: &dyn Functor, rng: &mut R, max_dim: usize, trials: usize) -> FunctorLawReport {
    let field = f.field();
    let ar = field.arith();
    let identities = (0..=max_dim).all(|n| f.on_map(&identity(&ar, n), n, n) == identity(&ar, f.dim(n)));
    let mut failures = Vec::new();
    for _ in 0..trials {
        let (a, b, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
        let u = random_matrix(rng, field, b, a);
        let v = random_matrix(rng, field, c, b);
        let lhs = f.on_map(&mat_mul(&ar, &v, &u, a), a, c);
        let rhs = mat_mul(&ar, &f.on_map(&v, b, c), &f.on_map(&u, a, b), f.dim(a));
        if lhs != rhs {
            failures.push(format!("F(g∘f) ≠ F(g)F(f) for dims {a} → {b} → {c}"));
        }
    }
    FunctorLawReport {
        functor: f.name(),
        reduced: f.dim(0) == 0,
        identities,
        compositions: trials,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn dims_and_laws() {
        let f2 = CoeffRing::prime_field(2);
        let f4 = CoeffRing::field(2, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for name in ["id", "tensor2", "sym2", "sym3", "symq2", "symq3", "sym2∘tensor2", "tensor2.sym2"] {
            for field in [f2, f4, CoeffRing::prime_field(3)] {
                let f = functor_by_name(name, field).unwrap();
                let r = check_functor_laws(f.as_ref(), &mut rng, 3, 6);
                assert!(r.pass(), "{name} over {field}: {r:?}");
            }
        }
        let s = functor_by_name("sym3", f2).unwrap();
        assert_eq!((0..4).map(|n| s.dim(n)).collect::<Vec<_>>(), vec![0, 1, 4, 10]);
        assert!(functor_by_name("wedge2", f2).is_err());
    }

    #[test]
    fn rearrangement_counts() {
        assert_eq!(rearrangements(&[0, 0, 1, 2]).len(), 12);
        assert_eq!(rearrangements(&[1]).len(), 1);
    }
}
