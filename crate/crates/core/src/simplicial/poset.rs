//! Finite posets with a bitset order relation.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FinPoset {
    pub labels: Vec<String>,
    /// `up[i]` has bit `j` set iff `i ≤ j`.
    up: Vec<Vec<u64>>,
    pub bottom: Option<usize>,
    pub top: Option<usize>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl FinPoset {
    /// From an order predicate; the axioms are checked.
    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut up = vec![vec![0u64; words(n)]; n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
        }
        let p = FinPoset::from_up_sets_unchecked(labels, up);
        p.check_axioms()?;
        Ok(p)
    }

    /// From precomputed up-sets (bitsets); axioms are not checked.
    pub fn from_up_sets_unchecked(labels: Vec<String>, up: Vec<Vec<u64>>) -> Self {
        let mut p = FinPoset {
            labels,
            up,
            bottom: None,
            top: None,
        };
        p.bottom = p.find_extreme(true);
        p.top = p.find_extreme(false);
        if p.len() < 2 || p.bottom == p.top {
            p.bottom = p.bottom.filter(|_| p.len() >= 2);
            p.top = p.top.filter(|_| p.len() >= 2);
        }
        p
    }

    /// From precomputed up-sets with known bounds; nothing is checked.
    pub fn from_up_sets_unchecked_bounded(labels: Vec<String>, up: Vec<Vec<u64>>, bottom: usize, top: usize) -> Self {
        FinPoset {
            labels,
            up,
            bottom: Some(bottom),
            top: Some(top),
        }
    }

    fn find_extreme(&self, bottom: bool) -> Option<usize> {
        let n = self.len();
        (0..n).find(|&x| {
            (0..n).all(|y| if bottom { self.leq(x, y) } else { self.leq(y, x) })
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i][j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Strict upper set of `i`, ascending.
    pub fn above(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in self.up[i].iter().enumerate() {
            let mut b = bits;
            while b != 0 {
                let t = b.trailing_zeros() as usize;
                let j = w * 64 + t;
                if j != i {
                    out.push(j);
                }
                b &= b - 1;
            }
        }
        out
    }

    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(Error::Axiom(format!("not reflexive at {}", self.labels[i])));
            }
            for j in self.above(i) {
                if self.leq(j, i) {
                    return Err(Error::Axiom(format!(
                        "not antisymmetric: {} and {}",
                        self.labels[i], self.labels[j]
                    )));
                }
                // up(j) ⊆ up(i)
                if self.up[j].iter().zip(&self.up[i]).any(|(a, b)| a & !b != 0) {
                    return Err(Error::Axiom(format!(
                        "not transitive above {} ≤ {}",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Requires a marked bottom and top with ⊥ ≠ ⊤.
    pub fn bounds(&self) -> Result<(usize, usize)> {
        match (self.bottom, self.top) {
            (Some(b), Some(t)) if b != t => Ok((b, t)),
            _ => Err(Error::Invalid("poset needs distinct bottom and top".into())),
        }
    }

    /// Induced subposet on `keep` (in the given order).
    pub fn subposet(&self, keep: &[usize]) -> FinPoset {
        let n = keep.len();
        let mut up = vec![vec![0u64; words(n)]; n];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                if self.leq(i, j) {
                    up[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
        FinPoset::from_up_sets_unchecked(keep.iter().map(|&i| self.labels[i].clone()).collect(), up)
    }

    /// All strict chains `x_0 < … < x_q`.
    pub fn strict_chains(&self, q: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(q + 1);
        for x in 0..self.len() {
            cur.push(x);
            self.extend_chains(&mut cur, q, None, &mut out);
            cur.pop();
        }
        out
    }

    fn extend_chains(&self, cur: &mut Vec<usize>, q: usize, end: Option<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q + 1 {
            if end.map_or(true, |e| *cur.last().unwrap() == e) {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        for y in self.above(last) {
            if let Some(e) = end {
                if !self.leq(y, e) || (cur.len() < q && y == e) {
                    continue;
                }
            }
            cur.push(y);
            self.extend_chains(cur, q, end, out);
            cur.pop();
        }
    }

    /// Chains `⊥ = x_0 < x_1 < … < x_q = ⊤`.
    pub fn essential_chains(&self, q: usize) -> Result<Vec<Vec<usize>>> {
        let (b, t) = self.bounds()?;
        if q == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur = vec![b];
        self.extend_chains(&mut cur, q, Some(t), &mut out);
        Ok(out)
    }

    /// Length of the longest strict chain.
    pub fn height(&self) -> usize {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.above(i).len()));
        let mut h = vec![0usize; n];
        // process elements with larger up-sets first: they sit lower
        for &i in order.iter().rev() {
            h[i] = self.above(i).iter().map(|&j| h[j] + 1).max().unwrap_or(0);
        }
        h.into_iter().max().unwrap_or(0)
    }
}

/// `0 < 1 < … < n-1`.
pub fn chain_poset(n: usize) -> FinPoset {
    FinPoset::from_fn((0..n).map(|i| i.to_string()).collect(), |i, j| i <= j).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain() {
        let p = chain_poset(2);
        assert_eq!(p.bounds().unwrap(), (0, 1));
        assert_eq!(p.essential_chains(1).unwrap(), vec![vec![0, 1]]);
        assert_eq!(p.strict_chains(1).len(), 1);
        assert_eq!(p.height(), 1);
    }

    #[test]
    fn rejects_non_order() {
        assert!(FinPoset::from_fn(vec!["a".into(), "b".into()], |_, _| true).is_err());
    }

    #[test]
    fn point_has_no_bounds() {
        let p = chain_poset(1);
        assert!(p.bounds().is_err());
    }
}
