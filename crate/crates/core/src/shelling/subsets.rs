//! The subset poset `K_k`, disorder, and best completions inside `K`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplicial::FinPoset;

/// Subsets of {1..k} as bitmasks, bit `j − 1` for `j`.
pub type Subset = u32;

pub const MAX_K: usize = 6;

pub fn full(k: usize) -> Subset {
    (1u32 << k) - 1
}

pub fn subset_label(s: Subset) -> String {
    if s == 0 {
        return "∅".into();
    }
    let items: Vec<String> = (0..32).filter(|j| s & (1 << j) != 0).map(|j| (j + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// `K_k`: all subsets of {1..k} ordered by inclusion, indexed by bitmask.
pub fn subset_poset(k: usize) -> Result<FinPoset> {
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::Guard(format!("subset poset needs 1 ≤ k ≤ {MAX_K}, got {k}")));
    }
    let labels = (0..1u32 << k).map(subset_label).collect();
    FinPoset::from_fn(labels, |i, j| i & !j == 0)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct SubsetChain {
    pub k: usize,
    pub chain: Vec<Subset>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DisorderValue {
    pub value: i64,
    /// Inversions `(a, b)` with `b < a`.
    pub pair_set: Vec<(usize, usize)>,
}

impl SubsetChain {
    pub fn new(k: usize, chain: Vec<Subset>) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::Guard(format!("k = {k} out of range")));
        }
        if chain.is_empty() || chain.iter().any(|&s| s & !full(k) != 0) {
            return Err(Error::Invalid("chain must be nonempty subsets of {1..k}".into()));
        }
        if chain.windows(2).any(|w| w[0] & !w[1] != 0) {
            return Err(Error::Invalid("chain is not nested".into()));
        }
        Ok(SubsetChain { k, chain })
    }

    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_strict(&self) -> bool {
        self.chain.windows(2).all(|w| w[0] != w[1])
    }

    /// In `K◇`: misses `∅` at the bottom or `{1..k}` at the top.
    pub fn is_diamond(&self) -> bool {
        self.chain[0] != 0 || *self.chain.last().unwrap() != full(self.k)
    }

    pub fn is_essential(&self) -> bool {
        self.is_strict() && !self.is_diamond()
    }

    pub fn face(&self, i: usize) -> SubsetChain {
        let mut c = self.chain.clone();
        c.remove(i);
        SubsetChain { k: self.k, chain: c }
    }

    pub fn disorder(&self) -> DisorderValue {
        if self.is_diamond() {
            return DisorderValue {
                value: -1,
                pair_set: Vec::new(),
            };
        }
        let mut pairs = Vec::new();
        for a in 2..=self.k {
            for b in 1..a {
                let (ba, bb) = (1 << (a - 1), 1 << (b - 1));
                if self.chain[1..].iter().any(|&s| s & ba != 0 && s & bb == 0) {
                    pairs.push((a, b));
                }
            }
        }
        DisorderValue {
            value: pairs.len() as i64,
            pair_set: pairs,
        }
    }

    /// `s_i` with `S_i = {s_1, …, s_i}`, for an essential `k`-simplex.
    pub fn jump_sequence(&self) -> Option<Vec<usize>> {
        if !self.is_essential() || self.dim() != self.k {
            return None;
        }
        Some(
            self.chain
                .windows(2)
                .map(|w| (w[1] & !w[0]).trailing_zeros() as usize + 1)
                .collect(),
        )
    }

    pub fn from_sequence(s: &[usize]) -> SubsetChain {
        let mut chain = vec![0];
        for &j in s {
            chain.push(chain.last().unwrap() | 1 << (j - 1));
        }
        SubsetChain { k: s.len(), chain }
    }

    /// `(s, c)`: the jumps listed ascending inside each `T_i − T_{i−1}`, and
    /// the index `c_i` of the step containing `s_i`.
    pub fn completion_data(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        if !self.is_essential() {
            return Err(Error::Invalid("best completion needs an essential simplex".into()));
        }
        let mut s = Vec::with_capacity(self.k);
        let mut c = Vec::with_capacity(self.k);
        for (i, w) in self.chain.windows(2).enumerate() {
            let diff = w[1] & !w[0];
            for j in 0..self.k {
                if diff & (1 << j) != 0 {
                    s.push(j + 1);
                    c.push(i + 1);
                }
            }
        }
        Ok((s, c))
    }

    pub fn best_completion(&self) -> Result<SubsetChain> {
        let (s, _) = self.completion_data()?;
        Ok(SubsetChain::from_sequence(&s))
    }

    /// Vertex positions `{0, k} ∪ {j : s_{j+1} < s_j}` whose opposite faces
    /// lower the disorder, for an essential `k`-simplex.
    pub fn lambda_vertices(&self) -> Option<Vec<usize>> {
        let s = self.jump_sequence()?;
        let mut l = vec![0];
        l.extend((1..self.k).filter(|&j| s[j] < s[j - 1]));
        l.push(self.k);
        Some(l)
    }
}

impl std::fmt::Display for SubsetChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.chain.iter().map(|&s| subset_label(s)).collect();
        write!(f, "[{}]", parts.join(" ⊂ "))
    }
}

pub fn max_disorder(k: usize) -> i64 {
    (k * (k.saturating_sub(1)) / 2) as i64
}

/// All permutations of {1..k} in lexicographic order.
pub fn sequences(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, used: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in 1..=k {
            if used & (1 << j) == 0 {
                cur.push(j);
                rec(k, used | 1 << j, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, 0, &mut cur, &mut out);
    out
}

/// Nondegenerate `q`-simplices of `nerve(K_k)`.
pub fn strict_chains(k: usize, q: usize) -> Vec<SubsetChain> {
    let mut out = Vec::new();
    let top = full(k);
    fn rec(k: usize, q: usize, top: Subset, cur: &mut Vec<Subset>, out: &mut Vec<SubsetChain>) {
        if cur.len() == q + 1 {
            out.push(SubsetChain { k, chain: cur.clone() });
            return;
        }
        let last = *cur.last().unwrap();
        let rest = top & !last;
        let mut sub = rest;
        while sub != 0 {
            cur.push(last | sub);
            rec(k, q, top, cur, out);
            cur.pop();
            sub = (sub - 1) & rest;
        }
    }
    for s0 in 0..=top {
        let mut cur = vec![s0];
        rec(k, q, top, &mut cur, &mut out);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_sizes() {
        let p = subset_poset(3).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!((p.bottom, p.top), (Some(0), Some(7)));
        let ess: Vec<_> = strict_chains(3, 3).into_iter().filter(|c| c.is_essential()).collect();
        assert_eq!(ess.len(), 6);
        assert!(subset_poset(7).is_err());
    }

    #[test]
    fn disorder_examples() {
        let c = SubsetChain::new(2, vec![0, 0b10, 0b11]).unwrap();
        assert_eq!(c.disorder().value, 1);
        assert_eq!(c.disorder().pair_set, vec![(2, 1)]);
        for k in 1..=5 {
            let up: Vec<usize> = (1..=k).collect();
            let down: Vec<usize> = (1..=k).rev().collect();
            assert_eq!(SubsetChain::from_sequence(&up).disorder().value, 0);
            assert_eq!(SubsetChain::from_sequence(&down).disorder().value, max_disorder(k));
            let maxima = sequences(k)
                .iter()
                .filter(|s| SubsetChain::from_sequence(s).disorder().value == max_disorder(k))
                .count();
            assert_eq!(maxima, 1);
        }
        assert_eq!(SubsetChain::new(2, vec![0b01, 0b11]).unwrap().disorder().value, -1);
    }

    #[test]
    fn completions() {
        let t = SubsetChain::new(2, vec![0, 0b11]).unwrap();
        assert_eq!(t.best_completion().unwrap().chain, vec![0, 0b01, 0b11]);
        let t = SubsetChain::new(3, vec![0, 0b110, 0b111]).unwrap();
        let s = t.best_completion().unwrap();
        assert_eq!(s.chain, vec![0, 0b010, 0b110, 0b111]);
        assert_eq!(s.disorder(), t.disorder());
        assert_eq!(s.disorder().value, 2);
        let top = SubsetChain::from_sequence(&[3, 1, 2]);
        assert_eq!(top.best_completion().unwrap(), top);
        assert!(SubsetChain::new(2, vec![0b01, 0b11]).unwrap().best_completion().is_err());
    }
}
