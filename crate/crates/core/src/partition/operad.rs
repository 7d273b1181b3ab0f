//! The set-level nonunital commutative operad `O(S) = *` (`S ≠ ∅`), its
//! iterated composites and their identification with chains of partitions.

use std::collections::HashMap;

use super::perm::Perm;
use super::setpart::SetPartition;
use crate::error::{Error, Result};

/// An element of `O^{∘r}(S)`. A leaf is the point of `O(S)`; a node is an
/// unordered family of elements over the blocks of a partition of `S`,
/// stored sorted by least element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum OpTree {
    Leaf(u32),
    Node(u32, Vec<OpTree>),
}

impl OpTree {
    pub fn set(&self) -> u32 {
        match self {
            OpTree::Leaf(s) | OpTree::Node(s, _) => *s,
        }
    }

    /// Number of operad factors.
    pub fn depth(&self) -> usize {
        match self {
            OpTree::Leaf(_) => 1,
            OpTree::Node(_, c) => 1 + c[0].depth(),
        }
    }

    fn node(set: u32, mut children: Vec<OpTree>) -> OpTree {
        children.sort_by_key(|c| c.set().trailing_zeros());
        OpTree::Node(set, children)
    }

    /// Relabels points by `g`.
    pub fn act(&self, g: &Perm) -> OpTree {
        let map = |s: u32| -> u32 {
            (0..32).filter(|&i| s & (1 << i) != 0).fold(0, |acc, i| acc | (1 << g.apply(i)))
        };
        match self {
            OpTree::Leaf(s) => OpTree::Leaf(map(*s)),
            OpTree::Node(s, c) => OpTree::node(map(*s), c.iter().map(|t| t.act(g)).collect()),
        }
    }

    /// Operad composition of factors `j` and `j + 1` (counted from the
    /// outside), `O^{∘r} → O^{∘(r−1)}`.
    pub fn compose_at(&self, j: usize) -> OpTree {
        match self {
            OpTree::Leaf(_) => panic!("nothing to compose"),
            OpTree::Node(s, c) if j == 0 => {
                let mut grand = Vec::new();
                for t in c {
                    match t {
                        OpTree::Leaf(_) => return OpTree::Leaf(*s),
                        OpTree::Node(_, g) => grand.extend(g.iter().cloned()),
                    }
                }
                OpTree::node(*s, grand)
            }
            OpTree::Node(s, c) => OpTree::node(*s, c.iter().map(|t| t.compose_at(j - 1)).collect()),
        }
    }

    /// Partition of the whole ground set at node level `level` (0 outermost).
    fn level_partition(&self, level: usize, label: &mut [usize]) {
        match self {
            OpTree::Leaf(_) => unreachable!("level below the leaves"),
            OpTree::Node(_, c) => {
                for t in c {
                    if level == 0 {
                        let s = t.set();
                        let root = s.trailing_zeros() as usize;
                        for (i, l) in label.iter_mut().enumerate() {
                            if s & (1 << i) != 0 {
                                *l = root;
                            }
                        }
                    } else {
                        t.level_partition(level - 1, label);
                    }
                }
            }
        }
    }
}

/// Partitions of the bitset `s` into blocks, listed by block bitsets.
fn set_partitions(s: u32) -> Vec<Vec<u32>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    let first = s & s.wrapping_neg();
    let rest = s & !first;
    let mut out = Vec::new();
    // the block containing the least element: first ∪ any subset of rest
    let mut sub = rest;
    loop {
        let block = first | sub;
        for mut tail in set_partitions(rest & !sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// `|O^{∘r}⟨n⟩|` from the composite formula, by block sizes.
pub fn composite_count(r: usize, n: usize) -> u128 {
    let mut memo: HashMap<(usize, usize), u128> = HashMap::new();
    fn count(r: usize, n: usize, memo: &mut HashMap<(usize, usize), u128>) -> u128 {
        if r == 1 {
            return 1;
        }
        if let Some(&v) = memo.get(&(r, n)) {
            return v;
        }
        let mut total = 0u128;
        for blocks in set_partitions(((1u64 << n) - 1) as u32) {
            let mut prod = 1u128;
            for b in blocks {
                prod *= count(r - 1, b.count_ones() as usize, memo);
            }
            total += prod;
        }
        memo.insert((r, n), total);
        total
    }
    count(r, n, &mut memo)
}

/// All elements of `O^{∘r}(S)`.
pub fn composite(r: usize, s: u32) -> Vec<OpTree> {
    if r == 1 {
        return vec![OpTree::Leaf(s)];
    }
    let mut out = Vec::new();
    for blocks in set_partitions(s) {
        let per: Vec<Vec<OpTree>> = blocks.iter().map(|&b| composite(r - 1, b)).collect();
        let mut idx = vec![0usize; per.len()];
        loop {
            out.push(OpTree::node(s, idx.iter().zip(&per).map(|(&i, p)| p[i].clone()).collect()));
            let mut t = 0;
            loop {
                if t == idx.len() {
                    break;
                }
                idx[t] += 1;
                if idx[t] < per[t].len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
            if t == idx.len() {
                break;
            }
        }
    }
    out
}

/// The chain `E_0 ≤ … ≤ E_q` of an element of `O^{∘(q+2)}⟨m⟩`: node level
/// `j` from the outside carries `E_{q−j}`.
pub fn to_chain(t: &OpTree, m: usize) -> Vec<SetPartition> {
    let q = t.depth() - 2;
    (0..=q)
        .map(|e| {
            let mut label = vec![0usize; m];
            t.level_partition(q - e, &mut label);
            SetPartition::from_labels(&label)
        })
        .collect()
}

pub struct OperadBarLevel {
    pub m: usize,
    pub q: usize,
    pub elements: Vec<OpTree>,
    pub chains: Vec<Vec<SetPartition>>,
}

const MAX_ELEMENTS: u128 = 5_000_000;

/// `O^{∘(q+2)}⟨m⟩` with its map to `q`-simplices (degenerate included) of
/// `nerve(P_m)`.
pub fn operad_bar_level(m: usize, q: usize) -> Result<OperadBarLevel> {
    if m == 0 || m > 8 || q > 4 {
        return Err(Error::Guard(format!("operad_bar_level needs 1 ≤ m ≤ 8 and q ≤ 4, got m={m}, q={q}")));
    }
    let n = composite_count(q + 2, m);
    if n > MAX_ELEMENTS {
        return Err(Error::Guard(format!("O^(∘{})⟨{m}⟩ has {n} elements", q + 2)));
    }
    let elements = composite(q + 2, ((1u64 << m) - 1) as u32);
    let chains = crate::par::map(&elements, |t| to_chain(t, m));
    Ok(OperadBarLevel { m, q, elements, chains })
}

/// Multichains `E_0 ≤ … ≤ E_q` of partitions of {0..m-1}.
pub fn multichains(m: usize, q: usize) -> Vec<Vec<SetPartition>> {
    let all = super::setpart::all_partitions(m);
    let mut out: Vec<Vec<SetPartition>> = all.iter().map(|e| vec![*e]).collect();
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                all.iter()
                    .filter(move |e| last.refines(e))
                    .map(move |e| {
                        let mut d = c.clone();
                        d.push(*e);
                        d
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

impl OperadBarLevel {
    /// Bijectivity onto multichains, equivariance on generators, and
    /// compatibility of compositions with face maps.
    pub fn verify(&self) -> Result<()> {
        let target = multichains(self.m, self.q);
        let mut seen: HashMap<&[SetPartition], usize> = HashMap::new();
        for c in &self.chains {
            if seen.insert(c, 1).is_some() {
                return Err(Error::Structural("map to chains is not injective".into()));
            }
        }
        if self.chains.len() != target.len() || target.iter().any(|c| !seen.contains_key(c.as_slice())) {
            return Err(Error::Structural("map to chains is not surjective".into()));
        }
        for g in super::perm::symmetric_generators(self.m) {
            for (t, c) in self.elements.iter().zip(&self.chains) {
                let lhs = to_chain(&t.act(&g), self.m);
                let rhs: Vec<SetPartition> = c.iter().map(|e| e.act(&g)).collect();
                if lhs != rhs {
                    return Err(Error::Structural("bijection is not equivariant".into()));
                }
            }
        }
        if self.q >= 1 {
            for (t, c) in self.elements.iter().zip(&self.chains) {
                for j in 0..=self.q {
                    let mut face = c.clone();
                    face.remove(self.q - j);
                    if to_chain(&t.compose_at(j), self.m) != face {
                        return Err(Error::Structural(format!("composition {j} does not match d_{}", self.q - j)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(composite_count(2, 3), 5);
        assert_eq!(operad_bar_level(3, 0).unwrap().elements.len(), 5);
        assert_eq!(operad_bar_level(1, 3).unwrap().elements.len(), 1);
        for (m, q) in [(1, 2), (3, 0), (3, 2), (4, 1), (4, 2)] {
            let l = operad_bar_level(m, q).unwrap();
            assert_eq!(l.elements.len() as u128, composite_count(q + 2, m));
            l.verify().unwrap();
        }
    }
}
