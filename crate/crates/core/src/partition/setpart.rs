//! Set partitions of {1..m} and the partition poset P_m.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::perm::Perm;
use crate::error::{Error, Result};
use crate::simplicial::equivariant::equivariant_nerve;
use crate::simplicial::poset::FinPoset;
use crate::simplicial::sset::Nerve;
use crate::simplicial::EquivariantSSet;

pub const MAX_M: usize = 12;

/// Canonical parent-of-minimum form: `parent[i]` is the least element of the
/// block of `i` (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    m: u8,
    parent: [u8; MAX_M],
}

impl SetPartition {
    pub fn discrete(m: usize) -> Self {
        assert!(m <= MAX_M);
        let mut parent = [0u8; MAX_M];
        for (i, p) in parent.iter_mut().enumerate().take(m) {
            *p = i as u8;
        }
        SetPartition { m: m as u8, parent }
    }

    pub fn indiscrete(m: usize) -> Self {
        assert!(m <= MAX_M);
        SetPartition {
            m: m as u8,
            parent: [0u8; MAX_M],
        }
    }

    /// From arbitrary block labels: `i ~ j` iff `label[i] == label[j]`.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(label: &[T]) -> Self {
        let m = label.len();
        assert!(m <= MAX_M);
        let mut first: HashMap<T, u8> = HashMap::new();
        let mut parent = [0u8; MAX_M];
        for (i, l) in label.iter().enumerate() {
            parent[i] = *first.entry(*l).or_insert(i as u8);
        }
        SetPartition { m: m as u8, parent }
    }

    pub fn from_blocks(m: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; m];
        for (b, blk) in blocks.iter().enumerate() {
            for &i in blk {
                if i >= m || label[i] != usize::MAX {
                    return Err(Error::Invalid(format!("bad block element {}", i + 1)));
                }
                label[i] = b;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(Error::Invalid("blocks do not cover the ground set".into()));
        }
        Ok(SetPartition::from_labels(&label))
    }

    /// Block notation such as `12|34`; elements 10..12 are written `a`, `b`,
    /// `c`, or blocks may be comma-separated (`1,2|3,4`).
    pub fn parse(m: usize, s: &str) -> Result<Self> {
        if m > MAX_M {
            return Err(Error::Invalid(format!("m = {m} exceeds {MAX_M}")));
        }
        let mut blocks = Vec::new();
        for blk in s.trim().split('|') {
            let blk = blk.trim();
            let elems: Vec<usize> = if blk.contains(',') {
                blk.split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad element {t:?}"))))
                    .collect::<Result<_>>()?
            } else {
                blk.chars()
                    .map(|c| {
                        c.to_digit(13)
                            .filter(|&d| d >= 1)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Invalid(format!("bad element {c:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if elems.iter().any(|&e| e == 0) {
                return Err(Error::Invalid("elements are 1-based".into()));
            }
            blocks.push(elems.into_iter().map(|e| e - 1).collect::<Vec<_>>());
        }
        SetPartition::from_blocks(m, &blocks)
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn parent(&self, i: usize) -> usize {
        self.parent[i] as usize
    }

    /// Blocks ordered by their least element, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = [usize::MAX; MAX_M];
        for i in 0..self.m() {
            let r = self.parent(i);
            if r == i {
                slot[i] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }

    pub fn num_blocks(&self) -> usize {
        (0..self.m()).filter(|&i| self.parent(i) == i).count()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sz = [0usize; MAX_M];
        for i in 0..self.m() {
            sz[self.parent(i)] += 1;
        }
        (0..self.m()).filter(|&i| self.parent(i) == i).map(|i| sz[i]).collect()
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.parent[i] == self.parent[j]
    }

    /// `self ≤ other`: every block of `self` lies in a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        (0..self.m()).all(|i| other.parent[i] == other.parent[self.parent(i)])
    }

    /// Common refinement `E ∩ E′`.
    pub fn meet(&self, other: &SetPartition) -> SetPartition {
        let label: Vec<(u8, u8)> = (0..self.m()).map(|i| (self.parent[i], other.parent[i])).collect();
        SetPartition::from_labels(&label)
    }

    /// Finest common coarsening `E + E′`.
    pub fn join(&self, other: &SetPartition) -> SetPartition {
        let m = self.m();
        let mut p: Vec<usize> = (0..m).map(|i| self.parent(i)).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..m {
            let (a, b) = (find(&mut p, i), find(&mut p, other.parent(i)));
            if a != b {
                p[a.max(b)] = a.min(b);
            }
        }
        let label: Vec<usize> = (0..m).map(|i| find(&mut p, i)).collect();
        SetPartition::from_labels(&label)
    }

    /// `j` when every block has exactly `p^j` elements.
    pub fn mesh(&self, p: usize) -> Option<usize> {
        let sizes = self.block_sizes();
        let s = sizes[0];
        if sizes.iter().any(|&t| t != s) {
            return None;
        }
        let (mut j, mut t) = (0, 1);
        while t < s {
            t *= p;
            j += 1;
        }
        (t == s).then_some(j)
    }

    /// `g·E`: `g(i) ~ g(j)` iff `i ~ j`.
    pub fn act(&self, g: &Perm) -> SetPartition {
        let m = self.m();
        let mut label = vec![0u8; m];
        for i in 0..m {
            label[g.apply(i)] = self.parent[i];
        }
        SetPartition::from_labels(&label)
    }

    /// Partitions obtained by merging two blocks.
    pub fn covers(&self) -> Vec<SetPartition> {
        let roots: Vec<usize> = (0..self.m()).filter(|&i| self.parent(i) == i).collect();
        let mut out = Vec::new();
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                let (ra, rb) = (roots[a] as u8, roots[b] as u8);
                let label: Vec<u8> = (0..self.m())
                    .map(|i| if self.parent[i] == rb { ra } else { self.parent[i] })
                    .collect();
                out.push(SetPartition::from_labels(&label));
            }
        }
        out
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&i| std::char::from_digit(i as u32 + 1, 13).unwrap()).collect())
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All partitions of {0..m-1} in restricted-growth order.
pub fn all_partitions(m: usize) -> Vec<SetPartition> {
    fn rec(i: usize, m: usize, label: &mut Vec<usize>, max: usize, out: &mut Vec<SetPartition>) {
        if i == m {
            out.push(SetPartition::from_labels(label));
            return;
        }
        for l in 0..=max + 1 {
            label.push(l);
            rec(i + 1, m, label, max.max(l), out);
            label.pop();
        }
    }
    if m == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut label = vec![0];
    rec(1, m, &mut label, 0, &mut out);
    out
}

pub fn bell(m: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Largest `m` accepted by [`partition_poset`]; override with
/// `POWEROPS_MAX_PARTITION_M`.
pub fn partition_guard() -> usize {
    std::env::var("POWEROPS_MAX_PARTITION_M")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(9)
        .min(MAX_M)
}

#[derive(Clone, Debug)]
pub struct PartitionPoset {
    pub m: usize,
    pub elements: Vec<SetPartition>,
    pub index: HashMap<SetPartition, usize>,
    pub poset: FinPoset,
}

impl PartitionPoset {
    pub fn id(&self, e: &SetPartition) -> usize {
        self.index[e]
    }

    pub fn act(&self, g: &Perm, e: usize) -> usize {
        self.index[&self.elements[e].act(g)]
    }

    /// The nerve with its Σ_m-action.
    pub fn equivariant_nerve(&self) -> (Nerve, EquivariantSSet) {
        let elements = Arc::new(self.elements.clone());
        let index = Arc::new(self.index.clone());
        equivariant_nerve(
            &self.poset,
            self.m,
            Arc::new(move |g: &Perm, e: usize| index[&elements[e].act(g)]),
        )
    }
}

/// P_m ordered by refinement, ⊥ discrete and ⊤ indiscrete.
pub fn partition_poset(m: usize) -> Result<PartitionPoset> {
    let guard = partition_guard();
    if m == 0 || m > guard {
        return Err(Error::Guard(format!(
            "partition_poset needs 1 ≤ m ≤ {guard}; set POWEROPS_MAX_PARTITION_M (at most {MAX_M}) to raise the limit"
        )));
    }
    let mut elements = all_partitions(m);
    // coarse first, so every cover precedes the element it covers
    elements.sort_by_key(|e| (e.num_blocks(), *e));
    let index: HashMap<SetPartition, usize> = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let n = elements.len();
    let w = n.div_ceil(64);
    let mut up: Vec<Vec<u64>> = Vec::with_capacity(n);
    for (i, e) in elements.iter().enumerate() {
        let mut row = vec![0u64; w];
        row[i / 64] |= 1 << (i % 64);
        for c in e.covers() {
            let r = &up[index[&c]];
            for (a, b) in row.iter_mut().zip(r) {
                *a |= *b;
            }
        }
        up.push(row);
    }
    let labels = elements.iter().map(|e| e.to_string()).collect();
    let mut poset = FinPoset::from_up_sets_unchecked_bounded(labels, up, index[&SetPartition::discrete(m)], index[&SetPartition::indiscrete(m)]);
    if m == 1 {
        poset.bottom = None;
        poset.top = None;
    }
    Ok(PartitionPoset {
        m,
        elements,
        index,
        poset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(m: usize, s: &str) -> SetPartition {
        SetPartition::parse(m, s).unwrap()
    }

    #[test]
    fn bell_numbers() {
        for m in 1..=7 {
            assert_eq!(all_partitions(m).len() as u64, bell(m));
        }
        assert_eq!(bell(9), 21147);
    }

    #[test]
    fn meet_join_in_p4() {
        let a = sp(4, "12|34");
        let b = sp(4, "13|24");
        assert_eq!(a.meet(&b), SetPartition::discrete(4));
        assert_eq!(a.join(&b), SetPartition::indiscrete(4));
        assert_eq!(a.meet(&a), a);
        assert_eq!(a.join(&a), a);
    }

    #[test]
    fn mesh_values() {
        assert_eq!(SetPartition::discrete(4).mesh(2), Some(0));
        assert_eq!(sp(4, "12|34").mesh(2), Some(1));
        assert_eq!(sp(4, "12|3|4").mesh(2), None);
        assert_eq!(sp(4, "123|4").mesh(2), None);
    }

    #[test]
    fn parse_roundtrip() {
        let e = sp(4, "34|12");
        assert_eq!(e.to_string(), "12|34");
        assert!(SetPartition::parse(4, "12|3").is_err());
        assert!(SetPartition::parse(4, "12|23|4").is_err());
        assert_eq!(SetPartition::parse(4, "1,2|3,4").unwrap(), e);
    }

    #[test]
    fn poset_sizes() {
        assert_eq!(partition_poset(1).unwrap().elements.len(), 1);
        assert_eq!(partition_poset(3).unwrap().elements.len(), 5);
        let p4 = partition_poset(4).unwrap();
        assert_eq!(p4.elements.len(), 15);
        p4.poset.check_axioms().unwrap();
        for (i, a) in p4.elements.iter().enumerate() {
            for (j, b) in p4.elements.iter().enumerate() {
                assert_eq!(p4.poset.leq(i, j), a.refines(b));
            }
        }
        assert!(partition_poset(13).is_err());
    }

    #[test]
    fn action_is_by_automorphisms() {
        let g = Perm::from_cycles(4, &[&[1, 3]]);
        let e = sp(4, "12|34");
        assert_eq!(e.act(&g), sp(4, "14|23"));
        let f = sp(4, "1|2|34");
        assert_eq!(f.refines(&e), f.act(&g).refines(&e.act(&g)));
    }
}
