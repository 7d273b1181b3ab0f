//! Complete filtrations of {1..p^k} by pure partitions.

use std::collections::HashMap;

use super::groups::{length, SubgroupMask, TransAbSubgroup};
use super::perm::Perm;
use super::setpart::SetPartition;
use crate::error::{Error, Result};

/// `E_0 < E_1 < … < E_k` with `mesh(E_j) = j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CompleteFiltration {
    pub p: usize,
    pub k: usize,
    pub chain: Vec<SetPartition>,
}

impl CompleteFiltration {
    pub fn new(p: usize, k: usize, chain: Vec<SetPartition>) -> Result<Self> {
        let f = CompleteFiltration { p, k, chain };
        f.check()?;
        Ok(f)
    }

    pub fn check(&self) -> Result<()> {
        if self.chain.len() != self.k + 1 {
            return Err(Error::Invalid(format!("expected {} terms", self.k + 1)));
        }
        for (j, e) in self.chain.iter().enumerate() {
            if e.mesh(self.p) != Some(j) {
                return Err(Error::Invalid(format!("E_{j} = {e} does not have mesh {j}")));
            }
            if j > 0 && !(self.chain[j - 1].refines(e) && self.chain[j - 1] != *e) {
                return Err(Error::Invalid(format!("E_{} does not strictly refine E_{j}", j - 1)));
            }
        }
        Ok(())
    }

    pub fn act(&self, g: &Perm) -> CompleteFiltration {
        CompleteFiltration {
            p: self.p,
            k: self.k,
            chain: self.chain.iter().map(|e| e.act(g)).collect(),
        }
    }

    pub fn is_fixed_by(&self, g: &Perm) -> bool {
        self.chain.iter().all(|e| e.act(g) == *e)
    }
}

impl std::fmt::Display for CompleteFiltration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.chain.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" < "))
    }
}

/// Ways to group the blocks of `e` into sets of `p` blocks each.
fn groupings(e: &SetPartition, p: usize) -> Vec<SetPartition> {
    let blocks = e.blocks();
    let n = blocks.len();
    let mut out = Vec::new();
    let mut group = vec![usize::MAX; n];
    fn rec(
        i: usize,
        next: usize,
        p: usize,
        group: &mut [usize],
        sizes: &mut Vec<usize>,
        blocks: &[Vec<usize>],
        m: usize,
        out: &mut Vec<SetPartition>,
    ) {
        if i == group.len() {
            if sizes.iter().any(|&s| s != p) {
                return;
            }
            let mut label = vec![0usize; m];
            for (b, blk) in blocks.iter().enumerate() {
                for &x in blk {
                    label[x] = group[b];
                }
            }
            out.push(SetPartition::from_labels(&label));
            return;
        }
        // join an open group, or open a new one (groups ordered by first block)
        for g in 0..next {
            if sizes[g] < p {
                group[i] = g;
                sizes[g] += 1;
                rec(i + 1, next, p, group, sizes, blocks, m, out);
                sizes[g] -= 1;
            }
        }
        group[i] = next;
        sizes.push(1);
        rec(i + 1, next + 1, p, group, sizes, blocks, m, out);
        sizes.pop();
    }
    rec(0, 0, p, &mut group, &mut Vec::new(), &blocks, e.m(), &mut out);
    out
}

/// All complete filtrations of {1..p^k}.
pub fn complete_filtrations(p: usize, k: usize) -> Result<Vec<CompleteFiltration>> {
    let m = p.checked_pow(k as u32).filter(|&m| m <= super::setpart::MAX_M);
    let Some(m) = m else {
        return Err(Error::Guard(format!("p^k must be at most {}", super::setpart::MAX_M)));
    };
    if !crate::homalg::ring::is_prime(p as u64) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let mut out = Vec::new();
    let mut chain = vec![SetPartition::discrete(m)];
    fn rec(p: usize, k: usize, chain: &mut Vec<SetPartition>, out: &mut Vec<CompleteFiltration>) {
        if chain.len() == k + 1 {
            out.push(CompleteFiltration {
                p,
                k,
                chain: chain.clone(),
            });
            return;
        }
        for e in groupings(chain.last().unwrap(), p) {
            chain.push(e);
            rec(p, k, chain, out);
            chain.pop();
        }
    }
    rec(p, k, &mut chain, &mut out);
    out.sort();
    Ok(out)
}

/// `|Σ_p ≀ ⋯ ≀ Σ_p|` with `k` factors: `(p!)^{(p^k−1)/(p−1)}`.
pub fn wreath_order(p: usize, k: usize) -> u64 {
    let e = (p.pow(k as u32) - 1) / (p - 1);
    super::perm::factorial(p).pow(e as u32)
}

/// Complete subgroup filtrations `0 = V_0 < V_1 < … < V_k = A`, `|V_j| = p^j`.
pub fn complete_subgroup_filtrations(a: &TransAbSubgroup, p: usize) -> Vec<Vec<SubgroupMask>> {
    let subs = a.subgroups();
    let k = length(a.full_mask(), p);
    let mut by_len: HashMap<usize, Vec<SubgroupMask>> = HashMap::new();
    for &v in &subs {
        by_len.entry(length(v, p)).or_default().push(v);
    }
    let mut out = Vec::new();
    let mut chain: Vec<SubgroupMask> = vec![1];
    fn rec(
        k: usize,
        by_len: &HashMap<usize, Vec<SubgroupMask>>,
        chain: &mut Vec<SubgroupMask>,
        out: &mut Vec<Vec<SubgroupMask>>,
    ) {
        if chain.len() == k + 1 {
            out.push(chain.clone());
            return;
        }
        let last = *chain.last().unwrap();
        for &w in &by_len[&chain.len()] {
            if w & last == last {
                chain.push(w);
                rec(k, by_len, chain, out);
                chain.pop();
            }
        }
    }
    rec(k, &by_len, &mut chain, &mut out);
    out
}

/// The filtration `[E_{V_0}, …, E_{V_k}]` of a subgroup filtration.
pub fn filtration_of(a: &TransAbSubgroup, p: usize, chain: &[SubgroupMask]) -> CompleteFiltration {
    CompleteFiltration {
        p,
        k: chain.len() - 1,
        chain: chain.iter().map(|&v| a.orbit_partition(v).unwrap()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::perm::factorial;

    #[test]
    fn counts() {
        for (p, k, n) in [(2, 1, 1), (2, 2, 3), (2, 3, 315), (3, 1, 1), (3, 2, 280)] {
            let cf = complete_filtrations(p, k).unwrap();
            assert_eq!(cf.len(), n, "p={p} k={k}");
            assert_eq!(n as u64 * wreath_order(p, k), factorial(p.pow(k as u32)));
            for f in &cf {
                f.check().unwrap();
            }
        }
    }

    #[test]
    fn rejects_bad_chain() {
        let m = 4;
        let e = SetPartition::parse(m, "12|3|4").unwrap();
        let chain = vec![SetPartition::discrete(m), e, SetPartition::indiscrete(m)];
        assert!(CompleteFiltration::new(2, 2, chain).is_err());
    }
}
