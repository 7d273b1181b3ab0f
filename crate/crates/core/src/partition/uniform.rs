//! The uniform complex `U = ⋃_A P^A × CF^A` inside `nerve(P_m) × CF_m`.

use std::collections::HashMap;
use std::sync::Arc;

use super::filtration::{complete_filtrations, complete_subgroup_filtrations, filtration_of, CompleteFiltration};
use super::groups::{transitive_abelian_subgroups, SubgroupMask, TransAbSubgroup};
use super::perm::Perm;
use super::setpart::SetPartition;
use crate::error::{Error, Result};
use crate::simplicial::chains::PointedLevels;
use crate::simplicial::equivariant::{ActionFn, EquivariantSSet};
use crate::simplicial::sset::{FaceRef, SSet};

/// A nondegenerate simplex: a strict chain of partitions (finest first)
/// together with a complete filtration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct USimplex {
    pub chain: Vec<SetPartition>,
    pub cf: u32,
}

pub struct Uniform {
    pub p: usize,
    pub k: usize,
    pub m: usize,
    pub cf: Vec<CompleteFiltration>,
    cf_index: HashMap<CompleteFiltration, u32>,
    pub groups: Vec<TransAbSubgroup>,
    pub levels: Vec<Vec<USimplex>>,
    index: Vec<HashMap<USimplex, usize>>,
    /// Indices into `groups` of the `A` with the simplex in `U^A`.
    pub members: Vec<Vec<Vec<u32>>>,
    /// Ids of essential simplices per dimension.
    pub essential: Vec<Vec<usize>>,
    ess_pos: Vec<Vec<usize>>,
}

fn strict_chains(subs: &[SubgroupMask]) -> Vec<Vec<SubgroupMask>> {
    // subs is sorted by size, so inclusions go forward
    let mut out: Vec<Vec<SubgroupMask>> = subs.iter().map(|&v| vec![v]).collect();
    let mut i = 0;
    while i < out.len() {
        let last = *out[i].last().unwrap();
        let ext: Vec<SubgroupMask> = subs
            .iter()
            .copied()
            .filter(|&w| w != last && w & last == last)
            .collect();
        for w in ext {
            let mut c = out[i].clone();
            c.push(w);
            out.push(c);
        }
        i += 1;
    }
    out
}

impl Uniform {
    pub fn build(p: usize, k: usize) -> Result<Uniform> {
        let m = p.pow(k as u32);
        if m > 9 {
            return Err(Error::Guard(format!("uniform complex needs p^k ≤ 9, got {m}")));
        }
        let cf = complete_filtrations(p, k)?;
        let cf_index: HashMap<CompleteFiltration, u32> =
            cf.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();
        let groups = transitive_abelian_subgroups(m)?;
        let pieces = crate::par::map_range(groups.len(), |a| {
            let g = &groups[a];
            let subs = g.subgroups();
            let part: HashMap<SubgroupMask, SetPartition> =
                subs.iter().map(|&v| (v, g.orbit_partition(v).unwrap())).collect();
            let cfs: Vec<u32> = complete_subgroup_filtrations(g, p)
                .iter()
                .map(|c| cf_index[&filtration_of(g, p, c)])
                .collect();
            let mut out = Vec::new();
            for c in strict_chains(&subs) {
                let chain: Vec<SetPartition> = c.iter().map(|v| part[v]).collect();
                for &f in &cfs {
                    out.push(USimplex { chain: chain.clone(), cf: f });
                }
            }
            out
        });
        let mut merged: HashMap<USimplex, Vec<u32>> = HashMap::new();
        for (a, piece) in pieces.into_iter().enumerate() {
            for s in piece {
                merged.entry(s).or_default().push(a as u32);
            }
        }
        let mut all: Vec<(USimplex, Vec<u32>)> = merged.into_iter().collect();
        all.sort();
        let dims = all.iter().map(|(s, _)| s.chain.len()).max().unwrap_or(0);
        let mut levels: Vec<Vec<USimplex>> = vec![Vec::new(); dims];
        let mut members: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dims];
        for (s, mem) in all {
            let q = s.chain.len() - 1;
            levels[q].push(s);
            members[q].push(mem);
        }
        let index: Vec<HashMap<USimplex, usize>> = levels
            .iter()
            .map(|l| l.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let (bot, top) = (SetPartition::discrete(m), SetPartition::indiscrete(m));
        let mut essential = Vec::new();
        let mut ess_pos = Vec::new();
        for (q, l) in levels.iter().enumerate() {
            let mut pos = vec![usize::MAX; l.len()];
            let mut ids = Vec::new();
            for (i, s) in l.iter().enumerate() {
                if q >= 1 && s.chain[0] == bot && s.chain[q] == top {
                    pos[i] = ids.len();
                    ids.push(i);
                }
            }
            essential.push(ids);
            ess_pos.push(pos);
        }
        Ok(Uniform {
            p,
            k,
            m,
            cf,
            cf_index,
            groups,
            levels,
            index,
            members,
            essential,
            ess_pos,
        })
    }

    pub fn id_of(&self, s: &USimplex) -> Option<usize> {
        self.index.get(s.chain.len().wrapping_sub(1))?.get(s).copied()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn essential_counts(&self) -> Vec<usize> {
        self.essential.iter().map(|l| l.len()).collect()
    }

    pub fn act_simplex(&self, g: &Perm, s: &USimplex) -> USimplex {
        USimplex {
            chain: s.chain.iter().map(|e| e.act(g)).collect(),
            cf: self.cf_index[&self.cf[s.cf as usize].act(g)],
        }
    }

    pub fn act_id(&self, g: &Perm, q: usize, x: usize) -> usize {
        self.index[q][&self.act_simplex(g, &self.levels[q][x])]
    }

    pub fn face_id(&self, q: usize, x: usize, i: usize) -> usize {
        let mut s = self.levels[q][x].clone();
        s.chain.remove(i);
        self.index[q - 1][&s]
    }

    /// `U` as a simplicial set with its Σ_m-action.
    pub fn to_equivariant_sset(self: &Arc<Self>) -> EquivariantSSet {
        let faces = (0..self.levels.len())
            .map(|q| {
                (0..self.levels[q].len())
                    .map(|x| {
                        if q == 0 {
                            Vec::new()
                        } else {
                            (0..=q).map(|i| FaceRef::simplex(q - 1, self.face_id(q, x, i))).collect()
                        }
                    })
                    .collect()
            })
            .collect();
        let me = self.clone();
        let act: ActionFn = Arc::new(move |g: &Perm, q: usize, x: usize| me.act_id(g, q, x));
        EquivariantSSet::new(SSet { faces }, self.m, act)
    }

    /// Membership in `U◇` (chains missing `0̂` or `1̂`), per dimension.
    pub fn diamond(&self) -> Vec<Vec<bool>> {
        self.ess_pos
            .iter()
            .map(|l| l.iter().map(|&p| p == usize::MAX).collect())
            .collect()
    }

    /// Whether `U` and `U◇` are closed under the generators of Σ_m.
    pub fn check_equivariance(&self) -> Result<()> {
        for g in crate::partition::perm::symmetric_generators(self.m) {
            for (q, l) in self.levels.iter().enumerate() {
                for s in l {
                    let t = self.act_simplex(&g, s);
                    let Some(&y) = self.index[q].get(&t) else {
                        return Err(Error::Structural(format!("g·σ leaves U in dimension {q}")));
                    };
                    let ess = |i: usize| self.ess_pos[q][i] != usize::MAX;
                    if ess(self.index[q][s]) != ess(y) {
                        return Err(Error::Structural("action does not preserve U◇".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Essential simplex `x` of dimension `q` by its position among essentials.
    pub fn essential_simplex(&self, q: usize, e: usize) -> &USimplex {
        &self.levels[q][self.essential[q][e]]
    }

    pub fn essential_index(&self, s: &USimplex) -> Option<usize> {
        let q = s.chain.len() - 1;
        let id = self.id_of(s)?;
        let e = self.ess_pos[q][id];
        (e != usize::MAX).then_some(e)
    }

    pub fn is_elementary(&self, a: usize) -> bool {
        self.groups[a].abstract_type.iter().all(|&d| d == self.p)
    }

    /// Compares `⋃_A U^A` with the union over elementary abelian `A`, and the
    /// same for the vertex posets `⋃ P^A`.
    pub fn elementary_union_experiment(&self) -> ElementaryUnionReport {
        let mut per_dim = Vec::new();
        let mut witness = None;
        let mut p_missing = 0usize;
        let mut p_seen: HashMap<Vec<SetPartition>, bool> = HashMap::new();
        for (q, mem) in self.members.iter().enumerate() {
            let covered = mem
                .iter()
                .enumerate()
                .filter(|(x, ms)| {
                    let elem = ms.iter().any(|&a| self.is_elementary(a as usize));
                    let c = &self.levels[q][*x].chain;
                    let e = p_seen.entry(c.clone()).or_insert(false);
                    *e |= elem;
                    if !elem && witness.is_none() {
                        witness = Some(self.levels[q][*x].clone());
                    }
                    elem
                })
                .count();
            per_dim.push((mem.len(), covered));
        }
        for v in p_seen.values() {
            if !v {
                p_missing += 1;
            }
        }
        ElementaryUnionReport {
            m: self.m,
            per_dim,
            witness,
            p_chains_missing: p_missing,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ElementaryUnionReport {
    pub m: usize,
    /// `(|U_q|, |elementary union in degree q|)`.
    pub per_dim: Vec<(usize, usize)>,
    pub witness: Option<USimplex>,
    /// Chains of `⋃_A P^A` not reached by elementary `A`.
    pub p_chains_missing: usize,
}

impl ElementaryUnionReport {
    pub fn equal(&self) -> bool {
        self.per_dim.iter().all(|(a, b)| a == b)
    }
}

/// `Ū`: live simplices are the essential ones; the outer faces drop `0̂` or
/// `1̂` and land at the basepoint.
impl PointedLevels for Uniform {
    fn degree(&self) -> usize {
        self.m
    }
    fn dims(&self) -> usize {
        self.levels.len()
    }
    fn level_len(&self, q: usize) -> usize {
        self.essential.get(q).map_or(0, |l| l.len())
    }
    fn act(&self, g: &Perm, q: usize, x: usize) -> usize {
        let y = self.act_id(g, q, self.essential[q][x]);
        self.ess_pos[q][y]
    }
    fn face(&self, q: usize, x: usize, i: usize) -> Option<usize> {
        if i == 0 || i == q {
            return None;
        }
        let y = self.face_id(q, self.essential[q][x], i);
        Some(self.ess_pos[q - 1][y])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::chains::check_levels_equivariant;

    #[test]
    fn interval_case() {
        let u = Uniform::build(2, 1).unwrap();
        assert_eq!(u.counts(), vec![2, 1]);
        assert_eq!(u.essential_counts(), vec![0, 1]);
    }

    #[test]
    fn m4_equivariant() {
        let u = Arc::new(Uniform::build(2, 2).unwrap());
        u.check_equivariance().unwrap();
        check_levels_equivariant(u.as_ref()).unwrap();
        let x = u.to_equivariant_sset();
        x.sset.check_identities().unwrap();
        x.check_action().unwrap();
    }
}
