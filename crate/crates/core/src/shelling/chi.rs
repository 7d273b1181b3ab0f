//! The map `χ: U → K_k`, best completions in `U`, and the jump properties
//! of `χ^A_{[V]}` on subgroups.

use std::collections::HashMap;

use serde::Serialize;

use super::subsets::{Subset, SubsetChain};
use crate::error::{Error, Result};
use crate::partition::filtration::complete_subgroup_filtrations;
use crate::partition::groups::{length, points, SubgroupMask, TransAbSubgroup};
use crate::partition::uniform::{USimplex, Uniform};
use crate::partition::SetPartition;

fn mesh(e: &SetPartition, p: usize) -> Result<usize> {
    e.mesh(p)
        .ok_or_else(|| Error::Structural(format!("{e} is not pure of type {p}")))
}

/// `S = {j : mesh(F ∩ E_j) − mesh(F ∩ E_{j−1}) = 1}`.
pub fn chi_vertex(f: &SetPartition, cf: &[SetPartition], p: usize) -> Result<Subset> {
    let mut s = 0;
    let mut prev = mesh(&f.meet(&cf[0]), p)?;
    for (j, e) in cf.iter().enumerate().skip(1) {
        let cur = mesh(&f.meet(e), p)?;
        match cur - prev {
            0 => {}
            1 => s |= 1 << (j - 1),
            _ => return Err(Error::Structural(format!("mesh jumps by {} at {j}", cur - prev))),
        }
        prev = cur;
    }
    Ok(s)
}

pub fn chi(u: &Uniform, s: &USimplex) -> Result<SubsetChain> {
    if u.id_of(s).is_none() {
        return Err(Error::Invalid("simplex is not in U".into()));
    }
    chi_unchecked(u, s)
}

pub(crate) fn chi_unchecked(u: &Uniform, s: &USimplex) -> Result<SubsetChain> {
    let cf = &u.cf[s.cf as usize].chain;
    let chain = s
        .chain
        .iter()
        .map(|f| chi_vertex(f, cf, u.p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubsetChain { k: u.k, chain })
}

/// `χ^A_{[V]}(W) = {j : length(V_j ∩ W) − length(V_{j−1} ∩ W) = 1}`.
pub fn chi_subgroup(v: &[SubgroupMask], w: SubgroupMask, p: usize) -> Subset {
    let mut s = 0;
    for j in 1..v.len() {
        if length(v[j] & w, p) > length(v[j - 1] & w, p) {
            s |= 1 << (j - 1);
        }
    }
    s
}

/// The subgroup of a regular `A` whose orbit partition is `e`: the block of 0.
fn subgroup_of(a: &TransAbSubgroup, e: &SetPartition) -> Result<SubgroupMask> {
    let mask = (0..a.m).filter(|&x| e.same_block(0, x)).fold(0, |acc, x| acc | 1 << x);
    if a.orbit_partition(mask).ok().as_ref() != Some(e) {
        return Err(Error::Structural(format!("{e} is not an orbit partition of this A")));
    }
    Ok(mask)
}

/// χ through every fixing `A` recorded for `s`; all must agree with the
/// partition formula.
pub fn chi_cross_check(u: &Uniform, s: &USimplex) -> Result<SubsetChain> {
    let q = s.chain.len() - 1;
    let id = u.id_of(s).ok_or_else(|| Error::Invalid("simplex is not in U".into()))?;
    let direct = chi_unchecked(u, s)?;
    for &a in &u.members[q][id] {
        let g = &u.groups[a as usize];
        let v: Vec<SubgroupMask> = u.cf[s.cf as usize]
            .chain
            .iter()
            .map(|e| subgroup_of(g, e))
            .collect::<Result<_>>()?;
        for (f, &want) in s.chain.iter().zip(&direct.chain) {
            if chi_subgroup(&v, subgroup_of(g, f)?, u.p) != want {
                return Err(Error::Structural(format!("χ differs through fixing subgroup {a}")));
            }
        }
    }
    Ok(direct)
}

/// `E'_i = E'_{i−1} ∨ (E_{s_i} ∧ F_{c_i})`, the partition form of
/// `W'_i = W'_{i−1} + V_{s_i} ∩ W_{c_i}`.
pub fn best_completion_u(u: &Uniform, tau: &USimplex) -> Result<USimplex> {
    let t = chi(u, tau)?;
    let (s, c) = t.completion_data()?;
    let cf = &u.cf[tau.cf as usize].chain;
    let mut chain = vec![SetPartition::discrete(u.m)];
    for (&si, &ci) in s.iter().zip(&c) {
        let next = chain.last().unwrap().join(&cf[si].meet(&tau.chain[ci]));
        chain.push(next);
    }
    let out = USimplex { chain, cf: tau.cf };
    if u.id_of(&out).is_none() {
        return Err(Error::Structural("best completion leaves U".into()));
    }
    Ok(out)
}

/// Whether `tau`'s chain is a subchain of `sigma`'s over the same filtration.
pub fn is_face_of(tau: &USimplex, sigma: &USimplex) -> bool {
    tau.cf == sigma.cf && {
        let mut it = sigma.chain.iter();
        tau.chain.iter().all(|e| it.any(|f| f == e))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct UniquenessReport {
    pub simplices: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

/// For every essential `τ`, exactly one essential `k`-simplex `σ ≥ τ` has
/// `d(σ) = d(τ)`, and it is the best completion.
pub fn verify_completion_uniqueness(u: &Uniform) -> Result<UniquenessReport> {
    let k = u.k;
    let mut by_cf: HashMap<u32, Vec<(&USimplex, i64)>> = HashMap::new();
    for &id in &u.essential[k] {
        let s = &u.levels[k][id];
        by_cf.entry(s.cf).or_default().push((s, chi_unchecked(u, s)?.disorder().value));
    }
    let taus: Vec<&USimplex> = (1..=k)
        .flat_map(|q| u.essential[q].iter().map(move |&id| &u.levels[q][id]))
        .collect();
    let results = crate::par::map(&taus, |tau| -> Result<Option<String>> {
        let d = chi_unchecked(u, tau)?.disorder().value;
        let hits: Vec<&USimplex> = by_cf
            .get(&tau.cf)
            .into_iter()
            .flatten()
            .filter(|(s, ds)| *ds == d && is_face_of(tau, s))
            .map(|(s, _)| *s)
            .collect();
        let best = best_completion_u(u, tau)?;
        Ok(if hits.len() != 1 || *hits[0] != best {
            Some(format!("{} completions for {:?}", hits.len(), tau))
        } else {
            None
        })
    });
    let mut rep = UniquenessReport {
        simplices: taus.len(),
        ..Default::default()
    };
    for r in results {
        if let Some(msg) = r? {
            rep.failures += 1;
            rep.first_failure.get_or_insert(msg);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct JumpReport {
    pub groups: usize,
    pub chains: usize,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl JumpReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(&mut self, other: JumpReport) {
        self.groups += other.groups;
        self.chains += other.chains;
        self.checks += other.checks;
        if self.failures.len() < 10 {
            self.failures.extend(other.failures.into_iter().take(10));
        }
    }
}

fn jump_checks_for(a: &TransAbSubgroup, p: usize, inclusion: bool) -> JumpReport {
    let subs = a.subgroups();
    let n = subs.len();
    let pos: HashMap<SubgroupMask, usize> = subs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // sum[i][j] = index of W_i + W_j
    let sum: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| pos[&a.subgroup_generated(&points(subs[i] | subs[j]))]).collect())
        .collect();
    let mut rep = JumpReport {
        groups: 1,
        ..Default::default()
    };
    let fail = |rep: &mut JumpReport, msg: String| {
        if rep.failures.len() < 10 {
            rep.failures.push(msg);
        }
    };
    for v in complete_subgroup_filtrations(a, p) {
        rep.chains += 1;
        let k = v.len() - 1;
        let chi: Vec<Subset> = subs.iter().map(|&w| chi_subgroup(&v, w, p)).collect();
        for i in 0..n {
            let w = subs[i];
            rep.checks += 1;
            if chi[i].count_ones() as usize != length(w, p) {
                fail(&mut rep, format!("#χ(W) ≠ length(W) for W = {w:#b}"));
            }
            for r in 0..=k {
                let low: Subset = (1u32 << r) - 1;
                let vw = pos[&(v[r] & w)];
                rep.checks += 2;
                if (low & chi[i]).count_ones() as usize != length(v[r] & w, p) {
                    fail(&mut rep, format!("#(r ∩ χ(W)) ≠ length(V_r ∩ W), W = {w:#b}, r = {r}"));
                }
                if chi[vw] != low & chi[i] {
                    fail(&mut rep, format!("χ(V_r ∩ W) ≠ r ∩ χ(W), W = {w:#b}, r = {r}"));
                }
            }
            for j in 0..n {
                let w2 = subs[j];
                if w & w2 != w {
                    continue;
                }
                rep.checks += 1;
                if chi[i] & !chi[j] != 0 {
                    fail(&mut rep, format!("χ not monotone at {w:#b} ⊆ {w2:#b}"));
                }
                if chi[i] == chi[j] && i != j {
                    fail(&mut rep, format!("χ(W) = χ(W') with W ⊊ W' at {w:#b}"));
                }
                if !inclusion {
                    continue;
                }
                for t in 0..n {
                    if w2 & subs[t] != w2 {
                        continue;
                    }
                    for r in 0..=k {
                        let low: Subset = (1u32 << r) - 1;
                        let a_side = subs[j] == subs[sum[i][pos[&(v[r] & subs[t])]]];
                        let b_side = chi[j] == chi[i] | (low & chi[t]);
                        rep.checks += 1;
                        if a_side != b_side {
                            fail(&mut rep, format!("inclusion equivalence fails at W={w:#b}, W'={w2:#b}, T={:#b}, r={r}", subs[t]));
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Jump properties (and optionally the inclusion equivalence over all
/// triples `W ⊆ W' ⊆ T`) for every transitive abelian `A ≤ Σ_{p^k}` and
/// every complete chain `[V]` in it.
pub fn verify_jump_properties(groups: &[TransAbSubgroup], p: usize, inclusion: bool) -> JumpReport {
    let parts = crate::par::map(groups, |a| jump_checks_for(a, p, inclusion));
    let mut rep = JumpReport::default();
    for r in parts {
        rep.merge(r);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::perm::Perm;

    fn klein_regular() -> TransAbSubgroup {
        let e = Perm::identity(4);
        let a = Perm::from_cycles(4, &[&[1, 2], &[3, 4]]);
        let b = Perm::from_cycles(4, &[&[1, 3], &[2, 4]]);
        let c = a.compose(&b);
        TransAbSubgroup::from_elements(4, &[e, a, b, c]).unwrap()
    }

    #[test]
    fn klein_chi() {
        let g = klein_regular();
        // element i sends 0 to i: (12)(34) is index 1, (13)(24) index 2
        let v = vec![1, 0b0011, 0b1111];
        assert_eq!(chi_subgroup(&v, 0b0101, 2), 0b10);
        assert_eq!(chi_subgroup(&v, 0b0011, 2), 0b01);
        let u = Uniform::build(2, 2).unwrap();
        let cf: Vec<SetPartition> = v.iter().map(|&x| g.orbit_partition(x).unwrap()).collect();
        assert_eq!(chi_vertex(&g.orbit_partition(0b0101).unwrap(), &cf, 2).unwrap(), 0b10);
        for q in 0..u.levels.len() {
            for s in &u.levels[q] {
                chi_cross_check(&u, s).unwrap();
            }
        }
    }

    #[test]
    fn completion_klein() {
        let g = klein_regular();
        let u = Uniform::build(2, 2).unwrap();
        let v = [1, 0b0011, 0b1111];
        let cf: Vec<SetPartition> = v.iter().map(|&x| g.orbit_partition(x).unwrap()).collect();
        let cfi = u.cf.iter().position(|f| f.chain == cf).unwrap() as u32;
        let (bot, top, mid) = (cf[0], cf[2], cf[1]);
        let tau = USimplex { chain: vec![bot, top], cf: cfi };
        let sigma = best_completion_u(&u, &tau).unwrap();
        assert_eq!(sigma.chain, vec![bot, mid, top]);
        assert_eq!(best_completion_u(&u, &sigma).unwrap(), sigma);
        let rep = verify_completion_uniqueness(&u).unwrap();
        assert_eq!(rep.failures, 0, "{:?}", rep.first_failure);
    }

    #[test]
    fn jump_properties_m4() {
        let u = Uniform::build(2, 2).unwrap();
        let rep = verify_jump_properties(&u.groups, 2, true);
        assert!(rep.pass(), "{:?}", rep.failures);
        assert!(rep.checks > 0);
    }
}
