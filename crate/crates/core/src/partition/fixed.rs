//! Fixed posets `P_m^A` and the homology of `P̄_m` and `P̄_m^A`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::groups::{minimal_generators, SubgroupMask, TransAbSubgroup};
use super::setpart::{all_partitions, partition_guard, SetPartition};
use crate::error::{Error, Result};
use crate::homalg::{homology_all, CoeffRing, Degree, ModulePresentation};
use crate::simplicial::sset::bounded_subcomplexes;
use crate::simplicial::FinPoset;

/// Partitions of `{0..m-1}` fixed by every element of `A`.
pub fn fixed_partitions(a: &TransAbSubgroup) -> Vec<SetPartition> {
    let gens: Vec<_> = minimal_generators(a).into_iter().map(|i| a.elements[i].clone()).collect();
    all_partitions(a.m)
        .into_iter()
        .filter(|e| gens.iter().all(|g| e.act(g) == *e))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPosetIso {
    pub m: usize,
    pub subgroups: Vec<SubgroupMask>,
    /// `E_V` for each subgroup, in the same order.
    pub images: Vec<String>,
    pub fixed_count: usize,
    pub bijective: bool,
    /// `V ≤ W ⇔ E_V ≤ E_W`.
    pub order_isomorphism: bool,
    /// `0 ↦ 0̂` and `A ↦ 1̂`.
    pub bounds: bool,
}

impl FixedPosetIso {
    pub fn pass(&self) -> bool {
        self.bijective && self.order_isomorphism && self.bounds
    }
}

/// Compares the subgroup lattice of `A` with `P_m^A` through `V ↦ E_V`.
pub fn fixed_poset_iso(a: &TransAbSubgroup) -> Result<FixedPosetIso> {
    let subs = a.subgroups();
    let images: Vec<SetPartition> = subs.iter().map(|&v| a.orbit_partition(v)).collect::<Result<_>>()?;
    let fixed = fixed_partitions(a);
    let distinct: HashMap<SetPartition, usize> = images.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let bijective = distinct.len() == subs.len() && fixed.len() == subs.len() && fixed.iter().all(|e| distinct.contains_key(e));
    let order_isomorphism = subs.iter().zip(&images).all(|(&v, ev)| {
        subs.iter().zip(&images).all(|(&w, ew)| (v & w == v) == ev.refines(ew))
    });
    let bounds = images.first() == Some(&SetPartition::discrete(a.m)) && images.last() == Some(&SetPartition::indiscrete(a.m));
    Ok(FixedPosetIso {
        m: a.m,
        subgroups: subs,
        images: images.iter().map(|e| e.to_string()).collect(),
        fixed_count: fixed.len(),
        bijective,
        order_isomorphism,
        bounds,
    })
}

fn poset_of(elements: &[SetPartition]) -> Result<FinPoset> {
    FinPoset::from_fn(elements.iter().map(|e| e.to_string()).collect(), |i, j| elements[i].refines(&elements[j]))
}

/// Reduced homology of `P̄_m = nerve(P_m)/P◇_m`, or of `P̄_m^A` when `a` is given.
pub fn partition_homology(m: usize, a: Option<&TransAbSubgroup>, ring: CoeffRing) -> Result<BTreeMap<Degree, ModulePresentation>> {
    if m < 2 {
        return Err(Error::Invalid("P̄_m needs m ≥ 2 (0̂ ≠ 1̂)".into()));
    }
    let elements = match a {
        Some(a) if a.m != m => return Err(Error::Invalid(format!("A acts on {} points, not {m}", a.m))),
        Some(a) => fixed_partitions(a),
        None => {
            let guard = partition_guard().min(7);
            if m > guard {
                return Err(Error::Guard(format!("the full nerve of P_m is limited to m ≤ {guard}")));
            }
            all_partitions(m)
        }
    };
    let b = bounded_subcomplexes(&poset_of(&elements)?)?;
    let h = homology_all(&b.bar.chains(ring)?)?;
    Ok(h.into_iter().filter(|(_, x)| !x.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::transitive_abelian_classes;

    #[test]
    fn lattices() {
        for (m, sizes) in [(4usize, vec![3usize, 5]), (8, vec![4, 8, 16])] {
            let mut seen: Vec<usize> = transitive_abelian_classes(m)
                .unwrap()
                .iter()
                .map(|c| {
                    let a = &c.members[c.members.len() - 1];
                    let r = fixed_poset_iso(a).unwrap();
                    assert!(r.pass(), "{r:?}");
                    r.fixed_count
                })
                .collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen, sizes);
        }
    }

    #[test]
    fn small_homology() {
        let z = CoeffRing::Integers;
        let h = partition_homology(3, None, z).unwrap();
        assert_eq!(h, BTreeMap::from([(2, ModulePresentation::free(2))]));
        let h = partition_homology(4, None, z).unwrap();
        assert_eq!(h, BTreeMap::from([(3, ModulePresentation::free(6))]));
    }
}
