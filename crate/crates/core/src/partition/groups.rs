//! Transitive abelian subgroups of Σ_m, their subgroup lattices and orbit
//! partitions.

use std::collections::{HashMap, HashSet, VecDeque};

use super::perm::{factorial, symmetric_generators, Perm};
use super::setpart::SetPartition;
use crate::error::{Error, Result};
use crate::homalg::ring::factorize;

/// A transitive abelian subgroup of Σ_m. Since the action is regular,
/// `elements[i]` is the unique element sending point 0 to point `i`, and
/// subgroups are bitmasks over points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransAbSubgroup {
    pub m: usize,
    pub elements: Vec<Perm>,
    /// Invariant factors `d_1 | d_2 | …` of the abstract group.
    pub abstract_type: Vec<usize>,
}

/// A subgroup of a [`TransAbSubgroup`], as the set of points `v(0)`.
pub type SubgroupMask = u32;

impl TransAbSubgroup {
    /// From a list of `m` permutations forming a regular abelian group.
    pub fn from_elements(m: usize, elems: &[Perm]) -> Result<Self> {
        if elems.len() != m {
            return Err(Error::Invalid(format!("expected {m} elements, got {}", elems.len())));
        }
        let mut slot: Vec<Option<Perm>> = vec![None; m];
        for g in elems {
            let i = g.apply(0);
            if slot[i].is_some() {
                return Err(Error::Invalid("action is not regular".into()));
            }
            slot[i] = Some(g.clone());
        }
        let elements: Vec<Perm> = slot.into_iter().map(|g| g.unwrap()).collect();
        let set: HashSet<&Perm> = elements.iter().collect();
        for a in &elements {
            for b in &elements {
                let ab = a.compose(b);
                if ab != b.compose(a) {
                    return Err(Error::Invalid("not abelian".into()));
                }
                if !set.contains(&ab) {
                    return Err(Error::Invalid("not closed under composition".into()));
                }
            }
        }
        let abstract_type = invariant_factors_of(&elements);
        Ok(TransAbSubgroup {
            m,
            elements,
            abstract_type,
        })
    }

    /// `mul(i, j)` is the point of `elements[i] ∘ elements[j]`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.elements[i].apply(j)
    }

    pub fn conjugate(&self, g: &Perm) -> TransAbSubgroup {
        let el: Vec<Perm> = self.elements.iter().map(|a| a.conjugate_by(g)).collect();
        TransAbSubgroup::from_elements(self.m, &el).expect("conjugate of a regular abelian group")
    }

    /// Canonical key: the sorted element list.
    pub fn key(&self) -> Vec<Perm> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }

    /// Elements commuting with every element of the group, found by trying
    /// every candidate `c_t : a(0) ↦ a(t)` (any centralizing element has this
    /// form with `t = c(0)`).
    pub fn centralizer(&self) -> Vec<Perm> {
        let m = self.m;
        (0..m)
            .filter_map(|t| {
                let mut img = vec![u8::MAX; m];
                for a in &self.elements {
                    img[a.apply(0)] = a.apply(t) as u8;
                }
                let c = Perm(img);
                self.elements.iter().all(|a| a.compose(&c) == c.compose(a)).then_some(c)
            })
            .collect()
    }

    pub fn is_self_centralizing(&self) -> bool {
        let mut c = self.centralizer();
        c.sort();
        c == self.key()
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> SubgroupMask {
        let mut mask: SubgroupMask = 1;
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if mask & (1 << y) == 0 {
                    mask |= 1 << y;
                    queue.push_back(y);
                }
            }
        }
        mask
    }

    /// All subgroups, ordered by size then mask.
    pub fn subgroups(&self) -> Vec<SubgroupMask> {
        let mut seen: HashSet<SubgroupMask> = HashSet::from([1]);
        let mut queue = VecDeque::from([1 as SubgroupMask]);
        while let Some(v) = queue.pop_front() {
            for g in 0..self.m {
                if v & (1 << g) != 0 {
                    continue;
                }
                let mut gens: Vec<usize> = points(v);
                gens.push(g);
                let w = self.subgroup_generated(&gens);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<SubgroupMask> = seen.into_iter().collect();
        out.sort_by_key(|&v| (v.count_ones(), v));
        out
    }

    pub fn full_mask(&self) -> SubgroupMask {
        ((1u64 << self.m) - 1) as SubgroupMask
    }

    /// The orbit partition `E_V`: `x ~ y` iff `v x = y` for some `v ∈ V`.
    pub fn orbit_partition(&self, v: SubgroupMask) -> Result<SetPartition> {
        if v & !self.full_mask() != 0 || v & 1 == 0 || self.subgroup_generated(&points(v)) != v {
            return Err(Error::Invalid(format!("{v:#b} is not a subgroup")));
        }
        let mut label: Vec<usize> = (0..self.m).collect();
        for x in 0..self.m {
            label[x] = points(v).iter().map(|&g| self.mul(g, x)).min().unwrap();
        }
        Ok(SetPartition::from_labels(&label))
    }

    /// Order of Aut(A), by brute force over images of a generating set.
    pub fn automorphism_count(&self) -> usize {
        let gens = minimal_generators(self);
        let m = self.m;
        let mut count = 0;
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(phi) = extend_hom(self, &gens, &choice) {
                let mut seen = phi.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() == m {
                    count += 1;
                }
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return count;
                }
                choice[i] += 1;
                if choice[i] < m {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

pub fn points(v: SubgroupMask) -> Vec<usize> {
    (0..32).filter(|&i| v & (1 << i) != 0).collect()
}

/// `log_p |V|`.
pub fn length(v: SubgroupMask, p: usize) -> usize {
    let mut n = v.count_ones() as usize;
    let mut j = 0;
    while n > 1 {
        n /= p;
        j += 1;
    }
    j
}

fn element_order(a: &TransAbSubgroup, i: usize) -> usize {
    let (mut x, mut k) = (i, 1);
    while x != 0 {
        x = a.mul(i, x);
        k += 1;
    }
    k
}

pub fn minimal_generators(a: &TransAbSubgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: SubgroupMask = 1;
    // take elements of largest order first to stay close to a basis
    let mut order: Vec<usize> = (0..a.m).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(element_order(a, i)));
    for i in order {
        if span & (1 << i) == 0 {
            gens.push(i);
            span = a.subgroup_generated(&gens);
        }
    }
    gens
}

/// Extends `gens[t] ↦ choice[t]` to a homomorphism, as a table on points.
fn extend_hom(a: &TransAbSubgroup, gens: &[usize], choice: &[usize]) -> Option<Vec<usize>> {
    let mut phi = vec![usize::MAX; a.m];
    phi[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (t, &g) in gens.iter().enumerate() {
            let y = a.mul(g, x);
            let img = a.mul(choice[t], phi[x]);
            if phi[y] == usize::MAX {
                phi[y] = img;
                queue.push_back(y);
            } else if phi[y] != img {
                return None;
            }
        }
    }
    Some(phi)
}

fn invariant_factors_of(elements: &[Perm]) -> Vec<usize> {
    // counts of elements of each order determine a finite abelian group
    let m = elements.len();
    let mut ords: Vec<usize> = elements.iter().map(|g| g.order()).collect();
    ords.sort_unstable();
    abelian_types(m)
        .into_iter()
        .find(|t| {
            let mut o = orders_of_type(t);
            o.sort_unstable();
            o == ords
        })
        .expect("abelian group of order m")
}

fn orders_of_type(t: &[usize]) -> Vec<usize> {
    let mut out = vec![1usize];
    for &d in t {
        let mut next = Vec::new();
        for &o in &out {
            for x in 0..d {
                let ox = d / crate::homalg::ring::gcd(x as i128, d as i128) as usize;
                next.push(lcm(o, ox));
            }
        }
        out = next;
    }
    out
}

fn lcm(a: usize, b: usize) -> usize {
    a / crate::homalg::ring::gcd(a as i128, b as i128) as usize * b
}

/// Invariant-factor types `d_1 | … | d_r` (each `d_i > 1`) of abelian groups
/// of order `m`.
pub fn abelian_types(m: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![Vec::new()];
    }
    // per prime: partitions of the exponent
    let per_prime: Vec<Vec<Vec<usize>>> = factorize(m as u64)
        .into_iter()
        .map(|(p, e)| {
            int_partitions(e as usize)
                .into_iter()
                .map(|parts| parts.into_iter().map(|k| (p as usize).pow(k as u32)).collect())
                .collect()
        })
        .collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for choices in per_prime {
        let mut next = Vec::new();
        for acc in &out {
            for c in &choices {
                // c is non-increasing; combine largest with largest
                let r = acc.len().max(c.len());
                let mut comb = vec![1usize; r];
                for (i, x) in acc.iter().enumerate() {
                    comb[i] *= x;
                }
                for (i, x) in c.iter().enumerate() {
                    comb[i] *= x;
                }
                next.push(comb);
            }
        }
        out = next;
    }
    for t in out.iter_mut() {
        t.reverse();
    }
    out.sort();
    out
}

fn int_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The regular representation of `Z/d_1 × … × Z/d_r` on itself, with
/// tuples numbered in mixed radix.
pub fn regular_representation(t: &[usize]) -> TransAbSubgroup {
    let m: usize = t.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        t.iter()
            .map(|&d| {
                let r = x % d;
                x /= d;
                r
            })
            .collect()
    };
    let number = |ds: &[usize]| -> usize {
        let mut x = 0;
        for (i, &d) in t.iter().enumerate().rev() {
            x = x * d + ds[i];
        }
        x
    };
    let elements: Vec<Perm> = (0..m)
        .map(|a| {
            let da = digits(a);
            Perm(
                (0..m)
                    .map(|x| {
                        let dx = digits(x);
                        let s: Vec<usize> = (0..t.len()).map(|i| (da[i] + dx[i]) % t[i]).collect();
                        number(&s) as u8
                    })
                    .collect(),
            )
        })
        .collect();
    TransAbSubgroup::from_elements(m, &elements).expect("regular representation")
}

/// One conjugacy class of transitive abelian subgroups.
#[derive(Clone, Debug)]
pub struct TransAbClass {
    pub abstract_type: Vec<usize>,
    pub members: Vec<TransAbSubgroup>,
    pub normalizer_order: u64,
    pub automorphisms: usize,
}

impl TransAbClass {
    /// `|N(A)| = m·|Aut(A)|`.
    pub fn normalizer_matches(&self) -> bool {
        let m = self.members[0].m as u64;
        self.normalizer_order == m * self.automorphisms as u64
    }
}

/// Every transitive abelian subgroup of Σ_m, grouped by conjugacy class:
/// regular representations of each abelian type closed under conjugation.
pub fn transitive_abelian_classes(m: usize) -> Result<Vec<TransAbClass>> {
    if m == 0 || m > 9 {
        return Err(Error::Guard(format!("transitive abelian subgroups need 1 ≤ m ≤ 9, got {m}")));
    }
    let gens = symmetric_generators(m);
    let classes = crate::par::map(&abelian_types(m), |t| {
        let t = t.clone();
        let a0 = regular_representation(&t);
        let mut seen: HashMap<Vec<Perm>, ()> = HashMap::from([(a0.key(), ())]);
        let mut members = vec![a0.clone()];
        let mut i = 0;
        while i < members.len() {
            for g in &gens {
                let b = members[i].conjugate(g);
                if seen.insert(b.key(), ()).is_none() {
                    members.push(b);
                }
            }
            i += 1;
        }
        let normalizer_order = factorial(m) / members.len() as u64;
        TransAbClass {
            automorphisms: a0.automorphism_count(),
            abstract_type: t,
            members,
            normalizer_order,
        }
    });
    Ok(classes)
}

pub fn transitive_abelian_subgroups(m: usize) -> Result<Vec<TransAbSubgroup>> {
    Ok(transitive_abelian_classes(m)?
        .into_iter()
        .flat_map(|c| c.members)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_types_small() {
        assert_eq!(abelian_types(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(abelian_types(12), vec![vec![2, 6], vec![12]]);
        assert_eq!(abelian_types(9).len(), 2);
    }

    #[test]
    fn m4_subgroups() {
        let all = transitive_abelian_subgroups(4).unwrap();
        assert_eq!(all.len(), 4);
        let klein = all.iter().filter(|a| a.abstract_type == vec![2, 2]).count();
        assert_eq!(klein, 1);
        for a in &all {
            assert!(a.is_self_centralizing());
        }
    }

    #[test]
    fn m8_class_sizes() {
        let cls = transitive_abelian_classes(8).unwrap();
        let sizes: Vec<(Vec<usize>, usize)> = cls.iter().map(|c| (c.abstract_type.clone(), c.members.len())).collect();
        assert_eq!(sizes, vec![(vec![2, 2, 2], 30), (vec![2, 4], 630), (vec![8], 1260)]);
        assert!(cls.iter().all(|c| c.normalizer_matches()));
    }

    #[test]
    fn klein_orbit_partitions() {
        let v = regular_representation(&[2, 2]);
        let subs = v.subgroups();
        assert_eq!(subs.len(), 5);
        assert_eq!(v.orbit_partition(1).unwrap(), SetPartition::discrete(4));
        assert_eq!(v.orbit_partition(v.full_mask()).unwrap(), SetPartition::indiscrete(4));
        assert!(v.orbit_partition(0b0110).is_err());
        assert_eq!(v.automorphism_count(), 6);
    }
}
