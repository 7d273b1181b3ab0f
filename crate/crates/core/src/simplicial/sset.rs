//! Finite simplicial sets stored by nondegenerate simplices, nerves of
//! posets, pointed quotients and normalized chains.

use std::collections::{BTreeMap, HashMap};

use super::poset::FinPoset;
use crate::error::{Error, Result};
use crate::homalg::{ChainComplex, CoeffRing, SparseMatrix};

/// A possibly degenerate simplex `s_{j_1} ⋯ s_{j_r}(y)` with `y` nondegenerate
/// of dimension `dim`; `degeneracy` is canonical (strictly decreasing).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceRef {
    pub dim: usize,
    pub id: usize,
    pub degeneracy: Vec<usize>,
}

impl FaceRef {
    pub fn simplex(dim: usize, id: usize) -> Self {
        FaceRef {
            dim,
            id,
            degeneracy: Vec::new(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degeneracy.is_empty()
    }
}

/// Rewrites a word of degeneracies into the canonical decreasing form using
/// `s_i s_j = s_{j+1} s_i` for `i ≤ j`.
fn canonical_degeneracy(mut w: Vec<usize>) -> Vec<usize> {
    let mut changed = true;
    while changed {
        changed = false;
        for t in 0..w.len().saturating_sub(1) {
            let (i, j) = (w[t], w[t + 1]);
            if i <= j {
                w[t] = j + 1;
                w[t + 1] = i;
                changed = true;
            }
        }
    }
    w
}

#[derive(Clone, Debug, Default)]
pub struct SSet {
    /// `faces[q][x]` lists `d_0 x, …, d_q x` for each nondegenerate q-simplex
    /// (empty for q = 0).
    pub faces: Vec<Vec<Vec<FaceRef>>>,
}

impl SSet {
    pub fn count(&self, q: usize) -> usize {
        self.faces.get(q).map_or(0, |v| v.len())
    }

    pub fn dim(&self) -> Option<usize> {
        (0..self.faces.len()).rev().find(|&q| self.count(q) > 0)
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..self.faces.len()).map(|q| self.count(q)).collect()
    }

    /// `d_i` of a possibly degenerate simplex of dimension `dim + |degeneracy|`.
    pub fn face_of(&self, x: &FaceRef, i: usize) -> FaceRef {
        fn go(s: &SSet, word: &[usize], dim: usize, id: usize, i: usize) -> (Vec<usize>, FaceRef) {
            match word.split_first() {
                None => {
                    let f = s.faces[dim][id][i].clone();
                    (Vec::new(), f)
                }
                Some((&j, rest)) => {
                    if i < j {
                        let (mut w, f) = go(s, rest, dim, id, i);
                        w.insert(0, j - 1);
                        (w, f)
                    } else if i == j || i == j + 1 {
                        (rest.to_vec(), FaceRef::simplex(dim, id))
                    } else {
                        let (mut w, f) = go(s, rest, dim, id, i - 1);
                        w.insert(0, j);
                        (w, f)
                    }
                }
            }
        }
        let (mut w, base) = go(self, &x.degeneracy, x.dim, x.id, i);
        w.extend(base.degeneracy);
        FaceRef {
            dim: base.dim,
            id: base.id,
            degeneracy: canonical_degeneracy(w),
        }
    }

    /// Checks `d_i d_j = d_{j−1} d_i` for `i < j` on every nondegenerate simplex.
    pub fn check_identities(&self) -> Result<()> {
        for q in 2..self.faces.len() {
            for x in 0..self.count(q) {
                let xs = FaceRef::simplex(q, x);
                for j in 0..=q {
                    let dj = self.face_of(&xs, j);
                    for i in 0..j {
                        let lhs = self.face_of(&dj, i);
                        let rhs = self.face_of(&self.face_of(&xs, i), j - 1);
                        if lhs != rhs {
                            return Err(Error::Axiom(format!(
                                "simplicial identity d_{i} d_{j} fails on simplex {x} of dimension {q}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Normalized chains; faces landing on degenerate simplices contribute 0.
    pub fn chains(&self, ring: CoeffRing) -> Result<ChainComplex> {
        let none: Vec<Vec<bool>> = Vec::new();
        normalized_chains(self, &none, ring, false)
    }

    /// Augmented normalized chains (a copy of R in degree −1), whose
    /// homology is reduced homology; the empty set has `H̃_{−1} = R`.
    pub fn reduced_chains(&self, ring: CoeffRing) -> Result<ChainComplex> {
        let none: Vec<Vec<bool>> = Vec::new();
        normalized_chains(self, &none, ring, true)
    }
}

fn normalized_chains(
    s: &SSet,
    collapsed: &[Vec<bool>],
    ring: CoeffRing,
    augment: bool,
) -> Result<ChainComplex> {
    let is_coll = |q: usize, x: usize| collapsed.get(q).is_some_and(|v| v[x]);
    let mut index: Vec<Vec<usize>> = Vec::new();
    let mut ranks = BTreeMap::new();
    for q in 0..s.faces.len() {
        let mut idx = vec![usize::MAX; s.count(q)];
        let mut n = 0;
        for (x, slot) in idx.iter_mut().enumerate() {
            if !is_coll(q, x) {
                *slot = n;
                n += 1;
            }
        }
        ranks.insert(q as i64, n);
        index.push(idx);
    }
    let ar = ring.arith();
    let mut bounds = BTreeMap::new();
    for q in 1..s.faces.len() {
        let mut ents = Vec::new();
        for x in 0..s.count(q) {
            let col = index[q][x];
            if col == usize::MAX {
                continue;
            }
            for (i, f) in s.faces[q][x].iter().enumerate() {
                if f.is_degenerate() || is_coll(f.dim, f.id) {
                    continue;
                }
                let sign = if i % 2 == 0 { 1 } else { -1 };
                ents.push((index[q - 1][f.id], col, ar.from_int(sign)));
            }
        }
        bounds.insert(
            q as i64,
            SparseMatrix::from_triplets(ring, ranks[&(q as i64 - 1)], ranks[&(q as i64)], ents),
        );
    }
    if augment {
        let n0 = ranks.get(&0).copied().unwrap_or(0);
        ranks.insert(-1, 1);
        bounds.insert(
            0,
            SparseMatrix::from_triplets(ring, 1, n0, (0..n0).map(|j| (0, j, 1))),
        );
    }
    ChainComplex::new(ring, ranks, bounds)
}

/// A simplicial set with a subcomplex collapsed to the basepoint.
#[derive(Clone, Debug)]
pub struct PointedSSet {
    pub sset: SSet,
    /// A vertex representing the collapsed class.
    pub basepoint: usize,
    pub collapsed: Vec<Vec<bool>>,
}

impl PointedSSet {
    /// Nondegenerate simplices off the basepoint, per dimension.
    pub fn live_counts(&self) -> Vec<usize> {
        (0..self.sset.faces.len())
            .map(|q| {
                (0..self.sset.count(q))
                    .filter(|&x| !self.collapsed[q][x])
                    .count()
            })
            .collect()
    }

    pub fn check_collapsed_closed(&self) -> Result<()> {
        for q in 1..self.sset.faces.len() {
            for x in 0..self.sset.count(q) {
                if self.collapsed[q][x]
                    && self.sset.faces[q][x].iter().any(|f| !self.collapsed[f.dim][f.id])
                {
                    return Err(Error::Axiom(format!(
                        "collapsed set is not closed under faces at simplex {x}, dimension {q}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Normalized chains of the quotient, free on the live simplices; this
    /// computes reduced homology of the pointed set.
    pub fn chains(&self, ring: CoeffRing) -> Result<ChainComplex> {
        normalized_chains(&self.sset, &self.collapsed, ring, false)
    }
}

/// Nerve of a poset: nondegenerate simplices are strict chains.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub chains: Vec<Vec<Vec<usize>>>,
    pub index: HashMap<Vec<usize>, usize>,
    pub sset: SSet,
}

impl Nerve {
    pub fn id_of(&self, chain: &[usize]) -> Option<usize> {
        self.index.get(chain).copied()
    }
}

pub fn nerve(p: &FinPoset) -> Nerve {
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut q = 0;
    loop {
        let c = p.strict_chains(q);
        if c.is_empty() {
            break;
        }
        chains.push(c);
        q += 1;
    }
    nerve_from_chains(chains)
}

/// Nerve on a face-closed family of strict chains.
pub fn nerve_from_chains(chains: Vec<Vec<Vec<usize>>>) -> Nerve {
    let mut index = HashMap::new();
    for level in &chains {
        for (i, c) in level.iter().enumerate() {
            index.insert(c.clone(), i);
        }
    }
    let faces = chains
        .iter()
        .enumerate()
        .map(|(q, level)| {
            level
                .iter()
                .map(|c| {
                    if q == 0 {
                        return Vec::new();
                    }
                    (0..=q)
                        .map(|i| {
                            let mut f = c.clone();
                            f.remove(i);
                            FaceRef::simplex(q - 1, index[&f])
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Nerve {
        chains,
        index,
        sset: SSet { faces },
    }
}

/// The subcomplexes X̂, X̌, Ẍ, X◇ and the pointed quotient X̄ = X/X◇.
pub struct Bounded {
    pub hat: Nerve,
    pub check: Nerve,
    pub ddot: Nerve,
    /// Chains of the full nerve lying in X◇, marked per dimension.
    pub diamond: Vec<Vec<bool>>,
    pub full: Nerve,
    pub bar: PointedSSet,
}

pub fn bounded_subcomplexes(p: &FinPoset) -> Result<Bounded> {
    let (b, t) = p.bounds()?;
    let full = nerve(p);
    let sub = |skip: &[usize]| -> Nerve {
        let chains: Vec<Vec<Vec<usize>>> = full
            .chains
            .iter()
            .map(|lvl| {
                lvl.iter()
                    .filter(|c| !c.iter().any(|x| skip.contains(x)))
                    .cloned()
                    .collect::<Vec<_>>()
            })
            .filter(|lvl: &Vec<Vec<usize>>| !lvl.is_empty())
            .collect();
        nerve_from_chains(chains)
    };
    let hat = sub(&[b]);
    let check = sub(&[t]);
    let ddot = sub(&[b, t]);
    let diamond: Vec<Vec<bool>> = full
        .chains
        .iter()
        .map(|lvl| lvl.iter().map(|c| !(c.contains(&b) && c.contains(&t))).collect())
        .collect();
    let bar = PointedSSet {
        sset: full.sset.clone(),
        basepoint: full.id_of(&[b]).unwrap(),
        collapsed: diamond.clone(),
    };
    Ok(Bounded {
        hat,
        check,
        ddot,
        diamond,
        full,
        bar,
    })
}

/// Levelwise `X_q ∧ S₊`: off-basepoint simplices are pairs `(x, s)`.
/// Simplex `(x, s)` has id `x * |S| + s`.
pub fn smash_with_discrete(x: &PointedSSet, s_len: usize) -> PointedSSet {
    if s_len == 0 {
        let faces = vec![vec![Vec::new()]];
        return PointedSSet {
            sset: SSet { faces },
            basepoint: 0,
            collapsed: vec![vec![true]],
        };
    }
    let faces = x
        .sset
        .faces
        .iter()
        .map(|lvl| {
            lvl.iter()
                .flat_map(|fs| {
                    (0..s_len).map(move |s| {
                        fs.iter()
                            .map(|f| FaceRef {
                                dim: f.dim,
                                id: f.id * s_len + s,
                                degeneracy: f.degeneracy.clone(),
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let collapsed = x
        .collapsed
        .iter()
        .map(|lvl| lvl.iter().flat_map(|&c| std::iter::repeat(c).take(s_len)).collect())
        .collect();
    PointedSSet {
        sset: SSet { faces },
        basepoint: x.basepoint * s_len,
        collapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::homology_all;
    use crate::simplicial::poset::chain_poset;

    #[test]
    fn point_and_interval() {
        let n = nerve(&chain_poset(1));
        assert_eq!(n.sset.counts(), vec![1]);
        let n = nerve(&chain_poset(2));
        assert_eq!(n.sset.counts(), vec![2, 1]);
    }

    #[test]
    fn interval_bounded_pieces() {
        let b = bounded_subcomplexes(&chain_poset(2)).unwrap();
        assert_eq!(b.ddot.sset.counts(), Vec::<usize>::new());
        assert_eq!(b.bar.live_counts(), vec![0, 1]);
        let h = homology_all(&b.bar.chains(CoeffRing::Integers).unwrap()).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[&1].free_rank, 1);
        let hd = homology_all(&b.ddot.sset.reduced_chains(CoeffRing::Integers).unwrap()).unwrap();
        assert_eq!(hd[&-1].free_rank, 1);
    }

    #[test]
    fn degenerate_faces_resolve() {
        let n = nerve(&chain_poset(3));
        n.sset.check_identities().unwrap();
        // d_0 of s_0(x) is x
        let x = FaceRef { dim: 1, id: 0, degeneracy: vec![0] };
        assert_eq!(n.sset.face_of(&x, 0), FaceRef::simplex(1, 0));
        assert_eq!(canonical_degeneracy(vec![0, 0]), vec![1, 0]);
    }

    #[test]
    fn smash_counts() {
        let b = bounded_subcomplexes(&chain_poset(3)).unwrap();
        let s = smash_with_discrete(&b.bar, 3);
        let base: Vec<usize> = b.bar.live_counts().iter().map(|c| 3 * c).collect();
        assert_eq!(s.live_counts(), base);
        assert_eq!(smash_with_discrete(&b.bar, 1).live_counts(), b.bar.live_counts());
        assert_eq!(smash_with_discrete(&b.bar, 0).live_counts(), vec![0]);
    }
}
