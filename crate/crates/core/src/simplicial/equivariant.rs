//! Σ_m-actions on simplicial sets and fixed subcomplexes.

use std::sync::Arc;

use super::poset::FinPoset;
use super::sset::{nerve, FaceRef, Nerve, SSet};
use crate::error::{Error, Result};
use crate::partition::perm::{symmetric_generators, Perm};

/// Action of a permutation on the nondegenerate `q`-simplex `x`.
pub type ActionFn = Arc<dyn Fn(&Perm, usize, usize) -> usize + Send + Sync>;

#[derive(Clone)]
pub struct EquivariantSSet {
    pub sset: SSet,
    pub m: usize,
    pub generators: Vec<Perm>,
    act: ActionFn,
}

impl std::fmt::Debug for EquivariantSSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EquivariantSSet")
            .field("m", &self.m)
            .field("counts", &self.sset.counts())
            .finish()
    }
}

impl EquivariantSSet {
    pub fn new(sset: SSet, m: usize, act: ActionFn) -> Self {
        EquivariantSSet {
            sset,
            m,
            generators: symmetric_generators(m),
            act,
        }
    }

    pub fn act(&self, g: &Perm, q: usize, x: usize) -> usize {
        (self.act)(g, q, x)
    }

    pub fn action_fn(&self) -> ActionFn {
        self.act.clone()
    }

    /// Faces commute with the generators, and the Coxeter-style relations of
    /// the generators act trivially.
    pub fn check_action(&self) -> Result<()> {
        let s = &self.sset;
        for g in &self.generators {
            for q in 0..s.faces.len() {
                for x in 0..s.count(q) {
                    let gx = self.act(g, q, x);
                    if gx >= s.count(q) {
                        return Err(Error::Axiom(format!("action leaves dimension {q}")));
                    }
                    if q == 0 {
                        continue;
                    }
                    for (i, f) in s.faces[q][x].iter().enumerate() {
                        let lhs = &s.faces[q][gx][i];
                        let rhs = FaceRef {
                            dim: f.dim,
                            id: self.act(g, f.dim, f.id),
                            degeneracy: f.degeneracy.clone(),
                        };
                        if *lhs != rhs {
                            return Err(Error::Axiom(format!(
                                "action does not commute with d_{i} on simplex {x}, dimension {q}"
                            )));
                        }
                    }
                }
            }
        }
        // relations: each generator to its order is the identity
        for g in &self.generators {
            let ord = g.order();
            for q in 0..s.faces.len() {
                for x in 0..s.count(q) {
                    let mut y = x;
                    for _ in 0..ord {
                        y = self.act(g, q, y);
                    }
                    if y != x {
                        return Err(Error::Axiom(format!("g^{ord} ≠ 1 on simplex {x}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The nerve of a poset carrying a Σ_m-action by automorphisms on its elements.
pub fn equivariant_nerve(
    p: &FinPoset,
    m: usize,
    elem_act: Arc<dyn Fn(&Perm, usize) -> usize + Send + Sync>,
) -> (Nerve, EquivariantSSet) {
    let n = nerve(p);
    let chains = Arc::new(n.chains.clone());
    let index = Arc::new(n.index.clone());
    // along a strict chain the up-sets shrink strictly, so their sizes
    // recover the chain order of an image
    let up_size: Arc<Vec<usize>> = Arc::new((0..p.len()).map(|e| p.above(e).len()).collect());
    let act: ActionFn = Arc::new(move |g: &Perm, q: usize, x: usize| {
        let mut c: Vec<usize> = chains[q][x].iter().map(|&e| elem_act(g, e)).collect();
        c.sort_unstable_by_key(|&e| std::cmp::Reverse(up_size[e]));
        *index.get(&c).expect("group action does not preserve the nerve")
    });
    let eq = EquivariantSSet::new(n.sset.clone(), m, act);
    (n, eq)
}

/// Simplices fixed by every generator of `h`, with inherited faces. Returns
/// the subcomplex and, per dimension, the ids it keeps.
pub fn fixed_subcomplex(x: &EquivariantSSet, h: &[Perm]) -> (SSet, Vec<Vec<usize>>) {
    let s = &x.sset;
    let kept: Vec<Vec<usize>> = (0..s.faces.len())
        .map(|q| {
            (0..s.count(q))
                .filter(|&y| h.iter().all(|g| x.act(g, q, y) == y))
                .collect()
        })
        .collect();
    let mut new_id: Vec<Vec<usize>> = (0..s.faces.len()).map(|q| vec![usize::MAX; s.count(q)]).collect();
    for (q, ks) in kept.iter().enumerate() {
        for (i, &y) in ks.iter().enumerate() {
            new_id[q][y] = i;
        }
    }
    let mut faces: Vec<Vec<Vec<FaceRef>>> = kept
        .iter()
        .enumerate()
        .map(|(q, ks)| {
            ks.iter()
                .map(|&y| {
                    s.faces[q][y]
                        .iter()
                        .map(|f| FaceRef {
                            dim: f.dim,
                            id: new_id[f.dim][f.id],
                            degeneracy: f.degeneracy.clone(),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    while faces.last().is_some_and(|l| l.is_empty()) {
        faces.pop();
    }
    (SSet { faces }, kept)
}
