//! Chains of pointed Σ_m-simplicial sets through a sum-preserving functor.

use std::collections::BTreeMap;

use super::equivariant::{ActionFn, EquivariantSSet};
use super::sset::SSet;
use crate::error::{Error, Result};
use crate::homalg::{ChainComplex, CoeffRing};
use crate::partition::perm::Perm;
use crate::qfunctors::functors::{apply_map, check_additivity, layout, QLayout, SumFunctor};
use crate::qfunctors::gset::{GSet, Restrict};

/// A pointed simplicial Σ_m-set seen through its live (off-basepoint)
/// nondegenerate simplices.
pub trait PointedLevels: Sync {
    fn degree(&self) -> usize;
    /// One more than the top dimension.
    fn dims(&self) -> usize;
    fn level_len(&self, q: usize) -> usize;
    fn act(&self, g: &Perm, q: usize, x: usize) -> usize;
    /// `d_i x`, or `None` when it is degenerate or at the basepoint.
    fn face(&self, q: usize, x: usize, i: usize) -> Option<usize>;
}

/// The Σ_m-set `X_q` of live nondegenerate `q`-simplices.
pub struct Level<'a> {
    pub x: &'a dyn PointedLevels,
    pub q: usize,
}

impl GSet for Level<'_> {
    fn degree(&self) -> usize {
        self.x.degree()
    }
    fn len(&self) -> usize {
        self.x.level_len(self.q)
    }
    fn act(&self, g: &Perm, p: usize) -> usize {
        self.x.act(g, self.q, p)
    }
}

/// Live simplices of a simplicial set with a collapsed subcomplex and an
/// optional action (trivial when absent).
pub struct LiveView {
    sset: SSet,
    m: usize,
    act: Option<ActionFn>,
    live: Vec<Vec<usize>>,
    new_id: Vec<Vec<usize>>,
}

impl LiveView {
    pub fn new(sset: SSet, collapsed: &[Vec<bool>], m: usize, act: Option<ActionFn>) -> Self {
        let mut live = Vec::new();
        let mut new_id = Vec::new();
        for q in 0..sset.faces.len() {
            let mut ids = vec![usize::MAX; sset.count(q)];
            let mut l = Vec::new();
            for (x, slot) in ids.iter_mut().enumerate() {
                if !collapsed.get(q).is_some_and(|c| c[x]) {
                    *slot = l.len();
                    l.push(x);
                }
            }
            live.push(l);
            new_id.push(ids);
        }
        LiveView {
            sset,
            m,
            act,
            live,
            new_id,
        }
    }

    pub fn equivariant(x: &EquivariantSSet, collapsed: &[Vec<bool>]) -> Self {
        LiveView::new(x.sset.clone(), collapsed, x.m, Some(x.action_fn()))
    }

    /// Original id of live simplex `x`.
    pub fn original(&self, q: usize, x: usize) -> usize {
        self.live[q][x]
    }
}

impl PointedLevels for LiveView {
    fn degree(&self) -> usize {
        self.m
    }
    fn dims(&self) -> usize {
        self.live.len()
    }
    fn level_len(&self, q: usize) -> usize {
        self.live.get(q).map_or(0, |l| l.len())
    }
    fn act(&self, g: &Perm, q: usize, x: usize) -> usize {
        match &self.act {
            Some(a) => self.new_id[q][a(g, q, self.live[q][x])],
            None => x,
        }
    }
    fn face(&self, q: usize, x: usize, i: usize) -> Option<usize> {
        let f = &self.sset.faces[q][self.live[q][x]][i];
        if f.is_degenerate() {
            return None;
        }
        let id = self.new_id[f.dim][f.id];
        (id != usize::MAX).then_some(id)
    }
}

/// `Q̃(X)` with its orbit layouts per degree.
pub struct FunctorChains {
    pub complex: ChainComplex,
    pub layouts: Vec<QLayout>,
}

/// Normalized chains `q ↦ Q̃(X_q)` with boundary `Σ (−1)^i Q(d_i)`.
pub fn chains_via_functor(x: &dyn PointedLevels, q: &dyn SumFunctor, ring: CoeffRing) -> Result<FunctorChains> {
    let dims = x.dims();
    let levels: Vec<Level> = (0..dims).map(|d| Level { x, q: d }).collect();
    let layouts: Vec<QLayout> = levels.iter().map(|l| layout(q, l)).collect();
    // additivity on one split of the largest level with two or more orbits
    if let Some((d, l)) = layouts
        .iter()
        .enumerate()
        .filter(|(_, l)| l.orbits.orbits.len() >= 2)
        .max_by_key(|(_, l)| l.orbits.orbits.len())
    {
        let a = Restrict::new(&levels[d], l.orbits.orbits[0].clone());
        let b = Restrict::new(&levels[d], l.orbits.orbits[1].clone());
        check_additivity(q, &a, &b).map_err(|e| Error::Structural(format!("additivity: {e}")))?;
    }
    let ar = ring.arith();
    let mut ranks = BTreeMap::new();
    let mut bounds = BTreeMap::new();
    for d in 0..dims {
        ranks.insert(d as i64, layouts[d].rank);
    }
    for d in 1..dims {
        let mut acc: Option<crate::homalg::SparseMatrix> = None;
        for i in 0..=d {
            let qi = apply_map(q, &levels[d], &layouts[d], &levels[d - 1], &layouts[d - 1], &|p| x.face(d, p, i), ring)?;
            let qi = if i % 2 == 1 { qi.scale(ar.from_int(-1)) } else { qi };
            acc = Some(match acc {
                None => qi,
                Some(a) => a.add(&qi)?,
            });
        }
        bounds.insert(d as i64, acc.unwrap());
    }
    Ok(FunctorChains {
        complex: ChainComplex::new(ring, ranks, bounds)?,
        layouts,
    })
}

/// Checks `d_i (g x) = g (d_i x)` on generators for every live simplex.
pub fn check_levels_equivariant(x: &dyn PointedLevels) -> Result<()> {
    for g in crate::partition::perm::symmetric_generators(x.degree()) {
        for q in 1..x.dims() {
            for p in 0..x.level_len(q) {
                let gp = x.act(&g, q, p);
                for i in 0..=q {
                    let lhs = x.face(q, gp, i);
                    let rhs = x.face(q, p, i).map(|f| x.act(&g, q - 1, f));
                    if lhs != rhs {
                        return Err(Error::Axiom(format!("face d_{i} is not equivariant at ({q}, {p})")));
                    }
                }
            }
        }
    }
    Ok(())
}
