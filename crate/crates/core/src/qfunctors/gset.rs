//! Finite Σ_m-sets, orbit decomposition and isotropy.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::partition::perm::{is_transitive, point_orbits, symmetric_generators, Perm};

/// A finite set with a left Σ_m-action.
pub trait GSet: Sync {
    fn degree(&self) -> usize;
    fn len(&self) -> usize;
    fn act(&self, g: &Perm, x: usize) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Σ_m acting on cosets given explicitly as a list of distinct objects.
pub struct ExplicitGSet<T> {
    pub m: usize,
    pub points: Vec<T>,
    index: HashMap<T, usize>,
    action: fn(&Perm, &T) -> T,
}

impl<T: Clone + Eq + std::hash::Hash + Sync + Send> ExplicitGSet<T> {
    pub fn new(m: usize, points: Vec<T>, action: fn(&Perm, &T) -> T) -> Self {
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        ExplicitGSet {
            m,
            points,
            index,
            action,
        }
    }

    pub fn index_of(&self, t: &T) -> Option<usize> {
        self.index.get(t).copied()
    }
}

impl<T: Clone + Eq + std::hash::Hash + Sync + Send> GSet for ExplicitGSet<T> {
    fn degree(&self) -> usize {
        self.m
    }
    fn len(&self) -> usize {
        self.points.len()
    }
    fn act(&self, g: &Perm, x: usize) -> usize {
        let y = (self.action)(g, &self.points[x]);
        *self.index.get(&y).expect("action leaves the set")
    }
}

/// The coset space Σ_m/H, enumerated from the identity coset.
pub struct CosetSpace {
    m: usize,
    reps: Vec<Perm>,
    index: HashMap<Vec<u8>, usize>,
    h: Vec<Perm>,
}

impl CosetSpace {
    /// `h_elements` must be the full subgroup.
    pub fn new(m: usize, h_elements: Vec<Perm>) -> Self {
        let key = |g: &Perm, h: &[Perm]| -> Vec<u8> {
            h.iter().map(|x| g.compose(x)).min().unwrap().0
        };
        let id = Perm::identity(m);
        let mut reps = vec![id.clone()];
        let mut index = HashMap::from([(key(&id, &h_elements), 0)]);
        let gens = symmetric_generators(m);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let t = s.compose(&g);
                let k = key(&t, &h_elements);
                if !index.contains_key(&k) {
                    index.insert(k, reps.len());
                    reps.push(t.clone());
                    queue.push_back(t);
                }
            }
        }
        CosetSpace {
            m,
            reps,
            index,
            h: h_elements,
        }
    }

    pub fn representative(&self, x: usize) -> &Perm {
        &self.reps[x]
    }
}

impl GSet for CosetSpace {
    fn degree(&self) -> usize {
        self.m
    }
    fn len(&self) -> usize {
        self.reps.len()
    }
    fn act(&self, g: &Perm, x: usize) -> usize {
        let t = g.compose(&self.reps[x]);
        let k = self.h.iter().map(|y| t.compose(y)).min().unwrap().0;
        self.index[&k]
    }
}

/// Disjoint union `X ⊔ Y`; points of `Y` are shifted by `|X|`.
pub struct Union<'a> {
    pub x: &'a dyn GSet,
    pub y: &'a dyn GSet,
}

impl GSet for Union<'_> {
    fn degree(&self) -> usize {
        self.x.degree()
    }
    fn len(&self) -> usize {
        self.x.len() + self.y.len()
    }
    fn act(&self, g: &Perm, p: usize) -> usize {
        let n = self.x.len();
        if p < n {
            self.x.act(g, p)
        } else {
            n + self.y.act(g, p - n)
        }
    }
}

/// An invariant subset of `X`, renumbered in the given order.
pub struct Restrict<'a> {
    pub x: &'a dyn GSet,
    pub points: Vec<usize>,
    pos: HashMap<usize, usize>,
}

impl<'a> Restrict<'a> {
    pub fn new(x: &'a dyn GSet, points: Vec<usize>) -> Self {
        let pos = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Restrict { x, points, pos }
    }
}

impl GSet for Restrict<'_> {
    fn degree(&self) -> usize {
        self.x.degree()
    }
    fn len(&self) -> usize {
        self.points.len()
    }
    fn act(&self, g: &Perm, p: usize) -> usize {
        *self
            .pos
            .get(&self.x.act(g, self.points[p]))
            .expect("subset is not invariant")
    }
}

/// Orbits of Σ_m; orbits are ordered by least point and list points ascending.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub orbit_of: Vec<usize>,
    pub pos: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

pub fn orbits(x: &dyn GSet) -> Orbits {
    let n = x.len();
    let gens = symmetric_generators(x.degree());
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut pts = vec![start];
        orbit_of[start] = id;
        let mut i = 0;
        while i < pts.len() {
            let p = pts[i];
            for g in &gens {
                let q = x.act(g, p);
                if orbit_of[q] == usize::MAX {
                    orbit_of[q] = id;
                    pts.push(q);
                }
            }
            i += 1;
        }
        pts.sort_unstable();
        orbits.push(pts);
    }
    let mut pos = vec![0; n];
    for o in &orbits {
        for (i, &p) in o.iter().enumerate() {
            pos[p] = i;
        }
    }
    Orbits {
        orbit_of,
        pos,
        orbits,
    }
}

/// Schreier generators of the isotropy group of `point`.
pub fn stabilizer_generators(x: &dyn GSet, point: usize) -> Vec<Perm> {
    let m = x.degree();
    let gens = symmetric_generators(m);
    let mut transversal: HashMap<usize, Perm> = HashMap::from([(point, Perm::identity(m))]);
    let mut queue = VecDeque::from([point]);
    let mut out: HashSet<Perm> = HashSet::new();
    while let Some(p) = queue.pop_front() {
        let tp = transversal[&p].clone();
        for g in &gens {
            let q = x.act(g, p);
            let gtp = g.compose(&tp);
            match transversal.get(&q) {
                Some(tq) => {
                    let s = tq.inverse().compose(&gtp);
                    if !s.is_identity() {
                        out.insert(s);
                    }
                }
                None => {
                    transversal.insert(q, gtp);
                    queue.push_back(q);
                }
            }
        }
    }
    let mut v: Vec<Perm> = out.into_iter().collect();
    v.sort();
    v
}

/// Whether the isotropy group of `point` acts transitively on {1..m}.
pub fn isotropy_is_transitive(x: &dyn GSet, point: usize) -> bool {
    is_transitive(x.degree(), &stabilizer_generators(x, point))
}

/// The isotropy orbit of `0` in {0..m-1}.
pub fn isotropy_orbit_of_first(x: &dyn GSet, point: usize) -> Vec<usize> {
    let gens = stabilizer_generators(x, point);
    point_orbits(x.degree(), &gens)
        .into_iter()
        .find(|o| o.contains(&0))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::perm::{closure, factorial};

    #[test]
    fn coset_space_sizes() {
        let v = closure(4, &[Perm::from_cycles(4, &[&[1, 2], &[3, 4]]), Perm::from_cycles(4, &[&[1, 3], &[2, 4]])]);
        let x = CosetSpace::new(4, v);
        assert_eq!(x.len(), 6);
        assert_eq!(orbits(&x).orbits.len(), 1);
        assert!(isotropy_is_transitive(&x, 0));
        let t = closure(4, &[Perm::from_cycles(4, &[&[1, 2]])]);
        let y = CosetSpace::new(4, t);
        assert_eq!(y.len() as u64, factorial(4) / 2);
        assert!(!isotropy_is_transitive(&y, 0));
        assert_eq!(isotropy_orbit_of_first(&y, 0), vec![0, 1]);
    }
}
