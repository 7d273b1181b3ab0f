//! The surjection set S and the invariant section over intransitive isotropy.

use std::collections::VecDeque;

use super::functors::{apply_map, layout, SumFunctor};
use super::gset::{orbits, stabilizer_generators, ExplicitGSet, GSet};
use crate::error::{Error, Result};
use crate::homalg::{CoeffRing, SparseMatrix};
use crate::partition::perm::{point_orbits, symmetric_generators, Perm};

/// Surjections {1..m} → {1,2} as value vectors, with `(σ·f)(i) = f(σ⁻¹ i)`.
pub type SurjectionSet = ExplicitGSet<Vec<u8>>;

fn act_surjection(g: &Perm, f: &Vec<u8>) -> Vec<u8> {
    let mut out = vec![0u8; f.len()];
    for (i, &v) in f.iter().enumerate() {
        out[g.apply(i)] = v;
    }
    out
}

pub fn surjection_set(m: usize) -> SurjectionSet {
    let pts: Vec<Vec<u8>> = (1u32..(1 << m) - 1)
        .map(|bits| (0..m).map(|i| if bits & (1 << i) != 0 { 2 } else { 1 }).collect())
        .collect();
    ExplicitGSet::new(m, pts, act_surjection)
}

/// `X × S` with point `(x, s)` numbered `x·|S| + s`.
pub struct Product<'a> {
    pub x: &'a dyn GSet,
    pub s: &'a SurjectionSet,
}

impl GSet for Product<'_> {
    fn degree(&self) -> usize {
        self.x.degree()
    }
    fn len(&self) -> usize {
        self.x.len() * self.s.len()
    }
    fn act(&self, g: &Perm, p: usize) -> usize {
        let n = self.s.len();
        self.x.act(g, p / n) * n + self.s.act(g, p % n)
    }
}

/// `s(x) = (x, f_x)`: per orbit, `f` is the indicator of the isotropy orbit
/// of the first point (value 1) against the rest (value 2), transported by
/// `σH ↦ (σH, fσ⁻¹)`. Returns the index of `f_x` in `S` for every `x`.
pub fn invariant_section(x: &dyn GSet, s: &SurjectionSet) -> Result<Vec<usize>> {
    let m = x.degree();
    let gens = symmetric_generators(m);
    let orb = orbits(x);
    let mut out = vec![usize::MAX; x.len()];
    for o in &orb.orbits {
        let x0 = o[0];
        let h = stabilizer_generators(x, x0);
        let first = point_orbits(m, &h).into_iter().find(|b| b.contains(&0)).unwrap();
        if first.len() == m {
            return Err(Error::TransitiveIsotropy { point: x0 });
        }
        let mut f0 = vec![2u8; m];
        for &i in &first {
            f0[i] = 1;
        }
        out[x0] = s.index_of(&f0).expect("surjection");
        let mut queue = VecDeque::from([(x0, Perm::identity(m))]);
        while let Some((y, g)) = queue.pop_front() {
            for t in &gens {
                let z = x.act(t, y);
                if out[z] == usize::MAX {
                    let tg = t.compose(&g);
                    out[z] = s.index_of(&act_surjection(&tg, &f0)).unwrap();
                    queue.push_back((z, tg));
                }
            }
        }
    }
    Ok(out)
}

/// Checks that `s` is an equivariant section of the projection.
pub fn check_section(x: &dyn GSet, s: &SurjectionSet, sec: &[usize]) -> Result<()> {
    for g in symmetric_generators(x.degree()) {
        for p in 0..x.len() {
            if sec[x.act(&g, p)] != s.act(&g, sec[p]) {
                return Err(Error::Structural(format!("section is not equivariant at point {p}")));
            }
        }
    }
    Ok(())
}

/// `Q(π) Q(s) = id`, so `Q(X × S₊ → X₊)` is a split epimorphism.
pub fn split_epi_certificate(q: &dyn SumFunctor, x: &dyn GSet, ring: CoeffRing) -> Result<(SparseMatrix, SparseMatrix)> {
    let s = surjection_set(x.degree());
    let sec = invariant_section(x, &s)?;
    check_section(x, &s, &sec)?;
    let xs = Product { x, s: &s };
    let (lx, lxs) = (layout(q, x), layout(q, &xs));
    let n = s.len();
    let qs = apply_map(q, x, &lx, &xs, &lxs, &|p| Some(p * n + sec[p]), ring)?;
    let qpi = apply_map(q, &xs, &lxs, x, &lx, &|p| Some(p / n), ring)?;
    let comp = qpi.mul(&qs)?;
    if !comp.sub(&SparseMatrix::identity(ring, lx.rank))?.is_zero() {
        return Err(Error::Structural(format!("{}: Q(π)Q(s) ≠ id", q.name())));
    }
    Ok((qpi, qs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::perm::closure;
    use crate::qfunctors::functors::Free;
    use crate::qfunctors::gset::CosetSpace;

    #[test]
    fn surjections_count() {
        for m in 2..=6 {
            assert_eq!(surjection_set(m).len(), (1 << m) - 2);
        }
    }

    #[test]
    fn transposition_section() {
        let x = CosetSpace::new(4, closure(4, &[Perm::from_cycles(4, &[&[1, 2]])]));
        let s = surjection_set(4);
        let sec = invariant_section(&x, &s).unwrap();
        assert_eq!(s.points[sec[0]], vec![1, 1, 2, 2]);
        check_section(&x, &s, &sec).unwrap();
        split_epi_certificate(&Free, &x, CoeffRing::Integers).unwrap();
    }

    #[test]
    fn transitive_isotropy_rejected() {
        let v = vec![
            Perm::from_cycles(4, &[&[1, 2], &[3, 4]]),
            Perm::from_cycles(4, &[&[1, 3], &[2, 4]]),
        ];
        let x = CosetSpace::new(4, closure(4, &v));
        let s = surjection_set(4);
        assert!(matches!(invariant_section(&x, &s), Err(Error::TransitiveIsotropy { .. })));
        let pt = CosetSpace::new(4, closure(4, &symmetric_generators(4)));
        assert!(invariant_section(&pt, &s).is_err());
    }
}
