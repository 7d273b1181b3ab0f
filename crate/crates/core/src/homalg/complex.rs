//! Chain complexes of finite free modules and graded maps between them.

use std::collections::BTreeMap;

use super::matrix::SparseMatrix;
use super::ring::CoeffRing;
use crate::error::{Error, Result};

pub type Degree = i64;

/// `boundary(q)` maps degree `q` to degree `q - 1` and has shape
/// `rank(q-1) × rank(q)`. Degrees missing from `ranks` have rank zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ring: CoeffRing,
    ranks: BTreeMap<Degree, usize>,
    boundaries: BTreeMap<Degree, SparseMatrix>,
}

impl ChainComplex {
    /// Builds a complex and checks shapes and `d∘d = 0`.
    pub fn new(
        ring: CoeffRing,
        ranks: BTreeMap<Degree, usize>,
        boundaries: BTreeMap<Degree, SparseMatrix>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(ring, ranks, boundaries)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Shape checks only; `d∘d = 0` is the caller's responsibility.
    pub fn new_unchecked(
        ring: CoeffRing,
        ranks: BTreeMap<Degree, usize>,
        mut boundaries: BTreeMap<Degree, SparseMatrix>,
    ) -> Result<Self> {
        let ranks: BTreeMap<Degree, usize> = ranks.into_iter().filter(|e| e.1 > 0).collect();
        let rk = |q: Degree| ranks.get(&q).copied().unwrap_or(0);
        for (&q, d) in &boundaries {
            if d.ring() != ring {
                return Err(Error::Shape(format!("boundary {q} is over {}", d.ring())));
            }
            if d.shape() != (rk(q - 1), rk(q)) {
                return Err(Error::Shape(format!(
                    "boundary {q} has shape {:?}, expected {:?}",
                    d.shape(),
                    (rk(q - 1), rk(q))
                )));
            }
        }
        boundaries.retain(|_, d| !d.is_zero());
        Ok(ChainComplex {
            ring,
            ranks,
            boundaries,
        })
    }

    pub fn zero(ring: CoeffRing) -> Self {
        ChainComplex {
            ring,
            ranks: BTreeMap::new(),
            boundaries: BTreeMap::new(),
        }
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for (&q, d) in &self.boundaries {
            if let Some(d_prev) = self.boundaries.get(&(q - 1)) {
                if !d_prev.mul(d)?.is_zero() {
                    return Err(Error::Structural(format!("d∘d ≠ 0 at degree {q}")));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rank(&self, q: Degree) -> usize {
        self.ranks.get(&q).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<Degree, usize> {
        &self.ranks
    }

    /// Degrees with nonzero rank.
    pub fn support(&self) -> Vec<Degree> {
        self.ranks.keys().copied().collect()
    }

    pub fn boundary(&self, q: Degree) -> SparseMatrix {
        self.boundaries
            .get(&q)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.ring, self.rank(q - 1), self.rank(q)))
    }

    pub fn boundaries(&self) -> &BTreeMap<Degree, SparseMatrix> {
        &self.boundaries
    }

    /// Degrees where `boundary(q)` could be nonzero, plus one on either side.
    pub fn degree_range(&self) -> Vec<Degree> {
        match (self.ranks.keys().next(), self.ranks.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo..=hi + 1).collect(),
            _ => Vec::new(),
        }
    }

    pub fn change_ring(&self, ring: CoeffRing) -> Result<Self> {
        let b = self
            .boundaries
            .iter()
            .map(|(&q, d)| (q, d.change_ring(ring)))
            .collect();
        ChainComplex::new_unchecked(ring, self.ranks.clone(), b)
    }

    /// Subquotient on chosen basis coordinates per degree: keeps the listed
    /// coordinates and drops the rest. This is a subcomplex when the dropped
    /// coordinates span a subcomplex (quotient) or when the kept ones do (sub).
    pub fn restrict(&self, keep: &BTreeMap<Degree, Vec<usize>>) -> Result<Self> {
        let empty = Vec::new();
        let k = |q: Degree| keep.get(&q).unwrap_or(&empty);
        let ranks = keep.iter().map(|(&q, v)| (q, v.len())).collect();
        let b = self
            .boundaries
            .iter()
            .map(|(&q, d)| (q, d.select(k(q - 1), k(q))))
            .collect();
        ChainComplex::new_unchecked(self.ring, ranks, b)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::Shape("direct sum of complexes over different rings".into()));
        }
        let degrees: std::collections::BTreeSet<Degree> =
            self.ranks.keys().chain(other.ranks.keys()).copied().collect();
        let ranks = degrees
            .iter()
            .map(|&q| (q, self.rank(q) + other.rank(q)))
            .collect();
        let mut b = BTreeMap::new();
        for &q in &degrees {
            let (r0, c0) = (self.rank(q - 1), self.rank(q));
            let (r1, c1) = (other.rank(q - 1), other.rank(q));
            let top = self.boundary(q).embed(r0 + r1, c0 + c1, 0, 0);
            let bot = other.boundary(q).embed(r0 + r1, c0 + c1, r0, c0);
            b.insert(q, top.add(&bot)?);
        }
        ChainComplex::new(self.ring, ranks, b)
    }
}

/// A family of maps `C_q → D_{q+shift}` (shift 0: chain maps; +1: homotopies).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub shift: Degree,
    pub maps: BTreeMap<Degree, SparseMatrix>,
}

impl GradedMap {
    pub fn new(shift: Degree) -> Self {
        GradedMap {
            shift,
            maps: BTreeMap::new(),
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        GradedMap {
            shift: 0,
            maps: c
                .ranks()
                .iter()
                .map(|(&q, &n)| (q, SparseMatrix::identity(c.ring(), n)))
                .collect(),
        }
    }

    /// Component at source degree `q`, as a `rank_D(q+shift) × rank_C(q)` matrix.
    pub fn at(&self, q: Degree, src: &ChainComplex, dst: &ChainComplex) -> SparseMatrix {
        self.maps.get(&q).cloned().unwrap_or_else(|| {
            SparseMatrix::zeros(src.ring(), dst.rank(q + self.shift), src.rank(q))
        })
    }

    pub fn check_shapes(&self, src: &ChainComplex, dst: &ChainComplex) -> Result<()> {
        for (&q, m) in &self.maps {
            let want = (dst.rank(q + self.shift), src.rank(q));
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "map component at degree {q} has shape {:?}, expected {want:?}",
                    m.shape()
                )));
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(
        &self,
        other: &GradedMap,
        a: &ChainComplex,
        b: &ChainComplex,
        c: &ChainComplex,
    ) -> Result<GradedMap> {
        let mut maps = BTreeMap::new();
        for q in a.support() {
            let m = self.at(q + other.shift, b, c).mul(&other.at(q, a, b))?;
            if !m.is_zero() {
                maps.insert(q, m);
            }
        }
        Ok(GradedMap {
            shift: self.shift + other.shift,
            maps,
        })
    }

    /// Checks `d_D ∘ f = f ∘ d_C` for a degree-0 map.
    pub fn is_chain_map(&self, src: &ChainComplex, dst: &ChainComplex) -> Result<bool> {
        if self.shift != 0 {
            return Err(Error::Shape("chain maps have shift 0".into()));
        }
        self.check_shapes(src, dst)?;
        for q in src.degree_range() {
            let lhs = dst.boundary(q).mul(&self.at(q, src, dst))?;
            let rhs = self.at(q - 1, src, dst).mul(&src.boundary(q))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> ChainComplex {
        let z = CoeffRing::Integers;
        ChainComplex::new(
            z,
            [(0, 1), (1, 1)].into_iter().collect(),
            [(1, SparseMatrix::zeros(z, 1, 1))].into_iter().collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_nonzero_square() {
        let z = CoeffRing::Integers;
        let one = SparseMatrix::identity(z, 1);
        let r = ChainComplex::new(
            z,
            [(0, 1), (1, 1), (2, 1)].into_iter().collect(),
            [(1, one.clone()), (2, one)].into_iter().collect(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn direct_sum_ranks() {
        let c = circle().direct_sum(&circle()).unwrap();
        assert_eq!(c.rank(0), 2);
        assert_eq!(c.rank(1), 2);
        assert!(GradedMap::identity(&c).is_chain_map(&c, &c).unwrap());
    }
}
