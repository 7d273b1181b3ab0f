//! Homology of chain complexes as module presentations.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::complex::{ChainComplex, Degree};
use super::dense::{self, DenseMat};
use super::elim;
use super::ring::{gcd, is_prime, CoeffRing, Scalar};
use crate::error::Result;

/// `R^free_rank ⊕ ⊕_i R/(d_i)` with `d_1 | d_2 | …`, no `d_i` a unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulePresentation {
    pub free_rank: usize,
    pub torsion_invariants: Vec<Scalar>,
}

impl ModulePresentation {
    pub fn free(rank: usize) -> Self {
        ModulePresentation {
            free_rank: rank,
            torsion_invariants: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_invariants.is_empty()
    }

    /// Rank at the prime `p` over `Z/n`: the number of summands that are free
    /// after localizing at `p`, and whether the localization is free.
    pub fn local_rank(&self, n: u64, p: u64) -> (usize, bool) {
        let e = valuation(n as i128, p as i128);
        let mut rank = self.free_rank;
        let mut free = true;
        for &d in &self.torsion_invariants {
            let v = valuation(d, p as i128);
            if v >= e {
                rank += 1;
            } else if v > 0 {
                free = false;
            }
        }
        (rank, free)
    }
}

fn valuation(mut x: i128, p: i128) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        for d in &self.torsion_invariants {
            parts.push(format!("R/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// `H_q(C)`.
pub fn homology(c: &ChainComplex, q: Degree) -> Result<ModulePresentation> {
    let n = c.rank(q);
    if n == 0 {
        return Ok(ModulePresentation::default());
    }
    match c.ring() {
        CoeffRing::IntegersModN { n: modulus } if !is_prime(modulus) => {
            homology_mod_n(c, q, modulus as i128)
        }
        _ => {
            let out = elim::invariant_factors(&c.boundary(q))?;
            let inc = elim::invariant_factors(&c.boundary(q + 1))?;
            let torsion: Vec<Scalar> = inc.iter().copied().filter(|&d| d != 1).collect();
            Ok(ModulePresentation {
                free_rank: n - out.len() - inc.len(),
                torsion_invariants: torsion,
            })
        }
    }
}

/// Homology in every degree of the support (zero modules omitted).
pub fn homology_all(c: &ChainComplex) -> Result<BTreeMap<Degree, ModulePresentation>> {
    let degrees = c.support();
    let hs = crate::par::map(&degrees, |&q| homology(c, q).map(|h| (q, h)));
    let mut out = BTreeMap::new();
    for h in hs {
        let (q, h) = h?;
        if !h.is_zero() {
            out.insert(q, h);
        }
    }
    Ok(out)
}

/// Over Z/n: lift to Z. With `P d_q Q = diag(δ)`, the cycles mod n are the
/// lattice `K = Q·diag(n / gcd(δ_i, n))`; the homology is `K / (im d_{q+1} + nZ^r)`.
fn homology_mod_n(c: &ChainComplex, q: Degree, n: i128) -> Result<ModulePresentation> {
    let r = c.rank(q);
    let dq: DenseMat = c.boundary(q).to_dense();
    let s = dense::snf_z(&dq, r, true);
    let q_inv = s.v_inv.unwrap();
    let scale: Vec<i128> = (0..r)
        .map(|i| {
            let d = s.diag.get(i).copied().unwrap_or(0);
            n / gcd(d, n)
        })
        .collect();
    let dnext = c.boundary(q + 1);
    let mut gens: Vec<Vec<Scalar>> = Vec::new();
    let mut cols: Vec<Vec<Scalar>> = vec![vec![0; r]; dnext.cols()];
    for (i, j, v) in dnext.entries() {
        cols[j][i] = v;
    }
    gens.extend(cols);
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = n;
        gens.push(e);
    }
    // coordinates in the K-basis, as columns of an r × |gens| matrix
    let z = super::ring::Arith::Z;
    let mut coords = dense::zeros(r, gens.len());
    for (j, g) in gens.iter().enumerate() {
        let y = dense::mat_vec(&z, &q_inv, g);
        for i in 0..r {
            assert!(y[i] % scale[i] == 0, "generator outside the cycle lattice");
            coords[i][j] = y[i] / scale[i];
        }
    }
    let inv = dense::snf_z(&coords, gens.len(), false);
    let mut out = ModulePresentation::default();
    for e in inv.diag {
        assert!(e != 0 && n % e == 0, "homology over Z/n must be n-torsion");
        if e == n {
            out.free_rank += 1;
        } else if e != 1 {
            out.torsion_invariants.push(e);
        }
    }
    out.torsion_invariants.sort_unstable();
    Ok(out)
}

/// Ranks of homology over a field, or ranks of the free part over Z.
pub fn betti(c: &ChainComplex) -> Result<BTreeMap<Degree, usize>> {
    Ok(homology_all(c)?
        .into_iter()
        .filter(|(_, h)| h.free_rank > 0)
        .map(|(q, h)| (q, h.free_rank))
        .collect())
}

/// `true` when homology vanishes outside degree `k`.
pub fn concentrated_in(c: &ChainComplex, k: Degree) -> Result<bool> {
    Ok(homology_all(c)?.keys().all(|&q| q == k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::matrix::SparseMatrix;

    fn complex(ring: CoeffRing, d1: &[Vec<Scalar>], r0: usize, r1: usize) -> ChainComplex {
        ChainComplex::new(
            ring,
            [(0, r0), (1, r1)].into_iter().collect(),
            [(1, SparseMatrix::from_dense(ring, d1))].into_iter().collect(),
        )
        .unwrap()
    }

    #[test]
    fn circle_over_z() {
        let c = complex(CoeffRing::Integers, &[vec![0]], 1, 1);
        assert_eq!(homology(&c, 1).unwrap(), ModulePresentation::free(1));
        assert_eq!(homology(&c, 5).unwrap(), ModulePresentation::default());
    }

    #[test]
    fn multiplication_by_two() {
        let c = complex(CoeffRing::Integers, &[vec![2]], 1, 1);
        let h0 = homology(&c, 0).unwrap();
        assert_eq!(h0.torsion_invariants, vec![2]);
        assert_eq!(h0.free_rank, 0);
        assert!(homology(&c, 1).unwrap().is_zero());
        // over Z/4: H_0 = Z/4 / 2 = Z/2, H_1 = ker(2) = 2Z/4 ≅ Z/2
        let c4 = c.change_ring(CoeffRing::IntegersModN { n: 4 }).unwrap();
        assert_eq!(homology(&c4, 0).unwrap().torsion_invariants, vec![2]);
        assert_eq!(homology(&c4, 1).unwrap().torsion_invariants, vec![2]);
        // over Z/6: cokernel Z/2 and kernel {0,3}, both R/(2)
        let c6 = c.change_ring(CoeffRing::IntegersModN { n: 6 }).unwrap();
        assert_eq!(homology(&c6, 0).unwrap().torsion_invariants, vec![2]);
        assert_eq!(homology(&c6, 1).unwrap().torsion_invariants, vec![2]);
        assert_eq!(homology(&c6, 1).unwrap().local_rank(6, 2), (1, true));
        assert_eq!(homology(&c6, 1).unwrap().local_rank(6, 3), (0, true));
    }
}
