//! Normalized two-sided bar complexes `N B(M, A, N)` in a fixed weight.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::ring::{Factor, GradedRing};
use crate::error::{Error, Result};
use crate::homalg::{homology_all, ChainComplex, Degree, ModulePresentation, Scalar, SparseMatrix};

/// What an outer slot may hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Slot {
    /// `R`, acting on `A` through `ε`.
    Unit,
    /// `A`.
    Algebra,
    /// The augmentation ideal: positive weights only.
    Ideal,
}

impl Slot {
    fn min_weight(self) -> usize {
        match self {
            Slot::Unit | Slot::Algebra => 0,
            Slot::Ideal => 1,
        }
    }
    fn max_weight(self, m: usize) -> usize {
        match self {
            Slot::Unit => 0,
            _ => m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BarVariant {
    /// `B(A, A, A)`.
    Big,
    /// Right outer factor of positive weight.
    Hat,
    /// Left outer factor of positive weight.
    Check,
    /// Both outer factors of positive weight.
    Ddot,
    /// `B(R, A, R)`.
    Reduced,
}

impl BarVariant {
    pub const ALL: [BarVariant; 5] = [BarVariant::Big, BarVariant::Hat, BarVariant::Check, BarVariant::Ddot, BarVariant::Reduced];

    pub fn slots(self) -> (Slot, Slot) {
        match self {
            BarVariant::Big => (Slot::Algebra, Slot::Algebra),
            BarVariant::Hat => (Slot::Algebra, Slot::Ideal),
            BarVariant::Check => (Slot::Ideal, Slot::Algebra),
            BarVariant::Ddot => (Slot::Ideal, Slot::Ideal),
            BarVariant::Reduced => (Slot::Unit, Slot::Unit),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "big" => BarVariant::Big,
            "hat" => BarVariant::Hat,
            "check" => BarVariant::Check,
            "ddot" => BarVariant::Ddot,
            "reduced" => BarVariant::Reduced,
            _ => return Err(Error::Invalid(format!("unknown bar variant {s:?}"))),
        })
    }
}

/// Basis words `f_0 ⊗ f_1 ⊗ … ⊗ f_q ⊗ f_{q+1}` of one simplicial degree.
#[derive(Clone, Debug, Default)]
pub struct WordBasis {
    pub words: Vec<Vec<Factor>>,
    index: HashMap<Vec<Factor>, usize>,
}

impl WordBasis {
    pub fn len(&self) -> usize {
        self.words.len()
    }
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
    pub fn position(&self, w: &[Factor]) -> Option<usize> {
        self.index.get(w).copied()
    }
    fn push(&mut self, w: Vec<Factor>) {
        self.index.insert(w.clone(), self.words.len());
        self.words.push(w);
    }
}

pub struct BarComplex {
    pub slots: (Slot, Slot),
    pub m: usize,
    pub q_max: usize,
    pub bases: Vec<WordBasis>,
    pub complex: ChainComplex,
}

fn weight_vectors(q: usize, m: usize, outer: (Slot, Slot)) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(q + 2);
    fn rec(i: usize, q: usize, left: usize, outer: (Slot, Slot), cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == q + 1 {
            if left >= outer.1.min_weight() && left <= outer.1.max_weight(left) {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let (lo, hi) = if i == 0 { (outer.0.min_weight(), outer.0.max_weight(left)) } else { (1, left) };
        for w in lo..=hi.min(left) {
            cur.push(w);
            rec(i + 1, q, left - w, outer, cur, out);
            cur.pop();
        }
    }
    rec(0, q, m, outer, &mut cur, &mut out);
    out
}

/// Words of simplicial degree `q` and total weight `m`.
pub fn word_basis(ring: &GradedRing, outer: (Slot, Slot), m: usize, q: usize) -> WordBasis {
    let mut basis = WordBasis::default();
    for ws in weight_vectors(q, m, outer) {
        let dims: Vec<usize> = ws.iter().map(|&w| ring.dims[w]).collect();
        if dims.contains(&0) {
            continue;
        }
        let mut idx = vec![0usize; ws.len()];
        loop {
            basis.push(ws.iter().zip(&idx).map(|(&w, &b)| (w, b)).collect());
            // lexicographic odometer, last factor fastest
            let Some(t) = (0..idx.len()).rev().find(|&t| idx[t] + 1 < dims[t]) else { break };
            idx[t] += 1;
            idx[t + 1..].fill(0);
        }
    }
    basis
}

/// `d_i` on a basis word: merge slots `i` and `i + 1`, pushing the product's
/// right coefficients through the suffix.
pub fn face(ring: &GradedRing, outer: (Slot, Slot), word: &[Factor], i: usize) -> Vec<(Vec<Factor>, Scalar)> {
    let last = word.len() - 1;
    if (i == 0 && outer.0 == Slot::Unit) || (i + 1 == last && outer.1 == Slot::Unit) {
        return Vec::new();
    }
    let ((wa, a), (wb, b)) = (word[i], word[i + 1]);
    let w = wa + wb;
    let prod = ring.mul_basis(wa, a, wb, b);
    let suffix = &word[i + 2..];
    let mut out = Vec::new();
    for (c, &mu) in prod.iter().enumerate() {
        if mu == 0 {
            continue;
        }
        for (idx, coeff) in ring.act_word(mu, suffix) {
            let mut nw: Vec<Factor> = word[..i].to_vec();
            nw.push((w, c));
            nw.extend(suffix.iter().zip(idx).map(|(f, b)| (f.0, b)));
            out.push((nw, coeff));
        }
    }
    out
}

/// The boundary `Σ_i (−1)^i d_i` from degree `q` to `q − 1`.
pub fn boundary(ring: &GradedRing, outer: (Slot, Slot), src: &WordBasis, dst: &WordBasis, q: usize) -> Result<SparseMatrix> {
    let ar = ring.arith();
    let cols: Vec<Vec<(usize, Scalar)>> = crate::par::map(&src.words, |word| {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for i in 0..=q {
            for (nw, c) in face(ring, outer, word, i) {
                let row = dst.position(&nw).expect("face of a bar word is a bar word");
                let c = if i % 2 == 1 { ar.neg(c) } else { c };
                let e = acc.entry(row).or_insert(0);
                *e = ar.add(*e, c);
            }
        }
        acc.into_iter().filter(|e| e.1 != 0).collect()
    });
    let entries = cols.into_iter().enumerate().flat_map(|(j, col)| col.into_iter().map(move |(r, c)| (r, j, c)));
    Ok(SparseMatrix::from_triplets(ring.base, dst.len(), src.len(), entries))
}

fn check_weight(ring: &GradedRing, m: usize) -> Result<()> {
    if m > ring.w_max {
        return Err(Error::Invalid(format!("weight {m} exceeds w_max = {}", ring.w_max)));
    }
    Ok(())
}

/// `N B(M, A, N)[m]` in degrees `0..=q_max`.
pub fn bar_complex(ring: &GradedRing, outer: (Slot, Slot), m: usize, q_max: usize) -> Result<BarComplex> {
    check_weight(ring, m)?;
    let bases: Vec<WordBasis> = (0..=q_max).map(|q| word_basis(ring, outer, m, q)).collect();
    let mut ranks = BTreeMap::new();
    let mut bd = BTreeMap::new();
    for q in 0..=q_max {
        ranks.insert(q as Degree, bases[q].len());
        if q >= 1 {
            bd.insert(q as Degree, boundary(ring, outer, &bases[q], &bases[q - 1], q)?);
        }
    }
    let complex = ChainComplex::new(ring.base, ranks, bd)?;
    Ok(BarComplex { slots: outer, m, q_max, bases, complex })
}

pub fn bar_variant(ring: &GradedRing, variant: BarVariant, m: usize, q_max: usize) -> Result<BarComplex> {
    bar_complex(ring, variant.slots(), m, q_max)
}

/// `B̄(A)[m]`; it vanishes above degree `m`, so `q_max` is clipped there
/// unless asked for more.
pub fn reduced_bar(ring: &GradedRing, m: usize, q_max: usize) -> Result<ChainComplex> {
    Ok(bar_variant(ring, BarVariant::Reduced, m, q_max)?.complex)
}

#[derive(Clone, Debug, Serialize)]
pub struct FourTermRow {
    pub m: usize,
    pub q: usize,
    /// Ranks of `B̈, B̂ ⊕ B̌, B, B̄`.
    pub ranks: [usize; 4],
    pub exact: bool,
    pub chain_maps: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FourTermBarReport {
    pub rows: Vec<FourTermRow>,
}

impl FourTermBarReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.exact && r.chain_maps)
    }
}

/// Map between word bases sending each source word to itself (or, for the
/// projection to `B̄`, to its reduced word when both outer weights are 0).
fn word_map(ring: &GradedRing, src: &WordBasis, dst: &WordBasis, reduce: bool) -> SparseMatrix {
    let entries = src.words.iter().enumerate().filter_map(|(j, w)| {
        if reduce {
            let last = w.len() - 1;
            if w[0].0 != 0 || w[last].0 != 0 {
                return None;
            }
        }
        dst.position(w).map(|i| (i, j, 1))
    });
    SparseMatrix::from_triplets(ring.base, dst.len(), src.len(), entries)
}

/// Levelwise exactness of `0 → B̈ → B̂ ⊕ B̌ → B → B̄ → 0` in weights
/// `0..=m_max` and degrees `0..=q_max`.
pub fn four_term_bar_sequence(ring: &GradedRing, m_max: usize, q_max: usize) -> Result<FourTermBarReport> {
    check_weight(ring, m_max)?;
    let per_m = crate::par::map_range(m_max + 1, |m| -> Result<Vec<FourTermRow>> {
        let bx: Vec<BarComplex> = [BarVariant::Ddot, BarVariant::Hat, BarVariant::Check, BarVariant::Big, BarVariant::Reduced]
            .iter()
            .map(|&v| bar_variant(ring, v, m, q_max))
            .collect::<Result<_>>()?;
        let [dd, hat, chk, big, red] = &bx[..] else { unreachable!() };
        let maps = |q: usize| -> Result<[SparseMatrix; 3]> {
            let a = SparseMatrix::vstack(&[&word_map(ring, &dd.bases[q], &hat.bases[q], false), &word_map(ring, &dd.bases[q], &chk.bases[q], false).neg()])?;
            let b = SparseMatrix::hstack(&[&word_map(ring, &hat.bases[q], &big.bases[q], false), &word_map(ring, &chk.bases[q], &big.bases[q], false)])?;
            let c = word_map(ring, &big.bases[q], &red.bases[q], true);
            Ok([a, b, c])
        };
        let mut rows = Vec::new();
        let all: Vec<[SparseMatrix; 3]> = (0..=q_max).map(maps).collect::<Result<_>>()?;
        for q in 0..=q_max {
            let ranks = [dd.bases[q].len(), hat.bases[q].len() + chk.bases[q].len(), big.bases[q].len(), red.bases[q].len()];
            let [a, b, c] = all[q].clone();
            let seq = ChainComplex::new(
                ring.base,
                BTreeMap::from([(3, ranks[0]), (2, ranks[1]), (1, ranks[2]), (0, ranks[3])]),
                BTreeMap::from([(3, a), (2, b), (1, c)]),
            );
            let exact = match seq {
                Ok(c) => homology_all(&c)?.values().all(ModulePresentation::is_zero),
                Err(_) => false,
            };
            // f∘d = d∘f for each of the three maps
            let chain_maps = q == 0 || {
                let d = |bc: &BarComplex| bc.complex.boundary(q as Degree);
                let sum2 = |x: &BarComplex, y: &BarComplex| -> Result<SparseMatrix> {
                    let (dx, dy) = (d(x), d(y));
                    let top = dx.embed(dx.rows() + dy.rows(), dx.cols() + dy.cols(), 0, 0);
                    let bot = dy.embed(dx.rows() + dy.rows(), dx.cols() + dy.cols(), dx.rows(), dx.cols());
                    top.add(&bot)
                };
                let prev = &all[q - 1];
                let hc = sum2(hat, chk)?;
                prev[0].mul(&d(dd))? == hc.mul(&all[q][0])?
                    && prev[1].mul(&hc)? == d(big).mul(&all[q][1])?
                    && prev[2].mul(&d(big))? == d(red).mul(&all[q][2])?
            };
            rows.push(FourTermRow { m, q, ranks, exact, chain_maps });
        }
        Ok(rows)
    });
    let mut rows = Vec::new();
    for r in per_m {
        rows.extend(r?);
    }
    Ok(FourTermBarReport { rows })
}

/// Homology of `B̄(A)[m]` in degrees `0..=m+1`.
pub fn reduced_bar_homology(ring: &GradedRing, m: usize) -> Result<BTreeMap<Degree, ModulePresentation>> {
    let c = reduced_bar(ring, m, m + 1)?;
    homology_all(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::CoeffRing;
    use crate::koszul::ring::tensor_algebra;

    fn truncated_cubic() -> GradedRing {
        let mut a = GradedRing::new(CoeffRing::prime_field(2), vec![1, 1, 1, 0]).unwrap();
        a.mult.insert((1, 1), vec![vec![vec![1]]]);
        a
    }

    #[test]
    fn reduced_ranks() {
        let ext = GradedRing::new(CoeffRing::prime_field(2), vec![1, 1, 0, 0]).unwrap();
        let c = reduced_bar(&ext, 3, 4).unwrap();
        assert_eq!((1..=4).map(|q| c.rank(q)).collect::<Vec<_>>(), vec![0, 0, 1, 0]);
        let h = homology_all(&c).unwrap();
        assert_eq!(h[&3], ModulePresentation::free(1));

        let cub = truncated_cubic();
        let c = reduced_bar(&cub, 3, 3).unwrap();
        assert_eq!((1..=3).map(|q| c.rank(q)).collect::<Vec<_>>(), vec![0, 2, 1]);
        let h = reduced_bar_homology(&cub, 3).unwrap();
        assert_eq!(h.get(&2), Some(&ModulePresentation::free(1)));
    }

    #[test]
    fn weight_zero() {
        let t = tensor_algebra(CoeffRing::prime_field(3), 2, None, 2).unwrap();
        let h = reduced_bar_homology(&t, 0).unwrap();
        assert_eq!(h.get(&0), Some(&ModulePresentation::free(1)));
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn four_term_exact() {
        let ext = GradedRing::new(CoeffRing::prime_field(2), vec![1, 1, 0, 0]).unwrap();
        let r = four_term_bar_sequence(&ext, 3, 3).unwrap();
        assert!(r.pass(), "{:?}", r.rows);
        let t = tensor_algebra(CoeffRing::prime_field(2), 2, None, 4).unwrap();
        assert!(four_term_bar_sequence(&t, 4, 3).unwrap().pass());
    }
}
