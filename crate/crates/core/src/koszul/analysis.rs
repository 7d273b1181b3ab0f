//! Koszulness, dual ranks, quadratic presentations and the `E¹` page.

use std::collections::BTreeMap;

use serde::Serialize;

use super::bar::{bar_complex, reduced_bar_homology, Slot};
use super::ring::{tensor_algebra, GradedRing};
use crate::error::{Error, Result};
use crate::homalg::dense::{self, DenseMat};
use crate::homalg::elim::invariant_factors;
use crate::homalg::ring::{factorize, gcd};
use crate::homalg::{homology_all, smith_normal_form, ChainComplex, CoeffRing, Degree, ModulePresentation, Scalar, SparseMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct HomologyCell {
    pub m: usize,
    pub q: usize,
    pub h: ModulePresentation,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub m_max: usize,
    /// `H_q B̄(A)[m]` for `q ≤ m ≤ m_max`.
    pub table: Vec<HomologyCell>,
    /// `H_q B̄(A)[m] = 0` for every `q > m` checked.
    pub vanishing_above_diagonal: bool,
    pub h0_is_base: bool,
    /// Koszul up to weight `m_max`.
    pub koszul: bool,
    /// First `(m, q)` with `q < m` and nonzero homology.
    pub obstruction: Option<(usize, usize)>,
}

impl KoszulReport {
    pub fn get(&self, m: usize, q: usize) -> Option<&ModulePresentation> {
        self.table.iter().find(|c| c.m == m && c.q == q).map(|c| &c.h)
    }
}

fn need_weight(ring: &GradedRing, m_max: usize) -> Result<()> {
    if m_max > ring.w_max {
        return Err(Error::Invalid(format!("m_max = {m_max} exceeds w_max = {}", ring.w_max)));
    }
    Ok(())
}

fn need_valid(ring: &GradedRing) -> Result<()> {
    let r = ring.validate();
    if !r.valid {
        return Err(Error::Axiom(r.failures.join("; ")));
    }
    Ok(())
}

pub fn koszul_check(ring: &GradedRing, m_max: usize) -> Result<KoszulReport> {
    need_weight(ring, m_max)?;
    need_valid(ring)?;
    let per_m = crate::par::map_range(m_max + 1, |m| reduced_bar_homology(ring, m));
    let mut table = Vec::new();
    let mut above = true;
    let mut h0 = true;
    let mut obstruction = None;
    for (m, h) in per_m.into_iter().enumerate() {
        let h = h?;
        for q in 0..=m {
            let hq = h.get(&(q as Degree)).cloned().unwrap_or_default();
            if q < m && !hq.is_zero() && obstruction.is_none() {
                obstruction = Some((m, q));
            }
            if m == 0 && hq != ModulePresentation::free(1) {
                h0 = false;
            }
            table.push(HomologyCell { m, q, h: hq });
        }
        above &= h.iter().all(|(&q, x)| q <= m as Degree || x.is_zero());
    }
    Ok(KoszulReport {
        m_max,
        table,
        vanishing_above_diagonal: above,
        h0_is_base: h0,
        koszul: obstruction.is_none(),
        obstruction,
    })
}

/// Rank data at one maximal ideal of `R`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalRanks {
    /// The residue characteristic of the maximal ideal.
    pub prime: u64,
    pub c_ranks: Vec<usize>,
    /// Whether each `C[m]` is free after localizing.
    pub c_free: Vec<bool>,
    /// Coefficients of `(Σ (−1)^m a_m T^m)^{−1}` up to `T^{m_max}`.
    pub predicted: Vec<i128>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualRanksReport {
    pub m_max: usize,
    pub a: Vec<usize>,
    /// `C[m] = H_m B̄(A)[m]`.
    pub c: Vec<ModulePresentation>,
    pub local: Vec<LocalRanks>,
}

impl DualRanksReport {
    pub fn pass(&self) -> bool {
        self.local.iter().all(|l| l.matches && l.c_free.iter().all(|&f| f))
    }
}

/// Inverse of a power series with constant term ±1, truncated.
pub fn series_inverse(f: &[i128], n: usize) -> Vec<i128> {
    assert!(f.first().is_some_and(|&c| c == 1 || c == -1));
    let c0 = f[0];
    let mut g = vec![0i128; n + 1];
    g[0] = c0;
    for k in 1..=n {
        let s: i128 = (1..=k.min(f.len() - 1)).map(|i| f[i] * g[k - i]).sum();
        g[k] = -s * c0;
    }
    g
}

/// Primes at which `R` is localized: its characteristic's prime factors.
fn maximal_ideals(base: CoeffRing) -> Vec<u64> {
    match base {
        CoeffRing::FiniteField { p, .. } => vec![p],
        CoeffRing::IntegersModN { n } => factorize(n).into_iter().map(|(p, _)| p).collect(),
        CoeffRing::Integers => Vec::new(),
    }
}

pub fn koszul_dual_ranks(ring: &GradedRing, m_max: usize) -> Result<DualRanksReport> {
    let k = koszul_check(ring, m_max)?;
    if !k.koszul {
        let (m, q) = k.obstruction.unwrap();
        return Err(Error::Invalid(format!("not Koszul up to weight {m_max}: H_{q} B̄[{m}] ≠ 0")));
    }
    let c: Vec<ModulePresentation> = (0..=m_max).map(|m| k.get(m, m).cloned().unwrap_or_default()).collect();
    let a: Vec<usize> = ring.dims[..=m_max].to_vec();
    let signed: Vec<i128> = a.iter().enumerate().map(|(m, &x)| if m % 2 == 0 { x as i128 } else { -(x as i128) }).collect();
    let predicted = series_inverse(&signed, m_max);
    let local = maximal_ideals(ring.base)
        .into_iter()
        .map(|p| {
            let (c_ranks, c_free): (Vec<usize>, Vec<bool>) = c
                .iter()
                .map(|h| match ring.base {
                    CoeffRing::IntegersModN { n } => h.local_rank(n, p),
                    _ => (h.free_rank, true),
                })
                .unzip();
            let matches = c_ranks.iter().zip(&predicted).all(|(&r, &x)| r as i128 == x);
            LocalRanks { prime: p, c_ranks, c_free, predicted: predicted.clone(), matches }
        })
        .collect();
    Ok(DualRanksReport { m_max, a, c, local })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticReport {
    pub m_max: usize,
    pub generators: usize,
    /// Generators of `P ⊆ A[1] ⊗_R A[1]`, in the basis `e_a ⊗ e_b` (`a`-major).
    pub relations: Vec<Vec<Scalar>>,
    /// `H₁ B̄(A)[m] = 0` for `1 < m ≤ m_max`.
    pub generated_in_degree_one: bool,
    /// Additionally `H₂ B̄(A)[m] = 0` for `2 < m ≤ m_max`.
    pub quadratic: bool,
    /// Per weight: `(rank of A[m], rank of T(A[1])/⟨P⟩ in weight m, free)`.
    pub reconstruction: Vec<(usize, usize, bool)>,
    pub reconstruction_matches: bool,
    /// First weight where the reconstruction disagrees with `A`.
    pub mismatch: Option<usize>,
}

/// Generators of the right kernel of `m` (`rows × cols`) over a field or `Z/n`.
fn right_kernel(base: CoeffRing, m: &DenseMat, cols: usize) -> Result<Vec<Vec<Scalar>>> {
    let ar = base.arith();
    if base.is_field() {
        return Ok(dense::kernel(&ar, m, cols));
    }
    let CoeffRing::IntegersModN { n } = base else {
        return Err(Error::UnsupportedRing(base.to_string()));
    };
    let n = n as Scalar;
    let sm = SparseMatrix::from_dense(base, m);
    let sm = if sm.rows() == 0 { SparseMatrix::zeros(base, 1, cols) } else { sm };
    let snf = smith_normal_form(&sm)?;
    let diag = snf.diagonal();
    let v = snf.v.to_dense();
    let mut out = Vec::new();
    for i in 0..cols {
        let s = diag.get(i).copied().unwrap_or(0);
        let scale = n / gcd(s, n);
        let col: Vec<Scalar> = (0..cols).map(|r| ar.mul(v[r][i], scale)).collect();
        if col.iter().any(|&x| x != 0) {
            out.push(col);
        }
    }
    Ok(out)
}

pub fn quadratic_presentation(ring: &GradedRing, m_max: usize) -> Result<QuadraticReport> {
    need_weight(ring, m_max)?;
    need_valid(ring)?;
    let base = ring.base;
    let ar = ring.arith();
    let n1 = ring.dims.get(1).copied().unwrap_or(0);
    let homs: Vec<BTreeMap<Degree, ModulePresentation>> =
        crate::par::map_range(m_max + 1, |m| reduced_bar_homology(ring, m)).into_iter().collect::<Result<_>>()?;
    let zero_at = |m: usize, q: Degree| homs[m].get(&q).is_none_or(ModulePresentation::is_zero);
    let gen1 = (2..=m_max).all(|m| zero_at(m, 1));
    let quadratic = gen1 && (3..=m_max).all(|m| zero_at(m, 2));

    // μ: A[1] ⊗_R A[1] → A[2], columns indexed by (a, b)
    let n2 = if ring.w_max >= 2 { ring.dims[2] } else { 0 };
    let mut mu: DenseMat = vec![vec![0; n1 * n1]; n2];
    if n2 > 0 {
        for a in 0..n1 {
            for b in 0..n1 {
                for (c, x) in ring.mul_basis(1, a, 1, b).into_iter().enumerate() {
                    mu[c][a * n1 + b] = x;
                }
            }
        }
    }
    let relations = if n1 == 0 {
        Vec::new()
    } else if n2 == 0 {
        (0..n1 * n1).map(|i| (0..n1 * n1).map(|j| Scalar::from(i == j)).collect()).collect()
    } else {
        right_kernel(base, &mu, n1 * n1)?
    };

    let left = ring.left_gen.get(1).cloned().flatten();
    let t = if n1 > 0 { Some(tensor_algebra(base, n1, left, m_max.max(2))?) } else { None };
    let mut reconstruction = Vec::new();
    for m in 0..=m_max {
        let (rank, free) = match &t {
            None => (usize::from(m == 0), true),
            Some(t) if m < 2 => (t.dims[m], true),
            Some(t) => {
                let rows = t.dims[m];
                let mut gens: Vec<Vec<Scalar>> = Vec::new();
                for i in 0..=m - 2 {
                    let (pre, post) = (n1.pow(i as u32), n1.pow((m - 2 - i) as u32));
                    for u in 0..pre {
                        for p in &relations {
                            for tt in 0..post {
                                let tail = super::ring::tuple_of(tt, n1, m - 2 - i);
                                let mut col = vec![0; rows];
                                for (ab, &c) in p.iter().enumerate() {
                                    let word: Vec<_> = tail.iter().map(|&b| (1, b)).collect();
                                    for (idx, coeff) in t.act_word(c, &word) {
                                        let tail_ix = idx.iter().fold(0, |acc, &b| acc * n1 + b);
                                        let row = (u * n1 * n1 + ab) * post + tail_ix;
                                        col[row] = ar.add(col[row], coeff);
                                    }
                                }
                                gens.push(col);
                            }
                        }
                    }
                }
                let cols = gens.len();
                let g: DenseMat = (0..rows).map(|r| gens.iter().map(|c| c[r]).collect()).collect();
                let f = if cols == 0 { Vec::new() } else { invariant_factors(&SparseMatrix::from_dense(base, &g))? };
                let free = f.iter().all(|&d| d == 1);
                (rows - f.len(), free)
            }
        };
        reconstruction.push((ring.dims[m], rank, free));
    }
    let mismatch = reconstruction.iter().position(|&(a, r, free)| a != r || !free);
    Ok(QuadraticReport {
        m_max,
        generators: n1,
        relations,
        generated_in_degree_one: gen1,
        quadratic,
        reconstruction_matches: mismatch.is_none(),
        reconstruction,
        mismatch,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct E1Weight {
    pub w: usize,
    /// `dim E¹_m` for `m = 0..=w`.
    pub e1_ranks: Vec<usize>,
    pub d1_squared_zero: bool,
    /// Betti numbers of the `E¹` complex and of `N B(M, A, N)[w]`.
    pub e1_homology: Vec<usize>,
    pub total_homology: Vec<usize>,
    pub collapses: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct E1Report {
    pub m: Slot,
    pub n: Slot,
    pub m_max: usize,
    pub weights: Vec<E1Weight>,
}

impl E1Report {
    pub fn pass(&self) -> bool {
        self.weights.iter().all(|w| w.d1_squared_zero && w.collapses)
    }
}

fn betti_vec(c: &ChainComplex, top: usize) -> Result<Vec<usize>> {
    let h = homology_all(c)?;
    Ok((0..=top).map(|q| h.get(&(q as Degree)).map_or(0, |x| x.free_rank)).collect())
}

/// The `E¹` page of the bar-weight filtration of `N B(M, A, N)` for
/// `M, N ∈ {R, A}`, over a field base.
pub fn koszul_complex_e1(ring: &GradedRing, outer: (Slot, Slot), m_max: usize) -> Result<E1Report> {
    if !ring.base.is_field() {
        return Err(Error::UnsupportedRing(format!("the E1 page is computed over fields only, not {}", ring.base)));
    }
    if [outer.0, outer.1].contains(&Slot::Ideal) {
        return Err(Error::Invalid("M and N must each be R or A".into()));
    }
    need_weight(ring, m_max)?;
    need_valid(ring)?;
    let ar = ring.arith();
    let weights = crate::par::map_range(m_max + 1, |w| -> Result<E1Weight> {
        let nb = bar_complex(ring, outer, w, w)?;
        let bar_w = |q: usize, i: usize| -> usize { nb.bases[q].words[i][1..=q].iter().map(|f| f.0).sum() };
        let coords = |q: usize, m: usize| -> Vec<usize> { (0..nb.bases[q].len()).filter(|&i| bar_w(q, i) == m).collect() };
        // E¹_m = ker of the associated-graded differential on bar weight m, degree m
        let mut e1_basis: Vec<Vec<Vec<Scalar>>> = Vec::new();
        let mut e1_coords: Vec<Vec<usize>> = Vec::new();
        for m in 0..=w {
            let mut keep = BTreeMap::new();
            for q in 0..=w {
                keep.insert(q as Degree, coords(q, m));
            }
            let g = nb.complex.restrict(&keep)?;
            let h = homology_all(&g)?;
            if let Some((&q, _)) = h.iter().find(|(&q, x)| q != m as Degree && !x.is_zero()) {
                return Err(Error::Invalid(format!(
                    "E1 is not concentrated: bar weight {m} has homology in degree {q} (total weight {w})"
                )));
            }
            let cm = coords(m, m);
            let d = g.boundary(m as Degree).to_dense();
            e1_basis.push(dense::kernel(&ar, &d, cm.len()));
            e1_coords.push(cm);
        }
        // d¹: E¹_m → E¹_{m−1}, the bar-weight m−1 component of d
        let mut d1: BTreeMap<Degree, SparseMatrix> = BTreeMap::new();
        let mut ok = true;
        for m in 1..=w {
            let full = nb.complex.boundary(m as Degree);
            let rows_pos: BTreeMap<usize, usize> = e1_coords[m - 1].iter().enumerate().map(|(i, &r)| (r, i)).collect();
            let tgt: DenseMat = {
                let n = e1_coords[m - 1].len();
                let k = &e1_basis[m - 1];
                (0..n).map(|r| k.iter().map(|v| v[r]).collect()).collect()
            };
            let mut cols = Vec::new();
            for z in &e1_basis[m] {
                let sparse: Vec<(usize, Scalar)> = e1_coords[m].iter().zip(z).filter(|e| *e.1 != 0).map(|(&i, &x)| (i, x)).collect();
                let img = full.apply(&sparse);
                let mut y = vec![0; e1_coords[m - 1].len()];
                for (r, x) in img {
                    if let Some(&i) = rows_pos.get(&r) {
                        y[i] = x;
                    }
                }
                match dense::solve(&ar, &tgt, e1_basis[m - 1].len(), &y) {
                    Some(c) => cols.push(c),
                    None => {
                        ok = false;
                        cols.push(vec![0; e1_basis[m - 1].len()]);
                    }
                }
            }
            let rows = e1_basis[m - 1].len();
            let dense_m: DenseMat = (0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
            let sm = if rows == 0 { SparseMatrix::zeros(ring.base, 0, cols.len()) } else { SparseMatrix::from_dense(ring.base, &dense_m) };
            let sm = if sm.cols() != cols.len() { SparseMatrix::zeros(ring.base, rows, cols.len()) } else { sm };
            d1.insert(m as Degree, sm);
        }
        let ranks: BTreeMap<Degree, usize> = e1_basis.iter().enumerate().map(|(m, b)| (m as Degree, b.len())).collect();
        let e1 = ChainComplex::new_unchecked(ring.base, ranks, d1)?;
        let sq = e1.check_square_zero().is_ok();
        let e1_h = betti_vec(&e1, w)?;
        let tot = betti_vec(&nb.complex, w)?;
        Ok(E1Weight {
            w,
            e1_ranks: e1_basis.iter().map(Vec::len).collect(),
            d1_squared_zero: sq && ok,
            collapses: e1_h == tot,
            e1_homology: e1_h,
            total_homology: tot,
        })
    });
    Ok(E1Report {
        m: outer.0,
        n: outer.1,
        m_max,
        weights: weights.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> CoeffRing {
        CoeffRing::prime_field(2)
    }

    fn exterior(w: usize) -> GradedRing {
        let mut d = vec![0; w + 1];
        d[0] = 1;
        d[1] = 1;
        GradedRing::new(f2(), d).unwrap()
    }

    fn exterior2(w: usize) -> GradedRing {
        // x² = y² = 0, yx = xy
        let mut d = vec![0; w + 1];
        d[0] = 1;
        d[1] = 2;
        d[2] = 1;
        let mut a = GradedRing::new(f2(), d).unwrap();
        a.mult.insert((1, 1), vec![vec![vec![0], vec![1]], vec![vec![1], vec![0]]]);
        a
    }

    #[test]
    fn series() {
        assert_eq!(series_inverse(&[1, -2, 4, -8, 16], 4), vec![1, 2, 0, 0, 0]);
        assert_eq!(series_inverse(&[1, -2, 1], 4), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn tensor_is_koszul() {
        let t = tensor_algebra(f2(), 2, None, 5).unwrap();
        let k = koszul_check(&t, 5).unwrap();
        assert!(k.koszul && k.vanishing_above_diagonal && k.h0_is_base);
        let d = koszul_dual_ranks(&t, 5).unwrap();
        assert!(d.pass());
        assert_eq!(d.local[0].c_ranks, vec![1, 2, 0, 0, 0, 0]);
        let q = quadratic_presentation(&t, 4).unwrap();
        assert!(q.quadratic && q.relations.is_empty() && q.reconstruction_matches);
    }

    #[test]
    fn exterior_dual() {
        let d = koszul_dual_ranks(&exterior(5), 5).unwrap();
        assert!(d.pass());
        assert_eq!(d.local[0].c_ranks, vec![1; 6]);
        let q = quadratic_presentation(&exterior(4), 4).unwrap();
        assert!(q.quadratic && q.reconstruction_matches);
        assert_eq!(q.relations, vec![vec![1]]);
        let d = koszul_dual_ranks(&exterior2(4), 4).unwrap();
        assert!(d.pass());
        assert_eq!(d.local[0].c_ranks, vec![1, 2, 3, 4, 5]);
        assert!(quadratic_presentation(&exterior2(4), 4).unwrap().reconstruction_matches);
    }

    #[test]
    fn truncated_cubic_not_koszul() {
        let mut a = GradedRing::new(f2(), vec![1, 1, 1, 0]).unwrap();
        a.mult.insert((1, 1), vec![vec![vec![1]]]);
        let k = koszul_check(&a, 3).unwrap();
        assert!(!k.koszul);
        assert_eq!(k.obstruction, Some((3, 2)));
        let q = quadratic_presentation(&a, 3).unwrap();
        assert!(q.generated_in_degree_one && !q.quadratic);
        assert_eq!(q.mismatch, Some(3));
        assert!(koszul_dual_ranks(&a, 3).is_err());
    }

    #[test]
    fn mod_four_tensor() {
        let t = tensor_algebra(CoeffRing::mod_n(4).unwrap(), 1, None, 3).unwrap();
        let d = koszul_dual_ranks(&t, 3).unwrap();
        assert!(d.pass());
        assert_eq!(d.local[0].c_ranks, vec![1, 1, 0, 0]);
        // x² = 2y over Z/4 in a 1-dim A[2]: the relation module is 2·(x⊗x)
        let mut a = GradedRing::new(CoeffRing::mod_n(4).unwrap(), vec![1, 1, 1]).unwrap();
        a.mult.insert((1, 1), vec![vec![vec![2]]]);
        let q = quadratic_presentation(&a, 2).unwrap();
        assert_eq!(q.relations, vec![vec![2]]);
        assert_eq!(q.reconstruction[2], (1, 0, false));
    }

    #[test]
    fn e1_page() {
        let r = koszul_complex_e1(&exterior(4), (Slot::Unit, Slot::Unit), 4).unwrap();
        assert!(r.pass());
        for w in &r.weights {
            assert_eq!(w.e1_ranks.iter().filter(|&&x| x > 0).count(), 1);
        }
        let t1 = tensor_algebra(f2(), 1, None, 4).unwrap();
        let r = koszul_complex_e1(&t1, (Slot::Unit, Slot::Unit), 4).unwrap();
        assert!(r.pass());
        assert_eq!(r.weights[0].total_homology[0], 1);
        for w in &r.weights {
            assert!(w.e1_ranks.iter().skip(2).all(|&x| x == 0));
        }
        let r = koszul_complex_e1(&exterior2(4), (Slot::Algebra, Slot::Unit), 4).unwrap();
        assert!(r.pass());
        for w in &r.weights[1..] {
            assert!(w.total_homology.iter().all(|&x| x == 0));
        }
        let mut a = GradedRing::new(f2(), vec![1, 1, 1, 0]).unwrap();
        a.mult.insert((1, 1), vec![vec![vec![1]]]);
        assert!(koszul_complex_e1(&a, (Slot::Unit, Slot::Unit), 3).is_err());
    }
}
