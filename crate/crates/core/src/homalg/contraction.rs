//! k-contractions, their verification, and the two transfer lemmas: along a
//! retract with a torsion complement, and along split short exact sequences.

use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::{ChainComplex, Degree, GradedMap};
use super::matrix::SparseMatrix;
use super::ring::{CoeffRing, Scalar};
use crate::error::{Error, Result};

/// Maps `h_i: C_i → C_{i+1}` with `id − (d h_i + h_{i−1} d)` vanishing for `i ≠ k`.
#[derive(Clone, Debug)]
pub struct KContraction {
    pub complex: ChainComplex,
    pub k: Degree,
    pub h: BTreeMap<Degree, SparseMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub k: Degree,
    /// Nonzero entries of `f_i` per degree in the support.
    pub residual_nnz: BTreeMap<Degree, usize>,
    pub pass: bool,
}

impl ResidualReport {
    /// Whether `f_i = 0` in every degree (a full contraction).
    pub fn is_contraction(&self) -> bool {
        self.residual_nnz.values().all(|&n| n == 0)
    }
}

impl KContraction {
    pub fn zero(complex: ChainComplex, k: Degree) -> Self {
        KContraction {
            complex,
            k,
            h: BTreeMap::new(),
        }
    }

    pub fn h_at(&self, i: Degree) -> SparseMatrix {
        self.h.get(&i).cloned().unwrap_or_else(|| {
            SparseMatrix::zeros(
                self.complex.ring(),
                self.complex.rank(i + 1),
                self.complex.rank(i),
            )
        })
    }

    pub fn as_graded_map(&self) -> GradedMap {
        GradedMap {
            shift: 1,
            maps: self.h.clone(),
        }
    }

    /// `f_i = id − (d h_i + h_{i−1} d)`.
    pub fn residual(&self, i: Degree) -> Result<SparseMatrix> {
        let c = &self.complex;
        let n = c.rank(i);
        let dh = c.boundary(i + 1).mul(&self.h_at(i))?;
        let hd = self.h_at(i - 1).mul(&c.boundary(i))?;
        SparseMatrix::identity(c.ring(), n).sub(&dh.add(&hd)?)
    }

    pub fn check_shapes(&self) -> Result<()> {
        for (&i, m) in &self.h {
            let want = (self.complex.rank(i + 1), self.complex.rank(i));
            if m.ring() != self.complex.ring() || m.shape() != want {
                return Err(Error::Shape(format!(
                    "h_{i} has shape {:?} over {}, expected {want:?} over {}",
                    m.shape(),
                    m.ring(),
                    self.complex.ring()
                )));
            }
        }
        Ok(())
    }
}

pub fn verify_k_contraction(kc: &KContraction) -> Result<ResidualReport> {
    kc.check_shapes()?;
    let degrees = kc.complex.support();
    let res = crate::par::map(&degrees, |&i| kc.residual(i).map(|f| (i, f.nnz())));
    let mut residual_nnz = BTreeMap::new();
    for r in res {
        let (i, n) = r?;
        residual_nnz.insert(i, n);
    }
    let pass = residual_nnz.iter().all(|(&i, &n)| i == kc.k || n == 0);
    Ok(ResidualReport {
        k: kc.k,
        residual_nnz,
        pass,
    })
}

/// `D = C ⊕ B` on coordinates. Coordinates with a nonzero order generate a
/// cyclic group of that order and are read modulo it.
#[derive(Clone, Debug)]
pub struct SplitComplex {
    pub complex: ChainComplex,
    pub c_part: BTreeMap<Degree, Vec<usize>>,
    /// Per degree, one order per coordinate of `D_q` (0 = infinite cyclic).
    pub orders: BTreeMap<Degree, Vec<Scalar>>,
}

impl SplitComplex {
    /// A free `D` with `C` spanned by the listed coordinates.
    pub fn free(complex: ChainComplex, c_part: BTreeMap<Degree, Vec<usize>>) -> Self {
        SplitComplex {
            complex,
            c_part,
            orders: BTreeMap::new(),
        }
    }

    fn order(&self, q: Degree, i: usize) -> Scalar {
        self.orders.get(&q).map_or(0, |v| v[i])
    }

    fn c_coords(&self, q: Degree) -> Vec<usize> {
        self.c_part.get(&q).cloned().unwrap_or_default()
    }

    fn b_coords(&self, q: Degree) -> Vec<usize> {
        let c = self.c_coords(q);
        let mut in_c = vec![false; self.complex.rank(q)];
        for i in c {
            in_c[i] = true;
        }
        (0..self.complex.rank(q)).filter(|&i| !in_c[i]).collect()
    }

    /// `C` as a complex on its own coordinates.
    pub fn sub(&self) -> Result<ChainComplex> {
        self.complex.restrict(&self.c_part)
    }

    /// Zero after reducing rows of degree `q` modulo their orders.
    fn vanishes_mod(&self, m: &SparseMatrix, q: Degree) -> bool {
        m.entries().all(|(r, _, v)| match self.order(q, r) {
            0 => v == 0,
            o => v % o == 0,
        })
    }
}

/// Retract data `E → D → E` with `j∘i = id`.
pub struct Retract {
    pub e: ChainComplex,
    pub i: GradedMap,
    pub j: GradedMap,
}

fn hyp(condition: char, detail: impl Into<String>) -> Error {
    Error::Hypothesis {
        condition,
        detail: detail.into(),
    }
}

/// Moves a k-contraction of `C` to `E` through `D = C ⊕ B` with `N·B = 0`.
/// All four hypotheses are checked; the result is verified before returning.
pub fn transfer_k_contraction(
    d: &SplitComplex,
    retract: &Retract,
    h_c: &KContraction,
    n: Scalar,
) -> Result<KContraction> {
    let dc = &d.complex;
    let e = &retract.e;
    let ring = dc.ring();
    if e.ring() != ring || h_c.complex.ring() != ring {
        return Err(Error::Shape("transfer data over different rings".into()));
    }
    retract.i.check_shapes(e, dc)?;
    retract.j.check_shapes(dc, e)?;
    let c = d.sub()?;
    if c != h_c.complex {
        return Err(Error::Shape("the contraction is not on the given subcomplex C".into()));
    }
    let degrees: Vec<Degree> = {
        let mut v: Vec<Degree> = dc.degree_range();
        v.extend(e.degree_range());
        v.sort_unstable();
        v.dedup();
        v
    };

    // (a): chain maps with j∘i = id
    for &q in &degrees {
        let lhs = dc.boundary(q).mul(&retract.i.at(q, e, dc))?;
        let rhs = retract.i.at(q - 1, e, dc).mul(&e.boundary(q))?;
        if !d.vanishes_mod(&lhs.sub(&rhs)?, q - 1) {
            return Err(hyp('a', format!("i is not a chain map at degree {q}")));
        }
        for b in d.b_coords(q) {
            if d.order(q, b) != 0 {
                let col = retract.j.at(q, dc, e).select(&(0..e.rank(q)).collect::<Vec<_>>(), &[b]);
                if !col.is_zero() {
                    return Err(hyp('a', format!("j is nonzero on a torsion generator in degree {q}")));
                }
            }
        }
        let lhs = e.boundary(q).mul(&retract.j.at(q, dc, e))?;
        let rhs = retract.j.at(q - 1, dc, e).mul(&dc.boundary(q))?;
        if lhs != rhs {
            return Err(hyp('a', format!("j is not a chain map at degree {q}")));
        }
    }
    for q in e.support() {
        let ji = retract.j.at(q, dc, e).mul(&retract.i.at(q, e, dc))?;
        if ji != SparseMatrix::identity(ring, e.rank(q)) {
            return Err(hyp('a', format!("j∘i ≠ id in degree {q}")));
        }
    }
    // (b)
    let torsion_free = matches!(ring, CoeffRing::Integers | CoeffRing::FiniteField { .. })
        || ring.is_field()
        || e.support().is_empty();
    if !torsion_free {
        return Err(hyp('b', format!("free modules over {ring} have torsion")));
    }
    // (c)
    for &q in &degrees {
        for &ci in &d.c_coords(q) {
            if d.order(q, ci) != 0 {
                return Err(hyp('c', format!("C_{q} contains a torsion coordinate")));
            }
        }
        let bd = dc.boundary(q);
        let leak = bd.select(&d.b_coords(q - 1), &d.c_coords(q));
        let b_rows = d.b_coords(q - 1);
        let ok = leak.entries().all(|(r, _, v)| match d.order(q - 1, b_rows[r]) {
            0 => v == 0,
            o => v % o == 0,
        });
        if !ok {
            return Err(hyp('c', format!("d(C_{q}) is not contained in C_{}", q - 1)));
        }
    }
    // (d)
    if n <= 0 {
        return Err(hyp('d', "N must be a positive integer"));
    }
    for &q in &degrees {
        for b in d.b_coords(q) {
            let o = d.order(q, b);
            let killed = match ring {
                CoeffRing::Integers => o != 0 && n % o == 0,
                _ => ring.arith().from_int(n) == 0 || (o != 0 && n % o == 0),
            };
            if !killed {
                return Err(hyp(
                    'd',
                    format!(
                        "N·B_{q} ≠ 0: generator {b} has order {}",
                        if o == 0 { "∞".to_string() } else { o.to_string() }
                    ),
                ));
            }
        }
    }

    // H_q = j h' i, with h' = h_C on C and 0 on B
    let mut h = BTreeMap::new();
    for q in e.support() {
        let cq = d.c_coords(q);
        let cq1 = d.c_coords(q + 1);
        if cq.is_empty() || cq1.is_empty() {
            continue;
        }
        let i_c = retract.i.at(q, e, dc).select(&cq, &(0..e.rank(q)).collect::<Vec<_>>());
        let j_c = retract
            .j
            .at(q + 1, dc, e)
            .select(&(0..e.rank(q + 1)).collect::<Vec<_>>(), &cq1);
        let m = j_c.mul(&h_c.h_at(q))?.mul(&i_c)?;
        if !m.is_zero() {
            h.insert(q, m);
        }
    }
    let out = KContraction {
        complex: e.clone(),
        k: h_c.k,
        h,
    };
    let rep = verify_k_contraction(&out)?;
    if !rep.pass {
        return Err(Error::Structural(format!(
            "transferred homotopy fails verification: residuals {:?}",
            rep.residual_nnz
        )));
    }
    Ok(out)
}

/// `0 → C →f D →g E → 0` with degreewise splittings `r` (of `f`) and `s` (of `g`).
#[derive(Clone, Debug)]
pub struct SplitSes {
    pub c: ChainComplex,
    pub d: ChainComplex,
    pub e: ChainComplex,
    pub f: GradedMap,
    pub g: GradedMap,
    pub r: GradedMap,
    pub s: GradedMap,
}

fn selection(ring: CoeffRing, big: usize, coords: &[usize]) -> SparseMatrix {
    SparseMatrix::from_triplets(
        ring,
        big,
        coords.len(),
        coords.iter().enumerate().map(|(j, &i)| (i, j, 1)),
    )
}

impl SplitSes {
    /// `C` spanned by the listed coordinates of `D` (must be a subcomplex),
    /// `E` the quotient on the remaining coordinates.
    pub fn from_coordinates(d: &ChainComplex, sub: &BTreeMap<Degree, Vec<usize>>) -> Result<Self> {
        let ring = d.ring();
        let mut quo = BTreeMap::new();
        for (&q, &n) in d.ranks() {
            let mut in_c = vec![false; n];
            for &i in sub.get(&q).map(|v| v.as_slice()).unwrap_or(&[]) {
                in_c[i] = true;
            }
            quo.insert(q, (0..n).filter(|&i| !in_c[i]).collect::<Vec<_>>());
        }
        for &q in d.boundaries().keys() {
            let empty = Vec::new();
            let leak = d.boundary(q).select(
                quo.get(&(q - 1)).unwrap_or(&empty),
                sub.get(&q).unwrap_or(&empty),
            );
            if !leak.is_zero() {
                return Err(Error::Structural(format!(
                    "coordinates in degree {q} do not span a subcomplex"
                )));
            }
        }
        let c = d.restrict(sub)?;
        let e = d.restrict(&quo)?;
        let (mut f, mut g, mut r, mut s) =
            (GradedMap::new(0), GradedMap::new(0), GradedMap::new(0), GradedMap::new(0));
        for (&q, &n) in d.ranks() {
            let empty = Vec::new();
            let sc = selection(ring, n, sub.get(&q).unwrap_or(&empty));
            let se = selection(ring, n, quo.get(&q).unwrap_or(&empty));
            r.maps.insert(q, sc.transpose());
            f.maps.insert(q, sc);
            g.maps.insert(q, se.transpose());
            s.maps.insert(q, se);
        }
        Ok(SplitSes { c, d: d.clone(), e, f, g, r, s })
    }

    /// Exactness, splitting and chain-map checks, degree by degree.
    pub fn check(&self) -> Result<()> {
        let (c, d, e) = (&self.c, &self.d, &self.e);
        if !self.f.is_chain_map(c, d)? || !self.g.is_chain_map(d, e)? {
            return Err(Error::Structural("f or g is not a chain map".into()));
        }
        self.r.check_shapes(d, c)?;
        self.s.check_shapes(e, d)?;
        let ring = d.ring();
        for q in d.degree_range() {
            let f = self.f.at(q, c, d);
            let g = self.g.at(q, d, e);
            let r = self.r.at(q, d, c);
            let s = self.s.at(q, e, d);
            if !g.mul(&f)?.is_zero() {
                return Err(Error::Structural(format!("g∘f ≠ 0 in degree {q}")));
            }
            if r.mul(&f)? != SparseMatrix::identity(ring, c.rank(q)) {
                return Err(Error::Structural(format!("r∘f ≠ id in degree {q}")));
            }
            if g.mul(&s)? != SparseMatrix::identity(ring, e.rank(q)) {
                return Err(Error::Structural(format!("g∘s ≠ id in degree {q}")));
            }
            let sum = f.mul(&r)?.add(&s.mul(&g)?)?;
            if sum != SparseMatrix::identity(ring, d.rank(q)) {
                return Err(Error::Structural(format!("not exact in degree {q}")));
            }
        }
        Ok(())
    }
}

/// Output of the split-sequence lemma.
#[derive(Clone, Debug)]
pub struct SesEquivalence {
    /// The homotopy `K` on `D`.
    pub k: GradedMap,
    /// `u = id − (dK + Kd)` on `D`.
    pub u: GradedMap,
    /// Part (1): `ū: D → C` with `ū∘f = id`. Part (2): `ū: E → D` with `g∘ū = id`.
    pub u_bar: GradedMap,
}

fn u_from_k(d: &ChainComplex, k: &GradedMap) -> Result<GradedMap> {
    let mut u = GradedMap::new(0);
    for (&q, &n) in d.ranks() {
        let kq = k.at(q, d, d);
        let kq1 = k.at(q - 1, d, d);
        let dk = d.boundary(q + 1).mul(&kq)?;
        let kd = kq1.mul(&d.boundary(q))?;
        u.maps
            .insert(q, SparseMatrix::identity(d.ring(), n).sub(&dk.add(&kd)?)?);
    }
    Ok(u)
}

fn full_contraction(h: &KContraction, what: &str) -> Result<()> {
    let rep = verify_k_contraction(h)?;
    if !rep.is_contraction() {
        return Err(Error::Structural(format!("{what} is not contracted by the given homotopy")));
    }
    Ok(())
}

/// Part (1): `E` contractible by `h_e`. Returns `ū: D → C`, a homotopy
/// inverse of `f`, built from `K = s h_E g`.
pub fn split_ses_contraction_quotient(ses: &SplitSes, h_e: &KContraction) -> Result<SesEquivalence> {
    ses.check()?;
    full_contraction(h_e, "E")?;
    let (c, d, e) = (&ses.c, &ses.d, &ses.e);
    let k = ses.s.compose(&h_e.as_graded_map(), e, e, d)?.compose(&ses.g, d, e, d)?;
    let u = u_from_k(d, &k)?;
    let u_bar = ses.r.compose(&u, d, d, c)?;
    let uf = u_bar.compose(&ses.f, c, d, c)?;
    if uf != GradedMap::identity(c) || !u_bar.is_chain_map(d, c)? {
        return Err(Error::Structural("ū∘f ≠ id".into()));
    }
    Ok(SesEquivalence { k, u, u_bar })
}

/// Part (2): `C` contractible by `h_c`. Returns `ū: E → D` with `g∘ū = id`,
/// built from `K = f h_C r`.
pub fn split_ses_contraction_sub(ses: &SplitSes, h_c: &KContraction) -> Result<SesEquivalence> {
    ses.check()?;
    full_contraction(h_c, "C")?;
    split_ses_sub_unchecked(ses, h_c)
}

fn split_ses_sub_unchecked(ses: &SplitSes, h_c: &KContraction) -> Result<SesEquivalence> {
    let (c, d, e) = (&ses.c, &ses.d, &ses.e);
    let k = ses.f.compose(&h_c.as_graded_map(), c, c, d)?.compose(&ses.r, d, c, d)?;
    let u = u_from_k(d, &k)?;
    let u_bar = u.compose(&ses.s, e, d, d)?;
    let gu = ses.g.compose(&u_bar, e, d, e)?;
    if gu != GradedMap::identity(e) || !u_bar.is_chain_map(e, d)? {
        return Err(Error::Structural("g∘ū ≠ id".into()));
    }
    Ok(SesEquivalence { k, u, u_bar })
}

/// With `C` contractible by `h_c` and a k-contraction `h_e` of `E`,
/// `h = K + ū h_E g` is a k-contraction of `D` with residual `ū f_E g`.
pub fn extend_over_ses(ses: &SplitSes, h_c: &KContraction, h_e: &KContraction) -> Result<KContraction> {
    let eq = split_ses_sub_unchecked(ses, h_c)?;
    let (d, e) = (&ses.d, &ses.e);
    let tail = eq
        .u_bar
        .compose(&h_e.as_graded_map(), e, e, d)?
        .compose(&ses.g, d, e, d)?;
    let mut h = BTreeMap::new();
    for &q in d.ranks().keys() {
        let m = eq.k.at(q, d, d).add(&tail.at(q, d, d))?;
        if !m.is_zero() {
            h.insert(q, m);
        }
    }
    Ok(KContraction {
        complex: d.clone(),
        k: h_e.k,
        h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::Integers
    }

    fn cone() -> ChainComplex {
        ChainComplex::new(
            z(),
            [(0, 1), (1, 1)].into_iter().collect(),
            [(1, SparseMatrix::identity(z(), 1))].into_iter().collect(),
        )
        .unwrap()
    }

    fn cone_h() -> KContraction {
        KContraction {
            complex: cone(),
            k: 0,
            h: [(0, SparseMatrix::identity(z(), 1))].into_iter().collect(),
        }
    }

    #[test]
    fn zero_complex_passes() {
        let kc = KContraction::zero(ChainComplex::zero(z()), 3);
        assert!(verify_k_contraction(&kc).unwrap().pass);
    }

    #[test]
    fn cone_passes_for_every_k() {
        for k in -2..4 {
            let mut kc = cone_h();
            kc.k = k;
            let rep = verify_k_contraction(&kc).unwrap();
            assert!(rep.pass && rep.is_contraction());
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let mut kc = cone_h();
        kc.h.insert(0, SparseMatrix::identity(z(), 2));
        assert!(verify_k_contraction(&kc).is_err());
    }

    #[test]
    fn transfer_identity() {
        let c = cone();
        let d = SplitComplex::free(c.clone(), [(0, vec![0]), (1, vec![0])].into_iter().collect());
        let retract = Retract {
            e: c.clone(),
            i: GradedMap::identity(&c),
            j: GradedMap::identity(&c),
        };
        let out = transfer_k_contraction(&d, &retract, &cone_h(), 1).unwrap();
        assert_eq!(out.h, cone_h().h);
    }

    #[test]
    fn transfer_fails_d_on_free_complement() {
        let c = cone();
        let two = c.direct_sum(&cone()).unwrap();
        let d = SplitComplex::free(two.clone(), [(0, vec![0]), (1, vec![0])].into_iter().collect());
        let i = GradedMap {
            shift: 0,
            maps: [(0, selection(z(), 2, &[0])), (1, selection(z(), 2, &[0]))]
                .into_iter()
                .collect(),
        };
        let j = GradedMap {
            shift: 0,
            maps: [(0, selection(z(), 2, &[0]).transpose()), (1, selection(z(), 2, &[0]).transpose())]
                .into_iter()
                .collect(),
        };
        let err = transfer_k_contraction(&d, &Retract { e: c, i, j }, &cone_h(), 2).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { condition: 'd', .. }));
    }

    #[test]
    fn ses_with_cone_summand() {
        // D = C ⊕ cone, C = Z in degree 0 with no differential
        let c0 = ChainComplex::new(z(), [(0, 1)].into_iter().collect(), BTreeMap::new()).unwrap();
        let d = c0.direct_sum(&cone()).unwrap();
        let ses = SplitSes::from_coordinates(&d, &[(0, vec![0])].into_iter().collect()).unwrap();
        let eq = split_ses_contraction_quotient(&ses, &cone_h()).unwrap();
        assert_eq!(eq.u_bar.compose(&ses.f, &ses.c, &ses.d, &ses.c).unwrap(), GradedMap::identity(&ses.c));
    }

    #[test]
    fn ses_with_zero_quotient() {
        let c = cone();
        let ses = SplitSes::from_coordinates(&c, &[(0, vec![0]), (1, vec![0])].into_iter().collect()).unwrap();
        let e0 = KContraction::zero(ses.e.clone(), 0);
        let eq = split_ses_contraction_quotient(&ses, &e0).unwrap();
        assert_eq!(eq.u_bar, GradedMap::identity(&c));
    }
}
