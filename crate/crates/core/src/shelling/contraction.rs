//! An explicit k-contraction of `NQ̃(Ū)` assembled stratum by stratum.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::chi::chi_unchecked;
use super::strata::{face_on, positions_in_completion, DisorderFiltration};
use super::subsets::max_disorder;
use crate::error::{Error, Result};
use crate::homalg::{
    extend_over_ses, verify_k_contraction, CoeffRing, Degree, KContraction, ResidualReport, SparseMatrix, SplitSes,
};
use crate::partition::uniform::Uniform;
use crate::qfunctors::functors::{apply_map, SumFunctor};
use crate::simplicial::chains::{chains_via_functor, FunctorChains, Level};

#[derive(Clone, Debug, Serialize)]
pub struct StratumSummary {
    pub r: i64,
    /// Rank of the stratum quotient per degree.
    pub ranks: BTreeMap<Degree, usize>,
    /// Least vertex of `Δ[k]` whose opposite face is not in `Λ_σ`, per
    /// σ-class in lexicographic order of jump sequences.
    pub cone_vertices: Vec<(Vec<usize>, Option<usize>)>,
}

pub struct ShellingContraction {
    pub uniform: Arc<Uniform>,
    pub chains: FunctorChains,
    pub contraction: KContraction,
    pub strata: Vec<StratumSummary>,
    pub residual: ResidualReport,
}

/// Cone data for a live simplex: the coface index in degree `q + 1` and its
/// sign, or `None` when the cone vertex is already present or the simplex
/// sits in the top stratum.
fn cone_step(u: &Uniform, q: usize, x: usize, top: i64) -> Result<Option<(usize, bool)>> {
    let tau = u.essential_simplex(q, x);
    if chi_unchecked(u, tau)?.disorder().value == top {
        return Ok(None);
    }
    let (sigma, pos) = positions_in_completion(u, tau)?;
    let lam = chi_unchecked(u, &sigma)?.lambda_vertices().unwrap();
    let v = (1..u.k)
        .find(|j| !lam.contains(j))
        .ok_or_else(|| Error::Structural("proper Λ_σ without an avoidable vertex".into()))?;
    if pos.contains(&v) {
        return Ok(None);
    }
    let at = pos.iter().filter(|&&i| i < v).count();
    let mut f = pos;
    f.insert(at, v);
    let y = u
        .essential_index(&face_on(&sigma, &f))
        .ok_or_else(|| Error::Structural("cone face is not essential".into()))?;
    Ok(Some((y, at % 2 == 0)))
}

/// Coordinates of `Q̃(Ū_q)` grouped by the disorder of their orbit.
fn coordinates_by_stratum(u: &Uniform, filt: &DisorderFiltration, fc: &FunctorChains) -> BTreeMap<i64, BTreeMap<Degree, Vec<usize>>> {
    let mut out: BTreeMap<i64, BTreeMap<Degree, Vec<usize>>> = BTreeMap::new();
    for (q, l) in fc.layouts.iter().enumerate() {
        for (o, orb) in l.orbits.orbits.iter().enumerate() {
            let r = filt.disorder[q][u.essential[q][orb[0]]];
            let end = l.offsets.get(o + 1).copied().unwrap_or(l.rank);
            out.entry(r)
                .or_default()
                .entry(q as Degree)
                .or_default()
                .extend(l.offsets[o]..end);
        }
    }
    for per in out.values_mut() {
        for v in per.values_mut() {
            v.sort_unstable();
        }
    }
    out
}

/// Builds `h` on `NQ̃(Ū_{p^k})`: cone contractions of the strata `r` below
/// the top, glued along the split sequences `F_{r−1} → F_r → F_r/F_{r−1}`.
/// The top stratum is concentrated in degree `k` and gets `h = 0`.
pub fn build_k_contraction(q: &dyn SumFunctor, p: usize, k: usize, ring: CoeffRing) -> Result<ShellingContraction> {
    let u = Arc::new(Uniform::build(p, k)?);
    build_k_contraction_on(u, q, ring)
}

pub fn build_k_contraction_on(u: Arc<Uniform>, q: &dyn SumFunctor, ring: CoeffRing) -> Result<ShellingContraction> {
    let k = u.k;
    let top = max_disorder(k);
    let filt = DisorderFiltration::build(&u)?;
    let fc = chains_via_functor(u.as_ref(), q, ring)?;
    let d = &fc.complex;

    // the cone homotopy on every non-top stratum at once, on D's coordinates
    let mut cone: BTreeMap<Degree, SparseMatrix> = BTreeMap::new();
    for dim in 1..k {
        let steps = crate::par::map_range(u.essential[dim].len(), |x| cone_step(&u, dim, x, top));
        let steps: Vec<Option<(usize, bool)>> = steps.into_iter().collect::<Result<_>>()?;
        let src = Level { x: u.as_ref(), q: dim };
        let dst = Level { x: u.as_ref(), q: dim + 1 };
        let (ls, ld) = (&fc.layouts[dim], &fc.layouts[dim + 1]);
        let plus = apply_map(q, &src, ls, &dst, ld, &|x| steps[x].filter(|s| s.1).map(|s| s.0), ring)?;
        let minus = apply_map(q, &src, ls, &dst, ld, &|x| steps[x].filter(|s| !s.1).map(|s| s.0), ring)?;
        cone.insert(dim as Degree, plus.sub(&minus)?);
    }

    let by_stratum = coordinates_by_stratum(&u, &filt, &fc);
    let stratum_classes = super::strata::s_sigma(&u)?;
    let mut strata = Vec::new();
    let mut below: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
    let mut h_prev: Option<KContraction> = None;
    for (&r, coords) in &by_stratum {
        let mut upto = below.clone();
        for (&dim, v) in coords {
            let e = upto.entry(dim).or_default();
            e.extend(v);
            e.sort_unstable();
        }
        let f_r = d.restrict(&upto)?;
        // coordinates of F_{r−1} inside F_r
        let sub: BTreeMap<Degree, Vec<usize>> = upto
            .iter()
            .map(|(&dim, all)| {
                let old = below.get(&dim).map(|v| v.as_slice()).unwrap_or(&[]);
                let pos = all.iter().enumerate().filter(|(_, c)| old.binary_search(c).is_ok()).map(|(i, _)| i).collect();
                (dim, pos)
            })
            .collect();
        let ses = SplitSes::from_coordinates(&f_r, &sub)?;
        let mut h_e = BTreeMap::new();
        if r < top {
            for (&dim, m) in &cone {
                let (Some(rows), Some(cols)) = (coords.get(&(dim + 1)), coords.get(&dim)) else {
                    continue;
                };
                let blk = m.select(rows, cols);
                if !blk.is_zero() {
                    h_e.insert(dim, blk);
                }
            }
        }
        let h_e = KContraction {
            complex: ses.e.clone(),
            k: k as Degree,
            h: h_e,
        };
        if r < top && !verify_k_contraction(&h_e)?.is_contraction() {
            return Err(Error::Structural(format!("cone homotopy does not contract stratum {r}")));
        }
        let h_c = h_prev.take().unwrap_or_else(|| KContraction::zero(ses.c.clone(), k as Degree));
        h_prev = Some(extend_over_ses(&ses, &h_c, &h_e)?);
        strata.push(StratumSummary {
            r,
            ranks: coords.iter().map(|(&dim, v)| (dim, v.len())).collect(),
            cone_vertices: stratum_classes
                .keys()
                .filter(|s| super::subsets::SubsetChain::from_sequence(s).disorder().value == r)
                .map(|s| {
                    let lam = super::subsets::SubsetChain::from_sequence(s).lambda_vertices().unwrap();
                    (s.clone(), (1..k).find(|j| !lam.contains(j)))
                })
                .collect(),
        });
        below = upto;
    }
    let contraction = match h_prev {
        Some(h) => h,
        None => KContraction::zero(d.clone(), k as Degree),
    };
    if contraction.complex != *d {
        return Err(Error::Structural("strata do not exhaust the complex".into()));
    }
    let residual = verify_k_contraction(&contraction)?;
    Ok(ShellingContraction {
        uniform: u,
        chains: fc,
        contraction,
        strata,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::homology_all;
    use crate::qfunctors::functors::Free;

    #[test]
    fn interval_has_zero_h() {
        let s = build_k_contraction(&Free, 2, 1, CoeffRing::Integers).unwrap();
        assert!(s.residual.pass);
        assert!(s.contraction.h.values().all(|m| m.is_zero()));
    }

    #[test]
    fn m4_free() {
        let s = build_k_contraction(&Free, 2, 2, CoeffRing::Integers).unwrap();
        assert!(s.residual.pass, "{:?}", s.residual);
        let h = homology_all(&s.chains.complex).unwrap();
        for (deg, m) in h {
            assert_eq!(m.is_zero(), deg != 2, "degree {deg}");
        }
    }
}
