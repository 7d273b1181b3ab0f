//! The disorder filtration of `U` and the simplex-by-simplex pushout audit.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::chi::{best_completion_u, chi_unchecked};
use super::subsets::{max_disorder, sequences, SubsetChain};
use crate::error::{Error, Result};
use crate::partition::uniform::{USimplex, Uniform};

/// `d(χ(σ))` for every simplex of `U`, per dimension. `F_r U` is the set
/// of simplices with value at most `r`; `F_{−1} U = U◇`.
pub struct DisorderFiltration {
    pub k: usize,
    pub disorder: Vec<Vec<i64>>,
}

impl DisorderFiltration {
    pub fn build(u: &Uniform) -> Result<Self> {
        let mut disorder = Vec::with_capacity(u.levels.len());
        for l in &u.levels {
            let d = crate::par::map(l, |s| chi_unchecked(u, s).map(|c| c.disorder().value));
            disorder.push(d.into_iter().collect::<Result<Vec<_>>>()?);
        }
        Ok(DisorderFiltration { k: u.k, disorder })
    }

    pub fn top(&self) -> i64 {
        max_disorder(self.k)
    }

    /// Membership of each simplex in `F_r U`.
    pub fn stratum(&self, r: i64) -> Vec<Vec<bool>> {
        self.disorder.iter().map(|l| l.iter().map(|&d| d <= r).collect()).collect()
    }

    /// Each `F_r` is closed under faces, `F_{−1} = U◇`, and the top is all of `U`.
    pub fn check(&self, u: &Uniform) -> Result<()> {
        let diamond = u.diamond();
        for (q, l) in self.disorder.iter().enumerate() {
            for (x, &d) in l.iter().enumerate() {
                if (d == -1) != diamond[q][x] {
                    return Err(Error::Structural(format!("χ⁻¹(K◇) ≠ U◇ at ({q}, {x})")));
                }
                if d > self.top() {
                    return Err(Error::Structural(format!("disorder {d} exceeds the maximum")));
                }
                if q > 0 {
                    for i in 0..=q {
                        if self.disorder[q - 1][u.face_id(q, x, i)] > d {
                            return Err(Error::Structural(format!("face d_{i} of ({q}, {x}) has larger disorder")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The face of `σ` on the vertex positions in `f` (sorted).
pub fn face_on(sigma: &USimplex, f: &[usize]) -> USimplex {
    USimplex {
        chain: f.iter().map(|&i| sigma.chain[i]).collect(),
        cf: sigma.cf,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    pub r: i64,
    /// Essential `k`-simplices of `K` with disorder `r`.
    pub sigma_classes: usize,
    /// `Σ |S_σ|` over those classes.
    pub s_total: usize,
    pub lambda_proper: bool,
    pub pushout_ok: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushoutReport {
    pub p: usize,
    pub k: usize,
    pub rows: Vec<StratumRow>,
}

impl PushoutReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pushout_ok && (r.lambda_proper == (r.r < max_disorder(self.k))))
    }
}

/// Essential `k`-simplices of `U` grouped by their jump sequence.
pub fn s_sigma(u: &Uniform) -> Result<BTreeMap<Vec<usize>, Vec<usize>>> {
    let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for &id in &u.essential[u.k] {
        let c = chi_unchecked(u, &u.levels[u.k][id])?;
        let s = c
            .jump_sequence()
            .ok_or_else(|| Error::Structural("χ of an essential k-simplex is not essential".into()))?;
        out.entry(s).or_default().push(id);
    }
    Ok(out)
}

/// Checks that `F_r U` is the pushout of `F_{r−1} U ← ⊔ Λ_σ × S_σ → ⊔ Δ[k] × S_σ`
/// on nondegenerate simplices: faces of `σ ∈ S_σ` outside `Λ_σ` are exactly
/// the disorder-`r` simplices, each hit once, and faces inside `Λ_σ` lie in
/// `F_{r−1}`. `Λ_σ` is also recomputed from the actual face disorders.
pub fn verify_pushout(u: &Uniform, filt: &DisorderFiltration, r: i64) -> Result<StratumRow> {
    let k = u.k;
    let classes: Vec<Vec<usize>> = sequences(k)
        .into_iter()
        .filter(|s| SubsetChain::from_sequence(s).disorder().value == r)
        .collect();
    let groups = s_sigma(u)?;
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut detail = None;
    let mut s_total = 0;
    let mut lambda_proper = true;
    let subsets: Vec<Vec<usize>> = (1u32..1 << (k + 1))
        .map(|b| (0..=k).filter(|i| b & (1 << i) != 0).collect())
        .collect();
    for seq in &classes {
        let lam = SubsetChain::from_sequence(seq).lambda_vertices().unwrap();
        lambda_proper &= lam.len() < k + 1;
        let members = groups.get(seq).map(|v| v.as_slice()).unwrap_or(&[]);
        s_total += members.len();
        for &id in members {
            let sigma = &u.levels[k][id];
            for j in 0..=k {
                let f: Vec<usize> = (0..=k).filter(|&i| i != j).collect();
                let d = filt.disorder[k - 1][u.id_of(&face_on(sigma, &f)).unwrap()];
                if (d < r) != lam.contains(&j) && detail.is_none() {
                    detail = Some(format!("Λ_σ for {seq:?} disagrees at face {j}"));
                }
            }
            for f in &subsets {
                let tau = face_on(sigma, f);
                let q = f.len() - 1;
                let Some(t) = u.id_of(&tau) else {
                    detail.get_or_insert_with(|| "face of a simplex of U is missing".into());
                    continue;
                };
                let outside = lam.iter().all(|l| f.contains(l));
                let d = filt.disorder[q][t];
                if outside {
                    if d != r && detail.is_none() {
                        detail = Some(format!("face {f:?} of {seq:?} has disorder {d}, not {r}"));
                    }
                    if !seen.insert((q, t)) && detail.is_none() {
                        detail = Some(format!("simplex ({q}, {t}) reached twice"));
                    }
                } else if d >= r && detail.is_none() {
                    detail = Some(format!("face {f:?} inside Λ_σ has disorder {d}"));
                }
            }
        }
    }
    let expected: usize = filt.disorder.iter().map(|l| l.iter().filter(|&&d| d == r).count()).sum();
    if seen.len() != expected && detail.is_none() {
        detail = Some(format!("{} of {expected} disorder-{r} simplices reached", seen.len()));
    }
    Ok(StratumRow {
        r,
        sigma_classes: classes.len(),
        s_total,
        lambda_proper,
        pushout_ok: detail.is_none(),
        detail,
    })
}

pub fn verify_all_pushouts(u: &Uniform) -> Result<PushoutReport> {
    let filt = DisorderFiltration::build(u)?;
    filt.check(u)?;
    let rs: Vec<i64> = (0..=filt.top()).collect();
    let rows = crate::par::map(&rs, |&r| verify_pushout(u, &filt, r));
    Ok(PushoutReport {
        p: u.p,
        k: u.k,
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// Vertex positions of `tau` inside its best completion.
pub fn positions_in_completion(u: &Uniform, tau: &USimplex) -> Result<(USimplex, Vec<usize>)> {
    let sigma = best_completion_u(u, tau)?;
    let mut pos = Vec::with_capacity(tau.chain.len());
    let mut i = 0;
    for e in &tau.chain {
        while sigma.chain[i] != *e {
            i += 1;
        }
        pos.push(i);
    }
    Ok((sigma, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m2_and_m4() {
        let u = Uniform::build(2, 1).unwrap();
        let rep = verify_all_pushouts(&u).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert!(rep.pass());
        let u = Uniform::build(2, 2).unwrap();
        let rep = verify_all_pushouts(&u).unwrap();
        assert!(rep.pass(), "{:?}", rep.rows);
        assert_eq!(rep.rows.iter().map(|r| r.lambda_proper).collect::<Vec<_>>(), vec![true, false]);
        assert_eq!(rep.rows.iter().map(|r| r.sigma_classes).collect::<Vec<_>>(), vec![1, 1]);
    }
}
