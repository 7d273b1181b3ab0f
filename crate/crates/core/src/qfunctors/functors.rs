//! Sum-preserving functors from finite pointed Σ_m-sets to free modules,
//! given on orbits and on equivariant maps between orbits.

use std::collections::HashMap;

use super::gset::{isotropy_is_transitive, orbits, GSet, Orbits, Union};
use crate::error::{Error, Result};
use crate::homalg::{CoeffRing, SparseMatrix};
use crate::partition::groups::{minimal_generators, transitive_abelian_subgroups, TransAbSubgroup};
use crate::partition::perm::{symmetric_generators, Perm};

/// A functor defined orbitwise. The basepoint of a pointed set is never
/// passed in, so `Q(point) = 0` holds by construction.
pub trait SumFunctor: Send + Sync {
    fn name(&self) -> String;

    /// Rank of `Q(O)` for the orbit `orbit` (ascending points) of `x`.
    fn rank(&self, x: &dyn GSet, orbit: &[usize]) -> usize;

    /// Matrix of `Q(f)` for an equivariant `f` carrying the orbit `src` of
    /// `x` onto the orbit `dst` of `y`, as integer triplets `(row, col, v)`.
    fn map(
        &self,
        x: &dyn GSet,
        src: &[usize],
        y: &dyn GSet,
        dst: &[usize],
        f: &dyn Fn(usize) -> usize,
    ) -> Result<Vec<(usize, usize, i128)>>;
}

/// Functors whose value on an orbit is free on labelled points `(tag, x)`,
/// with `Q(f)(tag, x) = canon(tag, f(x))`.
pub trait PermFunctor: Send + Sync {
    fn name(&self) -> String;
    fn basis(&self, x: &dyn GSet, orbit: &[usize]) -> Vec<(u32, usize)>;
    fn canon(&self, _dst: &[usize], tag: u32, y: usize) -> (u32, usize) {
        (tag, y)
    }
}

impl<T: PermFunctor> SumFunctor for T {
    fn name(&self) -> String {
        PermFunctor::name(self)
    }

    fn rank(&self, x: &dyn GSet, orbit: &[usize]) -> usize {
        self.basis(x, orbit).len()
    }

    fn map(
        &self,
        x: &dyn GSet,
        src: &[usize],
        y: &dyn GSet,
        dst: &[usize],
        f: &dyn Fn(usize) -> usize,
    ) -> Result<Vec<(usize, usize, i128)>> {
        let target: HashMap<(u32, usize), usize> = self
            .basis(y, dst)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        self.basis(x, src)
            .into_iter()
            .enumerate()
            .map(|(c, (t, p))| {
                let img = self.canon(dst, t, f(p));
                target.get(&img).map(|&r| (r, c, 1)).ok_or_else(|| {
                    Error::Structural(format!(
                        "{}: image of basis element ({t}, {p}) is not a basis element",
                        PermFunctor::name(self)
                    ))
                })
            })
            .collect()
    }
}

/// `X ↦ Z̃[X]`.
pub struct Free;

impl PermFunctor for Free {
    fn name(&self) -> String {
        "free".into()
    }
    fn basis(&self, _x: &dyn GSet, orbit: &[usize]) -> Vec<(u32, usize)> {
        orbit.iter().map(|&p| (0, p)).collect()
    }
}

/// `X ↦ Z̃[X/Σ_m]`.
pub struct OrbitFunctor;

impl PermFunctor for OrbitFunctor {
    fn name(&self) -> String {
        "orbit".into()
    }
    fn basis(&self, _x: &dyn GSet, orbit: &[usize]) -> Vec<(u32, usize)> {
        vec![(0, orbit[0])]
    }
    fn canon(&self, dst: &[usize], tag: u32, _y: usize) -> (u32, usize) {
        (tag, dst[0])
    }
}

/// `X ↦ Z̃[X^H]`, with `H` given by generators.
pub struct Fixed {
    pub label: String,
    pub generators: Vec<Perm>,
}

impl PermFunctor for Fixed {
    fn name(&self) -> String {
        format!("fixed({})", self.label)
    }
    fn basis(&self, x: &dyn GSet, orbit: &[usize]) -> Vec<(u32, usize)> {
        orbit
            .iter()
            .filter(|&&p| self.generators.iter().all(|g| x.act(g, p) == p))
            .map(|&p| (0, p))
            .collect()
    }
}

/// `Z[O]` on orbits whose isotropy acts transitively on {1..m}, zero on the
/// others.
pub struct Transitive;

impl PermFunctor for Transitive {
    fn name(&self) -> String {
        "transitive".into()
    }
    fn basis(&self, x: &dyn GSet, orbit: &[usize]) -> Vec<(u32, usize)> {
        if isotropy_is_transitive(x, orbit[0]) {
            orbit.iter().map(|&p| (0, p)).collect()
        } else {
            Vec::new()
        }
    }
}

/// `X ↦ ⊕_A Z̃[X^A]` over the transitive abelian subgroups `A ≤ Σ_m`.
pub struct TransAbFixed {
    pub groups: Vec<TransAbSubgroup>,
    generators: Vec<Vec<Perm>>,
    sym: Vec<Perm>,
    /// `conj[s][a]`: index of `t_s A t_s⁻¹` for the symmetric generator `t_s`.
    conj: Vec<Vec<u32>>,
}

impl TransAbFixed {
    pub fn new(m: usize) -> Result<Self> {
        let groups = transitive_abelian_subgroups(m)?;
        let generators = groups
            .iter()
            .map(|a| minimal_generators(a).into_iter().map(|i| a.elements[i].clone()).collect())
            .collect();
        let index: HashMap<Vec<Perm>, u32> = groups.iter().enumerate().map(|(i, a)| (a.key(), i as u32)).collect();
        let sym = symmetric_generators(m);
        let conj = sym
            .iter()
            .map(|t| groups.iter().map(|a| index[&a.conjugate(t).key()]).collect())
            .collect();
        Ok(TransAbFixed {
            groups,
            generators,
            sym,
            conj,
        })
    }

    /// Groups fixing each point of the orbit: found at the first point and
    /// transported along generator steps, since `A` fixes `y` iff `tAt⁻¹`
    /// fixes `t y`.
    fn fixing(&self, x: &dyn GSet, orbit: &[usize]) -> Vec<(usize, Vec<u32>)> {
        let x0 = orbit[0];
        let first: Vec<u32> = (0..self.groups.len() as u32)
            .filter(|&a| self.generators[a as usize].iter().all(|g| x.act(g, x0) == x0))
            .collect();
        let mut out: HashMap<usize, Vec<u32>> = HashMap::from([(x0, first)]);
        let mut queue = std::collections::VecDeque::from([x0]);
        while let Some(y) = queue.pop_front() {
            for (s, t) in self.sym.iter().enumerate() {
                let z = x.act(t, y);
                if !out.contains_key(&z) {
                    let mut fz: Vec<u32> = out[&y].iter().map(|&a| self.conj[s][a as usize]).collect();
                    fz.sort_unstable();
                    out.insert(z, fz);
                    queue.push_back(z);
                }
            }
        }
        orbit.iter().map(|&p| (p, out.remove(&p).unwrap_or_default())).collect()
    }
}

impl PermFunctor for TransAbFixed {
    fn name(&self) -> String {
        "transab-fixed".into()
    }
    fn basis(&self, x: &dyn GSet, orbit: &[usize]) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = self
            .fixing(x, orbit)
            .into_iter()
            .flat_map(|(p, fs)| fs.into_iter().map(move |a| (a, p)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// The builtin functors for degree `m`, by registry name.
pub fn builtin_names() -> &'static [&'static str] {
    &["free", "orbit", "fixed:<generators>", "transitive", "transab-fixed"]
}

/// Parses a functor spec such as `free`, `orbit`, `transitive`,
/// `transab-fixed` or `fixed:(12)(34);(13)(24)`.
pub fn functor_by_name(m: usize, spec: &str) -> Result<Box<dyn SumFunctor>> {
    let spec = spec.trim();
    Ok(match spec {
        "free" => Box::new(Free),
        "orbit" => Box::new(OrbitFunctor),
        "transitive" => Box::new(Transitive),
        "transab-fixed" => Box::new(TransAbFixed::new(m)?),
        _ => {
            let Some(gens) = spec.strip_prefix("fixed:") else {
                return Err(Error::Invalid(format!(
                    "unknown functor {spec:?}; known: {}",
                    builtin_names().join(", ")
                )));
            };
            let generators = gens
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| Perm::parse(m, s.trim()).ok_or_else(|| Error::Invalid(format!("bad permutation {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Box::new(Fixed {
                label: gens.to_string(),
                generators,
            })
        }
    })
}

/// `Q(X)` laid out orbit by orbit.
#[derive(Clone, Debug)]
pub struct QLayout {
    pub orbits: Orbits,
    pub offsets: Vec<usize>,
    pub rank: usize,
}

pub fn layout(q: &dyn SumFunctor, x: &dyn GSet) -> QLayout {
    let orbits = orbits(x);
    let ranks = crate::par::map(&orbits.orbits, |o| q.rank(x, o));
    let mut offsets = Vec::with_capacity(ranks.len());
    let mut total = 0;
    for r in ranks {
        offsets.push(total);
        total += r;
    }
    QLayout {
        orbits,
        offsets,
        rank: total,
    }
}

/// `Q(f)` for an equivariant pointed map `f: X₊ → Y₊`; `None` is the
/// basepoint.
pub fn apply_map(
    q: &dyn SumFunctor,
    x: &dyn GSet,
    lx: &QLayout,
    y: &dyn GSet,
    ly: &QLayout,
    f: &(dyn Fn(usize) -> Option<usize> + Sync),
    ring: CoeffRing,
) -> Result<SparseMatrix> {
    let blocks = crate::par::map_range(lx.orbits.orbits.len(), |o| -> Result<Vec<(usize, usize, i128)>> {
        let src = &lx.orbits.orbits[o];
        let Some(y0) = f(src[0]) else {
            if src.iter().any(|&p| f(p).is_some()) {
                return Err(Error::Structural("map is not equivariant: orbit meets the basepoint partially".into()));
            }
            return Ok(Vec::new());
        };
        let d = ly.orbits.orbit_of[y0];
        let dst = &ly.orbits.orbits[d];
        let g = |p: usize| f(p).unwrap_or(usize::MAX);
        let ents = q.map(x, src, y, dst, &g)?;
        Ok(ents
            .into_iter()
            .map(|(r, c, v)| (r + ly.offsets[d], c + lx.offsets[o], v))
            .collect())
    });
    let mut all = Vec::new();
    for b in blocks {
        all.extend(b?);
    }
    Ok(SparseMatrix::from_triplets(ring, ly.rank, lx.rank, all))
}

/// Additivity certificate for one split: `[Q(i_X) Q(i_Y)]: Q(X) ⊕ Q(Y) → Q(X ⊔ Y)`
/// is an isomorphism over Z.
pub fn check_additivity(q: &dyn SumFunctor, x: &dyn GSet, y: &dyn GSet) -> Result<()> {
    let u = Union { x, y };
    let (lx, ly, lu) = (layout(q, x), layout(q, y), layout(q, &u));
    if lu.rank != lx.rank + ly.rank {
        return Err(Error::Structural(format!(
            "{}: rank {} of the sum differs from {} + {}",
            q.name(),
            lu.rank,
            lx.rank,
            ly.rank
        )));
    }
    let n = x.len();
    let ring = CoeffRing::Integers;
    let ix = apply_map(q, x, &lx, &u, &lu, &|p| Some(p), ring)?;
    let iy = apply_map(q, y, &ly, &u, &lu, &|p| Some(p + n), ring)?;
    let m = SparseMatrix::hstack(&[&ix, &iy])?;
    let inv = crate::homalg::elim::invariant_factors(&m)?;
    if inv.len() != lu.rank || inv.iter().any(|&d| d != 1) {
        return Err(Error::Structural(format!("{}: canonical map is not an isomorphism", q.name())));
    }
    Ok(())
}

/// Functoriality on a composable pair `X → Y → Z` of equivariant maps.
pub fn check_functoriality(
    q: &dyn SumFunctor,
    x: &dyn GSet,
    y: &dyn GSet,
    z: &dyn GSet,
    f: &(dyn Fn(usize) -> Option<usize> + Sync),
    g: &(dyn Fn(usize) -> Option<usize> + Sync),
) -> Result<()> {
    let (lx, ly, lz) = (layout(q, x), layout(q, y), layout(q, z));
    let ring = CoeffRing::Integers;
    let qf = apply_map(q, x, &lx, y, &ly, f, ring)?;
    let qg = apply_map(q, y, &ly, z, &lz, g, ring)?;
    let gf = |p: usize| f(p).and_then(g);
    let qgf = apply_map(q, x, &lx, z, &lz, &gf, ring)?;
    if qg.mul(&qf)?.sub(&qgf)?.is_zero() {
        Ok(())
    } else {
        Err(Error::Structural(format!("{}: Q(g∘f) ≠ Q(g)Q(f)", q.name())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::perm::closure;
    use crate::qfunctors::gset::CosetSpace;

    fn klein() -> Vec<Perm> {
        vec![
            Perm::from_cycles(4, &[&[1, 2], &[3, 4]]),
            Perm::from_cycles(4, &[&[1, 3], &[2, 4]]),
        ]
    }

    #[test]
    fn ranks_on_orbits() {
        let v = CosetSpace::new(4, closure(4, &klein()));
        let c = CosetSpace::new(4, closure(4, &[Perm::from_cycles(4, &[&[1, 2, 3, 4]])]));
        let u = Union { x: &v, y: &c };
        assert_eq!(layout(&Free, &u).rank, 12);
        assert_eq!(layout(&OrbitFunctor, &v).rank, 1);
        let fv = Fixed {
            label: "V".into(),
            generators: klein(),
        };
        // V is normal in Σ₄, so it fixes every coset of itself
        assert_eq!(layout(&fv, &v).rank, 6);
        assert_eq!(layout(&Transitive, &v).rank, 6);
        for q in [&Free as &dyn SumFunctor, &OrbitFunctor, &fv, &Transitive] {
            check_additivity(q, &v, &c).unwrap();
        }
    }

    #[test]
    fn transab_fixed_matches_brute_force() {
        let q = TransAbFixed::new(4).unwrap();
        for h in [klein(), vec![Perm::from_cycles(4, &[&[1, 2, 3, 4]])], vec![Perm::from_cycles(4, &[&[1, 2]])]] {
            let x = CosetSpace::new(4, closure(4, &h));
            let all: Vec<usize> = (0..x.len()).collect();
            let mut brute = Vec::new();
            for (t, a) in q.groups.iter().enumerate() {
                for &p in &all {
                    if a.elements.iter().all(|g| x.act(g, p) == p) {
                        brute.push((t as u32, p));
                    }
                }
            }
            assert_eq!(q.basis(&x, &all), brute);
        }
    }

    #[test]
    fn parse_functors() {
        assert_eq!(functor_by_name(4, "fixed:(12)(34);(13)(24)").unwrap().name(), "fixed((12)(34);(13)(24))");
        assert!(functor_by_name(4, "bogus").is_err());
    }
}
