//! The linearization `L_F`, the cross-effect `⊥F` and the chain rule map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::functors::{functor_by_name, random_matrix, Compose, Functor, FunctorRef};
use crate::error::{Error, Result};
use crate::homalg::dense::{self, mat_mul, DenseMat};
use crate::homalg::{Arith, CoeffRing};

/// Largest `dim F(X ⊕ X)` handled.
pub const MAX_DIM: usize = 6000;

/// `L_F(X)` as the quotient `F(X)/im D`, with `ε: F(X) → L_F(X)` and a
/// section `σ` (`ε σ = id`).
#[derive(Clone, Debug, Serialize)]
pub struct Linearization {
    pub functor: String,
    pub x: usize,
    pub dim_fx: usize,
    pub dim: usize,
    /// `D = F(p₁+p₂) − F(p₁) − F(p₂): F(X⊕X) → F(X)`.
    pub cross: DenseMat,
    pub epsilon: DenseMat,
    pub section: DenseMat,
}

/// Matrices of `p₁`, `p₂`, `p₁ + p₂: X ⊕ X → X`.
fn projections(n: usize) -> [DenseMat; 3] {
    let mk = |a: bool, b: bool| -> DenseMat {
        (0..n)
            .map(|i| (0..2 * n).map(|j| i128::from((a && j == i) || (b && j == n + i))).collect())
            .collect()
    };
    [mk(true, false), mk(false, true), mk(true, true)]
}

fn sub(ar: &Arith, a: &DenseMat, b: &DenseMat) -> DenseMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| ar.sub(x, y)).collect()).collect()
}

/// Quotient of `k^rows` by the column span of `d`: `(ε, σ)`.
fn quotient(ar: &Arith, d: &DenseMat, rows: usize, cols: usize) -> (DenseMat, DenseMat) {
    let dt = dense::transpose(d, cols);
    let e = dense::rref(ar, &dt, rows);
    let free = e.free_cols();
    let mut eps = vec![vec![0; rows]; free.len()];
    for i in 0..rows {
        let mut unit = vec![0; rows];
        unit[i] = 1;
        let r = e.reduce(ar, &unit);
        for (k, &f) in free.iter().enumerate() {
            eps[k][i] = r[f];
        }
    }
    let mut sec = vec![vec![0; free.len()]; rows];
    for (k, &f) in free.iter().enumerate() {
        sec[f][k] = 1;
    }
    (eps, sec)
}

fn check_reduced(f: &dyn Functor) -> Result<()> {
    if f.dim(0) != 0 {
        return Err(Error::Invalid(format!("{} is not reduced: F(0) has dimension {}", f.name(), f.dim(0))));
    }
    Ok(())
}

fn check_size(f: &dyn Functor, n: usize) -> Result<()> {
    let d = f.dim(2 * n);
    if d > MAX_DIM {
        return Err(Error::Guard(format!("dim {}(X ⊕ X) = {d} exceeds {MAX_DIM}", f.name())));
    }
    Ok(())
}

pub fn linearize(f: &dyn Functor, n: usize) -> Result<Linearization> {
    check_reduced(f)?;
    check_size(f, n)?;
    let ar = f.field().arith();
    let [p1, p2, s] = projections(n);
    let (fx, fxx) = (f.dim(n), f.dim(2 * n));
    let d = sub(&ar, &sub(&ar, &f.on_map(&s, 2 * n, n), &f.on_map(&p1, 2 * n, n)), &f.on_map(&p2, 2 * n, n));
    let (epsilon, section) = quotient(&ar, &d, fx, fxx);
    Ok(Linearization {
        functor: f.name(),
        x: n,
        dim_fx: fx,
        dim: epsilon.len(),
        cross: d,
        epsilon,
        section,
    })
}

impl Linearization {
    /// `L_F(g)` for `g: X → Y`, given the linearization at `Y`.
    pub fn on_map(&self, f: &dyn Functor, target: &Linearization, g: &DenseMat) -> DenseMat {
        let ar = f.field().arith();
        let fg = f.on_map(g, self.x, target.x);
        let a = mat_mul(&ar, &target.epsilon, &fg, self.dim_fx);
        mat_mul(&ar, &a, &self.section, self.dim)
    }

    /// `ε_Y ∘ F(g) = L_F(g) ∘ ε_X`.
    pub fn natural(&self, f: &dyn Functor, target: &Linearization, g: &DenseMat) -> bool {
        let ar = f.field().arith();
        let lhs = mat_mul(&ar, &target.epsilon, &f.on_map(g, self.x, target.x), self.dim_fx);
        let rhs = mat_mul(&ar, &self.on_map(f, target, g), &self.epsilon, self.dim_fx);
        lhs == rhs
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PerpReport {
    pub functor: String,
    pub x: usize,
    pub dim_perp: usize,
    /// `β_F: ⊥F(X) → F(X ⊕ X)`, columns a kernel basis.
    pub beta: DenseMat,
    /// `γ_F = F(p₁+p₂) β_F`.
    pub gamma: DenseMat,
    pub rank_gamma: usize,
    pub dim_fx: usize,
    pub dim_l: usize,
    /// `⊥F(X) → F(X) → L_F(X) → 0` is exact.
    pub exact: bool,
}

pub fn perp_and_gamma(f: &dyn Functor, n: usize) -> Result<PerpReport> {
    let lin = linearize(f, n)?;
    let ar = f.field().arith();
    let [p1, p2, s] = projections(n);
    let fxx = f.dim(2 * n);
    let mut stacked = f.on_map(&p1, 2 * n, n);
    stacked.extend(f.on_map(&p2, 2 * n, n));
    let ker = dense::kernel(&ar, &stacked, fxx);
    let beta: DenseMat = (0..fxx).map(|r| ker.iter().map(|v| v[r]).collect()).collect();
    let gamma = mat_mul(&ar, &f.on_map(&s, 2 * n, n), &beta, ker.len());
    let rank_gamma = dense::rank(&ar, &gamma, ker.len());
    let eg = mat_mul(&ar, &lin.epsilon, &gamma, ker.len());
    let eps_onto = dense::rank(&ar, &lin.epsilon, lin.dim_fx) == lin.dim;
    let exact = eps_onto && eg.iter().flatten().all(|&x| x == 0) && rank_gamma + lin.dim == lin.dim_fx;
    Ok(PerpReport {
        functor: f.name(),
        x: n,
        dim_perp: ker.len(),
        beta,
        gamma,
        rank_gamma,
        dim_fx: lin.dim_fx,
        dim_l: lin.dim,
        exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRuleReport {
    pub f: String,
    pub g: String,
    pub x: usize,
    pub dim_lfg: usize,
    pub dim_lflg: usize,
    /// `c: L_{F∘G}(X) → L_F(L_G(X))`.
    pub c: DenseMat,
    /// `c ∘ ε_{F∘G} = ε_F ∘ F(ε_G)`.
    pub factorizes: bool,
    pub iso: bool,
}

pub fn chain_rule(f: &FunctorRef, g: &FunctorRef, n: usize) -> Result<ChainRuleReport> {
    if f.field() != g.field() {
        return Err(Error::Invalid("F and G must be over the same field".into()));
    }
    let ar = f.field().arith();
    let fg = Compose(f.clone(), g.clone());
    let l_fg = linearize(&fg, n)?;
    let l_g = linearize(g.as_ref(), n)?;
    let l_f = linearize(f.as_ref(), l_g.dim)?;
    // ε_F ∘ F(ε_G): F(G(X)) → L_F(L_G(X))
    let f_eps = f.on_map(&l_g.epsilon, l_g.dim_fx, l_g.dim);
    let phi = mat_mul(&ar, &l_f.epsilon, &f_eps, fg.dim(n));
    let c = mat_mul(&ar, &phi, &l_fg.section, l_fg.dim);
    let factorizes = mat_mul(&ar, &c, &l_fg.epsilon, l_fg.dim_fx) == phi;
    let iso = l_fg.dim == l_f.dim && dense::rank(&ar, &c, l_fg.dim) == l_fg.dim;
    Ok(ChainRuleReport {
        f: f.name(),
        g: g.name(),
        x: n,
        dim_lfg: l_fg.dim,
        dim_lflg: l_f.dim,
        c,
        factorizes,
        iso,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    pub functor: String,
    pub trials: usize,
    pub additive: bool,
    pub natural: bool,
}

/// `L_F(u + v) = L_F(u) + L_F(v)` and naturality of `ε` on random maps.
pub fn check_additivity<R: Rng>(f: &dyn Functor, rng: &mut R, max_dim: usize, trials: usize) -> Result<AdditivityReport> {
    let field = f.field();
    let ar = field.arith();
    let lins: Vec<Linearization> = (1..=max_dim).map(|n| linearize(f, n)).collect::<Result<_>>()?;
    let (mut additive, mut natural) = (true, true);
    for _ in 0..trials {
        let (a, b) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
        let (la, lb) = (&lins[a - 1], &lins[b - 1]);
        let u = random_matrix(rng, field, b, a);
        let v = random_matrix(rng, field, b, a);
        let uv: DenseMat = u.iter().zip(&v).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| ar.add(x, y)).collect()).collect();
        let (lu, lv, luv) = (la.on_map(f, lb, &u), la.on_map(f, lb, &v), la.on_map(f, lb, &uv));
        let sum: DenseMat = lu.iter().zip(&lv).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| ar.add(x, y)).collect()).collect();
        additive &= sum == luv;
        natural &= la.natural(f, lb, &u);
    }
    Ok(AdditivityReport { functor: f.name(), trials, additive, natural })
}

/// `dim L_{sym m}(F_p)` for `m = 1..=m_max`.
pub fn sym_linearization_dims(p: u64, m_max: usize) -> Result<Vec<usize>> {
    let field = CoeffRing::prime_field(p);
    (1..=m_max)
        .map(|m| Ok(linearize(functor_by_name(&format!("sym{m}"), field)?.as_ref(), 1)?.dim))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleResult {
    pub field: String,
    pub f: String,
    pub g: String,
    pub x: usize,
    pub dim_lfg: usize,
    pub iso: bool,
    pub factorizes: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleSuite {
    pub seed: u64,
    pub triples: Vec<TripleResult>,
}

impl TripleSuite {
    pub fn pass(&self) -> bool {
        self.triples.iter().all(|t| t.iso && t.factorizes && t.exact)
    }
}

pub const REGISTRY: [&str; 7] = ["id", "tensor2", "tensor3", "sym2", "sym3", "symq2", "symq3"];

/// `count` seeded triples `(F, G, X)` from the registry over `F_2`, `F_3`,
/// `F_4`, checking the chain rule and the exact sequence for `F`, `G`
/// and `F ∘ G`. Triples too large for [`MAX_DIM`] are redrawn.
pub fn chain_rule_suite(seed: u64, count: usize) -> Result<TripleSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [CoeffRing::prime_field(2), CoeffRing::prime_field(3), CoeffRing::field(2, 2)?];
    let mut draws = Vec::new();
    while draws.len() < count {
        let field = fields[rng.gen_range(0..fields.len())];
        let f = functor_by_name(REGISTRY[rng.gen_range(0..REGISTRY.len())], field)?;
        let g = functor_by_name(REGISTRY[rng.gen_range(0..REGISTRY.len())], field)?;
        let x = rng.gen_range(1..=2);
        let fg = Compose(f.clone(), g.clone());
        if fg.dim(2 * x) <= 1500 {
            draws.push((field, f, g, x));
        }
    }
    let triples = crate::par::map(&draws, |(field, f, g, x)| -> Result<TripleResult> {
        let cr = chain_rule(f, g, *x)?;
        let fg = Compose(f.clone(), g.clone());
        let exact = [f.as_ref(), g.as_ref(), &fg as &dyn Functor]
            .iter()
            .map(|h| perp_and_gamma(*h, *x).map(|r| r.exact))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|e| e);
        Ok(TripleResult {
            field: field.to_string(),
            f: f.name(),
            g: g.name(),
            x: *x,
            dim_lfg: cr.dim_lfg,
            iso: cr.iso,
            factorizes: cr.factorizes,
            exact,
        })
    });
    Ok(TripleSuite { seed, triples: triples.into_iter().collect::<Result<_>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> CoeffRing {
        CoeffRing::prime_field(2)
    }

    #[test]
    fn identity_and_square() {
        let id = functor_by_name("id", f2()).unwrap();
        let l = linearize(id.as_ref(), 3).unwrap();
        assert_eq!(l.dim, 3);
        assert_eq!(l.epsilon, dense::identity(&f2().arith(), 3));
        let t2 = functor_by_name("tensor2", f2()).unwrap();
        let l = linearize(t2.as_ref(), 1).unwrap();
        assert_eq!((l.cross.len(), l.cross[0].len()), (1, 4));
        assert_eq!(l.dim, 0);
    }

    #[test]
    fn sym_dims() {
        let one_at = |p: usize, m: usize| usize::from([1, p, p * p, p * p * p].contains(&m));
        for p in [2usize, 3] {
            let d = sym_linearization_dims(p as u64, 9).unwrap();
            assert_eq!(d, (1..=9).map(|m| one_at(p, m)).collect::<Vec<_>>(), "p = {p}");
        }
        let q = functor_by_name("symq2", f2()).unwrap();
        assert_eq!(linearize(q.as_ref(), 1).unwrap().dim, 0);
    }

    #[test]
    fn perp() {
        let t2 = functor_by_name("tensor2", f2()).unwrap();
        let r = perp_and_gamma(t2.as_ref(), 2).unwrap();
        assert!(r.exact);
        assert_eq!(r.dim_perp, 8);
        let s2 = functor_by_name("sym2", CoeffRing::prime_field(3)).unwrap();
        let r = perp_and_gamma(s2.as_ref(), 1).unwrap();
        assert!(r.exact);
        assert_eq!(r.dim_l, 0);
        let id = functor_by_name("id", f2()).unwrap();
        let r = perp_and_gamma(id.as_ref(), 2).unwrap();
        assert!(r.exact && r.rank_gamma == 0);
    }

    #[test]
    fn chain_rule_examples() {
        let id = functor_by_name("id", f2()).unwrap();
        let r = chain_rule(&id, &id, 2).unwrap();
        assert_eq!(r.c, dense::identity(&f2().arith(), 2));
        let (t2, s2) = (functor_by_name("tensor2", f2()).unwrap(), functor_by_name("sym2", f2()).unwrap());
        let r = chain_rule(&t2, &s2, 2).unwrap();
        assert!(r.iso && r.factorizes);
        let r = chain_rule(&s2, &s2, 1).unwrap();
        assert!(r.iso && r.factorizes);
        assert_eq!(r.dim_lfg, 1);
    }

    #[test]
    fn additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["sym2", "tensor2", "sym4", "symq2"] {
            let f = functor_by_name(name, f2()).unwrap();
            let r = check_additivity(f.as_ref(), &mut rng, 3, 8).unwrap();
            assert!(r.additive && r.natural, "{r:?}");
        }
        let t0 = functor_by_name("tensor0", f2()).unwrap();
        assert!(linearize(t0.as_ref(), 1).is_err());
    }
}
