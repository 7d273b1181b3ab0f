//! Graded rings `A = ⊕ A[k]` over a commutative base `R = A[0]` that need
//! not be central. Each `A[k]` is free as a right `R`-module; elements are
//! coordinate vectors `Σ e_j r_j` in a fixed right basis, and the left
//! action is recorded as matrices `L_k(r)` with `r·e_j = Σ_i e_i L_k(r)_{ij}`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::homalg::dense::DenseMat;
use crate::homalg::interchange::{scalar_from_json, scalar_to_json};
use crate::homalg::{Arith, CoeffRing, Scalar};

/// A basis element `e^w_b` inside a tensor word.
pub type Factor = (usize, usize);

#[derive(Clone, Debug)]
pub struct GradedRing {
    pub base: CoeffRing,
    pub w_max: usize,
    pub dims: Vec<usize>,
    /// `L_k(x)` for the generator `x` of `F_{p^e}` (`e > 1`); `None` means
    /// the left action is the right one.
    pub left_gen: Vec<Option<DenseMat>>,
    left_pows: Vec<Vec<DenseMat>>,
    /// `mult[(i, j)][a][b]`: coordinates of `e^i_a e^j_b` in `A[i+j]`.
    /// Missing pairs multiply to zero; pairs involving weight 0 follow the
    /// unit law unless listed.
    pub mult: BTreeMap<(usize, usize), Vec<Vec<Vec<Scalar>>>>,
    pub labels: Vec<Vec<String>>,
    ar: Arith,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingReport {
    pub valid: bool,
    /// Right-module ranks `a_m = n_m`.
    pub ranks: Vec<usize>,
    pub central: bool,
    pub failures: Vec<String>,
}

fn base_ok(base: CoeffRing) -> Result<()> {
    base.validate()?;
    match base {
        CoeffRing::Integers => Err(Error::UnsupportedRing("graded rings need a finite base (F_q or Z/n)".into())),
        _ => Ok(()),
    }
}

fn digits(x: Scalar, p: u64, e: u32) -> Vec<Scalar> {
    let mut x = x as u64;
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d as Scalar
        })
        .collect()
}

fn mat_vec(ar: &Arith, m: &DenseMat, v: &[Scalar]) -> Vec<Scalar> {
    crate::homalg::dense::mat_vec(ar, m, v)
}

impl GradedRing {
    /// A ring with all products zero in positive weight, ready to be filled.
    pub fn new(base: CoeffRing, dims: Vec<usize>) -> Result<Self> {
        base_ok(base)?;
        if dims.first() != Some(&1) {
            return Err(Error::Invalid("dims[0] must be 1 (A[0] = R)".into()));
        }
        let w = dims.len();
        Ok(GradedRing {
            base,
            w_max: w - 1,
            labels: dims
                .iter()
                .enumerate()
                .map(|(k, &n)| (0..n).map(|b| if k == 0 { "1".into() } else { format!("e{k}_{b}") }).collect())
                .collect(),
            dims,
            left_gen: vec![None; w],
            left_pows: vec![Vec::new(); w],
            mult: BTreeMap::new(),
            ar: base.arith(),
        })
    }

    pub fn arith(&self) -> &Arith {
        &self.ar
    }

    /// Sets `L_k(x)`; only meaningful over `F_{p^e}` with `e > 1`.
    pub fn set_left_generator(&mut self, k: usize, m: DenseMat) -> Result<()> {
        let CoeffRing::FiniteField { e, .. } = self.base else {
            return Err(Error::Invalid("a left action needs a base F_{p^e} with e > 1".into()));
        };
        if e == 1 {
            return Err(Error::Invalid("a left action needs a base F_{p^e} with e > 1".into()));
        }
        let n = self.dims[k];
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("left action on A[{k}] must be {n}x{n}")));
        }
        let mut pows = vec![crate::homalg::dense::identity(&self.ar, n)];
        for i in 1..e as usize {
            let next = crate::homalg::dense::mat_mul(&self.ar, &pows[i - 1], &m, n);
            pows.push(next);
        }
        self.left_pows[k] = pows;
        self.left_gen[k] = Some(m);
        Ok(())
    }

    /// The generator `x` of the base as a scalar, or `None` when the base is
    /// generated by 1.
    pub fn generator(&self) -> Option<Scalar> {
        match self.base {
            CoeffRing::FiniteField { p, e } if e > 1 => Some(p as Scalar),
            _ => None,
        }
    }

    pub fn is_central(&self) -> bool {
        let Some(x) = self.generator() else { return true };
        self.left_gen.iter().enumerate().all(|(k, m)| match m {
            None => true,
            Some(m) => (0..self.dims[k]).all(|i| (0..self.dims[k]).all(|j| m[i][j] == if i == j { x } else { 0 })),
        })
    }

    /// `r·v` for `v ∈ A[k]` in right coordinates.
    pub fn left_apply(&self, k: usize, r: Scalar, v: &[Scalar]) -> Vec<Scalar> {
        let ar = &self.ar;
        match (&self.base, self.left_pows[k].is_empty()) {
            (CoeffRing::FiniteField { p, e }, false) => {
                let mut out = vec![0; v.len()];
                for (i, d) in digits(r, *p, *e).into_iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let w = mat_vec(ar, &self.left_pows[k][i], v);
                    for (o, x) in out.iter_mut().zip(w) {
                        *o = ar.add(*o, ar.mul(d, x));
                    }
                }
                out
            }
            _ => v.iter().map(|&x| ar.mul(r, x)).collect(),
        }
    }

    fn unit(&self, k: usize, b: usize) -> Vec<Scalar> {
        let mut v = vec![0; self.dims[k]];
        v[b] = 1;
        v
    }

    /// Coordinates of `e^i_a e^j_b`.
    pub fn mul_basis(&self, i: usize, a: usize, j: usize, b: usize) -> Vec<Scalar> {
        if let Some(t) = self.mult.get(&(i, j)) {
            return t[a][b].clone();
        }
        if i + j > self.w_max {
            return Vec::new();
        }
        if i == 0 {
            // 1·e_b
            return self.unit(j, b);
        }
        if j == 0 {
            return self.unit(i, a);
        }
        vec![0; self.dims[i + j]]
    }

    /// `x·y` for `x ∈ A[i]`, `y ∈ A[j]`: `Σ_a e_a (x_a·y)`.
    pub fn mul(&self, i: usize, x: &[Scalar], j: usize, y: &[Scalar]) -> Result<Vec<Scalar>> {
        if i + j > self.w_max {
            return Err(Error::Invalid(format!("product of weights {i} + {j} exceeds w_max = {}", self.w_max)));
        }
        let ar = &self.ar;
        let mut out = vec![0; self.dims[i + j]];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let z = self.left_apply(j, xa, y);
            for (d, &zd) in z.iter().enumerate() {
                if zd == 0 {
                    continue;
                }
                for (c, &m) in self.mul_basis(i, a, j, d).iter().enumerate() {
                    out[c] = ar.add(out[c], ar.mul(m, zd));
                }
            }
        }
        Ok(out)
    }

    /// `r·(f_1 ⊗ … ⊗ f_n)` expanded in basis words: each entry is the list
    /// of new basis indices and the right coefficient on the last factor.
    pub fn act_word(&self, r: Scalar, word: &[Factor]) -> Vec<(Vec<usize>, Scalar)> {
        if r == 0 {
            return Vec::new();
        }
        let Some(&(w, b)) = word.first() else {
            return vec![(Vec::new(), r)];
        };
        if self.left_pows[w].is_empty() && word[1..].iter().all(|&(k, _)| self.left_pows[k].is_empty()) {
            return vec![(word.iter().map(|f| f.1).collect(), r)];
        }
        let col = self.left_apply(w, r, &self.unit(w, b));
        let mut out = Vec::new();
        for (i, &c) in col.iter().enumerate() {
            for (mut rest, coeff) in self.act_word(c, &word[1..]) {
                rest.insert(0, i);
                out.push((rest, coeff));
            }
        }
        out
    }

    fn all_scalars(&self) -> Vec<Scalar> {
        let n = self.base.order().unwrap_or(0);
        if n <= 64 {
            (0..n as Scalar).collect()
        } else {
            let mut v = vec![1];
            v.extend(self.generator());
            v
        }
    }

    /// Checks the axioms, reporting each violation with a witness.
    pub fn validate(&self) -> RingReport {
        let mut failures = Vec::new();
        let ar = &self.ar;
        let n = &self.dims;
        for ((i, j), t) in &self.mult {
            if i + j > self.w_max {
                failures.push(format!("mult ({i},{j}) lands above w_max"));
                continue;
            }
            if t.len() != n[*i] || t.iter().any(|row| row.len() != n[*j] || row.iter().any(|v| v.len() != n[i + j])) {
                failures.push(format!("mult ({i},{j}) has the wrong shape"));
            }
        }
        if !failures.is_empty() {
            return self.report(failures);
        }
        // the left action on each A[k] is a ring map F_p[x]/(f) → End(A[k])
        if let (Arith::Gf(t), Some(_)) = (ar, self.generator()) {
            for (k, pows) in self.left_pows.iter().enumerate() {
                let Some(l) = &self.left_gen[k] else { continue };
                let top = crate::homalg::dense::mat_mul(ar, &pows[pows.len() - 1], l, n[k]);
                let mut acc = top;
                for (i, &c) in t.modulus.iter().take(t.e as usize).enumerate() {
                    for (row, prow) in acc.iter_mut().zip(&pows[i]) {
                        for (x, &y) in row.iter_mut().zip(prow) {
                            *x = ar.add(*x, ar.mul(c as Scalar, y));
                        }
                    }
                }
                if acc.iter().flatten().any(|&x| x != 0) {
                    failures.push(format!("left action on A[{k}] is not a ring map: f(L(x)) ≠ 0"));
                }
            }
        }
        // unit laws for listed weight-0 products
        for k in 0..=self.w_max {
            for b in 0..n[k] {
                if self.mul_basis(0, 0, k, b) != self.unit(k, b) {
                    failures.push(format!("unit law fails: 1·{}", self.labels[k][b]));
                }
                if self.mul_basis(k, b, 0, 0) != self.unit(k, b) {
                    failures.push(format!("unit law fails: {}·1", self.labels[k][b]));
                }
            }
        }
        // left R-linearity of the product: r(e_a e_b) = (r e_a) e_b
        for i in 1..=self.w_max {
            for j in 1..=self.w_max - i {
                for &r in &self.all_scalars() {
                    for a in 0..n[i] {
                        for b in 0..n[j] {
                            let ab = self.mul_basis(i, a, j, b);
                            let lhs = self.left_apply(i + j, r, &ab);
                            let ra = self.left_apply(i, r, &self.unit(i, a));
                            let rhs = self.mul(i, &ra, j, &self.unit(j, b)).unwrap();
                            if lhs != rhs {
                                failures.push(format!(
                                    "product is not left R-linear: r = {r} on ({}, {})",
                                    self.labels[i][a], self.labels[j][b]
                                ));
                            }
                        }
                    }
                }
            }
        }
        // associativity on basis triples
        for i in 1..=self.w_max {
            for j in 1..=self.w_max - i {
                for k in 1..=self.w_max - i - j {
                    for a in 0..n[i] {
                        for b in 0..n[j] {
                            for c in 0..n[k] {
                                let ab = self.mul_basis(i, a, j, b);
                                let lhs = self.mul(i + j, &ab, k, &self.unit(k, c)).unwrap();
                                let bc = self.mul_basis(j, b, k, c);
                                let rhs = self.mul(i, &self.unit(i, a), j + k, &bc).unwrap();
                                if lhs != rhs {
                                    failures.push(format!(
                                        "associativity fails at ({}, {}, {})",
                                        self.labels[i][a], self.labels[j][b], self.labels[k][c]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        self.report(failures)
    }

    fn report(&self, failures: Vec<String>) -> RingReport {
        RingReport {
            valid: failures.is_empty(),
            ranks: self.dims.clone(),
            central: self.is_central(),
            failures,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let at = |path: &str, msg: &str| Error::Invalid(format!("{path}: {msg}"));
        let b = v.get("base").ok_or_else(|| at("base", "missing"))?;
        let kind = b.get("kind").and_then(Value::as_str).ok_or_else(|| at("base.kind", "missing"))?;
        let num = |key: &str| b.get(key).and_then(Value::as_u64).ok_or_else(|| at(&format!("base.{key}"), "expected an integer"));
        let base = match kind {
            "field" => CoeffRing::field(num("p")?, b.get("e").and_then(Value::as_u64).unwrap_or(1) as u32)?,
            "mod" => CoeffRing::mod_n(num("n")?)?,
            other => return Err(at("base.kind", &format!("unknown kind {other:?} (field or mod)"))),
        };
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| at("dims", "expected a list"))?
            .iter()
            .enumerate()
            .map(|(i, d)| d.as_u64().map(|x| x as usize).ok_or_else(|| at(&format!("dims[{i}]"), "expected an integer")))
            .collect::<Result<_>>()?;
        let mut ring = GradedRing::new(base, dims)?;
        if let Some(w) = v.get("w_max") {
            if w.as_u64() != Some(ring.w_max as u64) {
                return Err(at("w_max", "must equal len(dims) − 1"));
            }
        }
        let weight = |path: &str, key: &str, ring: &GradedRing| -> Result<usize> {
            key.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k <= ring.w_max)
                .ok_or_else(|| at(path, &format!("bad weight {key:?}")))
        };
        if let Some(la) = v.get("left_action").and_then(Value::as_object) {
            for (key, mats) in la {
                let path = format!("left_action[{key:?}]");
                let k = weight(&path, key, &ring)?;
                let mats = mats.as_array().ok_or_else(|| at(&path, "expected a list of matrices"))?;
                if mats.len() > 1 {
                    return Err(at(&path, "one matrix per generator of R; F_q has one generator"));
                }
                if let Some(m) = mats.first() {
                    let rows = m.as_array().ok_or_else(|| at(&path, "matrix must be a list of rows"))?;
                    let mut dense = Vec::new();
                    for (i, row) in rows.iter().enumerate() {
                        let row = row.as_array().ok_or_else(|| at(&format!("{path}[0][{i}]"), "expected a row"))?;
                        dense.push(
                            row.iter()
                                .enumerate()
                                .map(|(j, x)| scalar_from_json(base, x).map_err(|e| at(&format!("{path}[0][{i}][{j}]"), &e.to_string())))
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    ring.set_left_generator(k, dense).map_err(|e| at(&path, &e.to_string()))?;
                }
            }
        }
        if let Some(mult) = v.get("mult").and_then(Value::as_object) {
            for (key, t) in mult {
                let path = format!("mult[{key:?}]");
                let (i, j) = key
                    .split_once(',')
                    .ok_or_else(|| at(&path, "key must be \"i,j\""))?;
                let (i, j) = (weight(&path, i, &ring)?, weight(&path, j, &ring)?);
                if i + j > ring.w_max {
                    return Err(at(&path, "product lands above w_max"));
                }
                let (na, nb, nc) = (ring.dims[i], ring.dims[j], ring.dims[i + j]);
                let rows = t.as_array().filter(|r| r.len() == na).ok_or_else(|| at(&path, &format!("expected {na} rows")))?;
                let mut tensor = Vec::with_capacity(na);
                for (a, row) in rows.iter().enumerate() {
                    let row = row.as_array().filter(|r| r.len() == nb).ok_or_else(|| at(&format!("{path}[{a}]"), &format!("expected {nb} entries")))?;
                    let mut out_row = Vec::with_capacity(nb);
                    for (bi, vec) in row.iter().enumerate() {
                        let p = format!("{path}[{a}][{bi}]");
                        let vec = vec.as_array().filter(|r| r.len() == nc).ok_or_else(|| at(&p, &format!("expected {nc} coordinates")))?;
                        out_row.push(
                            vec.iter()
                                .map(|x| scalar_from_json(base, x).map_err(|e| at(&p, &e.to_string())))
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    tensor.push(out_row);
                }
                ring.mult.insert((i, j), tensor);
            }
        }
        if let Some(labels) = v.get("labels").and_then(Value::as_object) {
            for (key, names) in labels {
                let path = format!("labels[{key:?}]");
                let k = weight(&path, key, &ring)?;
                let names: Vec<String> = names
                    .as_array()
                    .filter(|a| a.len() == ring.dims[k])
                    .ok_or_else(|| at(&path, "one label per basis element"))?
                    .iter()
                    .map(|s| s.as_str().map(String::from).ok_or_else(|| at(&path, "labels are strings")))
                    .collect::<Result<_>>()?;
                ring.labels[k] = names;
            }
        }
        Ok(ring)
    }

    pub fn to_json(&self) -> Value {
        let base = match self.base {
            CoeffRing::FiniteField { p, e } => json!({"kind": "field", "p": p, "e": e}),
            CoeffRing::IntegersModN { n } => json!({"kind": "mod", "n": n}),
            CoeffRing::Integers => unreachable!("rejected at construction"),
        };
        let s = |x: Scalar| scalar_to_json(self.base, x);
        let mut left = Map::new();
        for (k, m) in self.left_gen.iter().enumerate() {
            if let Some(m) = m {
                let rows: Vec<Value> = m.iter().map(|r| Value::Array(r.iter().map(|&x| s(x)).collect())).collect();
                left.insert(k.to_string(), json!([rows]));
            }
        }
        let mut mult = Map::new();
        for ((i, j), t) in &self.mult {
            let v: Vec<Value> = t
                .iter()
                .map(|row| Value::Array(row.iter().map(|c| Value::Array(c.iter().map(|&x| s(x)).collect())).collect()))
                .collect();
            mult.insert(format!("{i},{j}"), Value::Array(v));
        }
        let labels: Map<String, Value> = self
            .labels
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(k, _)| self.dims[*k] > 0)
            .map(|(k, l)| (k.to_string(), json!(l)))
            .collect();
        json!({
            "base": base,
            "w_max": self.w_max,
            "dims": self.dims,
            "left_action": left,
            "mult": mult,
            "labels": labels,
        })
    }
}

/// `T(V)` through weight `w_max` for `V` free of rank `n` on the right with
/// left generator matrix `left` (`None`: central).
pub fn tensor_algebra(base: CoeffRing, n: usize, left: Option<DenseMat>, w_max: usize) -> Result<GradedRing> {
    let dims: Vec<usize> = (0..=w_max).map(|m| n.pow(m as u32)).collect();
    let mut ring = GradedRing::new(base, dims.clone())?;
    if let Some(l) = left {
        ring.set_left_generator(1, l)?;
        let x = ring
            .generator()
            .ok_or_else(|| Error::Invalid("a left action needs a base F_{p^e} with e > 1".into()))?;
        for m in 2..=w_max {
            let mut lm = vec![vec![0; dims[m]]; dims[m]];
            for t in 0..dims[m] {
                let word: Vec<Factor> = tuple_of(t, n, m).into_iter().map(|b| (1, b)).collect();
                for (idx, c) in ring.act_word(x, &word) {
                    let row = idx.iter().fold(0, |acc, &b| acc * n + b);
                    lm[row][t] = ring.arith().add(lm[row][t], c);
                }
            }
            ring.set_left_generator(m, lm)?;
        }
    }
    for i in 1..=w_max {
        for j in 1..=w_max - i {
            let t: Vec<Vec<Vec<Scalar>>> = (0..dims[i])
                .map(|a| {
                    (0..dims[j])
                        .map(|b| {
                            let mut v = vec![0; dims[i + j]];
                            v[a * dims[j] + b] = 1;
                            v
                        })
                        .collect()
                })
                .collect();
            ring.mult.insert((i, j), t);
        }
    }
    for m in 1..=w_max {
        ring.labels[m] = (0..dims[m])
            .map(|t| tuple_of(t, n, m).iter().map(|b| format!("v{b}")).collect::<Vec<_>>().join("⊗"))
            .collect();
    }
    Ok(ring)
}

/// Base-`n` digits of `t`, most significant first, `m` of them.
pub fn tuple_of(mut t: usize, n: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = t % n;
        t /= n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> CoeffRing {
        CoeffRing::prime_field(2)
    }

    pub(crate) fn exterior() -> GradedRing {
        let mut a = GradedRing::new(f2(), vec![1, 1, 0, 0]).unwrap();
        a.labels[1] = vec!["x".into()];
        a
    }

    #[test]
    fn exterior_valid() {
        let r = exterior().validate();
        assert!(r.valid, "{:?}", r.failures);
        assert!(r.central);
    }

    #[test]
    fn twisted_dual_numbers() {
        let f4 = CoeffRing::field(2, 2).unwrap();
        let mut a = GradedRing::new(f4, vec![1, 1, 0]).unwrap();
        // x ↦ x² = x + 1, encoded as 1 + 2
        a.set_left_generator(1, vec![vec![3]]).unwrap();
        let r = a.validate();
        assert!(r.valid, "{:?}", r.failures);
        assert!(!r.central);
        let back = GradedRing::from_json(&a.to_json()).unwrap();
        assert_eq!(back.left_gen, a.left_gen);
        // a non-multiplicative left action is caught
        a.set_left_generator(1, vec![vec![1]]).unwrap();
        assert!(!a.validate().valid);
    }

    #[test]
    fn broken_associativity() {
        // x·x = y, x·y = 0, y·x = x³-ish: make (xx)x ≠ x(xx)
        let mut a = GradedRing::new(f2(), vec![1, 1, 1, 1]).unwrap();
        a.mult.insert((1, 1), vec![vec![vec![1]]]);
        a.mult.insert((2, 1), vec![vec![vec![1]]]);
        a.mult.insert((1, 2), vec![vec![vec![0]]]);
        let r = a.validate();
        assert!(!r.valid);
        assert!(r.failures.iter().any(|f| f.starts_with("associativity fails")), "{:?}", r.failures);
    }

    #[test]
    fn tensor_algebras() {
        let t = tensor_algebra(f2(), 2, None, 4).unwrap();
        assert_eq!(t.dims, vec![1, 2, 4, 8, 16]);
        assert!(t.validate().valid);
        let f4 = CoeffRing::field(2, 2).unwrap();
        let t = tensor_algebra(f4, 1, Some(vec![vec![3]]), 3).unwrap();
        let rep = t.validate();
        assert!(rep.valid && !rep.central, "{:?}", rep.failures);
        // (x r) y = x (r y) on the concatenation product
        let ar = t.arith().clone();
        for r in 0..4 {
            for xv in 0..4 {
                for yv in 0..4 {
                    let lhs = t.mul(1, &[ar.mul(xv, r)], 2, &[yv]).unwrap();
                    let rhs = t.mul(1, &[xv], 2, &t.left_apply(2, r, &[yv])).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
