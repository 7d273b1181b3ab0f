//! JSON interchange for chain complexes and k-contractions.
//!
//! Scalars are decimal strings over Z, residues over Z/n, and coefficient
//! vectors `[c_0, …, c_{e−1}]` over F_{p^e}.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::complex::{ChainComplex, Degree};
use super::contraction::KContraction;
use super::matrix::SparseMatrix;
use super::ring::{CoeffRing, Scalar};
use crate::error::{Error, Result};

pub fn scalar_to_json(ring: CoeffRing, x: Scalar) -> Value {
    match ring {
        CoeffRing::Integers => Value::String(x.to_string()),
        CoeffRing::IntegersModN { .. } | CoeffRing::FiniteField { e: 1, .. } => json!(x as u64),
        CoeffRing::FiniteField { p, e } => {
            let mut v = Vec::with_capacity(e as usize);
            let mut y = x as u64;
            for _ in 0..e {
                v.push(y % p);
                y /= p;
            }
            json!(v)
        }
    }
}

pub fn scalar_from_json(ring: CoeffRing, v: &Value) -> Result<Scalar> {
    let bad = || Error::Invalid(format!("bad scalar {v} for {ring}"));
    let ar = ring.arith();
    match ring {
        CoeffRing::Integers => match v {
            Value::String(s) => s.trim().parse::<i128>().map_err(|_| bad()),
            Value::Number(n) => n.as_i64().map(|x| x as i128).ok_or_else(bad),
            _ => Err(bad()),
        },
        CoeffRing::IntegersModN { .. } | CoeffRing::FiniteField { e: 1, .. } => match v {
            Value::Number(n) => n.as_i64().map(|x| ar.from_int(x as i128)).ok_or_else(bad),
            Value::String(s) => s.trim().parse::<i128>().map(|x| ar.from_int(x)).map_err(|_| bad()),
            _ => Err(bad()),
        },
        CoeffRing::FiniteField { p, e } => {
            let coeffs = v.as_array().ok_or_else(bad)?;
            if coeffs.len() > e as usize {
                return Err(bad());
            }
            let mut x: i128 = 0;
            for c in coeffs.iter().rev() {
                let c = c.as_i64().ok_or_else(bad)?.rem_euclid(p as i64) as i128;
                x = x * p as i128 + c;
            }
            Ok(x)
        }
    }
}

fn matrix_to_json(m: &SparseMatrix) -> Value {
    Value::Array(
        m.entries()
            .map(|(r, c, v)| json!([r, c, scalar_to_json(m.ring(), v)]))
            .collect(),
    )
}

fn matrix_from_json(ring: CoeffRing, rows: usize, cols: usize, v: &Value) -> Result<SparseMatrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Invalid("matrix must be a list of [row, col, scalar]".into()))?;
    let mut ents = Vec::with_capacity(arr.len());
    for (pos, e) in arr.iter().enumerate() {
        let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| {
            Error::Invalid(format!("entry {pos}: expected [row, col, scalar]"))
        })?;
        let r = t[0].as_u64().ok_or_else(|| Error::Invalid(format!("entry {pos}: bad row")))? as usize;
        let c = t[1].as_u64().ok_or_else(|| Error::Invalid(format!("entry {pos}: bad col")))? as usize;
        if r >= rows || c >= cols {
            return Err(Error::Invalid(format!(
                "entry {pos}: ({r},{c}) outside {rows}x{cols}"
            )));
        }
        ents.push((r, c, scalar_from_json(ring, &t[2])?));
    }
    Ok(SparseMatrix::from_triplets(ring, rows, cols, ents))
}

pub fn complex_to_json(c: &ChainComplex) -> Value {
    let ranks: serde_json::Map<String, Value> = c
        .ranks()
        .iter()
        .map(|(q, n)| (q.to_string(), json!(n)))
        .collect();
    let bounds: serde_json::Map<String, Value> = c
        .boundaries()
        .iter()
        .map(|(q, d)| (q.to_string(), matrix_to_json(d)))
        .collect();
    json!({
        "ring": c.ring(),
        "support": c.support(),
        "ranks": ranks,
        "boundaries": bounds,
    })
}

fn degree_map(v: &Value, what: &str) -> Result<BTreeMap<Degree, Value>> {
    let Some(obj) = v.get(what) else {
        return Ok(BTreeMap::new());
    };
    let obj = obj
        .as_object()
        .ok_or_else(|| Error::Invalid(format!("`{what}` must be an object keyed by degree")))?;
    obj.iter()
        .map(|(k, v)| {
            k.parse::<Degree>()
                .map(|q| (q, v.clone()))
                .map_err(|_| Error::Invalid(format!("`{what}`: bad degree key {k:?}")))
        })
        .collect()
}

pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    let ring: CoeffRing = serde_json::from_value(
        v.get("ring").cloned().ok_or_else(|| Error::Invalid("missing `ring`".into()))?,
    )?;
    ring.validate()?;
    let mut ranks = BTreeMap::new();
    for (q, n) in degree_map(v, "ranks")? {
        let n = n.as_u64().ok_or_else(|| Error::Invalid(format!("rank of degree {q}")))?;
        ranks.insert(q, n as usize);
    }
    let rk = |q: Degree| ranks.get(&q).copied().unwrap_or(0);
    let mut b = BTreeMap::new();
    for (q, m) in degree_map(v, "boundaries")? {
        b.insert(q, matrix_from_json(ring, rk(q - 1), rk(q), &m)?);
    }
    ChainComplex::new(ring, ranks, b)
}

pub fn contraction_to_json(kc: &KContraction) -> Value {
    let h: serde_json::Map<String, Value> = kc
        .h
        .iter()
        .map(|(q, m)| (q.to_string(), matrix_to_json(m)))
        .collect();
    json!({ "complex": complex_to_json(&kc.complex), "k": kc.k, "h": h })
}

pub fn contraction_from_json(v: &Value) -> Result<KContraction> {
    let complex = complex_from_json(
        v.get("complex").ok_or_else(|| Error::Invalid("missing `complex`".into()))?,
    )?;
    let k = v
        .get("k")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Invalid("missing `k`".into()))?;
    let mut h = BTreeMap::new();
    for (q, m) in degree_map(v, "h")? {
        h.insert(
            q,
            matrix_from_json(complex.ring(), complex.rank(q + 1), complex.rank(q), &m)?,
        );
    }
    Ok(KContraction { complex, k, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_scalars_roundtrip() {
        let f9 = CoeffRing::FiniteField { p: 3, e: 2 };
        for x in 0..9 {
            assert_eq!(scalar_from_json(f9, &scalar_to_json(f9, x)).unwrap(), x);
        }
        assert_eq!(scalar_to_json(CoeffRing::Integers, -7), json!("-7"));
    }

    #[test]
    fn complex_roundtrip() {
        let z = CoeffRing::Integers;
        let c = ChainComplex::new(
            z,
            [(0, 2), (1, 1)].into_iter().collect(),
            [(1, SparseMatrix::from_dense(z, &[vec![1], vec![-1]]))].into_iter().collect(),
        )
        .unwrap();
        let back = complex_from_json(&complex_to_json(&c)).unwrap();
        assert_eq!(back, c);
    }
}
