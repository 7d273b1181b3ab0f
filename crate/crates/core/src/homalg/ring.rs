//! Coefficient rings and their exact arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = i128;

/// Coefficients for chains and for graded rings.
///
/// Elements of `FiniteField { p, e }` are encoded as integers `Σ c_i p^i`
/// where `c_i` is the coefficient of `α^i` and `α` is a root of the
/// lexicographically least monic irreducible polynomial of degree `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CoeffRing {
    Integers,
    IntegersModN { n: u64 },
    FiniteField { p: u64, e: u32 },
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::IntegersModN { n } => write!(f, "Z/{n}"),
            CoeffRing::FiniteField { p, e: 1 } => write!(f, "F_{p}"),
            CoeffRing::FiniteField { p, e } => write!(f, "F_{p}^{e}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime-power factorization `[(p, e)]` in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl CoeffRing {
    pub fn integers() -> Self {
        CoeffRing::Integers
    }

    pub fn mod_n(n: u64) -> Result<Self> {
        let r = CoeffRing::IntegersModN { n };
        r.validate()?;
        Ok(r)
    }

    pub fn field(p: u64, e: u32) -> Result<Self> {
        let r = CoeffRing::FiniteField { p, e };
        r.validate()?;
        Ok(r)
    }

    pub fn prime_field(p: u64) -> Self {
        CoeffRing::FiniteField { p, e: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            CoeffRing::Integers => Ok(()),
            CoeffRing::IntegersModN { n } if n >= 2 => Ok(()),
            CoeffRing::IntegersModN { n } => {
                Err(Error::Invalid(format!("Z/n requires n >= 2, got {n}")))
            }
            CoeffRing::FiniteField { p, e } if is_prime(p) && e >= 1 => {
                let q = (p as u128).checked_pow(e);
                match q {
                    Some(q) if q <= 1 << 20 => Ok(()),
                    _ => Err(Error::Invalid(format!("field F_{p}^{e} too large"))),
                }
            }
            CoeffRing::FiniteField { p, e } => Err(Error::Invalid(format!(
                "F_p^e requires p prime and e >= 1, got p={p}, e={e}"
            ))),
        }
    }

    /// Number of elements, `None` for Z.
    pub fn order(&self) -> Option<u64> {
        match *self {
            CoeffRing::Integers => None,
            CoeffRing::IntegersModN { n } => Some(n),
            CoeffRing::FiniteField { p, e } => Some(p.pow(e)),
        }
    }

    pub fn is_field(&self) -> bool {
        match *self {
            CoeffRing::Integers => false,
            CoeffRing::IntegersModN { n } => is_prime(n),
            CoeffRing::FiniteField { .. } => true,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            CoeffRing::Integers => 0,
            CoeffRing::IntegersModN { n } => n,
            CoeffRing::FiniteField { p, .. } => p,
        }
    }

    pub fn arith(&self) -> Arith {
        match *self {
            CoeffRing::Integers => Arith::Z,
            CoeffRing::IntegersModN { n } => Arith::Mod(n as i128),
            CoeffRing::FiniteField { p, e: 1 } => Arith::Mod(p as i128),
            CoeffRing::FiniteField { p, e } => Arith::Gf(gf_tables(p, e)),
        }
    }
}

/// Log/exp tables for `F_{p^e}`, `e > 1`.
#[derive(Debug)]
pub struct GfTables {
    pub p: u64,
    pub e: u32,
    pub q: usize,
    /// Coefficients of the defining polynomial, low degree first, monic.
    pub modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn gf_tables(p: u64, e: u32) -> Arc<GfTables> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<GfTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gf table cache poisoned");
    guard
        .entry((p, e))
        .or_insert_with(|| Arc::new(GfTables::build(p, e)))
        .clone()
}

fn digits(mut x: u64, p: u64, e: u32) -> Vec<u64> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (e..prod.len()).rev() {
        let c = prod[deg];
        if c != 0 {
            for k in 0..=e {
                let idx = deg - e + k;
                prod[idx] = (prod[idx] + (p - c) * modulus[k] % p) % p;
            }
        }
    }
    prod.truncate(e);
    prod
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    // Brute force: no root-free factorization check needed at desk sizes;
    // test divisibility by every monic polynomial of degree 1..=deg/2.
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut div = digits(code, p, d as u32);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for k in 0..=db {
                r[shift + k] = (r[shift + k] + (p - lead) * b[k] % p) % p;
            }
        }
        r.pop();
    }
    r
}

impl GfTables {
    fn build(p: u64, e: u32) -> Self {
        let q = p.pow(e) as usize;
        let modulus = (0..p.pow(e))
            .map(|code| {
                let mut m = digits(code, p, e);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomial exists");
        // find a primitive element by search
        for g in 2..q as u64 {
            let gd = digits(g, p, e);
            let mut exp = vec![0u32; q - 1];
            let mut log = vec![u32::MAX; q];
            let mut cur = digits(1, p, e);
            let mut ok = true;
            for (i, slot) in exp.iter_mut().enumerate() {
                let c = undigits(&cur, p) as usize;
                if log[c] != u32::MAX {
                    ok = false;
                    break;
                }
                log[c] = i as u32;
                *slot = c as u32;
                cur = poly_mulmod(&cur, &gd, &modulus, p);
            }
            if ok {
                return GfTables {
                    p,
                    e,
                    q,
                    modulus,
                    exp,
                    log,
                };
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u64) -> u64 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[l as usize] as u64
    }

    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = (self.q - 1) as u64;
        let l = (n - self.log[a as usize] as u64) % n;
        Some(self.exp[l as usize] as u64)
    }

    /// Scalar multiplication by an integer (prime subfield element).
    fn from_int(&self, k: i128) -> u64 {
        (k.rem_euclid(self.p as i128)) as u64
    }
}

/// Arithmetic context obtained once from a [`CoeffRing`].
#[derive(Clone, Debug)]
pub enum Arith {
    Z,
    /// Integers modulo `n` (also prime fields).
    Mod(i128),
    Gf(Arc<GfTables>),
}

impl Arith {
    /// Image of an integer under `Z -> R`.
    #[inline]
    pub fn from_int(&self, x: Scalar) -> Scalar {
        match self {
            Arith::Z => x,
            Arith::Mod(n) => x.rem_euclid(*n),
            Arith::Gf(t) => t.from_int(x) as Scalar,
        }
    }

    /// Canonical representative of an already-encoded ring element.
    #[inline]
    pub fn normalize(&self, x: Scalar) -> Scalar {
        match self {
            Arith::Z => x,
            Arith::Mod(n) => x.rem_euclid(*n),
            Arith::Gf(t) => {
                assert!(x >= 0 && (x as usize) < t.q, "F_q element out of range: {x}");
                x
            }
        }
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            Arith::Z => a.checked_add(b).expect("integer overflow in exact arithmetic"),
            Arith::Mod(n) => (a + b).rem_euclid(*n),
            Arith::Gf(t) => t.add(a as u64, b as u64) as Scalar,
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        match self {
            Arith::Z => -a,
            Arith::Mod(n) => (-a).rem_euclid(*n),
            Arith::Gf(t) => t.neg(a as u64) as Scalar,
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match self {
            Arith::Z => a.checked_mul(b).expect("integer overflow in exact arithmetic"),
            Arith::Mod(n) => (a * b).rem_euclid(*n),
            Arith::Gf(t) => t.mul(a as u64, b as u64) as Scalar,
        }
    }

    /// Multiplicative inverse if `a` is a unit.
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        match self {
            Arith::Z => match a {
                1 => Some(1),
                -1 => Some(-1),
                _ => None,
            },
            Arith::Mod(n) => {
                let (g, x, _) = ext_gcd(a.rem_euclid(*n), *n);
                if g == 1 {
                    Some(x.rem_euclid(*n))
                } else {
                    None
                }
            }
            Arith::Gf(t) => t.inv(a as u64).map(|v| v as Scalar),
        }
    }

    #[inline]
    pub fn is_unit(&self, a: Scalar) -> bool {
        match self {
            Arith::Z => a == 1 || a == -1,
            Arith::Mod(n) => gcd(a.rem_euclid(*n), *n) == 1,
            Arith::Gf(_) => a != 0,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            Arith::Z => false,
            Arith::Mod(n) => is_prime(*n as u64),
            Arith::Gf(_) => true,
        }
    }

    pub fn pow(&self, a: Scalar, k: u32) -> Scalar {
        let mut out = self.from_int(1);
        for _ in 0..k {
            out = self.mul(out, a);
        }
        out
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(CoeffRing::mod_n(1).is_err());
        assert!(CoeffRing::field(4, 1).is_err());
        assert!(CoeffRing::field(2, 0).is_err());
        assert!(CoeffRing::field(3, 2).is_ok());
    }

    #[test]
    fn f4_is_a_field() {
        let a = CoeffRing::field(2, 2).unwrap().arith();
        for x in 1..4 {
            let inv = a.inv(x).unwrap();
            assert_eq!(a.mul(x, inv), 1);
        }
        // Frobenius is additive
        for x in 0..4 {
            for y in 0..4 {
                let s = a.add(x, y);
                assert_eq!(a.mul(s, s), a.add(a.mul(x, x), a.mul(y, y)));
            }
        }
        // α² = α + 1 for the modulus x² + x + 1
        assert_eq!(a.mul(2, 2), 3);
    }

    #[test]
    fn f9_distributive() {
        let a = CoeffRing::field(3, 2).unwrap().arith();
        for x in 0..9 {
            for y in 0..9 {
                for z in 0..9 {
                    assert_eq!(a.mul(x, a.add(y, z)), a.add(a.mul(x, y), a.mul(x, z)));
                }
            }
        }
    }

    #[test]
    fn mod_n_units() {
        let a = Arith::Mod(12);
        assert!(a.is_unit(5));
        assert!(!a.is_unit(4));
        assert_eq!(a.inv(5), Some(5));
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }
}
