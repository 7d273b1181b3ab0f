//! Permutations of {0..m-1} in one-line notation (printed 1-based).

use std::collections::{HashSet, VecDeque};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(m: usize) -> Self {
        Perm((0..m as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.compose(self).compose(&g.inverse())
    }

    /// Builds a permutation from 1-based cycles, e.g. `[[1,2],[3,4]]`.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Perm {
        let mut p: Vec<u8> = (0..m as u8).collect();
        for c in cycles {
            for (idx, &x) in c.iter().enumerate() {
                let y = c[(idx + 1) % c.len()];
                p[x - 1] = (y - 1) as u8;
            }
        }
        Perm(p)
    }

    /// Parses one-line notation `"2 1 4 3"` or cycle notation `"(12)(34)"` (1-based).
    pub fn parse(m: usize, s: &str) -> Option<Perm> {
        let s = s.trim();
        if s.starts_with('(') {
            let mut p: Vec<u8> = (0..m as u8).collect();
            for cyc in s.split(')').filter(|c| !c.trim().is_empty()) {
                let body = cyc.trim().strip_prefix('(')?;
                let pts: Vec<usize> = if body.contains(',') || body.contains(' ') {
                    body.split(|c| c == ',' || c == ' ')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse().ok())
                        .collect::<Option<_>>()?
                } else {
                    body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?
                };
                if pts.iter().any(|&x| x == 0 || x > m) {
                    return None;
                }
                for (i, &x) in pts.iter().enumerate() {
                    p[x - 1] = (pts[(i + 1) % pts.len()] - 1) as u8;
                }
            }
            let perm = Perm(p);
            perm.is_valid().then_some(perm)
        } else {
            let v: Vec<u8> = s
                .split_whitespace()
                .map(|t| t.parse::<u8>().ok().and_then(|x| x.checked_sub(1)))
                .collect::<Option<_>>()?;
            let perm = Perm(v);
            (perm.degree() == m && perm.is_valid()).then_some(perm)
        }
    }

    fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &j in &self.0 {
            if j as usize >= seen.len() || seen[j as usize] {
                return false;
            }
            seen[j as usize] = true;
        }
        true
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, 1-based; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0.len();
        let mut seen = vec![false; m];
        let mut any = false;
        let sep = if m > 9 { "," } else { "" };
        for start in 0..m {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push((x + 1).to_string());
                x = self.apply(x);
            }
            write!(f, "({})", cyc.join(sep))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// The transposition (1 2) and the long cycle (1 2 … m), generating Σ_m.
pub fn symmetric_generators(m: usize) -> Vec<Perm> {
    if m <= 1 {
        return Vec::new();
    }
    let mut t: Vec<u8> = (0..m as u8).collect();
    t.swap(0, 1);
    let c: Vec<u8> = (0..m as u8).map(|i| (i + 1) % m as u8).collect();
    if m == 2 {
        vec![Perm(t)]
    } else {
        vec![Perm(t), Perm(c)]
    }
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// All elements of the group generated by `gens` (breadth-first closure).
pub fn closure(m: usize, gens: &[Perm]) -> Vec<Perm> {
    let id = Perm::identity(m);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out.sort();
    out
}

/// Orbits of the group generated by `gens` on {0..m-1}, each sorted.
pub fn point_orbits(m: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for g in gens {
        for i in 0..m {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g.apply(i)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut idx = vec![usize::MAX; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        if idx[r] == usize::MAX {
            idx[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[idx[r]].push(i);
    }
    orbits
}

pub fn is_transitive(m: usize, gens: &[Perm]) -> bool {
    m <= 1 || point_orbits(m, gens).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = Perm::parse(4, "(12)(34)").unwrap();
        assert_eq!(p.to_string(), "(12)(34)");
        assert_eq!(Perm::parse(4, "2 1 4 3").unwrap(), p);
        assert_eq!(p.order(), 2);
        assert!(Perm::parse(3, "(14)").is_none());
    }

    #[test]
    fn generators_span_symmetric_group() {
        for m in 1..=5 {
            assert_eq!(closure(m, &symmetric_generators(m)).len() as u64, factorial(m));
        }
    }

    #[test]
    fn composition_convention() {
        let a = Perm::from_cycles(3, &[&[1, 2]]);
        let b = Perm::from_cycles(3, &[&[2, 3]]);
        // (a∘b)(1) = a(b(1)) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 1);
        assert!(a.compose(&a.inverse()).is_identity());
    }
}
