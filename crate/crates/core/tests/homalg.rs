use std::collections::BTreeMap;

use powerops::homalg::elim::invariant_factors;
use powerops::homalg::{
    homology_all, smith_normal_form, transfer_k_contraction, verify_k_contraction, ChainComplex, CoeffRing, Degree,
    GradedMap, KContraction, Retract, SparseMatrix, SplitComplex,
};
use proptest::prelude::*;

fn matrix(ring: CoeffRing, rows: usize, cols: usize, data: &[i128]) -> SparseMatrix {
    let dense: Vec<Vec<i128>> = (0..rows).map(|r| data[r * cols..(r + 1) * cols].to_vec()).collect();
    SparseMatrix::from_dense(ring, &dense)
}

fn arb_matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i128>)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-9i128..10, r * c)))
}

/// Integer kernel vectors of `d`, read off the columns of `V` past the rank.
fn integer_kernel(d: &SparseMatrix) -> Vec<Vec<i128>> {
    let snf = smith_normal_form(d).unwrap();
    let diag = snf.diagonal();
    let v = snf.v.to_dense();
    (0..d.cols())
        .filter(|&j| diag.get(j).copied().unwrap_or(0) == 0)
        .map(|j| v.iter().map(|row| row[j]).collect())
        .collect()
}

/// `Z^c → Z^b → Z^a` with `d₁ d₂ = 0`, `d₂` built from kernel vectors of `d₁`.
fn three_term(a: usize, b: usize, c: usize, d1: &[i128], coeffs: &[i128]) -> ChainComplex {
    let z = CoeffRing::Integers;
    let d1 = matrix(z, a, b, d1);
    let ker = integer_kernel(&d1);
    let mut d2 = vec![vec![0i128; c]; b];
    for (j, col) in d2_cols(&ker, c, coeffs).into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            d2[i][j] = x;
        }
    }
    let ranks = BTreeMap::from([(0, a), (1, b), (2, c)]);
    let bd = BTreeMap::from([(1, d1), (2, SparseMatrix::from_dense(z, &d2))]);
    ChainComplex::new(z, ranks, bd).unwrap()
}

fn d2_cols(ker: &[Vec<i128>], c: usize, coeffs: &[i128]) -> Vec<Vec<i128>> {
    let b = ker.first().map_or(0, |v| v.len());
    (0..c)
        .map(|j| {
            let mut col = vec![0i128; b];
            for (t, v) in ker.iter().enumerate() {
                let s = coeffs[(j * 7 + t) % coeffs.len()];
                for (x, y) in col.iter_mut().zip(v) {
                    *x += s * y;
                }
            }
            col
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_transforms_are_exact((r, c, data) in arb_matrix(5)) {
        let m = matrix(CoeffRing::Integers, r, c, &data);
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.s.clone());
        for (i, j, _) in snf.s.entries() {
            prop_assert_eq!(i, j);
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        // unimodular: every invariant factor of U and V is 1
        for t in [&snf.u, &snf.v] {
            let f = invariant_factors(t).unwrap();
            prop_assert_eq!(f.len(), t.rows());
            prop_assert!(f.iter().all(|&x| x.abs() == 1));
        }
    }

    #[test]
    fn snf_mod_n((r, c, data) in arb_matrix(4), n in prop::sample::select(vec![4u64, 6, 12, 9])) {
        let ring = CoeffRing::mod_n(n).unwrap();
        let m = matrix(ring, r, c, &data);
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.s.clone());
        for d in snf.diagonal() {
            prop_assert!(d == 0 || n as i128 % d == 0);
        }
    }

    #[test]
    fn universal_coefficients(a in 1usize..4, b in 1usize..5, c in 1usize..4,
                              d1 in prop::collection::vec(-4i128..5, 16), coeffs in prop::collection::vec(-3i128..4, 8)) {
        let cx = three_term(a, b, c, &d1[..a * b], &coeffs);
        let hz = homology_all(&cx).unwrap();
        for p in [2u64, 3] {
            let hp = homology_all(&cx.change_ring(CoeffRing::prime_field(p)).unwrap()).unwrap();
            for q in 0..=2 as Degree {
                let tors = |d: Degree| hz.get(&d).map_or(0, |h| h.torsion_invariants.iter().filter(|&&t| t % p as i128 == 0).count());
                let want = hz.get(&q).map_or(0, |h| h.free_rank) + tors(q) + tors(q - 1);
                let got = hp.get(&q).map_or(0, |h| h.free_rank);
                prop_assert_eq!(got, want, "q = {}, p = {}", q, p);
            }
        }
    }

    /// `C` the cone on `Z^r`, `D = C ⊕ B` with `B = Z/N` in degree 0, `E = C`.
    #[test]
    fn transfer_output_is_verified(r in 1usize..4, n in 2i128..7) {
        let z = CoeffRing::Integers;
        let c = ChainComplex::new(z, BTreeMap::from([(0, r), (1, r)]), BTreeMap::from([(1, SparseMatrix::identity(z, r))])).unwrap();
        let h_c = KContraction { complex: c.clone(), k: 0, h: BTreeMap::from([(0, SparseMatrix::identity(z, r))]) };
        prop_assert!(verify_k_contraction(&h_c).unwrap().is_contraction());
        let d_cx = ChainComplex::new(
            z,
            BTreeMap::from([(0, r + 1), (1, r)]),
            BTreeMap::from([(1, SparseMatrix::identity(z, r).embed(r + 1, r, 0, 0))]),
        ).unwrap();
        let mut d = SplitComplex::free(d_cx, BTreeMap::from([(0, (0..r).collect()), (1, (0..r).collect())]));
        let mut orders = vec![0; r];
        orders.push(n);
        d.orders.insert(0, orders);
        let mut i = GradedMap::new(0);
        let mut j = GradedMap::new(0);
        i.maps.insert(0, SparseMatrix::identity(z, r).embed(r + 1, r, 0, 0));
        i.maps.insert(1, SparseMatrix::identity(z, r));
        j.maps.insert(0, SparseMatrix::identity(z, r).embed(r, r + 1, 0, 0));
        j.maps.insert(1, SparseMatrix::identity(z, r));
        let out = transfer_k_contraction(&d, &Retract { e: c, i, j }, &h_c, n).unwrap();
        prop_assert!(verify_k_contraction(&out).unwrap().pass);
        prop_assert_eq!(out.h_at(0), SparseMatrix::identity(z, r));
    }
}
