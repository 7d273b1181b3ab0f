use powerops::homalg::CoeffRing;
use powerops::partition::perm::symmetric_generators;
use powerops::partition::{Perm, SetPartition, Uniform};
use powerops::qfunctors::functor_by_name;
use powerops::shelling::subsets::strict_chains;
use powerops::shelling::{build_k_contraction, chi, chi_cross_check};
use proptest::prelude::*;

#[test]
fn chi_is_invariant_and_detects_the_diamond() {
    for (p, k) in [(2usize, 2usize), (2, 3), (3, 2)] {
        let u = Uniform::build(p, k).unwrap();
        let (bot, top) = (SetPartition::discrete(u.m), SetPartition::indiscrete(u.m));
        let gens = symmetric_generators(u.m);
        for level in &u.levels {
            for s in level {
                let c = chi(&u, s).unwrap();
                assert!(c.is_strict());
                let essential = s.chain[0] == bot && *s.chain.last().unwrap() == top;
                assert_eq!(c.is_diamond(), !essential, "{s:?}");
                for g in &gens {
                    assert_eq!(chi(&u, &u.act_simplex(g, s)).unwrap(), c);
                }
            }
        }
    }
}

#[test]
fn disorder_is_monotone_under_faces() {
    for k in 1..=4 {
        for q in 1..=k {
            for s in strict_chains(k, q) {
                let d = s.disorder().value;
                for i in 0..=q {
                    assert!(s.face(i).disorder().value <= d, "{s} face {i}");
                }
            }
        }
    }
}

#[test]
fn contraction_for_transitive_fixed_points() {
    // the functor ⊕_A Z̃[X^A] over transitive abelian A, over F_p and Z
    for (p, k) in [(2usize, 2usize), (3, 2)] {
        let m = p.pow(k as u32);
        let q = functor_by_name(m, "transab-fixed").unwrap();
        for ring in [CoeffRing::Integers, CoeffRing::prime_field(p as u64)] {
            let sc = build_k_contraction(q.as_ref(), p, k, ring).unwrap();
            assert!(sc.residual.pass, "p = {p}, k = {k}, {ring}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_agrees_with_subgroup_formula(g in Just((0..8u8).collect::<Vec<u8>>()).prop_shuffle(), q in 0usize..4, idx in 0usize..100_000) {
        let u = Uniform::build(2, 3).unwrap();
        let level = &u.levels[q];
        let s = u.act_simplex(&Perm(g), &level[idx % level.len()]);
        prop_assert_eq!(chi_cross_check(&u, &s).unwrap(), chi(&u, &s).unwrap());
    }
}
