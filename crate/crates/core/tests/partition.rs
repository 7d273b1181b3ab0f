use std::collections::HashSet;

use powerops::partition::filtration::{complete_subgroup_filtrations, filtration_of, wreath_order};
use powerops::partition::groups::length;
use powerops::partition::perm::symmetric_generators;
use powerops::partition::{complete_filtrations, transitive_abelian_subgroups, Perm, SetPartition, Uniform};
use proptest::prelude::*;

const CASES: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 2)];

#[test]
fn mesh_is_length() {
    for (p, k) in CASES {
        let m = p.pow(k as u32);
        for a in transitive_abelian_subgroups(m).unwrap() {
            for v in a.subgroups() {
                assert_eq!(a.orbit_partition(v).unwrap().mesh(p), Some(length(v, p)), "m = {m}");
            }
        }
    }
}

#[test]
fn complete_filtration_counts() {
    for (p, k) in [(2usize, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let m = p.pow(k as u32);
        let factorial: u64 = (1..=m as u64).product();
        assert_eq!(complete_filtrations(p, k).unwrap().len() as u64 * wreath_order(p, k), factorial, "p = {p}, k = {k}");
    }
}

#[test]
fn fixed_filtrations_are_subgroup_filtrations() {
    for (p, k) in CASES {
        let m = p.pow(k as u32);
        let all = complete_filtrations(p, k).unwrap();
        for a in transitive_abelian_subgroups(m).unwrap() {
            let fixed: HashSet<_> = all.iter().filter(|f| a.elements.iter().all(|g| f.is_fixed_by(g))).cloned().collect();
            let chains = complete_subgroup_filtrations(&a, p);
            let images: HashSet<_> = chains.iter().map(|c| filtration_of(&a, p, c)).collect();
            assert_eq!(images.len(), chains.len(), "injective");
            assert_eq!(images, fixed, "m = {m}");
        }
    }
}

#[test]
fn uniform_is_equivariant() {
    for (p, k) in CASES {
        Uniform::build(p, k).unwrap().check_equivariance().unwrap();
    }
}

fn arb_perm(m: usize) -> impl Strategy<Value = Perm> {
    Just((0..m as u8).collect::<Vec<u8>>()).prop_shuffle().prop_map(Perm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // E is A-fixed exactly when it is E_V for a subgroup V
    #[test]
    fn fixed_partitions_are_orbit_partitions(g in arb_perm(8), idx in 0usize..10_000) {
        let groups = transitive_abelian_subgroups(8).unwrap();
        let a = &groups[idx % groups.len()];
        let orbit: HashSet<SetPartition> = a.subgroups().into_iter().map(|v| a.orbit_partition(v).unwrap()).collect();
        let parts = powerops::partition::setpart::all_partitions(8);
        let e = parts[idx % parts.len()].act(&g);
        let fixed = a.elements.iter().all(|h| e.act(h) == e);
        prop_assert_eq!(fixed, orbit.contains(&e));
    }

    #[test]
    fn action_respects_refinement(g in arb_perm(6), i in 0usize..203, j in 0usize..203) {
        let parts = powerops::partition::setpart::all_partitions(6);
        let (e, f) = (parts[i], parts[j]);
        prop_assert_eq!(e.refines(&f), e.act(&g).refines(&f.act(&g)));
    }
}

#[test]
fn generators_move_u_onto_itself() {
    let u = Uniform::build(2, 2).unwrap();
    for g in symmetric_generators(4) {
        for level in &u.levels {
            for s in level {
                assert!(u.id_of(&u.act_simplex(&g, s)).is_some());
            }
        }
    }
}
