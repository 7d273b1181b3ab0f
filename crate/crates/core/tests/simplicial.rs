use std::collections::BTreeMap;

use powerops::homalg::{homology_all, CoeffRing, Degree, ModulePresentation};
use powerops::qfunctors::functors::Free;
use powerops::simplicial::{bounded_subcomplexes, chains_via_functor, FinPoset, LiveView};
use proptest::prelude::*;

/// A bounded poset: `0` is the bottom, `n + 1` the top, and inner elements
/// ordered by the transitive closure of the sampled relations `i < j`.
fn bounded(n: usize, edges: &[bool]) -> FinPoset {
    let size = n + 2;
    let mut lt = vec![vec![false; size]; size];
    let mut e = edges.iter();
    for i in 1..=n {
        lt[0][i] = true;
        lt[i][n + 1] = true;
        for j in i + 1..=n {
            lt[i][j] = *e.next().unwrap();
        }
    }
    lt[0][n + 1] = true;
    for k in 0..size {
        for i in 0..size {
            for j in 0..size {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    FinPoset::from_fn((0..size).map(|i| i.to_string()).collect(), |i, j| i == j || lt[i][j]).unwrap()
}

fn shifted(h: &BTreeMap<Degree, ModulePresentation>, by: Degree) -> Vec<(Degree, ModulePresentation)> {
    h.iter().filter(|(_, x)| !x.is_zero()).map(|(&q, x)| (q + by, x.clone())).collect()
}

fn arb_poset() -> impl Strategy<Value = FinPoset> {
    (1usize..6).prop_flat_map(|n| prop::collection::vec(any::<bool>(), n * n).prop_map(move |e| bounded(n, &e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bar_counts_match_ddot(p in arb_poset()) {
        let b = bounded_subcomplexes(&p).unwrap();
        let live = b.bar.live_counts();
        for q in 0..live.len() {
            prop_assert_eq!(live[q], p.essential_chains(q).unwrap().len());
            if q > 1 {
                prop_assert_eq!(live[q], b.ddot.sset.count(q - 2));
            }
        }
    }

    #[test]
    fn double_suspension(p in arb_poset()) {
        let b = bounded_subcomplexes(&p).unwrap();
        let hbar = homology_all(&b.bar.chains(CoeffRing::Integers).unwrap()).unwrap();
        let hddot = homology_all(&b.ddot.sset.reduced_chains(CoeffRing::Integers).unwrap()).unwrap();
        prop_assert_eq!(shifted(&hbar, 0), shifted(&hddot, 2));
    }

    #[test]
    fn free_functor_chains_are_ordinary_chains(p in arb_poset()) {
        let b = bounded_subcomplexes(&p).unwrap();
        let view = LiveView::new(b.bar.sset.clone(), &b.bar.collapsed, 1, None);
        let fc = chains_via_functor(&view, &Free, CoeffRing::Integers).unwrap();
        prop_assert_eq!(fc.complex, b.bar.chains(CoeffRing::Integers).unwrap());
    }
}
