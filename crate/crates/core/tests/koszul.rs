use powerops::homalg::{CoeffRing, ModulePresentation};
use powerops::koszul::*;
use proptest::prelude::*;

fn bundled(name: &str) -> GradedRing {
    let path = format!("{}/rings/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    GradedRing::from_json(&v).unwrap()
}

const ALL: [&str; 6] = ["exterior", "truncated-cubic", "tensor2", "tensor1", "exterior2", "twisted-f4"];

#[test]
fn bundled_verdicts() {
    let ext = bundled("exterior");
    let d = koszul_dual_ranks(&ext, 5).unwrap();
    assert!(d.pass());
    assert_eq!(d.local[0].c_ranks, vec![1; 6]);

    let cub = bundled("truncated-cubic");
    let k = koszul_check(&cub, 3).unwrap();
    assert!(!k.koszul);
    assert!(!k.get(3, 2).unwrap().is_zero());
    assert!(!quadratic_presentation(&cub, 3).unwrap().quadratic);

    let t2 = bundled("tensor2");
    let d = koszul_dual_ranks(&t2, 5).unwrap();
    assert_eq!(d.local[0].c_ranks, vec![1, 2, 0, 0, 0, 0]);
    assert_eq!(d.a, vec![1, 2, 4, 8, 16, 32]);

    let e2 = bundled("exterior2");
    let d = koszul_dual_ranks(&e2, 4).unwrap();
    assert_eq!(d.local[0].c_ranks, vec![1, 2, 3, 4, 5]);
    let k = koszul_check(&e2, 4).unwrap();
    for m in 0..=4 {
        assert_eq!(k.get(m, m), Some(&ModulePresentation::free(m + 1)));
    }
}

#[test]
fn json_round_trip() {
    for name in ALL {
        let r = bundled(name);
        let back = GradedRing::from_json(&r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json(), "{name}");
    }
}

#[test]
fn sample_ring_invariants() {
    for name in ALL {
        let r = bundled(name);
        let m_max = r.w_max.min(5);
        let k = koszul_check(&r, m_max).unwrap();
        assert!(k.h0_is_base && k.vanishing_above_diagonal, "{name}");
        if k.koszul {
            let q = quadratic_presentation(&r, m_max).unwrap();
            assert!(q.quadratic && q.reconstruction_matches, "{name}: {q:?}");
            assert!(koszul_dual_ranks(&r, m_max).unwrap().pass(), "{name}");
        }
    }
}

#[test]
fn twisted_base() {
    let tw = bundled("twisted-f4");
    let v = tw.validate();
    assert!(v.valid && !v.central);
    let d = koszul_dual_ranks(&tw, 4).unwrap();
    assert!(d.pass());
    assert_eq!(d.local[0].c_ranks, vec![1; 5]);
    let e1 = koszul_complex_e1(&tw, (Slot::Algebra, Slot::Unit), 4).unwrap();
    assert!(e1.pass());

    let f4 = CoeffRing::field(2, 2).unwrap();
    let t = tensor_algebra(f4, 1, Some(vec![vec![3]]), 4).unwrap();
    assert!(!t.is_central());
    assert!(four_term_bar_sequence(&t, 4, 3).unwrap().pass());
    let d = koszul_dual_ranks(&t, 4).unwrap();
    assert_eq!(d.local[0].c_ranks, vec![1, 1, 0, 0, 0]);
}

#[test]
fn errors() {
    let bad = serde_json::json!({"base": {"kind": "field", "p": 2}, "dims": [1, 1], "mult": {"1,1": []}});
    let e = GradedRing::from_json(&bad).unwrap_err().to_string();
    assert!(e.contains("mult"), "{e}");
    let bad = serde_json::json!({"base": {"kind": "integers"}, "dims": [1]});
    assert!(GradedRing::from_json(&bad).is_err());
    let ext = bundled("exterior");
    assert!(koszul_check(&ext, 9).is_err());
    let z4 = tensor_algebra(CoeffRing::mod_n(4).unwrap(), 1, None, 2).unwrap();
    assert!(koszul_complex_e1(&z4, (Slot::Unit, Slot::Unit), 2).is_err());
}

#[test]
fn composite_modulus_reports_each_prime() {
    let t = tensor_algebra(CoeffRing::mod_n(6).unwrap(), 2, None, 3).unwrap();
    let d = koszul_dual_ranks(&t, 3).unwrap();
    assert_eq!(d.local.iter().map(|l| l.prime).collect::<Vec<_>>(), vec![2, 3]);
    assert!(d.pass());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // (x·r)⊗y = x⊗(r·y) in the tensor algebra over F4 with the Frobenius twist
    #[test]
    fn tensor_balanced(r in 0i128..4, x in prop::collection::vec(0i128..4, 2), y in prop::collection::vec(0i128..4, 4)) {
        let f4 = CoeffRing::field(2, 2).unwrap();
        let frob = vec![vec![3, 0], vec![0, 3]];
        let t = tensor_algebra(f4, 2, Some(frob), 3).unwrap();
        let ar = t.arith().clone();
        let xr: Vec<i128> = x.iter().map(|&c| ar.mul(c, r)).collect();
        let lhs = t.mul(1, &xr, 2, &y).unwrap();
        let rhs = t.mul(1, &x, 2, &t.left_apply(2, r, &y)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_bar_vanishes_above_weight(n in 1usize..3, m in 0usize..4) {
        let t = tensor_algebra(CoeffRing::prime_field(3), n, None, 3).unwrap();
        let c = reduced_bar(&t, m, m + 2).unwrap();
        for q in m + 1..=m + 2 {
            prop_assert_eq!(c.rank(q as i64), 0);
        }
    }
}
