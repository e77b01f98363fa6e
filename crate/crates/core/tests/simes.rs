use arcfdr_core::oracles::{simes, weighted_bh, weighted_simes};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=50).prop_flat_map(|k| {
        (
            prop::collection::vec(prop_oneof![0.0f64..1.0, (0.0f64..10.0).prop_map(|x| (-x).exp())], k),
            prop::collection::vec(prop_oneof![4 => 0.0f64..1.0, 1 => Just(0.0)], k),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn simes_rejects_iff_weighted_bh_discovers((p, w) in instance(), a in 0.01f64..0.3) {
        prop_assume!(w.iter().sum::<f64>() > 0.0);
        let s = weighted_simes(&p, &w).unwrap();
        let r = weighted_bh(&p, &w, a).unwrap();
        prop_assert_eq!(s <= a, !r.is_empty(), "simes {} |R| {}", s, r.len());
    }

    #[test]
    fn equal_weights_give_classical_simes(p in prop::collection::vec(0.0f64..1.0, 1..50), w in 0.01f64..1.0) {
        let ws = vec![w; p.len()];
        let a = weighted_simes(&p, &ws).unwrap();
        let b = simes(&p).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * b.max(1e-300) * 4.0);
    }
}
