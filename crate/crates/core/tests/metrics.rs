use arcfdr_core::metrics::{estimate_metrics, FdpPath, JthRejection, TrialRecord};
use proptest::prelude::*;

fn record() -> impl Strategy<Value = TrialRecord> {
    (prop::collection::vec((0usize..20, 0usize..20), 1..30), 0.0f64..1.0).prop_map(|(steps, power)| {
        let (mut r, mut v) = (0usize, 0usize);
        let (mut values, mut counts) = (Vec::new(), Vec::new());
        for (dr, dv) in steps {
            r += dr;
            v = (v + dv).min(r);
            values.push(v as f64 / r.max(1) as f64);
            counts.push(r);
        }
        TrialRecord { path: FdpPath::from_parts(values, counts), power }
    })
}

proptest! {
    #[test]
    fn sup_dominates_and_order_does_not_matter(mut trials in prop::collection::vec(record(), 2..20), j in 1usize..50) {
        for t in &trials {
            prop_assert!(t.path.values().iter().all(|&v| v <= t.path.sup_fdp()));
        }
        let rule = JthRejection(j);
        let est = estimate_metrics(&trials, Some(5), Some(&rule)).unwrap();
        prop_assert!(est.sup_fdr.mean >= est.stop_fdr.unwrap().mean);
        prop_assert!(est.sup_fdr.mean >= est.fdr.mean);
        prop_assert!(est.sup_fdr.mean >= est.sup_fdr_k.unwrap().mean);
        trials.reverse();
        let rev = estimate_metrics(&trials, Some(5), Some(&rule)).unwrap();
        prop_assert!((rev.sup_fdr.mean - est.sup_fdr.mean).abs() < 1e-12);
        prop_assert!((rev.power.mean - est.power.mean).abs() < 1e-12);
        prop_assert!((rev.stop_fdr.unwrap().mean - est.stop_fdr.unwrap().mean).abs() < 1e-12);
    }
}
