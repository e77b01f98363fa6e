mod common;

use arcfdr_core::oracles::OfflineInstance;
use arcfdr_core::{
    fdp, GroundTruth, OnlineBh, OnlineBr, OnlineEbh, OnlineProcedure, Score, ScoreKind, ShapeFunction, WeightSequence,
};
use common::{alpha, e_value, p_value};
use proptest::prelude::*;

fn explicit_weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![4 => 0.01f64..1.0, 1 => Just(0.0)], len).prop_map(|w| {
        let total: f64 = w.iter().sum::<f64>().max(1e-9);
        w.iter().map(|x| x / total * 0.99).collect()
    })
}

fn instance(kind: ScoreKind) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<bool>, f64)> {
    (1usize..=12).prop_flat_map(move |k| {
        let scores = match kind {
            ScoreKind::PValue => prop::collection::vec(p_value(), k).boxed(),
            ScoreKind::EValue => prop::collection::vec(e_value(), k).boxed(),
        };
        (scores, explicit_weights(k), prop::collection::vec(any::<bool>(), k), alpha())
    })
}

fn run_online(kind: ScoreKind, scores: &[f64], w: &[f64], a: f64) -> (Box<dyn OnlineProcedure>, usize) {
    let ws = WeightSequence::explicit(w.to_vec()).unwrap();
    let mut proc: Box<dyn OnlineProcedure> = match kind {
        ScoreKind::PValue => Box::new(OnlineBh::new(ws, a).unwrap()),
        ScoreKind::EValue => Box::new(OnlineEbh::new(ws, a).unwrap()),
    };
    for &v in scores {
        proc.step(Score::new(kind, v).unwrap()).unwrap();
    }
    let n = proc.state().num_rejected();
    (proc, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn online_ebh_is_maximal((e, w, nulls, a) in instance(ScoreKind::EValue)) {
        let inst = OfflineInstance::new(ScoreKind::EValue, e.clone(), w.clone(), a).unwrap();
        let (proc, n) = run_online(ScoreKind::EValue, &e, &w, a);
        prop_assert_eq!(n, inst.largest_self_consistent_size(None).unwrap());
        prop_assert!(proc.state().is_self_consistent(proc.rejection_set().indices()).unwrap());
        let f = fdp(&proc.rejection_set(), &GroundTruth::new(nulls.clone())).unwrap();
        prop_assert!(f <= inst.max_self_consistent_fdp(&nulls).unwrap());
    }

    #[test]
    fn online_bh_is_maximal((p, w, nulls, a) in instance(ScoreKind::PValue)) {
        let inst = OfflineInstance::new(ScoreKind::PValue, p.clone(), w.clone(), a).unwrap();
        let (proc, n) = run_online(ScoreKind::PValue, &p, &w, a);
        prop_assert_eq!(n, inst.largest_self_consistent_size(None).unwrap());
        let f = fdp(&proc.rejection_set(), &GroundTruth::new(nulls.clone())).unwrap();
        prop_assert!(f <= inst.max_self_consistent_fdp(&nulls).unwrap());
    }

    #[test]
    fn max_fdp_is_monotone_in_alpha((p, w, nulls, a) in instance(ScoreKind::PValue), bump in 1.0f64..3.0) {
        let lo = OfflineInstance::new(ScoreKind::PValue, p.clone(), w.clone(), a).unwrap();
        let hi = OfflineInstance::new(ScoreKind::PValue, p, w, (a * bump).min(1.0)).unwrap();
        prop_assert!(lo.max_self_consistent_fdp(&nulls).unwrap() <= hi.max_self_consistent_fdp(&nulls).unwrap());
    }

    #[test]
    fn reshaped_online_bh_is_maximal_for_its_shape((p, w, _nulls, a) in instance(ScoreKind::PValue)) {
        let shape = ShapeFunction::by(p.len()).unwrap();
        let inst = OfflineInstance::new(ScoreKind::PValue, p.clone(), w.clone(), a).unwrap();
        let mut br = OnlineBr::new(WeightSequence::explicit(w).unwrap(), a, shape.clone()).unwrap();
        for &v in &p {
            br.step(Score::p_value(v).unwrap()).unwrap();
        }
        prop_assert_eq!(br.state().num_rejected(), inst.largest_self_consistent_size(Some(&shape)).unwrap());
    }
}
