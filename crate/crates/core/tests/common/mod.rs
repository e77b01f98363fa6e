#![allow(dead_code)]

use arcfdr_core::{OnlineProcedure, RejectionSet, Score, ScoreKind, WeightSequence};
use proptest::prelude::*;

/// Feeds `values` and returns the rejection set after every step.
pub fn run_path<P: OnlineProcedure>(proc: &mut P, kind: ScoreKind, values: &[f64]) -> Vec<RejectionSet> {
    values
        .iter()
        .map(|&v| {
            proc.step(Score::new(kind, v).unwrap()).unwrap();
            proc.rejection_set()
        })
        .collect()
}

pub fn p_value() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => 0.0f64..1.0,
        2 => (0.0f64..12.0).prop_map(|x| (-x).exp()),
        1 => Just(1.0),
    ]
}

pub fn e_value() -> impl Strategy<Value = f64> {
    prop_oneof![
        2 => (-3.0f64..9.0).prop_map(f64::exp),
        1 => 0.0f64..2.0,
        1 => Just(0.0),
    ]
}

pub fn p_values(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(p_value(), 1..=max)
}

pub fn e_values(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(e_value(), 1..=max)
}

pub fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.05), Just(0.1), Just(0.2), 0.01f64..0.5]
}

/// Geometric, uniform, or explicit weights with some zeros.
pub fn weights(len: usize) -> impl Strategy<Value = WeightSequence> {
    prop_oneof![
        (0.5f64..0.999).prop_map(|q| WeightSequence::geometric(q).unwrap()),
        (len..len + 5).prop_map(|k| WeightSequence::uniform(k).unwrap()),
        prop::collection::vec(prop_oneof![3 => 0.01f64..1.0, 1 => Just(0.0)], len).prop_map(|w| {
            let total: f64 = w.iter().sum::<f64>().max(1e-9);
            WeightSequence::explicit(w.iter().map(|x| x / total * 0.999).collect()).unwrap()
        }),
    ]
}

pub fn nested(path: &[RejectionSet]) -> bool {
    path.windows(2).all(|w| w[0].is_subset_of(&w[1]))
}
