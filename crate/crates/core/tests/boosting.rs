use arcfdr_core::boosting::{
    expected_truncated_value, solve_boost_factor, BoostFamily, BoostTable, BoostedOnlineEbh, GaussianLrModel,
    Truncation, TruncationSpec,
};
use arcfdr_core::simulate::trial_rng;
use arcfdr_core::{OnlineEbh, OnlineProcedure, Score, WeightSequence};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn variants(s: u64, lag: u64, d: u64) -> [Truncation; 8] {
    [
        Truncation::Full,
        Truncation::PlusCutoff { s },
        Truncation::MinusCutoff { s },
        Truncation::Local { lag_kstar: lag },
        Truncation::LocalPlus { s, lag_kstar: lag },
        Truncation::LocalMinus { s, lag_kstar: lag },
        Truncation::Toad { deadline: d },
        Truncation::Prds,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn truncations_dominate_and_settle(
        x in prop_oneof![0.0f64..10.0, (0.0f64..12.0).prop_map(f64::exp)],
        a in 0.01f64..0.3,
        g in 1e-4f64..0.5,
        s in 1u64..200,
        lag in 0u64..50,
        d in 1u64..50,
    ) {
        let full = TruncationSpec::new(a, g, Truncation::Full).unwrap().truncate(x).unwrap();
        let plus = TruncationSpec::new(a, g, Truncation::PlusCutoff { s }).unwrap().truncate(x).unwrap();
        let local = TruncationSpec::new(a, g, Truncation::Local { lag_kstar: lag }).unwrap().truncate(x).unwrap();
        prop_assert!(local <= full && full <= plus && plus <= x);
        for v in variants(s, lag, d) {
            let spec = TruncationSpec::new(a, g, v).unwrap();
            let y = spec.truncate(x).unwrap();
            prop_assert!(y <= x, "{v:?}");
            prop_assert!(spec.truncate(x * 1.5).unwrap() >= y, "{v:?} not monotone");
            if matches!(v, Truncation::Full | Truncation::MinusCutoff { .. } | Truncation::Prds | Truncation::Toad { .. }) {
                prop_assert_eq!(spec.truncate(y).unwrap(), y, "{:?} not idempotent", v);
            }
        }
    }
}

#[test]
fn factors_are_monotone_in_cutoff_and_lag() {
    let model = GaussianLrModel::new(3.0).unwrap();
    let b = |v| solve_boost_factor(&model, &TruncationSpec::new(0.05, 0.01, v).unwrap()).unwrap().b;
    let cutoffs = [1u64, 2, 5, 10, 50, 100, 1000, 10_000];
    for w in cutoffs.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        assert!(b(Truncation::PlusCutoff { s: s0 }) <= b(Truncation::PlusCutoff { s: s1 }) * (1.0 + 1e-9));
        assert!(b(Truncation::MinusCutoff { s: s0 }) >= b(Truncation::MinusCutoff { s: s1 }) * (1.0 - 1e-9));
    }
    for lag in 0..40 {
        let lo = b(Truncation::LocalMinus { s: 1000, lag_kstar: lag });
        let hi = b(Truncation::LocalMinus { s: 1000, lag_kstar: lag + 1 });
        assert!(lo <= hi * (1.0 + 1e-9), "lag {lag}: {lo} > {hi}");
    }
}

/// Draws `T(b E)` under the null and returns (mean, standard error).
fn monte_carlo(model: &GaussianLrModel, spec: &TruncationSpec, b: f64, draws: usize, seed: u64) -> (f64, f64) {
    let mut rng = trial_rng(seed, 0, 0);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..draws {
        let x: f64 = rng.sample(StandardNormal);
        let v = spec.truncate(b * model.e_value(x)).unwrap();
        sum += v;
        sq += v * v;
    }
    let n = draws as f64;
    let mean = sum / n;
    (mean, ((sq / n - mean * mean) * n / (n - 1.0)).sqrt() / n.sqrt())
}

#[test]
fn boosted_values_stay_valid_at_a_million_draws() {
    let model = GaussianLrModel::new(3.0).unwrap();
    let cases = [
        (0.05, 0.02, Truncation::PlusCutoff { s: 100 }),
        (0.05, 0.02, Truncation::MinusCutoff { s: 100 }),
        (0.1, 0.05, Truncation::LocalMinus { s: 100, lag_kstar: 3 }),
        (0.1, 0.05, Truncation::LocalPlus { s: 100, lag_kstar: 3 }),
    ];
    for (i, &(a, g, v)) in cases.iter().enumerate() {
        let spec = TruncationSpec::new(a, g, v).unwrap();
        let f = solve_boost_factor(&model, &spec).unwrap();
        let (mean, se) = monte_carlo(&model, &spec, f.b, 1_000_000, 100 + i as u64);
        assert!(mean <= 1.0 + 3.0 * se, "{v:?}: mean {mean} se {se}");
        let exact = expected_truncated_value(&model, &spec, f.b).unwrap();
        assert!((mean - exact).abs() <= 3.0 * se, "{v:?}: mc {mean} vs closed form {exact} (se {se})");
    }
    let spec = TruncationSpec::new(0.05, 0.02, Truncation::PlusCutoff { s: 1_000_000 }).unwrap();
    let (mean, se) = monte_carlo(&model, &spec, 1.0, 1_000_000, 7);
    assert!(mean <= 1.0 + 3.0 * se);
}

#[test]
fn plus_boosting_rejects_a_superset() {
    let model = GaussianLrModel::new(3.5).unwrap();
    let w = WeightSequence::geometric(0.99).unwrap();
    let table = BoostTable::for_stream(model, BoostFamily::Plus, 500, 0.05, &w, 500, 0).unwrap();
    let mut rng = trial_rng(5, 0, 0);
    for _ in 0..20 {
        let mut base = OnlineEbh::new(w.clone(), 0.05).unwrap();
        let mut boosted = BoostedOnlineEbh::new(w.clone(), 0.05, &table, None).unwrap();
        for _ in 0..500 {
            let x: f64 = rng.sample::<f64, _>(StandardNormal) + if rng.random::<f64>() < 0.3 { 3.5 } else { 0.0 };
            let e = Score::e_value(model.e_value(x)).unwrap();
            base.step(e).unwrap();
            boosted.step(e).unwrap();
            assert!(base.rejection_set().is_subset_of(&boosted.rejection_set()));
        }
        assert!(boosted.factors().iter().all(|&b| b >= 1.0));
    }
}
