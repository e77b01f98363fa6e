//! Randomized comparisons of the streaming procedures against the brute-force
//! oracles. Shared by `oracle-check` and the acceptance suite.

use anyhow::Result;
use arcfdr_core::boosting::GaussianLrModel;
use arcfdr_core::metrics::Estimate;
use arcfdr_core::normal::phi;
use arcfdr_core::oracles::{
    max_self_consistent_fdp, offline_bh, offline_ebh, offline_storey_bh, weighted_bh, weighted_simes,
};
use arcfdr_core::simulate::{trial_rng, TrialRng};
use arcfdr_core::stream::e_threshold;
use arcfdr_core::{
    fdp, GroundTruth, OnlineBh, OnlineEbh, OnlineProcedure, OnlineSbh, Score, ScoreKind, WeightSequence,
};
use rand::Rng;
use rand_distr::StandardNormal;

/// Signal strength of the alternatives, and the `δ` of the likelihood-ratio e-values.
const DELTA: f64 = 3.0;

/// Mismatch descriptions beyond this many are only counted.
const MAX_REPORTED: usize = 5;

fn normal(rng: &mut TrialRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Labels plus matching p-values and e-values.
struct Instance {
    nulls: Vec<bool>,
    p: Vec<f64>,
    e: Vec<f64>,
}

/// `K` hypotheses, each null with probability `pi0`. A `snap` fraction of the
/// scores is moved exactly onto a rejection threshold.
fn instance(rng: &mut TrialRng, k: usize, pi0: f64, alpha: f64, snap: f64) -> Instance {
    let model = GaussianLrModel::new(DELTA).expect("positive delta");
    let g = 1.0 / k as f64;
    let mut out = Instance { nulls: Vec::with_capacity(k), p: Vec::with_capacity(k), e: Vec::with_capacity(k) };
    for _ in 0..k {
        let null = rng.random::<f64>() < pi0;
        let x = normal(rng) + if null { 0.0 } else { DELTA };
        let (mut p, mut e) = (phi(-x), model.e_value(x));
        if rng.random::<f64>() < snap {
            let j = rng.random_range(1..=k);
            p = (alpha * g * j as f64).min(1.0);
            e = e_threshold(alpha, g, j as u64);
        }
        out.nulls.push(null);
        out.p.push(p);
        out.e.push(e);
    }
    out
}

fn run_online(proc: &mut dyn OnlineProcedure, values: &[f64]) -> Result<Vec<usize>> {
    let kind = proc.state().kind();
    for &v in values {
        proc.step(Score::new(kind, v)?)?;
    }
    Ok(proc.rejection_set().indices().to_vec())
}

#[derive(Debug, Clone, Default)]
pub struct EquivalenceReport {
    pub instances: usize,
    pub ebh_mismatches: usize,
    pub bh_mismatches: usize,
    pub storey_mismatches: usize,
    pub examples: Vec<String>,
}

impl EquivalenceReport {
    pub fn mismatches(&self) -> usize {
        self.ebh_mismatches + self.bh_mismatches + self.storey_mismatches
    }

    pub fn passed(&self) -> bool {
        self.mismatches() == 0
    }

    fn note(&mut self, what: &str, instance: usize, online: &[usize], offline: &[usize]) {
        if self.examples.len() < MAX_REPORTED {
            self.examples.push(format!("{what} instance {instance}: online {online:?} offline {offline:?}"));
        }
    }
}

/// Online e-BH, BH and Storey-BH with weights `1/K`, run to `t = K`, against
/// their offline versions on `instances` seeded random instances.
pub fn offline_equivalence(
    k: usize,
    instances: usize,
    alpha: f64,
    lambda: f64,
    seed: u64,
) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport { instances, ..Default::default() };
    for i in 0..instances {
        let rng = &mut trial_rng(seed, k as u32, i as u32);
        let pi0 = rng.random::<f64>();
        let inst = instance(rng, k, pi0, alpha, 0.1);
        let w = WeightSequence::uniform(k)?;

        let online = run_online(&mut OnlineEbh::new(w.clone(), alpha)?, &inst.e)?;
        let offline = offline_ebh(&inst.e, alpha)?;
        if online != offline.indices() {
            report.ebh_mismatches += 1;
            report.note("e-BH", i, &online, offline.indices());
        }
        let online = run_online(&mut OnlineBh::new(w.clone(), alpha)?, &inst.p)?;
        let offline = offline_bh(&inst.p, alpha)?;
        if online != offline.indices() {
            report.bh_mismatches += 1;
            report.note("BH", i, &online, offline.indices());
        }
        let online = run_online(&mut OnlineSbh::new(w, alpha, lambda)?, &inst.p)?;
        let offline = offline_storey_bh(&inst.p, alpha, lambda)?;
        if online != offline.indices() {
            report.storey_mismatches += 1;
            report.note("Storey-BH", i, &online, offline.indices());
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Default)]
pub struct SimesReport {
    pub instances: usize,
    pub mismatches: usize,
    pub examples: Vec<String>,
}

impl SimesReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// `weighted_simes ≤ α` against "weighted BH rejects something", with
/// `K ≤ max_k` and random weights (some of them zero).
pub fn simes_equivalence(instances: usize, max_k: usize, alpha: f64, seed: u64) -> Result<SimesReport> {
    let mut report = SimesReport { instances, ..Default::default() };
    for i in 0..instances {
        let rng = &mut trial_rng(seed, u32::MAX, i as u32);
        let k = rng.random_range(1..=max_k);
        let pi0 = rng.random::<f64>();
        let p = instance(rng, k, pi0, alpha, 0.0).p;
        let mut w: Vec<f64> = (0..k).map(|_| if rng.random::<f64>() < 0.2 { 0.0 } else { rng.random() }).collect();
        if w.iter().all(|&v| v == 0.0) {
            w[0] = 1.0;
        }
        let s = weighted_simes(&p, &w)?;
        let r = weighted_bh(&p, &w, alpha)?;
        if (s <= alpha) != !r.is_empty() {
            report.mismatches += 1;
            if report.examples.len() < MAX_REPORTED {
                report.examples.push(format!("instance {i}: simes {s} but weighted BH rejects {}", r.len()));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SupremumReport {
    pub instances: usize,
    /// Steps at which online e-BH or online BH exceeded the enumerated supremum.
    pub violations: usize,
    /// Mean over instances of the enumerated supremum, e-values.
    pub e_sup: Estimate,
    /// `π_0 α` for the fixed null fraction used.
    pub bound: f64,
    pub examples: Vec<String>,
}

impl SupremumReport {
    pub fn within_bound(&self) -> bool {
        self.e_sup.mean <= self.bound + 3.0 * self.e_sup.stderr
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.within_bound()
    }
}

/// On instances with `k` hypotheses of which `k0` are null (randomly placed),
/// the FDP of online e-BH and online BH at every step against the largest FDP
/// of any self-consistent set, and the mean of that largest FDP for e-values.
pub fn small_instance_supremum(instances: usize, k: usize, k0: usize, alpha: f64, seed: u64) -> Result<SupremumReport> {
    let g = 1.0 / k as f64;
    let weights = vec![g; k];
    let mut sups = Vec::with_capacity(instances);
    let mut violations = 0;
    let mut examples = Vec::new();
    for i in 0..instances {
        let rng = &mut trial_rng(seed, k as u32, i as u32);
        let mut inst = instance(rng, k, 1.0, alpha, 0.0);
        let mut order: Vec<usize> = (0..k).collect();
        for j in (1..k).rev() {
            order.swap(j, rng.random_range(0..=j));
        }
        for &j in &order[k0..] {
            let x = normal(rng) + DELTA;
            inst.nulls[j] = false;
            inst.p[j] = phi(-x);
            inst.e[j] = GaussianLrModel::new(DELTA)?.e_value(x);
        }
        let truth = GroundTruth::new(inst.nulls.clone());
        for (kind, scores) in [(ScoreKind::EValue, &inst.e), (ScoreKind::PValue, &inst.p)] {
            let sup = max_self_consistent_fdp(kind, scores, &weights, alpha, &inst.nulls)?;
            if kind == ScoreKind::EValue {
                sups.push(sup);
            }
            let w = WeightSequence::uniform(k)?;
            let mut proc: Box<dyn OnlineProcedure> = match kind {
                ScoreKind::EValue => Box::new(OnlineEbh::new(w, alpha)?),
                ScoreKind::PValue => Box::new(OnlineBh::new(w, alpha)?),
            };
            for (t, &v) in scores.iter().enumerate() {
                proc.step(Score::new(kind, v)?)?;
                let f = fdp(&proc.rejection_set(), &truth)?;
                if f > sup {
                    violations += 1;
                    if examples.len() < MAX_REPORTED {
                        examples.push(format!("{kind} instance {i} t={}: FDP {f} above supremum {sup}", t + 1));
                    }
                }
            }
        }
    }
    Ok(SupremumReport {
        instances,
        violations,
        e_sup: Estimate::from_samples(&sups)?,
        bound: k0 as f64 / k as f64 * alpha,
        examples,
    })
}
