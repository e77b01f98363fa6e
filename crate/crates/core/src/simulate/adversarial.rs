//! The construction showing that online BH's SupFDR can exceed α by almost
//! a `log(1/α)` factor.
//!
//! The first `K0` hypotheses are null with i.i.d. uniform p-values. Write
//! `c_j` for the level at which the j-th smallest null p-value clears under
//! weights `1/K` (`⌈K P_(j)/α⌉` in exact arithmetic), pick
//! `j* = argmax_j j / c_j`, and follow the nulls with `K1* = (c_{j*} − j*) ∨ 0`
//! non-nulls whose p-values are 0. The stopping time `K0 + K1*` depends on the
//! null p-values only.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{check_alpha, Error, Result};
use crate::level::p_entry_level;
use crate::metrics::{fdp, Estimate, GroundTruth};
use crate::p_procedures::OnlineBh;
use crate::simulate::rng::trial_rng;
use crate::stream::{OnlineProcedure, Score, WeightSequence};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversarialConfig {
    /// Total number of hypotheses the weights are spread over.
    pub k: usize,
    /// Number of leading nulls.
    pub k0: usize,
    pub alpha: f64,
}

impl AdversarialConfig {
    /// `K = 2 K0`.
    pub fn new(k0: usize, alpha: f64) -> Result<Self> {
        Self::with_total(2 * k0, k0, alpha)
    }

    pub fn with_total(k: usize, k0: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if k0 == 0 || k0 > k {
            return Err(Error::InvalidParameter { name: "K0", value: k0 as f64, reason: "must lie in 1..=K" });
        }
        Ok(AdversarialConfig { k, k0, alpha })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialTrial {
    /// Null p-values in arrival order.
    pub null_p: Vec<f64>,
    pub j_star: usize,
    /// `c_{j*}`.
    pub c_star: u64,
    pub k1_star: usize,
    /// `K0 + K1*`, or `None` when `K1* > K − K0`.
    pub stop_time: Option<usize>,
}

impl AdversarialTrial {
    pub fn is_feasible(&self) -> bool {
        self.stop_time.is_some()
    }

    /// Nulls followed by `K1*` zeros.
    pub fn p_values(&self) -> Vec<f64> {
        let mut p = self.null_p.clone();
        p.extend(core::iter::repeat_n(0.0, self.k1_star));
        p
    }

    pub fn truth(&self) -> GroundTruth {
        let mut labels = vec![true; self.null_p.len()];
        labels.extend(core::iter::repeat_n(false, self.k1_star));
        GroundTruth::new(labels)
    }

    /// `(j* / c_{j*}) ∧ 1`.
    pub fn predicted_fdp(&self) -> f64 {
        (self.j_star as f64 / self.c_star as f64).min(1.0)
    }
}

/// Builds the construction from given null p-values.
pub fn construct_adversarial(cfg: &AdversarialConfig, null_p: Vec<f64>) -> Result<AdversarialTrial> {
    if null_p.len() != cfg.k0 {
        return Err(Error::InvalidParameter {
            name: "K0",
            value: null_p.len() as f64,
            reason: "p-value count differs",
        });
    }
    let gamma = 1.0 / cfg.k as f64;
    let mut levels = Vec::with_capacity(null_p.len());
    for &p in &null_p {
        Score::p_value(p)?;
        levels.push(p_entry_level(p, cfg.alpha, gamma).ok_or(Error::Unsupported("null p-value never clears"))?);
    }
    levels.sort_unstable();
    let (mut j_star, mut c_star) = (1usize, levels[0]);
    for (i, &c) in levels.iter().enumerate() {
        let j = i + 1;
        if (j as u128) * (c_star as u128) > (j_star as u128) * (c as u128) {
            j_star = j;
            c_star = c;
        }
    }
    let k1_star = (c_star as usize).saturating_sub(j_star);
    let stop_time = (k1_star <= cfg.k - cfg.k0).then_some(cfg.k0 + k1_star);
    Ok(AdversarialTrial { null_p, j_star, c_star, k1_star, stop_time })
}

pub fn generate_adversarial_trial<R: Rng + ?Sized>(cfg: &AdversarialConfig, rng: &mut R) -> Result<AdversarialTrial> {
    let null_p = (0..cfg.k0).map(|_| rng.random::<f64>()).collect();
    construct_adversarial(cfg, null_p)
}

/// FDP of online BH (weights `1/K`) at the trial's stopping time.
pub fn online_bh_fdp_at_stop(cfg: &AdversarialConfig, trial: &AdversarialTrial) -> Result<Option<f64>> {
    let Some(stop) = trial.stop_time else {
        return Ok(None);
    };
    let mut bh = OnlineBh::new(WeightSequence::uniform(cfg.k)?, cfg.alpha)?;
    for p in trial.p_values().into_iter().take(stop) {
        bh.step(Score::p_value(p)?)?;
    }
    Ok(Some(fdp(&bh.rejection_set(), &trial.truth())?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversarialSummary {
    /// Mean FDP at the stopping time over feasible trials.
    pub mean_fdp: Estimate,
    pub feasible: usize,
    pub infeasible: usize,
}

impl AdversarialSummary {
    pub fn inflation(&self, alpha: f64) -> f64 {
        self.mean_fdp.mean / alpha
    }
}

/// Runs `m` trials from substreams of `seed`; infeasible trials are counted
/// and left out of the mean.
pub fn run_adversarial(cfg: &AdversarialConfig, m: usize, seed: u64) -> Result<AdversarialSummary> {
    let mut values = Vec::with_capacity(m);
    let mut infeasible = 0;
    for trial in 0..m {
        let t = generate_adversarial_trial(cfg, &mut trial_rng(seed, 0, trial as u32))?;
        match online_bh_fdp_at_stop(cfg, &t)? {
            Some(v) => values.push(v),
            None => infeasible += 1,
        }
    }
    Ok(AdversarialSummary { mean_fdp: Estimate::from_samples(&values)?, feasible: values.len(), infeasible })
}
