//! False discovery proportions, their running suprema, power, and Monte-Carlo
//! estimates of FDR, SupFDR, SupFDR^K, StopFDR and power.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stream::{RejectionSet, StreamState};

/// Null labels: `is_null(i)` is true when `H_i` is a true hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    nulls: Vec<bool>,
}

impl GroundTruth {
    pub fn new(nulls: Vec<bool>) -> Self {
        GroundTruth { nulls }
    }

    pub fn len(&self) -> usize {
        self.nulls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nulls.is_empty()
    }

    pub fn labels(&self) -> &[bool] {
        &self.nulls
    }

    pub fn is_null(&self, index: usize) -> Result<bool> {
        match index.checked_sub(1).and_then(|i| self.nulls.get(i)) {
            Some(&b) => Ok(b),
            None => Err(Error::IndexOutOfRange { index, len: self.nulls.len() }),
        }
    }

    pub fn num_non_nulls(&self) -> usize {
        self.nulls.iter().filter(|&&b| !b).count()
    }
}

/// `|R ∩ I_0| / (|R| ∨ 1)`.
pub fn fdp(rejections: &RejectionSet, truth: &GroundTruth) -> Result<f64> {
    let mut false_discoveries = 0usize;
    for &i in rejections.indices() {
        false_discoveries += truth.is_null(i)? as usize;
    }
    Ok(false_discoveries as f64 / rejections.len().max(1) as f64)
}

/// `FDP_t` for `t = 1, …, T` along one run.
#[derive(Debug, Clone, PartialEq)]
pub struct FdpPath {
    values: Vec<f64>,
    rejections: Vec<usize>,
    sup_fdp: f64,
}

impl FdpPath {
    /// Reconstructs the path from the rejection times recorded in `state`.
    pub fn from_state(state: &StreamState, truth: &GroundTruth) -> Result<Self> {
        let horizon = state.time();
        if truth.len() < horizon {
            return Err(Error::IndexOutOfRange { index: horizon, len: truth.len() });
        }
        let mut joined = vec![0usize; horizon + 1];
        let mut joined_false = vec![0usize; horizon + 1];
        for i in 1..=horizon {
            if let Some(s) = state.rejection_time(i) {
                joined[s] += 1;
                joined_false[s] += truth.is_null(i)? as usize;
            }
        }
        let (mut r, mut v) = (0usize, 0usize);
        let mut values = Vec::with_capacity(horizon);
        let mut rejections = Vec::with_capacity(horizon);
        for t in 1..=horizon {
            r += joined[t];
            v += joined_false[t];
            values.push(v as f64 / r.max(1) as f64);
            rejections.push(r);
        }
        Ok(Self::from_parts(values, rejections))
    }

    pub fn from_parts(values: Vec<f64>, rejections: Vec<usize>) -> Self {
        let sup_fdp = values.iter().copied().fold(0.0, f64::max);
        FdpPath { values, rejections, sup_fdp }
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `FDP_t`, with `FDP_0 = 0`.
    pub fn at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.values[t.min(self.values.len()) - 1]
        }
    }

    pub fn final_fdp(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn sup_fdp(&self) -> f64 {
        self.sup_fdp
    }

    /// `max_{t ≤ K} FDP_t`.
    pub fn sup_fdp_up_to(&self, k: usize) -> f64 {
        self.values[..k.min(self.values.len())].iter().copied().fold(0.0, f64::max)
    }

    /// What a stopping rule is allowed to see.
    pub fn observable(&self) -> ObservableHistory<'_> {
        ObservableHistory { rejections: &self.rejections }
    }
}

/// The rejection counts `|R_1|, …, |R_T|` of a run, without any labels.
#[derive(Debug, Clone, Copy)]
pub struct ObservableHistory<'a> {
    rejections: &'a [usize],
}

impl<'a> ObservableHistory<'a> {
    pub fn new(rejections: &'a [usize]) -> Self {
        ObservableHistory { rejections }
    }

    pub fn horizon(&self) -> usize {
        self.rejections.len()
    }

    pub fn rejections(&self) -> &'a [usize] {
        self.rejections
    }
}

/// A stopping time computed from observable quantities only.
pub trait StoppingRule {
    /// A time in `1..=horizon` (the horizon if the rule never fires).
    fn stop_time(&self, history: &ObservableHistory<'_>) -> usize;
}

/// Stop at a fixed time `T` (clamped to the horizon).
#[derive(Debug, Clone, Copy)]
pub struct FixedTime(pub usize);

impl StoppingRule for FixedTime {
    fn stop_time(&self, history: &ObservableHistory<'_>) -> usize {
        self.0.clamp(1, history.horizon().max(1))
    }
}

/// Stop at the first time the j-th rejection is made.
#[derive(Debug, Clone, Copy)]
pub struct JthRejection(pub usize);

impl StoppingRule for JthRejection {
    fn stop_time(&self, history: &ObservableHistory<'_>) -> usize {
        history.rejections.iter().position(|&r| r >= self.0).map_or(history.horizon(), |i| i + 1)
    }
}

/// One trial of one procedure: its FDP path and final power.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub path: FdpPath,
    pub power: f64,
}

impl TrialRecord {
    pub fn from_state(state: &StreamState, truth: &GroundTruth) -> Result<Self> {
        let path = FdpPath::from_state(state, truth)?;
        let mut true_discoveries = 0usize;
        for i in state.rejection_set().indices() {
            true_discoveries += !truth.is_null(*i)? as usize;
        }
        let power = true_discoveries as f64 / truth.num_non_nulls().max(1) as f64;
        Ok(TrialRecord { path, power })
    }
}

/// A sample mean with standard error `sd/√m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::EmptyInput("at least two trials are needed for a standard error"));
        }
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
        Ok(Estimate { mean, stderr: libm::sqrt(ss / (m - 1.0)) / libm::sqrt(m) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimates {
    /// Final-time FDP.
    pub fdr: Estimate,
    pub sup_fdr: Estimate,
    pub sup_fdr_k: Option<Estimate>,
    pub stop_fdr: Option<Estimate>,
    pub power: Estimate,
    pub trials: usize,
}

/// Averages over trials. `k` requests SupFDR^K, `rule` a StopFDR estimate.
pub fn estimate_metrics(
    trials: &[TrialRecord],
    k: Option<usize>,
    rule: Option<&dyn StoppingRule>,
) -> Result<MetricEstimates> {
    if trials.is_empty() {
        return Err(Error::EmptyInput("no trials to aggregate"));
    }
    let collect = |f: &dyn Fn(&TrialRecord) -> f64| -> Vec<f64> { trials.iter().map(f).collect() };
    let fdr = Estimate::from_samples(&collect(&|r| r.path.final_fdp()))?;
    let sup_fdr = Estimate::from_samples(&collect(&|r| r.path.sup_fdp()))?;
    let power = Estimate::from_samples(&collect(&|r| r.power))?;
    let sup_fdr_k = match k {
        Some(k) => Some(Estimate::from_samples(&collect(&|r| r.path.sup_fdp_up_to(k)))?),
        None => None,
    };
    let stop_fdr = match rule {
        Some(rule) => {
            let xs = collect(&|r| r.path.at(rule.stop_time(&r.path.observable())));
            Some(Estimate::from_samples(&xs)?)
        }
        None => None,
    };
    Ok(MetricEstimates { fdr, sup_fdr, sup_fdr_k, stop_fdr, power, trials: trials.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize], t: usize) -> RejectionSet {
        RejectionSet::new(v.to_vec(), t).unwrap()
    }

    #[test]
    fn fdp_examples() {
        let truth = GroundTruth::new(vec![false, true, false]);
        assert_eq!(fdp(&set(&[], 3), &truth).unwrap(), 0.0);
        assert!((fdp(&set(&[1, 2, 3], 3), &truth).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let all_null = GroundTruth::new(vec![true, false, true]);
        assert_eq!(fdp(&set(&[1, 3], 3), &all_null).unwrap(), 1.0);
        let short = GroundTruth::new(vec![true]);
        assert!(fdp(&set(&[2], 2), &short).is_err());
    }

    #[test]
    fn sup_fdr_is_mean_of_sups() {
        let a = TrialRecord { path: FdpPath::from_parts(vec![0.2, 0.1], vec![5, 10]), power: 0.5 };
        let b = TrialRecord { path: FdpPath::from_parts(vec![0.4, 0.0], vec![5, 10]), power: 0.7 };
        let est = estimate_metrics(&[a, b], Some(1), Some(&JthRejection(6))).unwrap();
        assert!((est.sup_fdr.mean - 0.3).abs() < 1e-15);
        assert!((est.sup_fdr_k.unwrap().mean - 0.3).abs() < 1e-15);
        assert!((est.stop_fdr.unwrap().mean - 0.05).abs() < 1e-15);
        assert!((est.power.mean - 0.6).abs() < 1e-15);
        assert!(est.sup_fdr.mean >= est.stop_fdr.unwrap().mean);
    }

    #[test]
    fn zero_paths_give_zero_estimates() {
        let r = TrialRecord { path: FdpPath::from_parts(vec![0.0; 4], vec![0; 4]), power: 0.0 };
        let est = estimate_metrics(&[r.clone(), r.clone(), r], None, None).unwrap();
        assert_eq!(est.sup_fdr, Estimate { mean: 0.0, stderr: 0.0 });
        assert_eq!(est.fdr, Estimate { mean: 0.0, stderr: 0.0 });
        assert!(estimate_metrics(&[], None, None).is_err());
    }

    #[test]
    fn stopping_rules_are_pure() {
        let counts = [0, 1, 1, 3, 4];
        let h = ObservableHistory::new(&counts);
        assert_eq!(JthRejection(2).stop_time(&h), 4);
        assert_eq!(JthRejection(2).stop_time(&h), 4);
        assert_eq!(JthRejection(9).stop_time(&h), 5);
        assert_eq!(FixedTime(0).stop_time(&h), 1);
        assert_eq!(FixedTime(99).stop_time(&h), 5);
    }
}
