//! Brute-force references: sort-based offline BH, e-BH and Storey-BH, weighted
//! BH and weighted Simes, and exhaustive enumeration of self-consistent sets.
//!
//! None of these share code with the streaming `k*` machinery; they only share
//! the threshold predicates, so float comparisons agree bit for bit.

use alloc::vec::Vec;

use crate::error::{check_alpha, Error, Result};
use crate::p_procedures::{check_lambda, storey_clears, ShapeFunction};
use crate::stream::{e_clears, p_clears, self_consistent_values, RejectionSet, Score, ScoreKind};

/// Enumeration is refused above this many hypotheses.
pub const ENUMERATION_CAP: usize = 20;

fn check_p(p: &[f64]) -> Result<()> {
    for &v in p {
        Score::p_value(v)?;
    }
    Ok(())
}

fn check_e(e: &[f64]) -> Result<()> {
    for &v in e {
        Score::e_value(v)?;
    }
    Ok(())
}

fn uniform_gamma(k: usize) -> f64 {
    1.0 / k as f64
}

/// Indices (1-based) of `values` ordered by `key`, best first.
fn order_by(values: &[f64], mut better: impl FnMut(f64, f64) -> core::cmp::Ordering) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| better(values[a], values[b]));
    idx
}

/// Step-up BH: `k* = max{k : P_(k) ≤ α k / K}`, rejecting every `P_i ≤ α k*/K`.
pub fn offline_bh(p: &[f64], alpha: f64) -> Result<RejectionSet> {
    check_alpha(alpha)?;
    check_p(p)?;
    let n = p.len();
    if n == 0 {
        return Ok(RejectionSet::default());
    }
    let g = uniform_gamma(n);
    let sorted = order_by(p, |a, b| a.total_cmp(&b));
    let k_star = (1..=n).rev().find(|&k| p_clears(p[sorted[k - 1]], alpha, g, k as f64)).unwrap_or(0);
    let rejected = (1..=n).filter(|&i| k_star > 0 && p_clears(p[i - 1], alpha, g, k_star as f64)).collect();
    RejectionSet::new(rejected, n)
}

/// Base e-BH: `k* = max{k : E_[k] ≥ K/(k α)}` with e-values sorted descending.
pub fn offline_ebh(e: &[f64], alpha: f64) -> Result<RejectionSet> {
    check_alpha(alpha)?;
    check_e(e)?;
    let n = e.len();
    if n == 0 {
        return Ok(RejectionSet::default());
    }
    let g = uniform_gamma(n);
    let sorted = order_by(e, |a, b| b.total_cmp(&a));
    let k_star = (1..=n).rev().find(|&k| e_clears(e[sorted[k - 1]], alpha, g, k as u64)).unwrap_or(0);
    let rejected = (1..=n).filter(|&i| e_clears(e[i - 1], alpha, g, k_star as u64)).collect();
    RejectionSet::new(rejected, n)
}

/// `π̂_0 = (1 + #{P_i > λ}) / ((1 − λ) K)`.
pub fn storey_pi0(p: &[f64], lambda: f64) -> f64 {
    let over = p.iter().filter(|&&v| v > lambda).count();
    (1 + over) as f64 / ((1.0 - lambda) * p.len() as f64)
}

/// Storey-BH: the largest k with at least k p-values below
/// `min(α k / (K π̂_0), λ)`.
pub fn offline_storey_bh(p: &[f64], alpha: f64, lambda: f64) -> Result<RejectionSet> {
    check_alpha(alpha)?;
    check_lambda(lambda, alpha)?;
    check_p(p)?;
    let n = p.len();
    if n == 0 {
        return Ok(RejectionSet::default());
    }
    let (g, pi0) = (uniform_gamma(n), storey_pi0(p, lambda));
    let sorted = order_by(p, |a, b| a.total_cmp(&b));
    let clears = |v: f64, k: usize| storey_clears(v, alpha, g, k as u64, pi0, lambda);
    let k_star = (1..=n).rev().find(|&k| clears(p[sorted[k - 1]], k)).unwrap_or(0);
    let rejected = (1..=n).filter(|&i| k_star > 0 && clears(p[i - 1], k_star)).collect();
    RejectionSet::new(rejected, n)
}

fn normalized_weights(w: &[f64], len: usize) -> Result<Vec<f64>> {
    if w.len() != len {
        return Err(Error::InvalidWeights(alloc::format!("{} weights for {} scores", w.len(), len)));
    }
    if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidWeights(alloc::format!("weight {bad} is not a finite nonnegative number")));
    }
    let pi0: f64 = w.iter().sum();
    if pi0 <= 0.0 {
        return Err(Error::InvalidWeights("all weights are zero".into()));
    }
    Ok(w.iter().map(|v| v / pi0).collect())
}

/// Weighted BH with weights renormalized to sum to one: rejects
/// `P_i ≤ α w̃_i k*`, where `k*` is the largest k with that many such `P_i`.
pub fn weighted_bh(p: &[f64], weights: &[f64], alpha: f64) -> Result<RejectionSet> {
    check_alpha(alpha)?;
    check_p(p)?;
    let w = normalized_weights(weights, p.len())?;
    let n = p.len();
    let count = |k: usize| (0..n).filter(|&i| p_clears(p[i], alpha, w[i], k as f64)).count();
    let k_star = (1..=n).rev().find(|&k| count(k) >= k).unwrap_or(0);
    let rejected = (1..=n).filter(|&i| k_star > 0 && p_clears(p[i - 1], alpha, w[i - 1], k_star as f64)).collect();
    RejectionSet::new(rejected, n)
}

/// `min_j P_(j) / (j w̃_(j))`, ordered by `P/w̃`. Zero weights are skipped;
/// if every weight is zero-paired the result is `+∞`.
pub fn weighted_simes(p: &[f64], weights: &[f64]) -> Result<f64> {
    check_p(p)?;
    let w = normalized_weights(weights, p.len())?;
    let mut q: Vec<f64> = p.iter().zip(&w).filter(|(_, &wi)| wi > 0.0).map(|(&pi, &wi)| pi / wi).collect();
    q.sort_by(f64::total_cmp);
    Ok(q.iter().enumerate().map(|(j, &v)| v / (j + 1) as f64).fold(f64::INFINITY, f64::min))
}

/// Classical Simes `min_j K P_(j) / j`.
pub fn simes(p: &[f64]) -> Result<f64> {
    check_p(p)?;
    if p.is_empty() {
        return Err(Error::EmptyInput("Simes needs at least one p-value"));
    }
    let mut s = p.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    Ok(s.iter().enumerate().map(|(j, &v)| n * v / (j + 1) as f64).fold(f64::INFINITY, f64::min))
}

/// Scores with explicit weights and a level, for the enumeration oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct OfflineInstance {
    pub kind: ScoreKind,
    pub scores: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
}

impl OfflineInstance {
    pub fn new(kind: ScoreKind, scores: Vec<f64>, weights: Vec<f64>, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if weights.len() != scores.len() {
            return Err(Error::InvalidWeights(alloc::format!("{} weights for {} scores", weights.len(), scores.len())));
        }
        for &v in &scores {
            Score::new(kind, v)?;
        }
        Ok(OfflineInstance { kind, scores, weights, alpha })
    }

    /// Weights `1/K`.
    pub fn uniform(kind: ScoreKind, scores: Vec<f64>, alpha: f64) -> Result<Self> {
        let g = uniform_gamma(scores.len().max(1));
        let weights = alloc::vec![g; scores.len()];
        Self::new(kind, scores, weights, alpha)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    fn check_size(&self) -> Result<()> {
        if self.len() > ENUMERATION_CAP {
            Err(Error::InstanceTooLarge { len: self.len(), max: ENUMERATION_CAP })
        } else {
            Ok(())
        }
    }

    fn members(&self, mask: u32) -> Vec<usize> {
        (0..self.len()).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
    }

    fn consistent(&self, set: &[usize], shape: Option<&ShapeFunction>) -> Result<bool> {
        match shape {
            None => self_consistent_values(self.kind, set, &self.scores, &self.weights, self.alpha),
            Some(shape) => {
                if self.kind != ScoreKind::PValue {
                    return Err(Error::Unsupported("shape functions apply to p-values only"));
                }
                let level = shape.beta(set.len() as u64);
                Ok(set.iter().all(|&i| p_clears(self.scores[i - 1], self.alpha, self.weights[i - 1], level)))
            }
        }
    }

    /// Every self-consistent subset, by enumeration of all `2^K` subsets.
    pub fn self_consistent_sets(&self, shape: Option<&ShapeFunction>) -> Result<Vec<Vec<usize>>> {
        self.check_size()?;
        let mut out = Vec::new();
        for mask in 0..1u32 << self.len() {
            let set = self.members(mask);
            if self.consistent(&set, shape)? {
                out.push(set);
            }
        }
        Ok(out)
    }

    /// Size of the largest self-consistent subset.
    pub fn largest_self_consistent_size(&self, shape: Option<&ShapeFunction>) -> Result<usize> {
        Ok(self.self_consistent_sets(shape)?.iter().map(Vec::len).max().unwrap_or(0))
    }

    /// `max FDP(R)` over all self-consistent `R`; `nulls[i]` labels `H_{i+1}`.
    pub fn max_self_consistent_fdp(&self, nulls: &[bool]) -> Result<f64> {
        if nulls.len() != self.len() {
            return Err(Error::IndexOutOfRange { index: self.len(), len: nulls.len() });
        }
        let mut best = 0.0f64;
        for set in self.self_consistent_sets(None)? {
            let v = set.iter().filter(|&&i| nulls[i - 1]).count();
            best = best.max(v as f64 / set.len().max(1) as f64);
        }
        Ok(best)
    }
}

/// Convenience wrapper around [`OfflineInstance::max_self_consistent_fdp`].
pub fn max_self_consistent_fdp(
    kind: ScoreKind,
    scores: &[f64],
    weights: &[f64],
    alpha: f64,
    nulls: &[bool],
) -> Result<f64> {
    OfflineInstance::new(kind, scores.to_vec(), weights.to_vec(), alpha)?.max_self_consistent_fdp(nulls)
}
