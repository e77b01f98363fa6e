//! Domain types shared by every procedure: scores, weight sequences,
//! rejection sets and the per-stream state.
//!
//! Hypotheses are indexed from 1, matching the time at which they arrive.
//! A stream is homogeneous: it carries either p-values or e-values.
//!
//! All threshold comparisons go through [`e_clears`] and [`p_clears`] so that
//! every procedure, oracle and audit evaluates the same floating-point
//! expression for the same grid point.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{check_alpha, Error, Result};

/// Slack allowed on `Σ γ_t ≤ 1` for explicitly listed weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreKind {
    PValue,
    EValue,
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreKind::PValue => f.write_str("p-value"),
            ScoreKind::EValue => f.write_str("e-value"),
        }
    }
}

/// A validated p-value (in `[0, 1]`) or e-value (in `[0, +∞]`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    value: f64,
    kind: ScoreKind,
}

impl Score {
    pub fn new(kind: ScoreKind, value: f64) -> Result<Self> {
        let ok = match kind {
            ScoreKind::PValue => (0.0..=1.0).contains(&value),
            // NaN fails the comparison; +∞ is a legal e-value.
            ScoreKind::EValue => value >= 0.0,
        };
        if ok {
            Ok(Score { value, kind })
        } else {
            Err(Error::InvalidScore { kind, value })
        }
    }

    pub fn p_value(value: f64) -> Result<Self> {
        Self::new(ScoreKind::PValue, value)
    }

    pub fn e_value(value: f64) -> Result<Self> {
        Self::new(ScoreKind::EValue, value)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.value
    }

    #[inline]
    pub fn kind(self) -> ScoreKind {
        self.kind
    }
}

/// Rejection grid point `1/(k α γ)` for e-values.
#[inline]
pub fn e_threshold(alpha: f64, gamma: f64, k: u64) -> f64 {
    1.0 / (k as f64 * alpha * gamma)
}

/// `E ≥ 1/(k α γ)`. A zero weight or `k = 0` never clears (threshold `+∞`).
#[inline]
pub fn e_clears(e: f64, alpha: f64, gamma: f64, k: u64) -> bool {
    gamma > 0.0 && k > 0 && e >= e_threshold(alpha, gamma, k)
}

/// `P ≤ α γ level`, where `level` is `k` for BH-type rules or `β(k)` for
/// reshaped ones. A zero weight never clears, not even for `P = 0`.
#[inline]
pub fn p_clears(p: f64, alpha: f64, gamma: f64, level: f64) -> bool {
    gamma > 0.0 && p <= alpha * gamma * level
}

#[derive(Debug, Clone, PartialEq)]
enum WeightKind {
    Explicit { weights: Vec<f64>, suffix: Vec<f64>, max: f64 },
    Geometric { q: f64 },
    UniformFinite { k: usize },
}

/// Public description of how a [`WeightSequence`] was built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDescription {
    Explicit { len: usize },
    Geometric { q: f64 },
    UniformFinite { k: usize },
}

/// The nonnegative weights `γ_1, γ_2, …` with `Σ γ_t ≤ 1`.
///
/// Explicit lists are zero past their end. The tail mass `Σ_{i>t} γ_i` and
/// the supremum `max_i γ_i` are available in closed form for every variant,
/// which the Storey-type estimator needs.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    kind: WeightKind,
}

impl WeightSequence {
    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidWeights(alloc::format!("weight {bad} is not a finite nonnegative number")));
        }
        let mut suffix = alloc::vec![0.0; weights.len() + 1];
        for i in (0..weights.len()).rev() {
            suffix[i] = suffix[i + 1] + weights[i];
        }
        if suffix[0] > 1.0 + WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(alloc::format!("weights sum to {} > 1", suffix[0])));
        }
        let max = weights.iter().copied().fold(0.0, f64::max);
        Ok(WeightSequence { kind: WeightKind::Explicit { weights, suffix, max } })
    }

    /// `γ_t = q^{t-1} (1 - q)`.
    pub fn geometric(q: f64) -> Result<Self> {
        if q > 0.0 && q < 1.0 {
            Ok(WeightSequence { kind: WeightKind::Geometric { q } })
        } else {
            Err(Error::InvalidParameter { name: "q", value: q, reason: "must lie in (0, 1)" })
        }
    }

    /// `γ_t = 1/K` for `t ≤ K`, zero afterwards.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter { name: "K", value: 0.0, reason: "must be at least 1" });
        }
        Ok(WeightSequence { kind: WeightKind::UniformFinite { k } })
    }

    pub fn description(&self) -> WeightDescription {
        match &self.kind {
            WeightKind::Explicit { weights, .. } => WeightDescription::Explicit { len: weights.len() },
            WeightKind::Geometric { q } => WeightDescription::Geometric { q: *q },
            WeightKind::UniformFinite { k } => WeightDescription::UniformFinite { k: *k },
        }
    }

    /// `γ_t` for a 1-based time `t`; `γ_0` is defined as 0.
    pub fn gamma(&self, t: usize) -> f64 {
        if t == 0 {
            return 0.0;
        }
        match &self.kind {
            WeightKind::Explicit { weights, .. } => weights.get(t - 1).copied().unwrap_or(0.0),
            WeightKind::Geometric { q } => libm::pow(*q, (t - 1) as f64) * (1.0 - q),
            WeightKind::UniformFinite { k } => {
                if t <= *k {
                    1.0 / *k as f64
                } else {
                    0.0
                }
            }
        }
    }

    /// `Σ_{i>t} γ_i`.
    pub fn tail_mass(&self, t: usize) -> f64 {
        match &self.kind {
            WeightKind::Explicit { suffix, .. } => suffix.get(t).copied().unwrap_or(0.0),
            WeightKind::Geometric { q } => libm::pow(*q, t as f64),
            WeightKind::UniformFinite { k } => k.saturating_sub(t) as f64 / *k as f64,
        }
    }

    /// `sup_i γ_i` over the whole (possibly infinite) sequence.
    pub fn max_weight(&self) -> f64 {
        match &self.kind {
            WeightKind::Explicit { max, .. } => *max,
            WeightKind::Geometric { q } => 1.0 - q,
            WeightKind::UniformFinite { k } => 1.0 / *k as f64,
        }
    }
}

/// The rejected indices current at some time `t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RejectionSet {
    indices: Vec<usize>,
    time: usize,
}

impl RejectionSet {
    /// Builds a set from arbitrary-order indices, which must lie in `1..=time`.
    pub fn new(mut indices: Vec<usize>, time: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > time) {
            return Err(Error::IndexOutOfRange { index: bad, len: time });
        }
        Ok(RejectionSet { indices, time })
    }

    pub(crate) fn from_sorted(indices: Vec<usize>, time: usize) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        RejectionSet { indices, time }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn is_subset_of(&self, other: &RejectionSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

impl fmt::Display for RejectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.indices.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// What a single step of a procedure changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub time: usize,
    /// `k_t^*` for ARC procedures; the rejection count for fully online ones.
    pub k_star: usize,
    /// Indices that joined the rejection set at this step, ascending. Any
    /// index below `time` is an accept-to-reject change.
    pub newly_rejected: Vec<usize>,
}

/// Append-only state shared by every procedure.
///
/// The rejection history is stored as the time each index joined the set,
/// which represents the whole nested sequence `R_1 ⊆ R_2 ⊆ …` compactly.
#[derive(Debug, Clone)]
pub struct StreamState {
    kind: ScoreKind,
    weights: WeightSequence,
    alpha: f64,
    scores: Vec<f64>,
    gammas: Vec<f64>,
    k_star: usize,
    rejected_at: Vec<Option<usize>>,
    num_rejected: usize,
}

impl StreamState {
    pub fn new(kind: ScoreKind, weights: WeightSequence, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(StreamState {
            kind,
            weights,
            alpha,
            scores: Vec::new(),
            gammas: Vec::new(),
            k_star: 0,
            rejected_at: Vec::new(),
            num_rejected: 0,
        })
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// Current time `t` (number of scores seen).
    pub fn time(&self) -> usize {
        self.scores.len()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// `γ_i` for an observed index (cached at ingestion).
    pub fn gamma(&self, index: usize) -> f64 {
        self.gammas[index - 1]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn k_star(&self) -> usize {
        self.k_star
    }

    pub fn num_rejected(&self) -> usize {
        self.num_rejected
    }

    pub fn is_rejected(&self, index: usize) -> bool {
        index >= 1 && self.rejected_at.get(index - 1).is_some_and(Option::is_some)
    }

    /// Time at which `index` joined the rejection set.
    pub fn rejection_time(&self, index: usize) -> Option<usize> {
        self.rejected_at.get(index.checked_sub(1)?).copied().flatten()
    }

    /// `R_t` at the current time.
    pub fn rejection_set(&self) -> RejectionSet {
        self.rejection_set_at(self.time())
    }

    /// `R_s` for any past time `s ≤ t`.
    pub fn rejection_set_at(&self, time: usize) -> RejectionSet {
        let time = time.min(self.time());
        let indices = self.rejected_at[..time]
            .iter()
            .enumerate()
            .filter(|(_, at)| at.is_some_and(|s| s <= time))
            .map(|(i, _)| i + 1)
            .collect();
        RejectionSet::from_sorted(indices, time)
    }

    /// Self-consistency of `candidate` against the scores seen so far.
    pub fn is_self_consistent(&self, candidate: &[usize]) -> Result<bool> {
        self_consistent_values(self.kind, candidate, &self.scores, &self.gammas, self.alpha)
    }

    /// Validates and appends a score; returns the new time `t`.
    pub(crate) fn push(&mut self, score: Score) -> Result<usize> {
        if score.kind() != self.kind {
            return Err(Error::KindMismatch { expected: self.kind, found: score.kind() });
        }
        let t = self.scores.len() + 1;
        self.scores.push(score.value());
        self.gammas.push(self.weights.gamma(t));
        self.rejected_at.push(None);
        Ok(t)
    }

    pub(crate) fn set_k_star(&mut self, k: usize) {
        debug_assert!(k >= self.k_star, "k* must be nondecreasing");
        self.k_star = k;
    }

    pub(crate) fn reject(&mut self, index: usize) {
        let t = self.time();
        let slot = &mut self.rejected_at[index - 1];
        if slot.is_none() {
            *slot = Some(t);
            self.num_rejected += 1;
        }
    }

    pub(crate) fn report(&self, newly_rejected: Vec<usize>) -> StepReport {
        StepReport { time: self.time(), k_star: self.k_star, newly_rejected }
    }
}

/// A streaming procedure that consumes one score per step.
pub trait OnlineProcedure {
    fn step(&mut self, score: Score) -> Result<StepReport>;

    fn state(&self) -> &StreamState;

    /// True when earlier accepts may later turn into rejections.
    fn is_arc(&self) -> bool;

    fn rejection_set(&self) -> RejectionSet {
        self.state().rejection_set()
    }
}

/// True iff every `t ∈ candidate` satisfies `E_t ≥ 1/(α γ_t |R|)` (e-values)
/// or `P_t ≤ α γ_t |R|` (p-values). The empty set is self-consistent.
pub fn is_self_consistent(candidate: &[usize], scores: &[Score], weights: &WeightSequence, alpha: f64) -> Result<bool> {
    let Some(first) = scores.first() else {
        if let Some(&i) = candidate.first() {
            return Err(Error::IndexOutOfRange { index: i, len: 0 });
        }
        return Ok(true);
    };
    let kind = first.kind();
    if let Some(bad) = scores.iter().find(|s| s.kind() != kind) {
        return Err(Error::KindMismatch { expected: kind, found: bad.kind() });
    }
    let values: Vec<f64> = scores.iter().map(|s| s.value()).collect();
    let gammas: Vec<f64> = (1..=scores.len()).map(|t| weights.gamma(t)).collect();
    self_consistent_values(kind, candidate, &values, &gammas, alpha)
}

pub(crate) fn self_consistent_values(
    kind: ScoreKind,
    candidate: &[usize],
    values: &[f64],
    gammas: &[f64],
    alpha: f64,
) -> Result<bool> {
    let size = candidate.len();
    let mut ok = true;
    for &i in candidate {
        if i == 0 || i > values.len() {
            return Err(Error::IndexOutOfRange { index: i, len: values.len() });
        }
        let (v, g) = (values[i - 1], gammas[i - 1]);
        ok &= match kind {
            ScoreKind::EValue => e_clears(v, alpha, g, size as u64),
            ScoreKind::PValue => p_clears(v, alpha, g, size as f64),
        };
    }
    Ok(ok)
}

/// `ℓ_K = Σ_{i=1}^K 1/i`, summed smallest term first.
pub fn harmonic_number(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter { name: "K", value: 0.0, reason: "must be at least 1" });
    }
    Ok((1..=k).rev().map(|i| 1.0 / i as f64).sum())
}
