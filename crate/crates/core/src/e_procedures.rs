//! Online e-BH, e-LOND and e-TOAD.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::level::{e_entry_level, DeadlineTracker, LevelTracker};
use crate::stream::{e_clears, OnlineProcedure, Score, ScoreKind, StepReport, StreamState, WeightSequence};

/// Decision deadlines `d_t ≥ t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeadlineSchedule {
    /// `d_t = ∞`: decisions stay open forever.
    Infinite,
    /// `d_t = t`: every decision is final immediately.
    Immediate,
    /// `d_t = t + lag`.
    Lag(usize),
    /// Per-index deadlines, `None` meaning `∞`. Indices past the end get `∞`.
    Explicit(Vec<Option<usize>>),
}

impl DeadlineSchedule {
    pub fn explicit(deadlines: Vec<Option<usize>>) -> Result<Self> {
        for (i, d) in deadlines.iter().enumerate() {
            if let Some(d) = *d {
                if d < i + 1 {
                    return Err(Error::InvalidParameter {
                        name: "deadline",
                        value: d as f64,
                        reason: "deadlines must satisfy d_t >= t",
                    });
                }
            }
        }
        Ok(DeadlineSchedule::Explicit(deadlines))
    }

    /// `d_t`, with `None` for an infinite deadline.
    pub fn deadline(&self, t: usize) -> Option<usize> {
        match self {
            DeadlineSchedule::Infinite => None,
            DeadlineSchedule::Immediate => Some(t),
            DeadlineSchedule::Lag(l) => t.checked_add(*l),
            DeadlineSchedule::Explicit(ds) => ds.get(t - 1).copied().flatten(),
        }
    }
}

fn ingest_e(state: &mut StreamState, score: Score) -> Result<(usize, f64)> {
    if score.kind() != ScoreKind::EValue {
        return Err(Error::KindMismatch { expected: ScoreKind::EValue, found: score.kind() });
    }
    let t = state.push(score)?;
    Ok((t, state.gamma(t)))
}

/// Online e-BH: `k_t* = max{k ≤ t : Σ_j 1{E_j ≥ 1/(k α γ_j)} ≥ k}` and
/// `R_t = {i ≤ t : E_i ≥ 1/(k_t* α γ_i)}`.
#[derive(Debug, Clone)]
pub struct OnlineEbh {
    state: StreamState,
    tracker: LevelTracker,
}

impl OnlineEbh {
    pub fn new(weights: WeightSequence, alpha: f64) -> Result<Self> {
        Ok(OnlineEbh { state: StreamState::new(ScoreKind::EValue, weights, alpha)?, tracker: LevelTracker::new() })
    }
}

impl OnlineProcedure for OnlineEbh {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let (_, gamma) = ingest_e(&mut self.state, score)?;
        let update = self.tracker.push(e_entry_level(score.value(), self.state.alpha(), gamma));
        self.state.set_k_star(update.k_star);
        for &i in &update.newly_rejected {
            self.state.reject(i);
        }
        Ok(self.state.report(update.newly_rejected))
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        true
    }
}

/// e-LOND: reject `t` iff `E_t ≥ 1/(α γ_t (|R_{t-1}| + 1))`.
#[derive(Debug, Clone)]
pub struct ELond {
    state: StreamState,
}

impl ELond {
    pub fn new(weights: WeightSequence, alpha: f64) -> Result<Self> {
        Ok(ELond { state: StreamState::new(ScoreKind::EValue, weights, alpha)? })
    }
}

impl OnlineProcedure for ELond {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let (t, gamma) = ingest_e(&mut self.state, score)?;
        let level = self.state.num_rejected() as u64 + 1;
        let mut newly = Vec::new();
        if e_clears(score.value(), self.state.alpha(), gamma, level) {
            self.state.reject(t);
            newly.push(t);
        }
        self.state.set_k_star(self.state.num_rejected());
        Ok(self.state.report(newly))
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        false
    }
}

/// e-TOAD: online e-BH restricted to hypotheses whose deadline has not passed.
///
/// Infinite deadlines give online e-BH; `d_t = t` gives e-LOND.
#[derive(Debug, Clone)]
pub struct ETOAD {
    state: StreamState,
    deadlines: DeadlineSchedule,
    tracker: DeadlineTracker,
}

impl ETOAD {
    pub fn new(weights: WeightSequence, alpha: f64, deadlines: DeadlineSchedule) -> Result<Self> {
        Ok(ETOAD {
            state: StreamState::new(ScoreKind::EValue, weights, alpha)?,
            deadlines,
            tracker: DeadlineTracker::new(),
        })
    }

    pub fn deadlines(&self) -> &DeadlineSchedule {
        &self.deadlines
    }

    /// `|C_t|`, the number of hypotheses whose decision is still open.
    pub fn active_len(&self) -> usize {
        self.tracker.active_len()
    }
}

impl OnlineProcedure for ETOAD {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let (t, gamma) = ingest_e(&mut self.state, score)?;
        let level = e_entry_level(score.value(), self.state.alpha(), gamma);
        let update = self.tracker.push(level, self.deadlines.deadline(t));
        self.state.set_k_star(update.k_star);
        for &i in &update.newly_rejected {
            self.state.reject(i);
        }
        Ok(self.state.report(update.newly_rejected))
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        !matches!(self.deadlines, DeadlineSchedule::Immediate)
    }
}
