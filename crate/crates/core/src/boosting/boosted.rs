//! Online e-BH on boosted, truncated Gaussian likelihood-ratio e-values.

use alloc::vec;
use alloc::vec::Vec;

use crate::boosting::gaussian::BoostFamily;
use crate::boosting::table::BoostTable;
use crate::boosting::truncation::{Truncation, TruncationSpec};
use crate::e_procedures::OnlineEbh;
use crate::error::{Error, Result};
use crate::stream::{OnlineProcedure, Score, ScoreKind, StepReport, StreamState, WeightSequence};

/// Online e-BH fed with `T_t(b_t E_t)`.
///
/// Non-local variants use `b_t` from the table's first row. Local variants
/// condition on the run's own `k*` at the end of the previous batch, which
/// is the last time that is independent of the current batch.
#[derive(Debug, Clone)]
pub struct BoostedOnlineEbh<'a> {
    inner: OnlineEbh,
    table: &'a BoostTable,
    local_batch: Option<usize>,
    k_history: Vec<usize>,
    factors: Vec<f64>,
}

impl<'a> BoostedOnlineEbh<'a> {
    /// `local_batch = Some(B)` selects the local variant for batches of size `B`.
    pub fn new(weights: WeightSequence, alpha: f64, table: &'a BoostTable, local_batch: Option<usize>) -> Result<Self> {
        if local_batch == Some(0) {
            return Err(Error::InvalidParameter { name: "batch", value: 0.0, reason: "must be at least 1" });
        }
        Ok(BoostedOnlineEbh {
            inner: OnlineEbh::new(weights, alpha)?,
            table,
            local_batch,
            k_history: vec![0],
            factors: Vec::new(),
        })
    }

    /// The factors `b_1, …, b_t` used so far.
    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    fn variant(&self, lag: u64) -> Truncation {
        let s = self.table.cutoff();
        match (self.table.family(), self.local_batch.is_some()) {
            (BoostFamily::Plus, false) => Truncation::PlusCutoff { s },
            (BoostFamily::Minus, false) => Truncation::MinusCutoff { s },
            (BoostFamily::Plus, true) => Truncation::LocalPlus { s, lag_kstar: lag },
            (BoostFamily::Minus, true) => Truncation::LocalMinus { s, lag_kstar: lag },
        }
    }
}

impl OnlineProcedure for BoostedOnlineEbh<'_> {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        if score.kind() != ScoreKind::EValue {
            return Err(Error::KindMismatch { expected: ScoreKind::EValue, found: score.kind() });
        }
        let state = self.inner.state();
        let t = state.time() + 1;
        let (alpha, gamma) = (state.alpha(), state.weights().gamma(t));
        let lag = match self.local_batch {
            Some(b) => self.k_history[(t - 1) / b * b] as u64,
            None => 0,
        };
        let (b, boosted) = if gamma > 0.0 {
            let b = self.table.factor(alpha * gamma, lag)?;
            let spec = TruncationSpec::new(alpha, gamma, self.variant(lag))?;
            (b, spec.truncate(b * score.value())?)
        } else {
            (1.0, 0.0)
        };
        let report = self.inner.step(Score::e_value(boosted)?)?;
        self.factors.push(b);
        self.k_history.push(report.k_star);
        Ok(report)
    }

    /// The inner state; its scores are the boosted, truncated values.
    fn state(&self) -> &StreamState {
        self.inner.state()
    }

    fn is_arc(&self) -> bool {
        true
    }
}
