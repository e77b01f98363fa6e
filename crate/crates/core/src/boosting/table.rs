//! Tabulated boosting factors for simulations.
//!
//! The scaled expectation `α γ E[T(bE)]` depends on `(α, γ, b)` only through
//! `u = ln(α γ b)`. For a fixed model, cutoff `s` and first grid index
//! `m = k + 1` it is an increasing function `H_m(u)`, and the boosting factor
//! solves `H_m(u) = α γ`. Summation by parts gives
//! `H_m(u) = Σ_{k=m}^{s−1} S(k)/(k(k+1)) + S(s)/s` (plus the pass-through term
//! for Plus variants), so one sweep over `k` yields every row at once.

use alloc::vec;
use alloc::vec::Vec;

use crate::boosting::gaussian::{BoostFamily, GaussianLrModel, B_MAX};
use crate::error::{Error, Result};
use crate::normal::phi;
use crate::stream::WeightSequence;

/// Spacing of the `u` grid.
const STEP: f64 = 0.01;
const MARGIN: f64 = 0.05;

/// `ln H_m(u)` on a uniform `u` grid, for `m = 1, …, max_lag + 1`.
#[derive(Debug, Clone)]
pub struct BoostTable {
    model: GaussianLrModel,
    family: BoostFamily,
    s: u64,
    max_lag: u64,
    u0: f64,
    npts: usize,
    log_h: Vec<f64>,
}

impl BoostTable {
    /// Builds rows for lags `0..=max_lag`, valid for `α γ ∈ [ag_min, ag_max]`.
    pub fn build(
        model: GaussianLrModel,
        family: BoostFamily,
        s: u64,
        ag_min: f64,
        ag_max: f64,
        max_lag: u64,
    ) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter { name: "s", value: 0.0, reason: "cutoff must be at least 1" });
        }
        if !(ag_min > 0.0 && ag_min <= ag_max && ag_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha*gamma",
                value: ag_min,
                reason: "range must be positive",
            });
        }
        let u0 = libm::log(ag_min) - MARGIN;
        let u1 = libm::log(ag_max) + libm::log(B_MAX) + MARGIN;
        let npts = libm::ceil((u1 - u0) / STEP) as usize + 1;
        let rows = max_lag as usize + 1;
        let top = (s as usize).max(rows);
        let mut log_h = vec![0.0; rows * npts];
        let mut surv = vec![0.0; top + 1];
        let mut tail = vec![0.0; top + 2];
        for i in 0..npts {
            let u = u0 + i as f64 * STEP;
            for (k, sk) in surv.iter_mut().enumerate().skip(1) {
                *sk = phi(-model.a(u, k as u64));
            }
            let s_ = s as usize;
            tail[s_] = surv[s_] / s as f64;
            for k in (1..s_).rev() {
                tail[k] = tail[k + 1] + surv[k] / (k as f64 * (k + 1) as f64);
            }
            let below_s = if family == BoostFamily::Plus { model.below_mass(u, s) } else { 0.0 };
            for r in 0..rows {
                let m = r + 1;
                let h = if m <= s_ {
                    tail[m] + below_s
                } else {
                    let below = if family == BoostFamily::Plus { model.below_mass(u, m as u64) } else { 0.0 };
                    surv[m] / m as f64 + below
                };
                log_h[r * npts + i] = libm::log(h.max(f64::MIN_POSITIVE));
            }
        }
        Ok(BoostTable { model, family, s, max_lag, u0, npts, log_h })
    }

    /// A table covering every weight of a stream of length `n`.
    pub fn for_stream(
        model: GaussianLrModel,
        family: BoostFamily,
        s: u64,
        alpha: f64,
        weights: &WeightSequence,
        n: usize,
        max_lag: u64,
    ) -> Result<Self> {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for t in 1..=n {
            let g = weights.gamma(t);
            if g > 0.0 {
                lo = lo.min(g);
                hi = hi.max(g);
            }
        }
        if hi == 0.0 {
            return Err(Error::InvalidWeights("no positive weight within the horizon".into()));
        }
        Self::build(model, family, s, alpha * lo, alpha * hi, max_lag)
    }

    pub fn family(&self) -> BoostFamily {
        self.family
    }

    pub fn cutoff(&self) -> u64 {
        self.s
    }

    pub fn max_lag(&self) -> u64 {
        self.max_lag
    }

    pub fn model(&self) -> &GaussianLrModel {
        &self.model
    }

    /// Boosting factor for `α γ_t = ag` and lagged `k* = lag_kstar`.
    pub fn factor(&self, ag: f64, lag_kstar: u64) -> Result<f64> {
        if lag_kstar > self.max_lag {
            return Err(Error::InvalidParameter {
                name: "lag_kstar",
                value: lag_kstar as f64,
                reason: "exceeds the tabulated range",
            });
        }
        let target = libm::log(ag);
        let lo_u = self.u0 + MARGIN;
        let hi_u = self.u0 + (self.npts - 1) as f64 * STEP - MARGIN - libm::log(B_MAX);
        if !(target >= lo_u - 1e-12 && target <= hi_u + 1e-12) {
            return Err(Error::InvalidParameter {
                name: "alpha*gamma",
                value: ag,
                reason: "outside the tabulated range",
            });
        }
        let row = &self.log_h[lag_kstar as usize * self.npts..(lag_kstar as usize + 1) * self.npts];
        if row[0] >= target {
            return Ok(1.0);
        }
        if row[self.npts - 1] < target {
            return Err(Error::NoRoot { lo: 1.0, hi: B_MAX, detail: "expectation stays below 1" });
        }
        // row[i] < target <= row[i + 1]
        let i = row.partition_point(|&v| v < target) - 1;
        let j = i.saturating_sub(1).min(self.npts - 4);
        let xs = [0, 1, 2, 3].map(|d| (j + d) as f64);
        let ys = [0, 1, 2, 3].map(|d| row[j + d]);
        let cubic = |x: f64| {
            let mut acc = 0.0;
            for a in 0..4 {
                let mut w = ys[a];
                for c in 0..4 {
                    if c != a {
                        w *= (x - xs[c]) / (xs[a] - xs[c]);
                    }
                }
                acc += w;
            }
            acc
        };
        let (mut lo, mut hi) = (i as f64, (i + 1) as f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if cubic(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = self.u0 + 0.5 * (lo + hi) * STEP;
        Ok(libm::exp(u - target).max(1.0))
    }
}
