//! p-to-e transforms and their validity conditions.
//!
//! A nonincreasing, left-continuous `ψ : [0, 1] → [0, ∞]` with `ψ(0) = ∞`
//! turns a p-value into `ψ(P)`. Validity only depends on the generalized
//! inverse `ψ^{-1}(x) = max{u ∈ [0, 1] : ψ(u) ≥ x}` at the grid points
//! `1/(k α γ)`.

use crate::error::{Error, Result};
use crate::p_procedures::ShapeFunction;
use crate::stream::e_threshold;

pub trait NonincreasingTransform {
    fn eval(&self, u: f64) -> f64;

    /// `max{u ∈ [0, 1] : ψ(u) ≥ x}`.
    fn inverse(&self, x: f64) -> f64;

    /// `ψ^{-1}(1/(k α γ))`; override when the grid has a closed form.
    fn inverse_at_grid(&self, k: u64, alpha: f64, gamma: f64) -> f64 {
        self.inverse(e_threshold(alpha, gamma, k))
    }

    /// `lim_{x→0} ψ^{-1}(x)`, used to bound the neglected tail of a series.
    fn inverse_limit(&self, _alpha: f64, _gamma: f64) -> f64 {
        1.0
    }
}

/// `ψ(u) = 1/u`, the calibrator behind online BH.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reciprocal;

impl NonincreasingTransform for Reciprocal {
    fn eval(&self, u: f64) -> f64 {
        1.0 / u
    }

    fn inverse(&self, x: f64) -> f64 {
        if x <= 1.0 {
            1.0
        } else {
            1.0 / x
        }
    }
}

/// `ψ(0) = ∞` and `ψ ≡ 0` on `(0, 1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroTransform;

impl NonincreasingTransform for ZeroTransform {
    fn eval(&self, u: f64) -> f64 {
        if u == 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    fn inverse(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            0.0
        }
    }

    fn inverse_limit(&self, _alpha: f64, _gamma: f64) -> f64 {
        0.0
    }
}

/// The step transform with `ψ^{-1}(1/(k α γ)) = min(α γ β(k), 1)`, which
/// turns online e-BH into online BR with shape `β`.
#[derive(Debug, Clone)]
pub struct ShapeTransform {
    pub shape: ShapeFunction,
    pub alpha: f64,
    pub gamma: f64,
}

impl ShapeTransform {
    fn grid_index(&self, x: f64) -> u64 {
        // Largest k with 1/(k α γ) ≥ x.
        if x <= 0.0 {
            return u64::MAX;
        }
        let guess = 1.0 / (x * self.alpha * self.gamma);
        if !(guess < 1e15) {
            return u64::MAX;
        }
        let mut k = guess as u64;
        while k > 0 && e_threshold(self.alpha, self.gamma, k) < x {
            k -= 1;
        }
        while e_threshold(self.alpha, self.gamma, k + 1) >= x {
            k += 1;
        }
        k
    }
}

impl NonincreasingTransform for ShapeTransform {
    fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::INFINITY;
        }
        let ag = self.alpha * self.gamma;
        match crate::level::search_level(|k| ag * self.shape.beta(k) >= u) {
            Some(k) => e_threshold(self.alpha, self.gamma, k),
            None => 0.0,
        }
    }

    fn inverse(&self, x: f64) -> f64 {
        match self.grid_index(x) {
            0 => 0.0,
            u64::MAX => 1.0,
            k => self.inverse_at_grid(k, self.alpha, self.gamma),
        }
    }

    fn inverse_at_grid(&self, k: u64, _alpha: f64, _gamma: f64) -> f64 {
        (self.alpha * self.gamma * self.shape.beta(k)).min(1.0)
    }

    fn inverse_limit(&self, _alpha: f64, _gamma: f64) -> f64 {
        (self.alpha * self.gamma * self.shape.sup_beta()).min(1.0)
    }
}

/// A transform given by a closure; the inverse is found by bisection.
pub struct FnTransform<F: Fn(f64) -> f64>(pub F);

impl<F: Fn(f64) -> f64> NonincreasingTransform for FnTransform<F> {
    fn eval(&self, u: f64) -> f64 {
        (self.0)(u)
    }

    fn inverse(&self, x: f64) -> f64 {
        if (self.0)(1.0) >= x {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if (self.0)(mid) >= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Which validity condition to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionMode {
    /// `Σ_k (1/(k α γ)) (ψ^{-1}(1/(k α γ)) − ψ^{-1}(1/((k−1) α γ))) ≤ 1`.
    Arbitrary,
    /// `sup_k (1/(k α γ)) ψ^{-1}(1/(k α γ)) ≤ 1`.
    Prds,
    /// The arbitrary-dependence sum over `k ≤ d` only.
    Toad { deadline: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The computed part is within bounds but the tail bound is too loose.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionOutcome {
    pub verdict: Verdict,
    /// The sum or supremum over the evaluated terms.
    pub value: f64,
    /// Upper bound on the contribution of the terms that were not evaluated.
    pub tail_bound: f64,
    pub terms: u64,
}

/// Absolute slack allowed on the `≤ 1` comparisons.
pub const CONDITION_TOLERANCE: f64 = 1e-12;

/// Evaluates the validity condition for `ψ` at level `α` and weight `γ`,
/// using at most `k_max` grid points.
pub fn check_transform_condition(
    psi: &dyn NonincreasingTransform,
    alpha: f64,
    gamma: f64,
    mode: ConditionMode,
    k_max: u64,
) -> Result<ConditionOutcome> {
    crate::error::check_alpha(alpha)?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter { name: "gamma", value: gamma, reason: "must be positive" });
    }
    if k_max == 0 {
        return Err(Error::InvalidParameter { name: "k_max", value: 0.0, reason: "must be at least 1" });
    }
    let ag = alpha * gamma;
    let verdict = |value: f64, tail: f64| {
        if value > 1.0 + CONDITION_TOLERANCE {
            Verdict::Fail
        } else if value + tail <= 1.0 + CONDITION_TOLERANCE {
            Verdict::Pass
        } else {
            Verdict::Indeterminate
        }
    };
    match mode {
        ConditionMode::Arbitrary | ConditionMode::Toad { .. } => {
            let last = match mode {
                ConditionMode::Toad { deadline } => deadline.min(k_max),
                _ => k_max,
            };
            let limit = psi.inverse_limit(alpha, gamma);
            let mut sum = 0.0;
            let mut prev = 0.0;
            let mut k = 0;
            while k < last {
                k += 1;
                let cur = psi.inverse_at_grid(k, alpha, gamma);
                sum += (cur - prev) / (k as f64 * ag);
                prev = cur;
                if cur >= limit {
                    break;
                }
            }
            let tail = match mode {
                ConditionMode::Toad { deadline } if k >= deadline => 0.0,
                _ => (limit - prev).max(0.0) / ((k + 1) as f64 * ag),
            };
            Ok(ConditionOutcome { verdict: verdict(sum, tail), value: sum, tail_bound: tail, terms: k })
        }
        ConditionMode::Prds => {
            let mut sup = 0.0f64;
            for k in 1..=k_max {
                sup = sup.max(psi.inverse_at_grid(k, alpha, gamma) / (k as f64 * ag));
            }
            let tail = psi.inverse_limit(alpha, gamma) / ((k_max + 1) as f64 * ag);
            let v = if sup > 1.0 + CONDITION_TOLERANCE {
                Verdict::Fail
            } else if tail <= 1.0 + CONDITION_TOLERANCE {
                Verdict::Pass
            } else {
                Verdict::Indeterminate
            };
            Ok(ConditionOutcome { verdict: v, value: sup, tail_bound: tail, terms: k_max })
        }
    }
}
