//! Closed-form boosting for Gaussian likelihood-ratio e-values.
//!
//! Under the null `E = exp(δZ − δ²/2)` with `Z ~ N(0, 1)`. Writing
//! `u = ln(α γ b)` and `S(k) = P(bE ≥ 1/(k α γ)) = Φ(−a_k)` with
//! `a_k = δ/2 − (u + ln k)/δ`, the expected truncated value of `bE` is a
//! finite sum of `Φ` terms for every variant with a cutoff.

use crate::boosting::truncation::{Truncation, TruncationSpec};
use crate::error::{Error, Result};
use crate::normal::{phi, phi_between};

/// `E = exp(δZ − δ²/2)`, the likelihood ratio of `N(δ, 1)` against `N(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLrModel {
    delta: f64,
}

impl GaussianLrModel {
    pub fn new(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta.is_finite() {
            Ok(GaussianLrModel { delta })
        } else {
            Err(Error::InvalidParameter { name: "delta", value: delta, reason: "must be positive and finite" })
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The e-value for an observation `x`.
    #[inline]
    pub fn e_value(&self, x: f64) -> f64 {
        libm::exp(self.delta * x - 0.5 * self.delta * self.delta)
    }

    /// `a_k` for `u = ln(α γ b)`.
    #[inline]
    pub(crate) fn a(&self, u: f64, k: u64) -> f64 {
        0.5 * self.delta - (u + libm::log(k as f64)) / self.delta
    }

    /// `α γ b · P(bE < 1/(k α γ)) · E[E | bE < 1/(k α γ)]`, i.e. the
    /// pass-through mass of a Plus variant below grid point `k`, scaled by `α γ`.
    #[inline]
    pub(crate) fn below_mass(&self, u: f64, k: u64) -> f64 {
        libm::exp(u) * phi(self.a(u, k) - self.delta)
    }
}

/// Cutoff family of a boosted variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoostFamily {
    Plus,
    Minus,
}

/// `(family, s, first grid index m)` for the variants with a closed form.
pub(crate) fn decompose(variant: Truncation) -> Result<(BoostFamily, u64, u64)> {
    Ok(match variant {
        Truncation::PlusCutoff { s } => (BoostFamily::Plus, s, 1),
        Truncation::MinusCutoff { s } | Truncation::Toad { deadline: s } => (BoostFamily::Minus, s, 1),
        Truncation::LocalPlus { s, lag_kstar } => (BoostFamily::Plus, s, lag_kstar + 1),
        Truncation::LocalMinus { s, lag_kstar } => (BoostFamily::Minus, s, lag_kstar + 1),
        Truncation::Full | Truncation::Local { .. } | Truncation::Prds => {
            return Err(Error::Unsupported("closed-form expectations need a variant with a finite cutoff"))
        }
    })
}

/// `E_null[T(bE)]` for Plus, Minus, LocalPlus, LocalMinus and TOAD truncations.
pub fn expected_truncated_value(model: &GaussianLrModel, spec: &TruncationSpec, b: f64) -> Result<f64> {
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter { name: "b", value: b, reason: "must be finite and nonnegative" });
    }
    let (family, s, m) = decompose(spec.variant)?;
    if spec.gamma == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    let ag = spec.alpha * spec.gamma;
    let u = libm::log(ag * b);
    // Top grid value taken whenever bE clears grid point m.
    let mut scaled = phi(-model.a(u, m)) / m as f64;
    for k in m + 1..=s {
        // S(k) − S(k−1) = Φ(a_{k−1}) − Φ(a_k).
        scaled += phi_between(model.a(u, k), model.a(u, k - 1)) / k as f64;
    }
    if family == BoostFamily::Plus {
        scaled += model.below_mass(u, s.max(m));
    }
    Ok(scaled / ag)
}

/// A solved boosting factor with its expectation residual `E[T(bE)] − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostFactor {
    pub b: f64,
    pub residual: f64,
}

/// Upper end of the search bracket for `b`.
pub const B_MAX: f64 = 1e6;
/// Required `|E[T(bE)] − 1|` at the returned root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// The `b ≥ 1` with `E_null[T(bE)] = 1`, by bisection on `[1, B_MAX]`.
///
/// When `E[T(E)] ≥ 1` already, no boosting is possible and `b = 1`.
pub fn solve_boost_factor(model: &GaussianLrModel, spec: &TruncationSpec) -> Result<BoostFactor> {
    decompose(spec.variant)?;
    if spec.gamma == 0.0 {
        return Err(Error::NoRoot { lo: 1.0, hi: B_MAX, detail: "a zero weight truncates everything to zero" });
    }
    let f = |b: f64| expected_truncated_value(model, spec, b).map(|v| v - 1.0);
    let f1 = f(1.0)?;
    if f1 >= 0.0 {
        return Ok(BoostFactor { b: 1.0, residual: f1 });
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    loop {
        if f(hi)? >= 0.0 {
            break;
        }
        if hi >= B_MAX {
            return Err(Error::NoRoot { lo: 1.0, hi: B_MAX, detail: "expectation stays below 1" });
        }
        lo = hi;
        hi = (hi * 2.0).min(B_MAX);
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    let residual = f(b)?;
    if residual.abs() > RESIDUAL_TOLERANCE {
        return Err(Error::NoRoot { lo, hi, detail: "bisection did not reach the residual tolerance" });
    }
    Ok(BoostFactor { b, residual })
}
