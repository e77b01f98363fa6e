//! Truncation functions onto the rejection grid `{1/(k α γ_t) : k ≥ 1}`.

use crate::error::{Error, Result};
use crate::level::e_entry_level;
use crate::stream::e_threshold;

/// Which truncation to apply. `s` is a series cutoff, `lag_kstar` the
/// lagged `k*` a local variant may condition on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Largest grid value at or below `x`.
    Full,
    /// Full above `1/(s α γ)`, identity below.
    PlusCutoff {
        s: u64,
    },
    /// Full above `1/(s α γ)`, zero below.
    MinusCutoff {
        s: u64,
    },
    /// Full, capped at `1/((k+1) α γ)`.
    Local {
        lag_kstar: u64,
    },
    LocalPlus {
        s: u64,
        lag_kstar: u64,
    },
    LocalMinus {
        s: u64,
        lag_kstar: u64,
    },
    /// Full on the first `d` grid points, zero below.
    Toad {
        deadline: u64,
    },
    /// The truncation used under positive dependence; same map as `Full`.
    Prds,
}

impl Truncation {
    pub fn name(&self) -> &'static str {
        match self {
            Truncation::Full => "full",
            Truncation::PlusCutoff { .. } => "plus",
            Truncation::MinusCutoff { .. } => "minus",
            Truncation::Local { .. } => "local",
            Truncation::LocalPlus { .. } => "local-plus",
            Truncation::LocalMinus { .. } => "local-minus",
            Truncation::Toad { .. } => "toad",
            Truncation::Prds => "prds",
        }
    }

    /// Series cutoff, if the variant has one.
    pub fn cutoff(&self) -> Option<u64> {
        match *self {
            Truncation::PlusCutoff { s }
            | Truncation::MinusCutoff { s }
            | Truncation::LocalPlus { s, .. }
            | Truncation::LocalMinus { s, .. } => Some(s),
            Truncation::Toad { deadline } => Some(deadline),
            _ => None,
        }
    }

    pub fn lag_kstar(&self) -> Option<u64> {
        match *self {
            Truncation::Local { lag_kstar }
            | Truncation::LocalPlus { lag_kstar, .. }
            | Truncation::LocalMinus { lag_kstar, .. } => Some(lag_kstar),
            _ => None,
        }
    }
}

/// A truncation bound to a level `α` and weight `γ_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    pub alpha: f64,
    pub gamma: f64,
    pub variant: Truncation,
}

impl TruncationSpec {
    pub fn new(alpha: f64, gamma: f64, variant: Truncation) -> Result<Self> {
        crate::error::check_alpha(alpha)?;
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must be finite and nonnegative",
            });
        }
        if variant.cutoff() == Some(0) {
            return Err(Error::InvalidParameter { name: "s", value: 0.0, reason: "cutoff must be at least 1" });
        }
        Ok(TruncationSpec { alpha, gamma, variant })
    }

    /// Grid point `1/(k α γ)`.
    #[inline]
    pub fn grid(&self, k: u64) -> f64 {
        e_threshold(self.alpha, self.gamma, k)
    }

    fn full(&self, x: f64) -> f64 {
        match e_entry_level(x, self.alpha, self.gamma) {
            Some(k) => self.grid(k),
            None => 0.0,
        }
    }

    fn plus(&self, x: f64, s: u64) -> f64 {
        if x < self.grid(s) {
            x
        } else {
            self.full(x)
        }
    }

    fn minus(&self, x: f64, s: u64) -> f64 {
        if x < self.grid(s) {
            0.0
        } else {
            self.full(x)
        }
    }

    /// Evaluates the truncation at `x ∈ [0, +∞]`.
    pub fn truncate(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::InvalidParameter { name: "x", value: x, reason: "must be nonnegative" });
        }
        if self.gamma == 0.0 {
            return Ok(0.0);
        }
        Ok(match self.variant {
            Truncation::Full | Truncation::Prds => self.full(x),
            Truncation::PlusCutoff { s } => self.plus(x, s),
            Truncation::MinusCutoff { s } | Truncation::Toad { deadline: s } => self.minus(x, s),
            Truncation::Local { lag_kstar } => self.full(x).min(self.grid(lag_kstar + 1)),
            Truncation::LocalPlus { s, lag_kstar } => {
                let cap = self.grid(lag_kstar + 1);
                if x >= cap {
                    cap
                } else {
                    self.plus(x, s)
                }
            }
            Truncation::LocalMinus { s, lag_kstar } => {
                let cap = self.grid(lag_kstar + 1);
                if x >= cap {
                    cap
                } else {
                    self.minus(x, s)
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: Truncation) -> TruncationSpec {
        TruncationSpec::new(0.05, 0.01, v).unwrap()
    }

    #[test]
    fn full_brackets() {
        let t = spec(Truncation::Full);
        assert!((t.truncate(1999.0).unwrap() - 1000.0).abs() < 1e-9);
        assert!((t.truncate(f64::INFINITY).unwrap() - 2000.0).abs() < 1e-9);
        assert_eq!(t.truncate(0.0).unwrap(), 0.0);
        assert!(t.truncate(-1.0).is_err());
        assert!(t.truncate(f64::NAN).is_err());
    }

    #[test]
    fn local_caps() {
        let t = spec(Truncation::Local { lag_kstar: 2 });
        assert!((t.truncate(f64::INFINITY).unwrap() - 2000.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn cutoffs_differ_only_below_grid_s() {
        let plus = spec(Truncation::PlusCutoff { s: 10 });
        let minus = spec(Truncation::MinusCutoff { s: 10 });
        let full = spec(Truncation::Full);
        assert_eq!(plus.truncate(150.0).unwrap(), 150.0);
        assert_eq!(minus.truncate(150.0).unwrap(), 0.0);
        assert!((full.truncate(150.0).unwrap() - 2000.0 / 14.0).abs() < 1e-9);
        for &x in &[200.0, 250.0, 1999.0, 1e9] {
            assert_eq!(plus.truncate(x).unwrap(), full.truncate(x).unwrap());
            assert_eq!(minus.truncate(x).unwrap(), full.truncate(x).unwrap());
        }
    }

    #[test]
    fn zero_weight_truncates_to_zero() {
        let t = TruncationSpec::new(0.05, 0.0, Truncation::Full).unwrap();
        assert_eq!(t.truncate(f64::INFINITY).unwrap(), 0.0);
    }
}
