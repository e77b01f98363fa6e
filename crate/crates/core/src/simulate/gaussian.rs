//! Batch-correlated Gaussian streams with likelihood-ratio e-values and
//! one-sided p-values.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::boosting::GaussianLrModel;
use crate::error::{Error, Result};
use crate::metrics::GroundTruth;
use crate::normal::phi;

/// One trial's worth of data-generating parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSetup {
    /// Hypotheses per trial.
    pub n: usize,
    pub mu_a: f64,
    /// Probability that a hypothesis is non-null.
    pub pi_a: f64,
    pub batch: usize,
    /// Within-batch correlation.
    pub rho: f64,
    /// Compute p-values from the noise `Z` rather than the statistic `X`.
    pub literal_p: bool,
}

impl GaussianSetup {
    pub fn new(n: usize, mu_a: f64, pi_a: f64, batch: usize) -> Result<Self> {
        let s = GaussianSetup { n, mu_a, pi_a, batch, rho: 0.5, literal_p: false };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter { name: "n", value: 0.0, reason: "must be at least 1" });
        }
        if self.batch == 0 || self.n % self.batch != 0 {
            return Err(Error::InvalidParameter { name: "batch", value: self.batch as f64, reason: "must divide n" });
        }
        if !(self.pi_a > 0.0 && self.pi_a < 1.0) {
            return Err(Error::InvalidParameter { name: "pi_a", value: self.pi_a, reason: "must lie in (0, 1)" });
        }
        if !(self.rho >= 0.0 && self.rho <= 1.0) {
            return Err(Error::InvalidParameter { name: "rho", value: self.rho, reason: "must lie in [0, 1]" });
        }
        if !(self.mu_a.is_finite() && self.mu_a > 0.0) {
            return Err(Error::InvalidParameter { name: "mu_a", value: self.mu_a, reason: "must be positive" });
        }
        Ok(())
    }
}

/// Noise `Z`, statistics `X = Z + μ_A 1{non-null}`, derived scores and labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTrial {
    pub z: Vec<f64>,
    pub x: Vec<f64>,
    pub p_values: Vec<f64>,
    pub e_values: Vec<f64>,
    pub truth: GroundTruth,
}

/// `Z_t = √ρ W_batch + √(1 − ρ) ξ_t`, labels i.i.d. Bernoulli(π_A),
/// `E_t = exp(μ_A X_t − μ_A²/2)` and `P_t = Φ(−X_t)`.
pub fn generate_gaussian_trial<R: Rng + ?Sized>(setup: &GaussianSetup, rng: &mut R) -> Result<GaussianTrial> {
    setup.validate()?;
    let model = GaussianLrModel::new(setup.mu_a)?;
    let (a, b) = (libm::sqrt(setup.rho), libm::sqrt(1.0 - setup.rho));
    let n = setup.n;
    let (mut z, mut x, mut nulls) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n / setup.batch {
        let w: f64 = rng.sample(StandardNormal);
        for _ in 0..setup.batch {
            let xi: f64 = rng.sample(StandardNormal);
            let alt = rng.random::<f64>() < setup.pi_a;
            let zt = a * w + b * xi;
            z.push(zt);
            x.push(if alt { zt + setup.mu_a } else { zt });
            nulls.push(!alt);
        }
    }
    let p_values = if setup.literal_p { z.iter() } else { x.iter() }.map(|&v| phi(-v)).collect();
    let e_values = x.iter().map(|&v| model.e_value(v)).collect();
    Ok(GaussianTrial { z, x, p_values, e_values, truth: GroundTruth::new(nulls) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::rng::trial_rng;

    #[test]
    fn shapes_and_labels() {
        let s = GaussianSetup::new(100, 3.5, 0.3, 20).unwrap();
        let t = generate_gaussian_trial(&s, &mut trial_rng(1, 0, 0)).unwrap();
        assert_eq!(t.x.len(), 100);
        for i in 0..100 {
            let shift = if t.truth.labels()[i] { 0.0 } else { 3.5 };
            assert_eq!(t.x[i], t.z[i] + shift);
            assert!((0.0..=1.0).contains(&t.p_values[i]));
            assert!(t.e_values[i] > 0.0);
        }
        assert!(GaussianSetup::new(100, 3.5, 0.3, 30).is_err());
        assert!(GaussianSetup::new(100, 3.5, 1.0, 20).is_err());
    }

    #[test]
    fn literal_p_uses_noise() {
        let mut s = GaussianSetup::new(10, 3.5, 0.5, 1).unwrap();
        s.literal_p = true;
        let t = generate_gaussian_trial(&s, &mut trial_rng(3, 0, 0)).unwrap();
        for i in 0..10 {
            assert_eq!(t.p_values[i], phi(-t.z[i]));
        }
    }
}
