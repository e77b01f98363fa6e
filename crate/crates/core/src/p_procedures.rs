//! Online BH and its relatives for p-values: online BR, LOND, r-LOND, TOAD,
//! online Storey-BH, and the fully online LORD++ and SAFFRON baselines.

use alloc::vec::Vec;

use crate::e_procedures::DeadlineSchedule;
use crate::error::{check_alpha, Error, Result};
use crate::level::{k_star_of_levels, p_entry_level, search_level, DeadlineTracker, LevelTracker};
use crate::stream::{
    harmonic_number, p_clears, OnlineProcedure, Score, ScoreKind, StepReport, StreamState, WeightDescription,
    WeightSequence,
};

/// A reshaping function `β(k) = ∫_0^k x dν(x)` for a probability measure `ν`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeFunction {
    /// `β(k) = k`.
    Identity,
    /// Benjamini–Yekutieli: `ν` puts mass `1/(i ℓ_K)` on `i = 1..K`, so
    /// `β(k) = min(k, K)/ℓ_K`.
    By { k: usize, harmonic: f64 },
    /// A discrete measure with atoms `x_i > 0` and masses `w_i`. Stored sorted
    /// by atom with cumulative `Σ x_i w_i`.
    Custom { atoms: Vec<f64>, cumulative: Vec<f64> },
}

impl ShapeFunction {
    pub fn by(k: usize) -> Result<Self> {
        Ok(ShapeFunction::By { k, harmonic: harmonic_number(k)? })
    }

    /// Builds `β` from `(atom, mass)` pairs; masses must sum to 1.
    pub fn custom_measure(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyInput("a shape measure needs at least one atom"));
        }
        if let Some(&(x, w)) = atoms.iter().find(|(x, w)| !(x.is_finite() && *x > 0.0 && w.is_finite() && *w >= 0.0)) {
            let (name, value) = if x.is_finite() && x > 0.0 { ("mass", w) } else { ("atom", x) };
            return Err(Error::InvalidParameter {
                name,
                value,
                reason: "atoms must be positive and masses nonnegative",
            });
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter { name: "total mass", value: total, reason: "must equal 1" });
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cumulative = Vec::with_capacity(atoms.len());
        let mut acc = 0.0;
        for &(x, w) in &atoms {
            acc += x * w;
            cumulative.push(acc);
        }
        Ok(ShapeFunction::Custom { atoms: atoms.into_iter().map(|a| a.0).collect(), cumulative })
    }

    pub fn beta(&self, k: u64) -> f64 {
        match self {
            ShapeFunction::Identity => k as f64,
            ShapeFunction::By { k: big_k, harmonic } => (k.min(*big_k as u64)) as f64 / harmonic,
            ShapeFunction::Custom { atoms, cumulative } => {
                let n = atoms.partition_point(|&x| x <= k as f64);
                if n == 0 {
                    0.0
                } else {
                    cumulative[n - 1]
                }
            }
        }
    }

    /// `sup_k β(k)`, infinite for the identity.
    pub fn sup_beta(&self) -> f64 {
        match self {
            ShapeFunction::Identity => f64::INFINITY,
            ShapeFunction::By { k, harmonic } => *k as f64 / harmonic,
            ShapeFunction::Custom { cumulative, .. } => cumulative.last().copied().unwrap_or(0.0),
        }
    }

    /// Smallest k with `P ≤ α γ β(k)`.
    pub fn entry_level(&self, p: f64, alpha: f64, gamma: f64) -> Option<u64> {
        match self {
            ShapeFunction::Identity => p_entry_level(p, alpha, gamma),
            _ if gamma <= 0.0 => None,
            _ => search_level(|k| p_clears(p, alpha, gamma, self.beta(k))),
        }
    }
}

fn ingest_p(state: &mut StreamState, score: Score) -> Result<(usize, f64)> {
    if score.kind() != ScoreKind::PValue {
        return Err(Error::KindMismatch { expected: ScoreKind::PValue, found: score.kind() });
    }
    let t = state.push(score)?;
    Ok((t, state.gamma(t)))
}

fn apply(state: &mut StreamState, k_star: usize, newly: Vec<usize>) -> StepReport {
    state.set_k_star(k_star);
    for &i in &newly {
        state.reject(i);
    }
    state.report(newly)
}

/// Online BR: online BH with thresholds `α γ_j β(k)`.
#[derive(Debug, Clone)]
pub struct OnlineBr {
    state: StreamState,
    shape: ShapeFunction,
    tracker: LevelTracker,
}

impl OnlineBr {
    pub fn new(weights: WeightSequence, alpha: f64, shape: ShapeFunction) -> Result<Self> {
        Ok(OnlineBr {
            state: StreamState::new(ScoreKind::PValue, weights, alpha)?,
            shape,
            tracker: LevelTracker::new(),
        })
    }

    pub fn shape(&self) -> &ShapeFunction {
        &self.shape
    }
}

impl OnlineProcedure for OnlineBr {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let (_, gamma) = ingest_p(&mut self.state, score)?;
        let level = self.shape.entry_level(score.value(), self.state.alpha(), gamma);
        let update = self.tracker.push(level);
        Ok(apply(&mut self.state, update.k_star, update.newly_rejected))
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        true
    }
}

/// Online BH: `k_t* = max{k ≤ t : Σ_j 1{P_j ≤ k α γ_j} ≥ k}`.
#[derive(Debug, Clone)]
pub struct OnlineBh(OnlineBr);

impl OnlineBh {
    pub fn new(weights: WeightSequence, alpha: f64) -> Result<Self> {
        Ok(OnlineBh(OnlineBr::new(weights, alpha, ShapeFunction::Identity)?))
    }
}

impl OnlineProcedure for OnlineBh {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        self.0.step(score)
    }

    fn state(&self) -> &StreamState {
        self.0.state()
    }

    fn is_arc(&self) -> bool {
        true
    }
}

/// r-LOND: reject `t` iff `P_t ≤ α γ_t β(|R_{t-1}| + 1)`.
#[derive(Debug, Clone)]
pub struct RLond {
    state: StreamState,
    shape: ShapeFunction,
}

impl RLond {
    pub fn new(weights: WeightSequence, alpha: f64, shape: ShapeFunction) -> Result<Self> {
        Ok(RLond { state: StreamState::new(ScoreKind::PValue, weights, alpha)?, shape })
    }
}

impl OnlineProcedure for RLond {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let (t, gamma) = ingest_p(&mut self.state, score)?;
        let beta = self.shape.beta(self.state.num_rejected() as u64 + 1);
        let mut newly = Vec::new();
        if p_clears(score.value(), self.state.alpha(), gamma, beta) {
            newly.push(t);
        }
        let k = self.state.num_rejected() + newly.len();
        Ok(apply(&mut self.state, k, newly))
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        false
    }
}

/// LOND: r-LOND with `β(k) = k`.
#[derive(Debug, Clone)]
pub struct Lond(RLond);

impl Lond {
    pub fn new(weights: WeightSequence, alpha: f64) -> Result<Self> {
        Ok(Lond(RLond::new(weights, alpha, ShapeFunction::Identity)?))
    }
}

impl OnlineProcedure for Lond {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        self.0.step(score)
    }

    fn state(&self) -> &StreamState {
        self.0.state()
    }

    fn is_arc(&self) -> bool {
        false
    }
}

/// TOAD: online BR with decision deadlines; each hypothesis may carry its
/// own shape function.
#[derive(Debug, Clone)]
pub struct Toad {
    state: StreamState,
    deadlines: DeadlineSchedule,
    shape: ShapeFunction,
    tracker: DeadlineTracker,
}

impl Toad {
    pub fn new(weights: WeightSequence, alpha: f64, deadlines: DeadlineSchedule, shape: ShapeFunction) -> Result<Self> {
        Ok(Toad {
            state: StreamState::new(ScoreKind::PValue, weights, alpha)?,
            deadlines,
            shape,
            tracker: DeadlineTracker::new(),
        })
    }

    /// Steps with a hypothesis-specific `β_t` instead of the default shape.
    pub fn step_with_shape(&mut self, score: Score, shape: &ShapeFunction) -> Result<StepReport> {
        let (t, gamma) = ingest_p(&mut self.state, score)?;
        let level = shape.entry_level(score.value(), self.state.alpha(), gamma);
        let update = self.tracker.push(level, self.deadlines.deadline(t));
        Ok(apply(&mut self.state, update.k_star, update.newly_rejected))
    }
}

impl OnlineProcedure for Toad {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let shape = core::mem::replace(&mut self.shape, ShapeFunction::Identity);
        let report = self.step_with_shape(score, &shape);
        self.shape = shape;
        report
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        !matches!(self.deadlines, DeadlineSchedule::Immediate)
    }
}

/// `P ≤ min(α γ k / π̂_0, λ)`, with a zero weight never clearing.
#[inline]
pub fn storey_clears(p: f64, alpha: f64, gamma: f64, k: u64, pi0: f64, lambda: f64) -> bool {
    gamma > 0.0 && p <= (alpha * gamma * k as f64 / pi0).min(lambda)
}

pub(crate) fn check_lambda(lambda: f64, alpha: f64) -> Result<()> {
    if lambda >= alpha && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "lambda", value: lambda, reason: "must lie in [alpha, 1)" })
    }
}

/// The Storey null-proportion estimator
/// `π̂_0^t = (max_i γ_i + Σ_{i ≤ t} γ_i 1{P_i > λ} + Σ_{i > t} γ_i) / (1 − λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoreyState {
    pub lambda: f64,
    pub pi0_hat: f64,
    pub gamma_max: f64,
    pub tail_mass: f64,
    pub over_lambda_mass: f64,
    /// Number of positive-weight `P_i > λ` so far.
    pub over_lambda_count: usize,
}

/// Online Storey-BH: `R_t = {i ≤ t : P_i ≤ min(k_t* α γ_i / π̂_0^t, λ)}`.
///
/// `π̂_0^t` changes every step, so `k_t*` is recomputed from scratch in
/// `O(t)`. The estimate is clamped to be nonincreasing, which it is in exact
/// arithmetic.
#[derive(Debug, Clone)]
pub struct OnlineSbh {
    state: StreamState,
    storey: StoreyState,
    candidates: Vec<usize>,
    levels: Vec<Option<u64>>,
}

impl OnlineSbh {
    pub fn new(weights: WeightSequence, alpha: f64, lambda: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_lambda(lambda, alpha)?;
        let gamma_max = weights.max_weight();
        let tail_mass = weights.tail_mass(0);
        let storey = StoreyState {
            lambda,
            pi0_hat: (gamma_max + tail_mass) / (1.0 - lambda),
            gamma_max,
            tail_mass,
            over_lambda_mass: 0.0,
            over_lambda_count: 0,
        };
        Ok(OnlineSbh {
            state: StreamState::new(ScoreKind::PValue, weights, alpha)?,
            storey,
            candidates: Vec::new(),
            levels: Vec::new(),
        })
    }

    pub fn storey(&self) -> &StoreyState {
        &self.storey
    }
}

impl OnlineProcedure for OnlineSbh {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let (t, gamma) = ingest_p(&mut self.state, score)?;
        let s = &mut self.storey;
        if score.value() > s.lambda {
            s.over_lambda_mass += gamma;
            s.over_lambda_count += (gamma > 0.0) as usize;
        } else {
            self.candidates.push(t);
        }
        s.tail_mass = self.state.weights().tail_mass(t);
        let raw = match self.state.weights().description() {
            // Exact in counts, so it matches the offline estimator bit for bit.
            WeightDescription::UniformFinite { k } => {
                (1 + s.over_lambda_count + k.saturating_sub(t)) as f64 / ((1.0 - s.lambda) * k as f64)
            }
            _ => (s.gamma_max + s.over_lambda_mass + s.tail_mass) / (1.0 - s.lambda),
        };
        s.pi0_hat = s.pi0_hat.min(raw);

        let (alpha, pi0, lambda) = (self.state.alpha(), s.pi0_hat, s.lambda);
        self.levels.clear();
        for &j in &self.candidates {
            let (p, g) = (self.state.scores()[j - 1], self.state.gamma(j));
            let level = if g <= 0.0 {
                None
            } else {
                search_from(p * pi0 / (alpha * g), |k| storey_clears(p, alpha, g, k, pi0, lambda))
            };
            self.levels.push(level);
        }
        let k_star = k_star_of_levels(self.levels.iter().copied(), t);
        let mut newly = Vec::new();
        for (&j, &l) in self.candidates.iter().zip(&self.levels) {
            if l.is_some_and(|l| l as usize <= k_star) && !self.state.is_rejected(j) {
                newly.push(j);
            }
        }
        Ok(apply(&mut self.state, k_star, newly))
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        true
    }
}

/// Smallest k with `pred(k)` near a floating guess; falls back to a full search.
fn search_from(guess: f64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    if !(guess < 1e15) {
        return search_level(pred);
    }
    let mut k = (guess as u64).max(1);
    while k > 1 && pred(k - 1) {
        k -= 1;
    }
    for _ in 0..4 {
        if pred(k) {
            return Some(k);
        }
        k += 1;
    }
    search_level(pred)
}

/// LORD++ with initial wealth `W0`:
/// `α_t = W0 γ_t + (α − W0) γ_{t−τ_1} 1{τ_1 < t} + α Σ_{j ≥ 2} γ_{t−τ_j}`,
/// where `τ_j` is the time of the j-th rejection.
#[derive(Debug, Clone)]
pub struct Lord {
    state: StreamState,
    w0: f64,
    rejection_times: Vec<usize>,
    test_levels: Vec<f64>,
    spent: f64,
}

impl Lord {
    /// LORD++ with the usual default `W0 = α/10`.
    pub fn new(weights: WeightSequence, alpha: f64) -> Result<Self> {
        Self::with_w0(weights, alpha, alpha / 10.0)
    }

    pub fn with_w0(weights: WeightSequence, alpha: f64, w0: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(w0 > 0.0 && w0 <= alpha) {
            return Err(Error::InvalidParameter { name: "w0", value: w0, reason: "must lie in (0, alpha]" });
        }
        Ok(Lord {
            state: StreamState::new(ScoreKind::PValue, weights, alpha)?,
            w0,
            rejection_times: Vec::new(),
            test_levels: Vec::new(),
            spent: 0.0,
        })
    }

    /// `α_1, …, α_t`.
    pub fn test_levels(&self) -> &[f64] {
        &self.test_levels
    }

    /// `Σ_{i ≤ t} α_i ≤ α (|R_t| ∨ 1)`, with relative slack for rounding.
    pub fn condition_holds(&self) -> bool {
        let budget = self.state.alpha() * self.state.num_rejected().max(1) as f64;
        self.spent <= budget * (1.0 + 1e-12)
    }

    fn level(&self, t: usize) -> f64 {
        let (w, alpha) = (self.state.weights(), self.state.alpha());
        let mut a = self.w0 * w.gamma(t);
        for (j, &tau) in self.rejection_times.iter().enumerate() {
            let coef = if j == 0 { alpha - self.w0 } else { alpha };
            a += coef * w.gamma(t - tau);
        }
        a
    }
}

impl OnlineProcedure for Lord {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let t = self.state.time() + 1;
        if score.kind() != ScoreKind::PValue {
            return Err(Error::KindMismatch { expected: ScoreKind::PValue, found: score.kind() });
        }
        let a = self.level(t);
        ingest_p(&mut self.state, score)?;
        self.test_levels.push(a);
        self.spent += a;
        let mut newly = Vec::new();
        if a > 0.0 && score.value() <= a {
            newly.push(t);
            self.rejection_times.push(t);
        }
        let k = self.state.num_rejected() + newly.len();
        let report = apply(&mut self.state, k, newly);
        debug_assert!(self.condition_holds());
        Ok(report)
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        false
    }
}

/// SAFFRON with candidate threshold `λ` and initial wealth `W0`:
/// `α_t = min(λ, (1−λ)[W0 γ_{t−C_{0+}} + (α−W0) γ_{t−τ_1−C_{1+}} + α Σ_{j≥2} γ_{t−τ_j−C_{j+}}])`,
/// where `C_{j+}` counts candidates (`P_i ≤ λ`) strictly between `τ_j` and `t`.
#[derive(Debug, Clone)]
pub struct Saffron {
    state: StreamState,
    lambda: f64,
    w0: f64,
    rejection_times: Vec<usize>,
    candidate_prefix: Vec<usize>,
    test_levels: Vec<f64>,
    penalized: f64,
}

impl Saffron {
    /// SAFFRON with `W0 = α/2`.
    pub fn new(weights: WeightSequence, alpha: f64, lambda: f64) -> Result<Self> {
        Self::with_w0(weights, alpha, lambda, alpha / 2.0)
    }

    pub fn with_w0(weights: WeightSequence, alpha: f64, lambda: f64, w0: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParameter { name: "lambda", value: lambda, reason: "must lie in (0, 1)" });
        }
        if !(w0 > 0.0 && w0 <= alpha) {
            return Err(Error::InvalidParameter { name: "w0", value: w0, reason: "must lie in (0, alpha]" });
        }
        Ok(Saffron {
            state: StreamState::new(ScoreKind::PValue, weights, alpha)?,
            lambda,
            w0,
            rejection_times: Vec::new(),
            candidate_prefix: alloc::vec![0],
            test_levels: Vec::new(),
            penalized: 0.0,
        })
    }

    pub fn test_levels(&self) -> &[f64] {
        &self.test_levels
    }

    /// `Σ_{i ≤ t} α_i 1{P_i > λ}/(1−λ) ≤ α (|R_t| ∨ 1)`, with rounding slack.
    pub fn condition_holds(&self) -> bool {
        let budget = self.state.alpha() * self.state.num_rejected().max(1) as f64;
        self.penalized <= budget * (1.0 + 1e-12)
    }

    fn level(&self, t: usize) -> f64 {
        let (w, alpha) = (self.state.weights(), self.state.alpha());
        let before = self.candidate_prefix[t - 1];
        let mut a = self.w0 * w.gamma(t - before);
        for (j, &tau) in self.rejection_times.iter().enumerate() {
            let coef = if j == 0 { alpha - self.w0 } else { alpha };
            let since = before - self.candidate_prefix[tau];
            a += coef * w.gamma(t - tau - since);
        }
        ((1.0 - self.lambda) * a).min(self.lambda)
    }
}

impl OnlineProcedure for Saffron {
    fn step(&mut self, score: Score) -> Result<StepReport> {
        let t = self.state.time() + 1;
        if score.kind() != ScoreKind::PValue {
            return Err(Error::KindMismatch { expected: ScoreKind::PValue, found: score.kind() });
        }
        let a = self.level(t);
        ingest_p(&mut self.state, score)?;
        let p = score.value();
        self.test_levels.push(a);
        let candidate = p <= self.lambda;
        self.candidate_prefix.push(self.candidate_prefix[t - 1] + candidate as usize);
        if !candidate {
            self.penalized += a / (1.0 - self.lambda);
        }
        let mut newly = Vec::new();
        if a > 0.0 && p <= a {
            newly.push(t);
            self.rejection_times.push(t);
        }
        let k = self.state.num_rejected() + newly.len();
        let report = apply(&mut self.state, k, newly);
        debug_assert!(self.condition_holds());
        Ok(report)
    }

    fn state(&self) -> &StreamState {
        &self.state
    }

    fn is_arc(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn run(p: &mut dyn OnlineProcedure, ps: &[f64]) -> Vec<StepReport> {
        ps.iter().map(|&x| p.step(Score::p_value(x).unwrap()).unwrap()).collect()
    }

    #[test]
    fn online_bh_example() {
        let mut p = OnlineBh::new(WeightSequence::uniform(3).unwrap(), 0.3).unwrap();
        let r = run(&mut p, &[0.05, 0.5, 0.09]);
        assert_eq!(r[2].k_star, 2);
        assert_eq!(p.rejection_set().indices(), &[1, 3]);
    }

    #[test]
    fn all_ones_reject_nothing() {
        let mut p = OnlineBh::new(WeightSequence::geometric(0.9).unwrap(), 0.5).unwrap();
        run(&mut p, &[1.0; 20]);
        assert!(p.rejection_set().is_empty());
    }

    #[test]
    fn lond_example() {
        let w = WeightSequence::explicit(vec![1.0 / 3.0, 1.0 / 3.0]).unwrap();
        let mut p = Lond::new(w, 0.3).unwrap();
        run(&mut p, &[0.05, 0.21]);
        assert_eq!(p.rejection_set().indices(), &[1]);
    }

    #[test]
    fn by_shape_values() {
        let s = ShapeFunction::by(3).unwrap();
        assert!((s.beta(1) - 6.0 / 11.0).abs() < 1e-15);
        assert!((s.beta(3) - 18.0 / 11.0).abs() < 1e-15);
        assert_eq!(s.beta(7), s.beta(3));
        assert_eq!(s.beta(0), 0.0);
        let c = ShapeFunction::custom_measure(vec![(2.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(c.beta(1), 0.5);
        assert_eq!(c.beta(2), 1.5);
        assert!(ShapeFunction::custom_measure(vec![(1.0, 0.4)]).is_err());
        assert!(ShapeFunction::custom_measure(vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn shape_levels_are_minimal() {
        let s = ShapeFunction::by(10).unwrap();
        for &p in &[1e-4, 0.003, 0.02, 0.2] {
            match s.entry_level(p, 0.1, 0.1) {
                Some(l) => {
                    assert!(p_clears(p, 0.1, 0.1, s.beta(l)));
                    assert!(!p_clears(p, 0.1, 0.1, s.beta(l - 1)));
                }
                None => assert!(!p_clears(p, 0.1, 0.1, s.beta(10))),
            }
        }
    }

    #[test]
    fn storey_first_step() {
        let mut p = OnlineSbh::new(WeightSequence::geometric(0.5).unwrap(), 0.05, 0.5).unwrap();
        run(&mut p, &[0.9]);
        let s = p.storey();
        assert_eq!(s.gamma_max, 0.5);
        assert_eq!(s.over_lambda_mass, 0.5);
        assert_eq!(s.tail_mass, 0.5);
        assert_eq!(s.pi0_hat, 3.0);
    }

    #[test]
    fn storey_lambda_validation() {
        let w = WeightSequence::uniform(3).unwrap();
        assert!(OnlineSbh::new(w.clone(), 0.1, 0.05).is_err());
        assert!(OnlineSbh::new(w.clone(), 0.1, 1.0).is_err());
        assert!(OnlineSbh::new(w, 0.1, 0.1).is_ok());
    }

    #[test]
    fn lord_first_level() {
        let w = WeightSequence::geometric(0.9).unwrap();
        let mut p = Lord::new(w, 0.05).unwrap();
        run(&mut p, &[0.5]);
        assert!((p.test_levels()[0] - 0.005 * 0.1).abs() < 1e-18);
    }

    #[test]
    fn saffron_without_candidates_only_spends_initial_wealth() {
        let w = WeightSequence::geometric(0.9).unwrap();
        let mut p = Saffron::new(w, 0.05, 0.5).unwrap();
        run(&mut p, &[0.9; 200]);
        assert!(p.rejection_set().is_empty());
        assert!(p.condition_holds());
        let spent: f64 = p.test_levels().iter().sum();
        assert!(spent <= 0.5 * 0.025 + 1e-15);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let w = WeightSequence::uniform(3).unwrap();
        let e = Score::e_value(3.0).unwrap();
        assert!(OnlineBh::new(w.clone(), 0.1).unwrap().step(e).is_err());
        assert!(Lond::new(w.clone(), 0.1).unwrap().step(e).is_err());
        assert!(Lord::new(w.clone(), 0.1).unwrap().step(e).is_err());
        assert!(Saffron::new(w, 0.1, 0.5).unwrap().step(e).is_err());
    }
}
