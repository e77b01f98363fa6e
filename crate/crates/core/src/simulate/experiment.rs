//! Monte-Carlo experiments over a grid of alternative probabilities.
//!
//! Each cell of the grid is one `π_A`; each trial draws one Gaussian stream
//! and feeds its p-values or e-values to every procedure in the roster, so
//! procedures are compared on common random numbers. The runner here is
//! sequential. [`Experiment::run_trial`] is pure, so callers can spread
//! trials over threads and hand the results to [`Experiment::summarize`].

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::boosting::{BoostFamily, BoostTable, BoostedOnlineEbh, GaussianLrModel};
use crate::e_procedures::{DeadlineSchedule, ELond, OnlineEbh, ETOAD};
use crate::error::{check_alpha, Error, Result};
use crate::metrics::{estimate_metrics, TrialRecord};
use crate::p_procedures::{Lond, Lord, OnlineBh, OnlineBr, OnlineSbh, RLond, Saffron, ShapeFunction, Toad};
use crate::simulate::gaussian::{generate_gaussian_trial, GaussianSetup, GaussianTrial};
use crate::simulate::rng::trial_rng;
use crate::simulate::roster::{ProcedureKind, RosterEntry};
use crate::stream::{e_clears, p_clears, OnlineProcedure, Score, ScoreKind, StreamState, WeightSequence};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Hypotheses per trial.
    pub n: usize,
    /// Trials per cell.
    pub m: usize,
    pub mu_a: f64,
    pub pi_a: Vec<f64>,
    pub batch: usize,
    pub rho: f64,
    /// Default geometric weight parameter.
    pub q: f64,
    pub alpha: f64,
    /// Storey / SAFFRON candidate threshold.
    pub lambda: f64,
    pub seed: u64,
    pub literal_p: bool,
    /// Series cutoff `s` for boosting; defaults to `n`.
    pub boost_cutoff: Option<u64>,
    /// Check nestedness, self-consistency and domination on every step.
    pub audit: bool,
}

impl ExperimentConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(n: usize, m: usize, mu_a: f64, pi_a: Vec<f64>, batch: usize, q: f64, alpha: f64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            m,
            mu_a,
            pi_a,
            batch,
            rho: 0.5,
            q,
            alpha,
            lambda: 0.5,
            seed,
            literal_p: false,
            boost_cutoff: None,
            audit: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.m < 2 {
            return Err(Error::InvalidParameter {
                name: "m",
                value: self.m as f64,
                reason: "need at least two trials",
            });
        }
        if self.pi_a.is_empty() {
            return Err(Error::EmptyInput("no pi_a values"));
        }
        if self.pi_a.len() > u32::MAX as usize || self.m > u32::MAX as usize {
            return Err(Error::InvalidParameter {
                name: "m",
                value: self.m as f64,
                reason: "too many trials or cells",
            });
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::InvalidParameter { name: "q", value: self.q, reason: "must lie in (0, 1)" });
        }
        if !(self.lambda >= self.alpha && self.lambda < 1.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: self.lambda,
                reason: "must lie in [alpha, 1)",
            });
        }
        if self.boost_cutoff == Some(0) {
            return Err(Error::InvalidParameter { name: "s", value: 0.0, reason: "cutoff must be at least 1" });
        }
        for &p in &self.pi_a {
            self.setup(p).validate()?;
        }
        Ok(())
    }

    pub fn setup(&self, pi_a: f64) -> GaussianSetup {
        GaussianSetup { n: self.n, mu_a: self.mu_a, pi_a, batch: self.batch, rho: self.rho, literal_p: self.literal_p }
    }

    pub fn cutoff(&self) -> u64 {
        self.boost_cutoff.unwrap_or(self.n as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Power,
    /// FDP at the horizon.
    Fdr,
    /// Running maximum of the FDP up to the horizon.
    SupFdr,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Power, Metric::Fdr, Metric::SupFdr];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Power => "power",
            Metric::Fdr => "fdr",
            Metric::SupFdr => "sup_fdr",
        }
    }
}

/// One line of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub procedure: String,
    pub pi_a: f64,
    pub mu_a: f64,
    pub q: f64,
    pub alpha: f64,
    pub metric: Metric,
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

type TableKey = (BoostFamily, bool, u64);

/// A validated configuration with its roster and precomputed boost tables.
#[derive(Debug, Clone)]
pub struct Experiment {
    cfg: ExperimentConfig,
    roster: Vec<RosterEntry>,
    tables: Vec<(TableKey, BoostTable)>,
    table_of: Vec<Option<usize>>,
    deadlines: DeadlineSchedule,
}

fn boost_shape(kind: ProcedureKind) -> Option<(BoostFamily, bool)> {
    match kind {
        ProcedureKind::BoostPlus => Some((BoostFamily::Plus, false)),
        ProcedureKind::BoostMinus => Some((BoostFamily::Minus, false)),
        ProcedureKind::LocalPlus => Some((BoostFamily::Plus, true)),
        ProcedureKind::LocalMinus => Some((BoostFamily::Minus, true)),
        _ => None,
    }
}

impl Experiment {
    pub fn prepare(cfg: ExperimentConfig, roster: Vec<RosterEntry>) -> Result<Self> {
        cfg.validate()?;
        if roster.is_empty() {
            return Err(Error::EmptyInput("the procedure roster is empty"));
        }
        let mut tables: Vec<(TableKey, BoostTable)> = Vec::new();
        let mut table_of = Vec::with_capacity(roster.len());
        for entry in &roster {
            let q = entry.effective_q(cfg.q);
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidParameter { name: "q", value: q, reason: "must lie in (0, 1)" });
            }
            let Some((family, local)) = boost_shape(entry.kind) else {
                table_of.push(None);
                continue;
            };
            let key = (family, local, q.to_bits());
            let pos = match tables.iter().position(|(k, _)| *k == key) {
                Some(pos) => pos,
                None => {
                    let model = GaussianLrModel::new(cfg.mu_a)?;
                    let weights = WeightSequence::geometric(q)?;
                    let max_lag = if local { cfg.n as u64 } else { 0 };
                    let table =
                        BoostTable::for_stream(model, family, cfg.cutoff(), cfg.alpha, &weights, cfg.n, max_lag)?;
                    tables.push((key, table));
                    tables.len() - 1
                }
            };
            table_of.push(Some(pos));
        }
        let b = cfg.batch;
        let deadlines = DeadlineSchedule::explicit((1..=cfg.n).map(|t| Some(t.div_ceil(b) * b)).collect())?;
        Ok(Experiment { cfg, roster, tables, table_of, deadlines })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn roster(&self) -> &[RosterEntry] {
        &self.roster
    }

    pub fn cells(&self) -> usize {
        self.cfg.pi_a.len()
    }

    pub fn trials(&self) -> usize {
        self.cfg.m
    }

    /// The data of one trial, reproducible from `(seed, cell, trial)` alone.
    pub fn trial_data(&self, cell: usize, trial: usize) -> Result<GaussianTrial> {
        let setup = self.cfg.setup(self.cfg.pi_a[cell]);
        generate_gaussian_trial(&setup, &mut trial_rng(self.cfg.seed, cell as u32, trial as u32))
    }

    fn build(&self, index: usize) -> Result<Box<dyn OnlineProcedure + '_>> {
        let entry = self.roster[index];
        let cfg = &self.cfg;
        let w = WeightSequence::geometric(entry.effective_q(cfg.q))?;
        let a = cfg.alpha;
        let by = || ShapeFunction::by(cfg.n);
        Ok(match entry.kind {
            ProcedureKind::OnlineEbh => Box::new(OnlineEbh::new(w, a)?),
            ProcedureKind::ELond => Box::new(ELond::new(w, a)?),
            ProcedureKind::EToad => Box::new(ETOAD::new(w, a, self.deadlines.clone())?),
            ProcedureKind::BoostPlus
            | ProcedureKind::BoostMinus
            | ProcedureKind::LocalPlus
            | ProcedureKind::LocalMinus => {
                let table = &self.tables[self.table_of[index].expect("boosted entries have tables")].1;
                let local = matches!(entry.kind, ProcedureKind::LocalPlus | ProcedureKind::LocalMinus);
                Box::new(BoostedOnlineEbh::new(w, a, table, local.then_some(cfg.batch))?)
            }
            ProcedureKind::OnlineBh => Box::new(OnlineBh::new(w, a)?),
            ProcedureKind::Lond => Box::new(Lond::new(w, a)?),
            ProcedureKind::RLond => Box::new(RLond::new(w, a, by()?)?),
            ProcedureKind::OnlineBr => Box::new(OnlineBr::new(w, a, by()?)?),
            ProcedureKind::Toad => Box::new(Toad::new(w, a, self.deadlines.clone(), ShapeFunction::Identity)?),
            ProcedureKind::OnlineSbh => Box::new(OnlineSbh::new(w, a, cfg.lambda)?),
            ProcedureKind::Lord => Box::new(Lord::new(w, a)?),
            ProcedureKind::Saffron => Box::new(Saffron::new(w, a, cfg.lambda)?),
        })
    }

    /// Runs every roster entry on one trial; records are in roster order.
    pub fn run_trial(&self, cell: usize, trial: usize) -> Result<Vec<TrialRecord>> {
        if cell >= self.cells() || trial >= self.trials() {
            return Err(Error::IndexOutOfRange { index: cell.max(trial), len: self.cells().max(self.trials()) });
        }
        let data = self.trial_data(cell, trial)?;
        let mut procs = Vec::with_capacity(self.roster.len());
        for (i, entry) in self.roster.iter().enumerate() {
            let mut proc = self.build(i)?;
            let (kind, values) = match entry.kind.score_kind() {
                ScoreKind::PValue => (ScoreKind::PValue, &data.p_values),
                ScoreKind::EValue => (ScoreKind::EValue, &data.e_values),
            };
            let mut audit = StepAudit::default();
            for &v in values {
                let report = proc.step(Score::new(kind, v)?)?;
                if self.cfg.audit {
                    audit.check(entry.kind, proc.state(), report.k_star, &report.newly_rejected)?;
                }
            }
            procs.push(proc);
        }
        if self.cfg.audit {
            self.check_domination(&procs)?;
        }
        procs.iter().map(|p| TrialRecord::from_state(p.state(), &data.truth)).collect()
    }

    fn dominance_pairs(&self) -> Vec<(usize, usize)> {
        use ProcedureKind::*;
        let minus_dominates = self.cfg.cutoff() >= self.cfg.n as u64;
        let mut pairs = Vec::new();
        for (i, a) in self.roster.iter().enumerate() {
            for (j, b) in self.roster.iter().enumerate() {
                let related = matches!(
                    (a.kind, b.kind),
                    (ELond, OnlineEbh) | (Lond, OnlineBh) | (RLond, OnlineBr) | (OnlineEbh, BoostPlus)
                ) || (minus_dominates && (a.kind, b.kind) == (OnlineEbh, BoostMinus));
                if related && a.effective_q(self.cfg.q) == b.effective_q(self.cfg.q) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// `R^sub_t ⊆ R^sup_t` at every t: each index rejected by `sub` at time s
    /// must be rejected by `sup` no later than s.
    fn check_domination(&self, procs: &[Box<dyn OnlineProcedure + '_>]) -> Result<()> {
        for (sub, sup) in self.dominance_pairs() {
            let (a, b) = (procs[sub].state(), procs[sup].state());
            for &j in a.rejection_set().indices() {
                let s = a.rejection_time(j);
                if b.rejection_time(j).is_none_or(|r| Some(r) > s) {
                    return Err(Error::InvariantViolation(alloc::format!(
                        "{} rejected {j} at {:?} but {} had not",
                        self.roster[sub].label(),
                        s,
                        self.roster[sup].label()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Aggregates `results[cell][trial][roster index]` into rows ordered by
    /// procedure, then `π_A`, then metric.
    pub fn summarize(&self, results: &[Vec<Vec<TrialRecord>>]) -> Result<Vec<ResultRow>> {
        if results.len() != self.cells() || results.iter().any(|c| c.len() != self.trials()) {
            return Err(Error::InvalidParameter {
                name: "results",
                value: results.len() as f64,
                reason: "shape mismatch",
            });
        }
        let mut rows = Vec::new();
        for (p, entry) in self.roster.iter().enumerate() {
            for (cell, trials) in results.iter().enumerate() {
                let records: Vec<TrialRecord> = trials.iter().map(|r| r[p].clone()).collect();
                let est = estimate_metrics(&records, None, None)?;
                for metric in Metric::ALL {
                    let e = match metric {
                        Metric::Power => est.power,
                        Metric::Fdr => est.fdr,
                        Metric::SupFdr => est.sup_fdr,
                    };
                    rows.push(ResultRow {
                        procedure: entry.label(),
                        pi_a: self.cfg.pi_a[cell],
                        mu_a: self.cfg.mu_a,
                        q: entry.effective_q(self.cfg.q),
                        alpha: self.cfg.alpha,
                        metric,
                        value: e.mean,
                        stderr: e.stderr,
                        n: self.cfg.n,
                        m: self.cfg.m,
                        seed: self.cfg.seed,
                    });
                }
            }
        }
        Ok(rows)
    }

    /// All trials, sequentially, as `[cell][trial][roster index]`.
    pub fn run_all(&self) -> Result<Vec<Vec<Vec<TrialRecord>>>> {
        (0..self.cells()).map(|c| (0..self.trials()).map(|t| self.run_trial(c, t)).collect()).collect()
    }

    pub fn run(&self) -> Result<Vec<ResultRow>> {
        self.summarize(&self.run_all()?)
    }
}

/// Per-step checks for one procedure on one stream.
#[derive(Debug, Default)]
struct StepAudit {
    rejected: usize,
    k_star: usize,
    members: Vec<usize>,
}

fn clears_at(state: &StreamState, j: usize, k: usize) -> bool {
    let (v, g, a) = (state.scores()[j - 1], state.gamma(j), state.alpha());
    match state.kind() {
        ScoreKind::EValue => e_clears(v, a, g, k as u64),
        ScoreKind::PValue => k > 0 && p_clears(v, a, g, k as f64),
    }
}

impl StepAudit {
    fn check(&mut self, kind: ProcedureKind, state: &StreamState, k_star: usize, newly: &[usize]) -> Result<()> {
        let t = state.time();
        let fail = |what: &str| Err(Error::InvariantViolation(alloc::format!("{kind} at t={t}: {what}")));
        for &j in newly {
            if state.rejection_time(j) != Some(t) || j > t {
                return fail("a reported rejection is not new");
            }
            if !kind.is_arc() && j != t {
                return fail("a non-ARC procedure revisited an earlier decision");
            }
        }
        if state.num_rejected() != self.rejected + newly.len() {
            return fail("the rejection set shrank or changed outside the report");
        }
        self.rejected = state.num_rejected();
        self.members.extend_from_slice(newly);
        if !(kind.is_self_consistent_type() || kind.is_boosted()) {
            return Ok(());
        }
        if k_star < self.k_star {
            return fail("k* decreased");
        }
        if self.rejected != k_star {
            return fail("|R_t| differs from k*");
        }
        // R_t must be exactly {j ≤ t : j clears at k*}. When k* is unchanged
        // only the new arrival can differ from R_{t-1}.
        if k_star != self.k_star {
            let expected = (1..=t).filter(|&j| clears_at(state, j, k_star)).count();
            if expected != self.rejected || self.members.iter().any(|&j| !clears_at(state, j, k_star)) {
                return fail("R_t is not the set of hypotheses clearing at k*");
            }
        } else if newly.iter().any(|&j| j != t) || state.is_rejected(t) != clears_at(state, t, k_star) {
            return fail("R_t changed although k* did not");
        }
        self.k_star = k_star;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::roster::parse_roster;

    fn small(audit: bool) -> Experiment {
        let mut cfg = ExperimentConfig::new(100, 4, 3.5, vec![0.2, 0.6], 20, 0.99, 0.05, 9);
        cfg.audit = audit;
        Experiment::prepare(cfg, parse_roster("all").unwrap()).unwrap()
    }

    #[test]
    fn audited_run_succeeds_and_rows_have_shape() {
        let exp = small(true);
        let rows = exp.run().unwrap();
        assert_eq!(rows.len(), 15 * 2 * 3);
        assert_eq!(rows[0].procedure, "oe-bh");
        assert_eq!(rows[0].metric, Metric::Power);
        assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.value)));
    }

    #[test]
    fn trials_are_reproducible() {
        let exp = small(false);
        assert_eq!(exp.run_trial(1, 3).unwrap(), exp.run_trial(1, 3).unwrap());
        assert_ne!(exp.trial_data(1, 3).unwrap(), exp.trial_data(1, 2).unwrap());
    }

    #[test]
    fn config_validation() {
        let cfg = ExperimentConfig::new(100, 1, 3.5, vec![0.2], 20, 0.99, 0.05, 9);
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig::new(100, 5, 3.5, vec![0.2], 30, 0.99, 0.05, 9);
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig::new(100, 5, 3.5, vec![], 20, 0.99, 0.05, 9);
        assert!(cfg.validate().is_err());
    }
}
