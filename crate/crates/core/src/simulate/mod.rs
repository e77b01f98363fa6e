//! Data generators and the experiment runner.

pub mod adversarial;
pub mod experiment;
pub mod gaussian;
pub mod rng;
pub mod roster;

pub use adversarial::{
    construct_adversarial, generate_adversarial_trial, online_bh_fdp_at_stop, run_adversarial, AdversarialConfig,
    AdversarialSummary, AdversarialTrial,
};
pub use experiment::{Experiment, ExperimentConfig, Metric, ResultRow};
pub use gaussian::{generate_gaussian_trial, GaussianSetup, GaussianTrial};
pub use rng::{trial_rng, TrialRng};
pub use roster::{parse_roster, ProcedureKind, RosterEntry};
