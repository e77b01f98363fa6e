//! Online multiple testing with accept-to-reject changes.
//!
//! Procedures consume one score per step and maintain nested rejection sets.
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod boosting;
pub mod e_procedures;
pub mod error;
pub mod level;
pub mod metrics;
pub mod normal;
pub mod oracles;
pub mod p_procedures;
pub mod simulate;
pub mod stream;

pub use e_procedures::{DeadlineSchedule, ELond, OnlineEbh, ETOAD};
pub use error::{Error, Result};
pub use metrics::{estimate_metrics, fdp, FdpPath, GroundTruth, TrialRecord};
pub use p_procedures::{Lond, Lord, OnlineBh, OnlineBr, OnlineSbh, RLond, Saffron, ShapeFunction, StoreyState, Toad};
pub use stream::{
    harmonic_number, is_self_consistent, OnlineProcedure, RejectionSet, Score, ScoreKind, StepReport, StreamState,
    WeightSequence,
};
