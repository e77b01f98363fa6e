//! Reproducible per-trial random substreams.
//!
//! Every trial draws from `ChaCha12Rng::seed_from_u64(master)` with stream id
//! `(cell << 32) | trial`, so a trial's numbers do not depend on which other
//! trials run, in what order, or on how many threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type TrialRng = ChaCha12Rng;

/// The generator for trial `trial` of parameter cell `cell`.
pub fn trial_rng(master_seed: u64, cell: u32, trial: u32) -> TrialRng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream((u64::from(cell) << 32) | u64::from(trial));
    rng
}
