//! Trials spread over the rayon pool, collected back in `(cell, trial)` order.

use anyhow::Result;
use arcfdr_core::metrics::TrialRecord;
use arcfdr_core::simulate::{Experiment, ResultRow};
use rayon::prelude::*;

/// Same shape and contents as [`Experiment::run_all`].
pub fn run_trials(exp: &Experiment) -> Result<Vec<Vec<Vec<TrialRecord>>>> {
    let (cells, trials) = (exp.cells(), exp.trials());
    let flat: Vec<Vec<TrialRecord>> = (0..cells * trials)
        .into_par_iter()
        .map(|job| exp.run_trial(job / trials, job % trials))
        .collect::<Result<_, _>>()?;
    let mut it = flat.into_iter();
    Ok((0..cells).map(|_| it.by_ref().take(trials).collect()).collect())
}

pub fn run_experiment(exp: &Experiment) -> Result<Vec<ResultRow>> {
    Ok(exp.summarize(&run_trials(exp)?)?)
}

/// Runs `f` on a pool with `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
        None => Ok(f()),
    }
}
