//! Std companion to `arcfdr-core`: a parallel experiment runner, CSV output,
//! flat config files and the commands behind the `arcfdr` binary.

pub use arcfdr_core as core;

pub mod checks;
pub mod cli;
pub mod config;
pub mod output;
pub mod parallel;
pub mod stream;
