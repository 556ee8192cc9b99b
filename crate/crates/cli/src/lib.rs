//! Document handling and subcommands behind the `algpencil` binary.

pub mod commands;
pub mod document;

use rayon::prelude::*;

pub use commands::Report;

/// Runs `f` over every input concurrently; results keep input order.
pub fn run_batch<T, F>(inputs: &[T], f: F) -> Vec<Report>
where
    T: Sync,
    F: Fn(&T) -> Report + Sync + Send,
{
    inputs.par_iter().map(f).collect()
}
