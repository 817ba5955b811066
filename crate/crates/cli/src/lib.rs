//! Command-line front end: resolve a [`RunConfig`], run one of the
//! subcommands and emit its CSV table.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod run;

pub use config::{Cli, Command, Flags, RunConfig};
pub use error::CliError;
pub use run::{render, run, RunOutput, Status};

/// Environment variable limiting worker threads.
pub const THREADS_ENV: &str = "GCDSUM_THREADS";

/// Size the global thread pool from `GCDSUM_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    if n == 0 {
        return Err(CliError::Config(format!("{THREADS_ENV} must be positive")));
    }
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
