//! Sweep orchestration, caching and table emission on top of `altxxz`.

pub mod config;
pub mod emit;
pub mod error;
pub mod recipe;
pub mod record;
pub mod sweep;
pub mod table;
pub mod validate;

pub use config::SweepConfig;
pub use error::{CliError, Result};
pub use sweep::{run_sweep, RunOptions, SweepRun};
