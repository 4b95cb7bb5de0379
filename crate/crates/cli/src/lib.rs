//! File formats, shard-parallel evaluation and the `solvword` command line
//! on top of `solvword-core`.

mod cli;
pub mod error;
pub mod format;
pub mod parallel;

pub use cli::{group_from_json, run, Cli};
pub use error::{CliError, CliResult};
