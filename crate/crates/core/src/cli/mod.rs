//! Sweep runner and self-check report behind the `noma-perf` binary.

mod config;
mod sweep;
mod verify;

pub use config::{db_to_linear, RunConfig, DEFAULT_SEED};
pub use sweep::{run_sweep, Axis, CSV_HEADER};
pub use verify::{run_checks, verify, Check};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;

/// Process exit code for an error that aborted a run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CompositionCap { .. } => EXIT_RESOURCE_CAP,
        _ => EXIT_INVALID_INPUT,
    }
}
