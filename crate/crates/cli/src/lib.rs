//! Sweeps, trajectory ledgers and inequality suites on top of
//! `qthermo-core`, with JSON configuration and CSV / JSON tables.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod random;
pub mod scenarios;

pub use config::{Format, GridAxis, Scenario, SweepConfig};
pub use error::{CliError, CliResult};
pub use scenarios::{run, Report};
