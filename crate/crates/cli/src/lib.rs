//! Experiment harness for the acwave solver: built-in benchmark
//! problems, error and convergence reporting, snapshot output, run
//! configuration, and the drivers behind the `acwave` binary.

pub mod config;
pub mod experiments;
pub mod report;
pub mod runner;
pub mod snapshot;

pub use config::RunConfig;
pub use report::{convergence_order, error_norms, ErrorReport};
pub use runner::{run, HarnessError};
