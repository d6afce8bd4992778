//! Configuration, benchmark presets and the batch drivers behind the CLI.

pub mod config;
pub mod convergence;
pub mod detect;
pub mod ic;
pub mod presets;
pub mod run;

pub use config::{Reference, RunConfig, Schedule};
pub use convergence::{cmd_convergence, run_convergence, ConvergenceTable};
pub use detect::{detect, DetectReport, CORPUS};
pub use ic::{ExactSolution, InitialCondition};
pub use run::{error_norms, ErrorNorms, cmd_run, run_simulation, setup, setup_with, RunSummary, Setup};
