//! Experiment plumbing: configs, reports, the shell cache and verify suites.

pub mod cache;
pub mod config;
pub mod report;
pub mod run;
pub mod suites;

pub use cache::{read_shell, write_shell, ShellCache};
pub use config::{ExperimentConfig, Kind};
pub use report::{Check, RunReport, RNG_ALGORITHM};
pub use run::{run_experiment, run_experiment_with};
pub use suites::{run_suite, SuiteOptions, SUITES};
