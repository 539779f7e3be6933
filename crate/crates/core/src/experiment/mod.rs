//! Config-driven experiment runner behind the `pullback` binary.

mod config;
mod runner;

pub use config::{
    BoundarySection, ContourSection, ExperimentConfig, ExperimentKind, GridSection, NormSection,
    ProbeSection, ScanSection, SweepSection, TimeSection,
};
pub use runner::{
    list_experiments, run_config, run_file, RunFailure, RunOptions, RunReport, EXIT_NUMERICAL,
    EXIT_OK, EXIT_VALIDATION,
};
