//! Experiment orchestration: JSON configs, runs, convergence studies, kernel
//! self-checks and CSV persistence. Everything here works in `f64`.

pub mod config;
pub mod experiment;
pub mod output;
pub mod selfcheck;

pub use config::{CurveSpec, DataSpec, ExperimentConfig, FieldFlux, OutputSpec, ReferenceSpec};
pub use experiment::{
    convergence_study, parse_levels, run_direct, run_experiment, ConvergenceRow, ExperimentReport,
    FieldSummary,
};
pub use selfcheck::{kernel_selfcheck, CheckOutcome, SelfCheckSummary};
