//! Experiment orchestration: configuration, the end-to-end run, variant
//! comparison, metrics and file output.

mod config;
mod experiment;
pub mod export;
pub mod metrics;
pub mod plot;

pub use config::{ChannelKind, ExperimentConfig, Variant};
pub use experiment::{
    compare_variants, run_experiment, sweep, Comparison, ComparisonRow, RunResult, SweepRow,
    VariantSummary,
};
pub use metrics::{asymptotic_mse, convergence_iterations};
