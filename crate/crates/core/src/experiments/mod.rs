//! Seeded experiment harness and the `coremix` command line.

pub mod cli;
mod coalesce;
mod record;
mod runs;

pub use coalesce::{simulate_coalesce, CoalesceOutcome, CoalesceParams};
pub use record::{
    summarize, ExperimentConfig, Gate, GateResult, RunRecord, SummaryRow, TrialRecord, ZLaw, CONFIG_SCHEMA,
};
pub use runs::{
    exp_coalesce, exp_diameter, exp_giant_sizes, exp_kernel_expansion, exp_scaling_mixing, exp_simple_fraction,
    exp_tails, residual_component_edges, run_experiment, EXPERIMENTS, THREADS_ENV,
};
