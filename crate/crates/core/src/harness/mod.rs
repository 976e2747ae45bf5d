//! Monte Carlo experiments, statistics, cost accounting and persistence.

mod config;
mod cost;
mod experiment;
mod output;
mod stats;

pub use config::{apply_key_values, load_config, parse_format, parse_key_values, parse_protocol};
pub use cost::qubit_cycles;
pub use experiment::{
    default_p_in_sweep, run_circuit, run_distillation, run_distillation_counts, run_logical,
    run_memory, run_memory_baseline, run_subcircuit_comparison, ExperimentConfig, MemoryStats,
    OutputFormat, RunCounts, SubcircuitBasisRun, SubcircuitComparison,
};
pub use output::{
    csv_string, json_string, plot_data, read_csv, rows_for, write_csv, ResultRow, CSV_HEADER,
};
pub use stats::{
    binomial_sigma, loglog_slope, wilson_interval, within_sigma, ExperimentStats, Z95,
};
