//! Experiment runner and file formats for the `relaynet` command-line tool.

pub mod files;
pub mod sweep;

pub use sweep::{run_sweep, write_csv, AlgorithmSpec, ScenarioSource, SweepReport, SweepSpec};
