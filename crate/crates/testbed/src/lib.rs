//! Benchmark harness around `lfe-core`: the test-function registry, CSV
//! sample ingestion, error sweeps with table presets, a factor cache, and
//! the `lfe` command-line tool.

pub mod cache;
pub mod error;
pub mod ingest;
pub mod registry;
pub mod report;
pub mod sweep;

pub use error::CliError;
