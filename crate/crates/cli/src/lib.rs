//! Batch front end for `k3walls-core`: a config goes in, a deterministic
//! report comes out as an aligned text table, JSON, or an SVG wall diagram.

pub mod config;
pub mod emit;
pub mod report;

pub use config::{AnalysisConfig, Command, ConfigError, Format};
pub use emit::{emit, from_json, to_json};
pub use report::{run, run_with_env, AnalysisReport, Payload, RunError};
