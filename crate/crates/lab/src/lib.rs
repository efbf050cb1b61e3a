//! Experiment driver for `isoflow-core`: configuration, the experiments
//! themselves, CSV/JSON artifacts and report merging.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{LabError, LabResult};
pub use experiments::Experiment;
