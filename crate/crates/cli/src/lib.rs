//! Experiment harness for the asymmetric-information document exchange
//! protocols in `asymde_core`: configuration, trial runner, JSON-lines
//! records, reports and sketch file IO.

pub mod config;
pub mod io;
pub mod record;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, ProtocolKind};
pub use record::TrialRecord;
pub use runner::run_experiment;
