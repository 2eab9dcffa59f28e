//! Experiment harness for the torus walk search: configuration, sweeps,
//! CSV records, scaling summaries and the pass/fail criteria behind
//! `torus-search verify`.

pub mod config;
pub mod criteria;
pub mod experiment;
pub mod record;
pub mod report;

pub use config::{Algo, ExperimentSpec, Window};
pub use experiment::run_experiment;
pub use record::ExperimentRecord;
pub use report::{scaling_report, ScalingSummary};
