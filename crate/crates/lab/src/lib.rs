//! Experiment runner for `ngd-core`: parameter files, the experiment
//! catalog, CSV output and frequency-response tables.

pub mod config;
pub mod error;
pub mod experiments;
pub mod format;
pub mod response;

pub use config::{Overrides, Settings};
pub use error::{LabError, Result};
pub use experiments::{catalog, Experiment, Outcome};
