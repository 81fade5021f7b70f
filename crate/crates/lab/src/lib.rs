pub mod config;
pub mod error;
pub mod estimate;
pub mod plot;
pub mod record;
pub mod sweep;

pub use config::{Metric, SweepConfig};
pub use error::{LabError, Result};
pub use record::TrialRecord;
