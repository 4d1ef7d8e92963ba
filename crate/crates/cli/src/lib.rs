//! Command-line front end for `fading_cvqkd`: point evaluations, parallel
//! parameter sweeps with CSV/SVG output, variance optimization, positivity
//! thresholds and Monte-Carlo checks.

pub mod approach;
pub mod config;
mod error;
pub mod mc;
pub mod output;
pub mod presets;
pub mod svg;
pub mod sweep;
pub mod threshold;

pub use approach::{attenuation_db, run_point, Approach};
pub use config::SweepConfig;
pub use error::CliError;
pub use threshold::{find_positive_threshold, Threshold, ThresholdError};
