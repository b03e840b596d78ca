//! Figure-reproduction runs for the polaron master-equation model: JSON
//! configuration, declarative presets, parallel sweeps, CSV tables and SVG
//! charts.

pub mod config;
pub mod error;
pub mod plot;
pub mod presets;
pub mod run;
pub mod svg;
pub mod sweep;
pub mod table;

pub use config::Config;
pub use error::{ConfigError, Result, SimError};
pub use presets::{Command, Preset};
pub use sweep::{SweepResult, SweepSpec};
pub use table::Table;
