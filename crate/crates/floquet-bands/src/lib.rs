//! Command-line driver for `floquet-core`: configuration files, named
//! potentials, parallel energy scans, and CSV/JSON output.
//!
//! ```text
//! floquet-bands verify --potential "cos(2*x)+0.45i*sin(2*x)" --e-range -1:10 --n 100
//! floquet-bands bands --preset mathieu --out bands.csv
//! floquet-bands hill-compare --preset pt-lattice --v0 0.3
//! ```
//!
//! Exit statuses: 0 pass, 1 usage or config error, 2 potential failed PT or
//! periodicity validation, 3 identity or comparison check failed, 4 internal
//! numerical error.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod scan;

pub use config::{ConfigLayer, OutputFormat, RunConfig};
pub use error::{exit, CliError};
pub use presets::Preset;
