//! Configuration, snapshot I/O, reports and command orchestration for the
//! `mps` driver.

pub mod config;
pub mod report;
pub mod run;
pub mod snapshot;

pub use config::{parse_config, parse_config_with, resolve_config, Command, Config, ConfigError};
pub use run::{run, RunError, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_OK};
pub use snapshot::{decode, encode, read_snapshot, write_snapshot, Snapshot, SnapshotError};
