//! Config-driven runs of the `qhgeo` library: moduli sweeps, geodesics and
//! the verification suites, with CSV and SVG outputs.

pub mod config;
pub mod io;
pub mod run;
pub mod suites;

pub use config::{ConfigError, RunConfig, Suite};
pub use run::{execute, Command, ExitStatus, Failure, RunReport};
