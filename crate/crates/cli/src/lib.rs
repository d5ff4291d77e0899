//! Scenario runner for the `narrowfront` binary.
//!
//! A scenario is a JSON file naming a module, its parameters and a master
//! seed. [`run::execute`] validates it, computes every artifact in memory and
//! only then writes the output directory, so failed runs leave no tables
//! behind. See the README for the file format.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;

pub mod experiments;
pub mod output;
pub mod presets;
pub mod run;
pub mod scenario;

pub use scenario::Scenario;

/// Failure of a run, mapped onto the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    /// Malformed or out-of-range input. Exit code 1.
    Config(String),
    /// The computation itself failed. Exit code 2.
    Numeric(String),
    /// Reading the scenario or writing artifacts failed. Exit code 1.
    Io(String),
}

impl RunError {
    pub fn config(msg: impl Into<String>) -> Self {
        RunError::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Numeric(_) => 2,
            RunError::Config(_) | RunError::Io(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "configuration error: {m}"),
            RunError::Numeric(m) => write!(f, "numeric failure: {m}"),
            RunError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<narrowfront_core::Error> for RunError {
    fn from(e: narrowfront_core::Error) -> Self {
        if e.is_numeric() {
            RunError::Numeric(e.to_string())
        } else {
            RunError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}
