//! File formats, configuration and subcommands behind the `tbell` binary.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub mod commands;
pub mod config;
pub mod kv;
pub mod manifest;
pub mod records;
pub mod table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for bad arguments or inputs, 3 for I/O failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Parse(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Mismatch(_) | CliError::Internal(_) => 1,
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        })*
    };
}

invalid_from!(
    tbell_core::quantum::QuantumError,
    tbell_core::experiment::ExperimentError,
    tbell_core::relativity::RelativityError,
    tbell_core::lhv::LhvError
);
