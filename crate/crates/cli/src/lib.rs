//! Orchestration for the repdigit verification pipeline: configuration, the
//! subcommands, certificate persistence and the markdown report.

pub mod certificate;
pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

pub use certificate::{Certificate, Meta, RunStatus};
pub use commands::{cmd_bounds, cmd_reduce, cmd_report, cmd_search, cmd_verify_all, modulus_from_bound, CommandOutput};
pub use config::{OutputFormat, RunConfig};

/// Process exit status, one per failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    ConfigError,
    PrecisionFailure,
    Mismatch,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::ConfigError => 2,
            ExitStatus::PrecisionFailure => 3,
            ExitStatus::Mismatch => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] padovan_core::Error),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            CliError::Config(_) | CliError::Schema(_) | CliError::Io { .. } => ExitStatus::ConfigError,
            CliError::Core(e) => core_exit_status(e),
        }
    }
}

pub(crate) fn core_exit_status(e: &padovan_core::Error) -> ExitStatus {
    match e {
        padovan_core::Error::PrecisionExhausted { .. } | padovan_core::Error::DepthExhausted(_) => {
            ExitStatus::PrecisionFailure
        }
        _ => ExitStatus::Mismatch,
    }
}
