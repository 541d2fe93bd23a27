//! Batch driver for `entropic-core`: TOML scenario files, parameter sweeps,
//! verification suites and CSV/SVG output.

pub mod compare;
pub mod config;
pub mod omega;
pub mod output;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} verification properties failed")]
    VerificationFailed(usize),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 config (or input) error, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
        }
    }

    /// Wraps a core error raised while evaluating `context`.
    pub fn from_core(context: impl std::fmt::Display, e: entropic_core::Error) -> Self {
        match e {
            entropic_core::Error::BudgetExceeded { .. } | entropic_core::Error::WorkBudgetExceeded { .. } => {
                CliError::Budget(format!("{context}: {e}"))
            }
            _ => CliError::Config(format!("{context}: {e}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
