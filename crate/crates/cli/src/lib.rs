//! Command implementations behind the `aacc` binary.
//!
//! Every command produces a text payload (JSON, or a code file for
//! `concat`) and an exit status:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success, all requested properties hold |
//! | 1 | a requested property fails / simulation not exact |
//! | 2 | tracing ended with conditions violated |
//! | 3 | input or usage error |
//! | 4 | budget or enumeration cap exceeded |

pub mod args;
mod commands;
mod io;

use std::process::ExitCode;

pub use commands::run;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    PropertyFails = 1,
    ConditionsViolated = 2,
    InputError = 3,
    BudgetExceeded = 4,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] aacc::Error),
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Lib(aacc::Error::BudgetExceeded(_) | aacc::Error::EnumerationCap { .. }) => {
                Status::BudgetExceeded
            }
            _ => Status::InputError,
        }
    }
}

/// Payload and exit status of one command.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub status: Status,
}
