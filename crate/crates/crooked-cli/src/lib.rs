//! Library half of the `crooked` command line tool: configuration,
//! deterministic SVG/OBJ emitters, plain-text reports, and the command
//! implementations. `main.rs` only parses arguments and dispatches.

#![allow(clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod obj;
pub mod report;
pub mod svg;

/// Process exit codes: success, verification failure, invalid input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailure,
    InvalidInput,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailure => 1,
            Outcome::InvalidInput => 2,
        }
    }
}

/// Errors surfaced to the user, each tied to an exit code.
#[derive(Debug)]
pub struct CliError {
    pub outcome: Outcome,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> CliError {
        CliError {
            outcome: Outcome::InvalidInput,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> CliError {
        CliError {
            outcome: Outcome::VerificationFailure,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<crooked_core::GeomError> for CliError {
    fn from(e: crooked_core::GeomError) -> CliError {
        CliError::invalid(format!("geometry error: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError {
            outcome: Outcome::InvalidInput,
            message: format!("io error: {e}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
