//! Front-end error type and the exit-code contract.
//!
//! The process exit code is part of the tool's interface: scripts dispatch on
//! it without parsing certificates. `0` means every check in the written
//! certificate passed; `1` means the run completed but at least one check
//! failed; `2` is reserved for argument parsing (emitted by the parser
//! itself); `3` means a precondition was violated before any verdict was
//! possible (bad family label, unavailable construction, malformed input
//! certificate); `4` means a seeded generic-position search exhausted its
//! resampling budget; `5` means the filesystem got in the way.

use std::fmt;

use cicy_core::CoreError;

#[derive(Debug)]
pub enum CliError {
    /// A check ran to completion and failed; the certificate says which.
    CheckFailed,
    /// Inputs violate a documented precondition.
    Hypothesis(String),
    /// A randomized search gave up; the message carries the seed to replay.
    Resampling(String),
    /// Reading or writing an artifact failed.
    Io(String),
    /// A certificate file did not match the schema.
    Schema(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed => 1,
            CliError::Hypothesis(_) => 3,
            CliError::Resampling(_) => 4,
            CliError::Io(_) | CliError::Schema(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::CheckFailed => write!(f, "one or more checks failed"),
            CliError::Hypothesis(what) => write!(f, "precondition violated: {what}"),
            CliError::Resampling(what) => write!(f, "resampling budget exhausted: {what}"),
            CliError::Io(what) => write!(f, "io error: {what}"),
            CliError::Schema(what) => write!(f, "certificate schema error: {what}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ResamplingExhausted { .. } => CliError::Resampling(e.to_string()),
            CoreError::SplittingUndetermined(_) => CliError::Hypothesis(e.to_string()),
            _ => CliError::Hypothesis(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}
