//! Batch front end for the blow-up laboratory.
//!
//! The binary reads a flat `key = value` configuration, runs one of
//! the named experiments, and leaves a JSON record plus CSV/SVG data
//! files in the output directory. Exit codes: 0 success, 2 config
//! error, 3 numerical invariant violation.

use std::fmt;

pub mod config;
pub mod experiment;
pub mod output;

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing configuration; nothing was computed. Exit 2.
    Config(String),
    /// The run itself broke a numerical invariant (non-finite state,
    /// violated fence, failed certificate). Exit 3.
    Numerics(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerics(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numerics(msg) => write!(f, "numerical invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Sort library errors into the two exit families: precondition
/// violations are configuration problems, non-finite states are
/// numerical ones.
pub fn lift(e: blowup_lab::Error) -> CliError {
    match e {
        blowup_lab::Error::NonFinite { .. } | blowup_lab::Error::NonFiniteState { .. } => {
            CliError::Numerics(e.to_string())
        }
        other => CliError::Config(other.to_string()),
    }
}
