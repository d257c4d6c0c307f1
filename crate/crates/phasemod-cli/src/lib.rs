//! Command-line front end: flag parsing, bit-stable CSV/JSON emission, and a
//! thread-parallel campaign runner.
//!
//! Output is reproducible byte for byte: every floating-point value is
//! serialized with 17 significant digits (exact binary64 round-trip), key
//! order is fixed, and every document embeds the fully resolved
//! configuration it was produced from.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numeric failure,
//! 4 verification failure.

pub mod args;
pub mod commands;
pub mod fmt;
pub mod parallel;

/// Usage/config errors exit 2, numeric failures exit 3.
#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            exit_code: 2,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            exit_code: 3,
            message: message.into(),
        }
    }

    /// Map a core error onto the exit-code taxonomy.
    pub fn from_core(err: phasemod_core::Error) -> Self {
        use phasemod_core::Error;
        match &err {
            Error::InvalidConfig(_) | Error::UnsupportedModel { .. } => Self::usage(err.to_string()),
            _ => Self::numeric(err.to_string()),
        }
    }
}
