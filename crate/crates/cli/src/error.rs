use std::fmt;
use std::process::ExitCode;

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config values or unparseable arguments. Status 1.
    Usage(String),
    /// Unreadable or unwritable files and malformed input files. Status 2.
    Io(String),
    /// The solver ran out of budget before reaching a verdict. Status 3.
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Budget(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

pub fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn io(context: impl fmt::Display, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{context}: {e}"))
}
