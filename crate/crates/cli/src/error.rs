use std::fmt;

use asram::ErrorCategory;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const PRECISION: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const VERIFICATION: i32 = 5;
}

/// A syntax or semantic error tied to a line of an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 means end of input.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "end of input: {}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error(transparent)]
    Core(#[from] asram::Error),
    #[error("{0} violation(s)")]
    Violations(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => exit::USAGE,
            CliError::Parse { .. } => exit::PARSE,
            CliError::Core(e) => match e.category() {
                ErrorCategory::Precision => exit::PRECISION,
                ErrorCategory::Domain => exit::DOMAIN,
                ErrorCategory::Verification => exit::VERIFICATION,
            },
            CliError::Violations(_) => exit::VERIFICATION,
        }
    }

    pub(crate) fn parse(file: &str, error: ParseError) -> Self {
        CliError::Parse {
            file: file.to_string(),
            error,
        }
    }
}
