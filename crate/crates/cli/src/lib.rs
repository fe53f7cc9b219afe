//! Command line front end: input formats, command dispatch and exit codes.

pub mod commands;
pub mod coverfile;
pub mod curvefile;
pub mod error;

pub use commands::{run, Cli, Command, Format, Report, Theorem};
pub use error::{exit, CliError, ParseError};
