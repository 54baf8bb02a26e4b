//! Instance-file parsing and command execution for the `ipgcd` binary.

pub mod parse;
pub mod report;
pub mod run;

pub use parse::{parse, DivFile, InputError, Parsed};
pub use report::{Analysis, Report, Stats, Status};
pub use run::{exit_code, run, Command, Options};
