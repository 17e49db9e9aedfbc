use std::fmt;
use std::process::ExitCode;

use stieltjes_core::Error;

/// Exit status contract: 0 success, 1 verification failure, 2 usage or
/// domain error, 3 numerical failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    VerifyFailed = 1,
    Usage = 2,
    Numerical = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: String) -> CliError {
        CliError {
            status: Status::Usage,
            message,
        }
    }

    pub fn numerical(message: String) -> CliError {
        CliError {
            status: Status::Numerical,
            message,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> CliError {
        CliError {
            status: Status::Usage,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let status = match e {
            Error::Domain { .. } | Error::Config(_) => Status::Usage,
            _ => Status::Numerical,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError {
            status: Status::Usage,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> CliError {
        CliError {
            status: Status::Usage,
            message: e.to_string(),
        }
    }
}
