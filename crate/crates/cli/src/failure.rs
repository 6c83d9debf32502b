use std::fmt;
use std::io;
use std::path::Path;

use rss_core::Error;

/// Invalid usage, parameters, or share files.
pub const USAGE: u8 = 2;
/// Reading or writing a file failed.
pub const IO: u8 = 3;
/// Shares disagree with each other or with the embedded digest.
pub const INTEGRITY: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        Failure {
            code: IO,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Inconsistent { .. } | Error::DigestMismatch | Error::Corrupted(_) => INTEGRITY,
            _ => USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}
