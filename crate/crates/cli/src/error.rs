use std::fmt;

use widths_core::Error;

pub const EX_INCONCLUSIVE: u8 = 2;
pub const EX_USAGE: u8 = 64;
pub const EX_DATAERR: u8 = 65;
pub const EX_NOINPUT: u8 = 66;
pub const EX_SOFTWARE: u8 = 70;
pub const EX_IOERR: u8 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EX_USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self { code: EX_DATAERR, message: message.into() }
    }

    pub fn no_input(message: impl Into<String>) -> Self {
        Self { code: EX_NOINPUT, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: EX_IOERR, message: message.into() }
    }

    /// Core errors raised while checking user-supplied arguments.
    pub fn from_core_usage(e: Error) -> Self {
        match e {
            Error::InvalidDomain(_) | Error::DomainError(_) => Self::usage(e.to_string()),
            other => other.into(),
        }
    }

    /// Core errors raised while reading a data file.
    pub fn from_core_data(e: Error) -> Self {
        match e {
            Error::InvalidDomain(_)
            | Error::InvalidNetwork(_)
            | Error::JunctionOffBoundary { .. }
            | Error::GeneralizedNetwork => Self::data(e.to_string()),
            other => other.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InconclusiveCertificate(_) => EX_INCONCLUSIVE,
            Error::InvalidDomain(_) | Error::DomainError(_) => EX_USAGE,
            Error::InvalidNetwork(_) | Error::JunctionOffBoundary { .. } | Error::GeneralizedNetwork => EX_DATAERR,
            _ => EX_SOFTWARE,
        };
        Self { code, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
