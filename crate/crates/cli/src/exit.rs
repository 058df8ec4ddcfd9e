// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fmt;

use cusum_lp::Error;

pub const PARSE: u8 = 2;
pub const INADMISSIBLE: u8 = 3;
pub const INSUFFICIENT_DATA: u8 = 4;
pub const UNWRITABLE_OUTPUT: u8 = 5;
pub const QUADRATURE: u8 = 6;
pub const OTHER: u8 = 1;

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }

    pub fn parse(msg: impl fmt::Display) -> Self {
        Self::new(PARSE, anyhow::anyhow!("{msg}"))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::InvalidParameter(_)
        | Error::InvalidModel(_)
        | Error::Precision { .. } => PARSE,
        Error::InadmissibleWeight { .. }
        | Error::DivergentLimit { .. }
        | Error::InvalidTrim { .. } => INADMISSIBLE,
        Error::InsufficientData { .. } => INSUFFICIENT_DATA,
        Error::Accuracy { .. } => QUADRATURE,
        _ => OTHER,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::new(code_for(&e), e)
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub trait WithCode<T> {
    fn exit_code(self, code: u8) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> WithCode<T> for Result<T, E> {
    fn exit_code(self, code: u8) -> CliResult<T> {
        self.map_err(|e| Failure::new(code, e))
    }
}
