//! Exit statuses and the error type carried to `main`.

use std::fmt;

use conedet_core::{Error, ErrorClass};

pub const OK: i32 = 0;
pub const EXTENSION: i32 = 1;
pub const INPUT: i32 = 2;
pub const KERNEL: i32 = 3;
pub const DEGENERATE: i32 = 4;
pub const NUMERIC: i32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(INPUT, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub fn code_for(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Input => INPUT,
        ErrorClass::Extension => EXTENSION,
        ErrorClass::Kernel => KERNEL,
        ErrorClass::Degenerate => DEGENERATE,
        ErrorClass::Numeric => NUMERIC,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::new(code_for(e.class()), e.to_string())
    }
}
