//! CLI error channel: every failure maps to a machine-readable JSON object
//! on stderr and a documented exit code (2 = validation, 3 = out of
//! regime / truncation, 1 = I/O).

use serde::Serialize;

use crate::config::ValidationError;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Core(weakval::Error),
    Io(std::io::Error),
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        CliError::Validation(e.0)
    }
}

impl From<weakval::Error> for CliError {
    fn from(e: weakval::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    code: &'a str,
    message: String,
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Core(e) => match e {
                weakval::Error::OutOfRegime { .. } | weakval::Error::Truncation { .. } => 3,
                _ => 2,
            },
            CliError::Io(_) => 1,
        }
    }

    pub fn to_stderr_json(&self) -> String {
        let message = match self {
            CliError::Validation(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        };
        serde_json::to_string(&ErrorObject {
            code: self.code(),
            message,
        })
        .expect("error object serializes")
    }
}
