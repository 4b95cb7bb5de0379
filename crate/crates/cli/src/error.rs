use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] solvword_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const CAP: i32 = 3;
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use solvword_core::Error as E;
        match self {
            CliError::Core(E::CapExceeded { .. } | E::OracleTooLarge { .. }) => "cap_exceeded",
            CliError::Core(E::InvariantViolation(_)) => "invariant_violation",
            CliError::Core(_) | CliError::Input(_) => "input",
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "json",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "cap_exceeded" => exit::CAP,
            "invariant_violation" => exit::FAILED,
            _ => exit::INPUT,
        }
    }

    /// One line of JSON for standard error.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&ErrorLine {
            error: self.kind(),
            message: self.to_string(),
        })
        .expect("serializable")
    }
}
