use std::fmt;

use serde::Serialize;

/// Exit status 2: the inputs were rejected.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status 3: a solver did not converge.
pub const EXIT_SOLVER: i32 = 3;
/// Exit status 4: reading or writing a file failed.
pub const EXIT_IO: i32 = 4;

/// Error carrying its exit status and a short machine-readable kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind: "validation",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            kind: "io",
            message: message.into(),
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error report serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind, self.message)
    }
}

impl From<fluctua_core::Error> for CliError {
    fn from(e: fluctua_core::Error) -> Self {
        use fluctua_core::Error as E;
        let (code, kind) = match &e {
            E::Io(_) => (EXIT_IO, "io"),
            E::NoSolution(_) | E::SingularDerivative(_) => (EXIT_SOLVER, "solver"),
            e if e.is_convergence_failure() => (EXIT_SOLVER, "solver"),
            _ => (EXIT_VALIDATION, "validation"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}
