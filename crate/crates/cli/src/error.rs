use serde_json::json;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const VIOLATION: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pfa_tqft::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(pfa_tqft::Error::Parameter(_) | pfa_tqft::Error::Parse { .. }) => {
                exit::USAGE
            }
            CliError::Core(_) | CliError::Io { .. } => exit::NUMERICAL,
            CliError::Violation(_) => exit::VIOLATION,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(pfa_tqft::Error::Parameter(_)) => "parameter",
            CliError::Core(pfa_tqft::Error::Parse { .. }) => "parse",
            CliError::Core(_) => "numerical",
            CliError::Io { .. } => "io",
            CliError::Violation(_) => "violation",
        }
    }

    /// Single-line JSON error record for stderr.
    pub fn record(&self) -> String {
        json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}
