use std::fmt;
use std::path::Path;

use nlsearch_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Core(CoreError),
    Io { path: String, source: std::io::Error },
    /// A sweep failed part way; the completed rows were still written.
    Partial { written: usize, source: Box<CliError> },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// 2 domain, 3 non-convergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Core(e) => match e {
                CoreError::NonConvergence { .. } | CoreError::StepUnderflow { .. } | CoreError::TooManySteps { .. } => 3,
                _ => 2,
            },
            CliError::Io { .. } => 4,
            CliError::Partial { source, .. } => source.exit_code(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Partial { written, source } => write!(f, "{source} ({written} completed rows written)"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}
