use std::path::{Path, PathBuf};

use qsum::ansatz::AnsatzError;
use qsum::optimize::OptimizeError;
use qsum::problem::ProblemError;
use qsum::rouge::RougeError;
use qsum::simulator::SimError;
use qsum::textprep::TextError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {source}")]
    Text { context: String, source: TextError },
    #[error("problem: {0}")]
    Problem(#[from] ProblemError),
    #[error("circuit: {0}")]
    Ansatz(#[from] AnsatzError),
    #[error("simulation: {0}")]
    Sim(#[from] SimError),
    #[error("optimization: {0}")]
    Optimize(#[from] OptimizeError),
    #[error("rouge: {0}")]
    Rouge(#[from] RougeError),
    #[error("{context}: {message}")]
    Report { context: String, message: String },
}

impl CliError {
    /// Process exit status; 2 is left to argument parsing.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Text { .. } => 4,
            CliError::Problem(_) => 5,
            CliError::Ansatz(_) => 6,
            CliError::Sim(_) => 7,
            CliError::Optimize(_) => 8,
            CliError::Rouge(_) => 9,
            CliError::Report { .. } => 10,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn text(path: &Path, source: TextError) -> Self {
        CliError::Text { context: path.display().to_string(), source }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
