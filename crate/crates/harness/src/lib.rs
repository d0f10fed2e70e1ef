//! Command-line runner, configuration and reporting for tlr-core experiments.

pub mod cli;
pub mod config;
pub mod experiment;
pub mod report;

pub use config::ExperimentConfig;
pub use experiment::run_experiment;
pub use report::ExperimentReport;

/// Failures the CLI maps to exit codes: 2 for `Invalid` and `Io`, 3 for `Guard`.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Guard(_) => 3,
            HarnessError::Invalid(_) | HarnessError::Io(_) => 2,
        }
    }
}

impl From<tlr_core::Error> for HarnessError {
    fn from(e: tlr_core::Error) -> Self {
        if e.is_guard() {
            HarnessError::Guard(e.to_string())
        } else {
            HarnessError::Invalid(e.to_string())
        }
    }
}
