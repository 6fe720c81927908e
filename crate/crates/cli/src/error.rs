use nonholo::analysis::AnalysisError;
use nonholo::config::ConfigError;
use nonholo::path::PathError;
use nonholo::sim::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("bad argument `{arg}`: {reason}")]
    Usage { arg: &'static str, reason: String },
    #[error("{0}")]
    Sim(#[from] SimError),
    #[error("{0}")]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Path(#[from] PathError),
    #[error("cannot write {what}: {reason}")]
    Output { what: String, reason: String },
}

impl CliError {
    pub fn usage(arg: &'static str, reason: impl Into<String>) -> Self {
        CliError::Usage {
            arg,
            reason: reason.into(),
        }
    }

    pub fn output(what: impl std::fmt::Display, reason: impl std::fmt::Display) -> Self {
        CliError::Output {
            what: what.to_string(),
            reason: reason.to_string(),
        }
    }

    /// 2 for anything the user has to fix in the input, 3 when a guard trips.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage { .. } => 2,
            CliError::Sim(SimError::InvalidSetting { .. } | SimError::InvalidScenario(_)) => 2,
            CliError::Sim(SimError::GuardTripped { .. }) => 3,
            CliError::Analysis(AnalysisError::BadGrid(_)) => 2,
            CliError::Analysis(AnalysisError::Sim(SimError::GuardTripped { .. })) => 3,
            _ => 1,
        }
    }
}
