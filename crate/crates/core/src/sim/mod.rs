//! Fixed-step simulation of vehicle, path and controller.

mod figures;
mod integrate;
mod scenario;
mod trace;

pub use figures::{figure, FIGURES};
pub use integrate::{integrate, rk4_step};
pub use scenario::{run_scenario, ControlMode, ControlUpdate, Frame, InitialErrors, OpenLoop, PathSpec, Scenario};
pub use trace::{SimTrace, TraceRow, TraceSummary, TRACE_HEADER};

use thiserror::Error;

use crate::models::ModelError;
use crate::path::PathError;
use crate::pathframe::FrameError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("guard tripped at t = {time:.4} s: {source}")]
    GuardTripped { time: f64, source: FrameError },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid `{key}`: {reason}")]
    InvalidSetting { key: &'static str, reason: String },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl SimError {
    pub(crate) fn guard(time: f64, source: impl Into<FrameError>) -> Self {
        SimError::GuardTripped {
            time,
            source: source.into(),
        }
    }
}
