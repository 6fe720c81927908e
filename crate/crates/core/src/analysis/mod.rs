//! Linearised closed loops, stability checks and cross-model equivalence.

mod equivalence;
mod linear;
mod stability;

pub use equivalence::{simulate_open_loop, verify_equivalence, EquivalencePair, EquivalenceReport};
pub use linear::{linearize_kinematic, linearize_longitudinal, linearize_steering, LinearModel};
pub use stability::{
    boundary_distance, kinematic_verdict, routh_hurwitz_kinematic, stability_grid, write_stability_csv, GridAxis,
    StabilityPoint, StabilityVerdict,
};

use thiserror::Error;

use crate::sim::SimError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("degenerate equilibrium: {0}")]
    DegenerateEquilibrium(String),
    #[error("trajectory reached a singular configuration at t = {time:.4} s: {detail}")]
    SingularEncounter { time: f64, detail: String },
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}
