//! Closed-form equations of motion of the single-track vehicle models,
//! their kinematic constraints and the lateral constraining forces.

mod eom;
mod forces;
mod params;
mod variant;

pub use eom::{centre_of_mass_rates, constraint_residuals, eom_rhs, lateral_acceleration, rear_axle_rates};
pub use forces::{
    constraining_forces, drivetrain_split, pseudo_velocity_determinant, resistance_pseudo_force, ConstraintForces,
    PseudoVelocity, RoadLoad,
};
pub use params::VehicleParams;
pub use variant::{AbsState, Coord, DriveInput, DriveKind, ModelVariant, SteeringKind};

use thiserror::Error;

/// Guard distance from singular steering angles.
pub const SINGULARITY_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("steering angle {gamma} rad is at the tan(gamma) singularity")]
    SteeringSingularity { gamma: f64 },
    #[error("steering angle {gamma} rad is at the gamma = 0 singularity of the yaw-rate pseudo velocity")]
    LagrangeSingularity { gamma: f64 },
    #[error("input `{field}` is not used by the {variant} model")]
    UnusedInput { field: &'static str, variant: ModelVariant },
    #[error("{variant} state needs {expected} values, got {got}")]
    WrongDimension {
        variant: ModelVariant,
        expected: usize,
        got: usize,
    },
    #[error("{variant} needs a positive constant speed")]
    MissingSpeed { variant: ModelVariant },
    #[error("operation not available for the {0} model")]
    WrongVariant(ModelVariant),
    #[error("torque split ratio {0} outside [0, 1]")]
    BadSplit(f64),
    #[error("invalid vehicle parameters: {0}")]
    InvalidParams(String),
}

pub(crate) fn check_tan(gamma: f64) -> Result<(), ModelError> {
    if gamma.abs() >= std::f64::consts::FRAC_PI_2 - SINGULARITY_GUARD || !gamma.is_finite() {
        Err(ModelError::SteeringSingularity { gamma })
    } else {
        Ok(())
    }
}
