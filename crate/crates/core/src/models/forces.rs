use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::{check_tan, AbsState, Coord, DriveInput, DriveKind, ModelError, ModelVariant, VehicleParams};
use crate::GRAVITY;

/// Road and air resistance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadLoad {
    /// Rolling resistance coefficient.
    pub zeta: f64,
    /// Aerodynamic drag coefficient (force per speed squared).
    pub rho: f64,
    /// Road inclination, positive uphill.
    pub grade: f64,
    /// Head wind speed.
    pub wind: f64,
}

pub(super) fn resistance(road: &RoadLoad, sigma1: f64, p: &VehicleParams) -> f64 {
    let weight = p.m1() * GRAVITY;
    road.zeta * weight * road.grade.cos() + weight * road.grade.sin() + road.rho * (road.wind + sigma1).powi(2)
}

/// Generalised driving force along the rear-axle speed, net of resistance.
pub fn resistance_pseudo_force(
    f_r: f64,
    f_f: f64,
    gamma: f64,
    sigma1: f64,
    road: &RoadLoad,
    p: &VehicleParams,
) -> Result<f64, ModelError> {
    check_tan(gamma)?;
    Ok(f_r + f_f / gamma.cos() - resistance(road, sigma1, p))
}

/// Splits a resultant driving force between the axles; `beta = 1` is rear-wheel drive.
pub fn drivetrain_split(f_res: f64, beta: f64) -> Result<(f64, f64), ModelError> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(ModelError::BadSplit(beta));
    }
    Ok((beta * f_res, (1.0 - beta) * f_res))
}

/// Candidate pseudo velocities for the skate model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudoVelocity {
    /// Rear axle longitudinal speed.
    RearSpeed,
    YawRate,
    XVelocity,
    YVelocity,
    /// Front skate speed along its heading.
    FrontSpeed,
}

/// Determinant of the matrix stacking the two no-slip constraints and the
/// pseudo-velocity definition; zero where the choice is singular.
pub fn pseudo_velocity_determinant(choice: PseudoVelocity, psi: f64, gamma: f64, p: &VehicleParams) -> f64 {
    let (sn, cs) = psi.sin_cos();
    let (sf, cf) = (psi + gamma).sin_cos();
    let (sg, cg) = gamma.sin_cos();
    let last = match choice {
        PseudoVelocity::RearSpeed => [cs, sn, 0.0],
        PseudoVelocity::YawRate => [0.0, 0.0, 1.0],
        PseudoVelocity::XVelocity => [1.0, 0.0, 0.0],
        PseudoVelocity::YVelocity => [0.0, 1.0, 0.0],
        PseudoVelocity::FrontSpeed => [cf, sf, (p.l - p.d) * sg],
    };
    Matrix3::new(sn, -cs, p.d, sf, -cf, -(p.l - p.d) * cg, last[0], last[1], last[2]).determinant()
}

/// Lateral constraining forces at the skates and their force-to-weight ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintForces {
    pub f_r: f64,
    pub f_f: f64,
    pub mu_r: f64,
    pub mu_f: f64,
}

impl ConstraintForces {
    /// Lagrange multipliers of the no-slip constraints.
    pub fn multipliers(&self) -> (f64, f64) {
        (-self.f_r, -self.f_f)
    }
}

/// Lateral constraining forces for a force-driven, assigned-steering state.
///
/// Wheel-torque states are mapped through `F = T / r`. Steering rate and
/// acceleration are taken from `input`.
pub fn constraining_forces(
    state: &AbsState,
    input: &DriveInput,
    p: &VehicleParams,
) -> Result<ConstraintForces, ModelError> {
    let variant = state.variant();
    let (f_r, f_f) = match variant {
        ModelVariant::SkateForce => (input.f_r, input.f_f),
        ModelVariant::WheelTorque => (input.t_r / p.r, input.t_f / p.r),
        v => return Err(ModelError::WrongVariant(v)),
    };
    debug_assert_ne!(variant.drive(), DriveKind::ConstantSpeed);
    input.check(variant)?;
    let gamma = input.gamma_cmd;
    check_tan(gamma)?;
    let sigma1 = state.get(Coord::Sigma1).expect("sigma1 in layout");
    let (gd, gdd) = (input.gamma_dot, input.gamma_ddot);
    let (l, j_f) = (p.l, p.j_f);
    let (m1, m2, m4) = (p.m1(), p.m2(), p.m4());
    let c = gamma.cos();
    let t = gamma.tan();
    let det = m1 + m2 * t * t;
    let drive = f_r + f_f / c - input.road.map_or(0.0, |road| resistance(&road, sigma1, p));
    let steer = m2 * sigma1 * gd / (c * c) + j_f / l * gdd;
    let rear = -(m2 - m4) * t / det * drive + (m1 - m4) * sigma1 * sigma1 / l * t + m4 * sigma1 * gd / (c * c)
        - (m1 + m4 * t * t) / det * steer;
    let front = (m2 * f_r * t / c + (m2 - m1) * f_f * t + m1 * m2 * sigma1 * gd / (c * c * c) + m1 * j_f / l * gdd / c)
        / det
        + m4 * sigma1 * sigma1 * t / (l * c);
    let weight = m1 * GRAVITY;
    Ok(ConstraintForces {
        f_r: rear,
        f_f: front,
        mu_r: rear * l / (weight * (l - p.d)),
        mu_f: front * l / (weight * p.d),
    })
}
