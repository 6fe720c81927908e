use std::fmt;

use serde::{Deserialize, Serialize};

use super::{forces::RoadLoad, ModelError};

/// The bicycle model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    /// Skates, assigned speed and steering angle.
    SkateKinematic,
    /// Skates, driving forces and assigned steering angle.
    SkateForce,
    /// Skates, assigned speed, steering torque.
    SkateTorqueSteer,
    /// Skates, driving forces and steering torque.
    SkateForceTorqueSteer,
    /// Rigid wheels, assigned speed and steering angle.
    WheelKinematic,
    /// Rigid wheels, driving torques and assigned steering angle.
    WheelTorque,
    /// Rigid wheels, assigned speed, steering torque.
    WheelTorqueSteer,
    /// Rigid wheels, driving torques and steering torque.
    WheelTorqueTorqueSteer,
    /// Skate force model written with the front skate speed as pseudo velocity.
    SkateForceAltPseudo,
    /// Skate force model written with the yaw rate as pseudo velocity.
    SkateForceLagrange,
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named state coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    XG,
    YG,
    Psi,
    Gamma,
    /// Longitudinal speed of the rear axle.
    Sigma1,
    /// Steering rate.
    Sigma2,
    PhiR,
    PhiF,
    /// Speed of the front skate along its heading.
    FrontSpeed,
    /// Yaw rate used as pseudo velocity.
    YawRate,
}

/// How the steering angle enters a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteeringKind {
    /// `gamma` is an input.
    Assigned,
    /// `gamma` is a state driven by the steering torque.
    Torque,
}

/// How the longitudinal motion is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveKind {
    /// The rear axle speed is a constant parameter.
    ConstantSpeed,
    /// Driving forces on the skates.
    Force,
    /// Driving torques on the wheels.
    Torque,
}

use Coord::*;

impl ModelVariant {
    pub const ALL: [ModelVariant; 10] = [
        ModelVariant::SkateKinematic,
        ModelVariant::SkateForce,
        ModelVariant::SkateTorqueSteer,
        ModelVariant::SkateForceTorqueSteer,
        ModelVariant::WheelKinematic,
        ModelVariant::WheelTorque,
        ModelVariant::WheelTorqueSteer,
        ModelVariant::WheelTorqueTorqueSteer,
        ModelVariant::SkateForceAltPseudo,
        ModelVariant::SkateForceLagrange,
    ];

    /// The eight primary variants (no alternative pseudo velocities).
    pub const PRIMARY: [ModelVariant; 8] = [
        ModelVariant::SkateKinematic,
        ModelVariant::SkateForce,
        ModelVariant::SkateTorqueSteer,
        ModelVariant::SkateForceTorqueSteer,
        ModelVariant::WheelKinematic,
        ModelVariant::WheelTorque,
        ModelVariant::WheelTorqueSteer,
        ModelVariant::WheelTorqueTorqueSteer,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelVariant::SkateKinematic => "skate_kinematic",
            ModelVariant::SkateForce => "skate_force",
            ModelVariant::SkateTorqueSteer => "skate_torque_steer",
            ModelVariant::SkateForceTorqueSteer => "skate_force_torque_steer",
            ModelVariant::WheelKinematic => "wheel_kinematic",
            ModelVariant::WheelTorque => "wheel_torque",
            ModelVariant::WheelTorqueSteer => "wheel_torque_steer",
            ModelVariant::WheelTorqueTorqueSteer => "wheel_torque_torque_steer",
            ModelVariant::SkateForceAltPseudo => "skate_force_alt_pseudo",
            ModelVariant::SkateForceLagrange => "skate_force_lagrange",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    /// State layout.
    pub fn layout(&self) -> &'static [Coord] {
        match self {
            ModelVariant::SkateKinematic => &[XG, YG, Psi],
            ModelVariant::SkateForce => &[XG, YG, Psi, Sigma1],
            ModelVariant::SkateTorqueSteer => &[XG, YG, Psi, Gamma, Sigma2],
            ModelVariant::SkateForceTorqueSteer => &[XG, YG, Psi, Gamma, Sigma1, Sigma2],
            ModelVariant::WheelKinematic => &[XG, YG, Psi, PhiR, PhiF],
            ModelVariant::WheelTorque => &[XG, YG, Psi, Sigma1, PhiR, PhiF],
            ModelVariant::WheelTorqueSteer => &[XG, YG, Psi, Gamma, Sigma2, PhiR, PhiF],
            ModelVariant::WheelTorqueTorqueSteer => &[XG, YG, Psi, Gamma, Sigma1, Sigma2, PhiR, PhiF],
            ModelVariant::SkateForceAltPseudo => &[XG, YG, Psi, FrontSpeed],
            ModelVariant::SkateForceLagrange => &[XG, YG, Psi, YawRate],
        }
    }

    pub fn dim(&self) -> usize {
        self.layout().len()
    }

    pub fn index_of(&self, c: Coord) -> Option<usize> {
        self.layout().iter().position(|&k| k == c)
    }

    pub fn steering(&self) -> SteeringKind {
        match self {
            ModelVariant::SkateTorqueSteer
            | ModelVariant::SkateForceTorqueSteer
            | ModelVariant::WheelTorqueSteer
            | ModelVariant::WheelTorqueTorqueSteer => SteeringKind::Torque,
            _ => SteeringKind::Assigned,
        }
    }

    pub fn drive(&self) -> DriveKind {
        match self {
            ModelVariant::SkateKinematic
            | ModelVariant::SkateTorqueSteer
            | ModelVariant::WheelKinematic
            | ModelVariant::WheelTorqueSteer => DriveKind::ConstantSpeed,
            ModelVariant::WheelTorque | ModelVariant::WheelTorqueTorqueSteer => DriveKind::Torque,
            _ => DriveKind::Force,
        }
    }

    pub fn has_wheels(&self) -> bool {
        self.index_of(PhiR).is_some()
    }

    /// Generalised coordinates counted as in the model taxonomy
    /// (position, yaw, steering angle if actuated by torque, wheel angles).
    pub fn generalized_coordinates(&self) -> usize {
        3 + usize::from(self.steering() == SteeringKind::Torque) + if self.has_wheels() { 2 } else { 0 }
    }

    /// Number of kinematic constraints, including the assigned-speed constraint.
    pub fn constraint_count(&self) -> usize {
        (if self.has_wheels() { 4 } else { 2 }) + usize::from(self.drive() == DriveKind::ConstantSpeed)
    }

    /// Degrees of freedom; each kinematic constraint removes one half.
    pub fn degrees_of_freedom(&self) -> f64 {
        self.generalized_coordinates() as f64 - 0.5 * self.constraint_count() as f64
    }

    /// Inputs the variant accepts, by [`DriveInput`] field name.
    pub fn input_fields(&self) -> &'static [&'static str] {
        match self {
            ModelVariant::SkateKinematic | ModelVariant::WheelKinematic => &["gamma_cmd"],
            ModelVariant::SkateForce | ModelVariant::SkateForceAltPseudo | ModelVariant::SkateForceLagrange => {
                &["gamma_cmd", "gamma_dot", "gamma_ddot", "f_r", "f_f"]
            }
            ModelVariant::WheelTorque => &["gamma_cmd", "gamma_dot", "gamma_ddot", "t_r", "t_f"],
            ModelVariant::SkateTorqueSteer | ModelVariant::WheelTorqueSteer => &["t_s"],
            ModelVariant::SkateForceTorqueSteer => &["t_s", "f_r", "f_f"],
            ModelVariant::WheelTorqueTorqueSteer => &["t_s", "t_r", "t_f"],
        }
    }
}

/// Inputs to a model. Fields a variant does not use must stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriveInput {
    pub gamma_cmd: f64,
    pub gamma_dot: f64,
    pub gamma_ddot: f64,
    pub f_r: f64,
    pub f_f: f64,
    pub t_r: f64,
    pub t_f: f64,
    /// Steering torque.
    pub t_s: f64,
    /// Rolling, grade and air resistance; only for force or torque driven variants.
    pub road: Option<RoadLoad>,
}

impl DriveInput {
    pub fn steering(gamma: f64) -> Self {
        DriveInput {
            gamma_cmd: gamma,
            ..Default::default()
        }
    }

    fn fields(&self) -> [(&'static str, f64); 8] {
        [
            ("gamma_cmd", self.gamma_cmd),
            ("gamma_dot", self.gamma_dot),
            ("gamma_ddot", self.gamma_ddot),
            ("f_r", self.f_r),
            ("f_f", self.f_f),
            ("t_r", self.t_r),
            ("t_f", self.t_f),
            ("t_s", self.t_s),
        ]
    }

    /// Rejects non-zero fields the variant does not use.
    pub fn check(&self, variant: ModelVariant) -> Result<(), ModelError> {
        let allowed = variant.input_fields();
        for (field, value) in self.fields() {
            if value != 0.0 && !allowed.contains(&field) {
                return Err(ModelError::UnusedInput { field, variant });
            }
        }
        if self.road.is_some() && variant.drive() == DriveKind::ConstantSpeed {
            return Err(ModelError::UnusedInput { field: "road", variant });
        }
        Ok(())
    }
}

/// Absolute-frame state of one model variant.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsState {
    variant: ModelVariant,
    values: Vec<f64>,
    speed: Option<f64>,
}

impl AbsState {
    /// `speed` is the assigned constant speed and is required exactly for
    /// constant-speed variants.
    pub fn new(variant: ModelVariant, values: Vec<f64>, speed: Option<f64>) -> Result<Self, ModelError> {
        if values.len() != variant.dim() {
            return Err(ModelError::WrongDimension {
                variant,
                expected: variant.dim(),
                got: values.len(),
            });
        }
        match (variant.drive(), speed) {
            (DriveKind::ConstantSpeed, Some(v)) if v > 0.0 && v.is_finite() => {}
            (DriveKind::ConstantSpeed, _) => return Err(ModelError::MissingSpeed { variant }),
            (_, Some(_)) => {
                return Err(ModelError::UnusedInput {
                    field: "speed",
                    variant,
                })
            }
            _ => {}
        }
        Ok(AbsState { variant, values, speed })
    }

    /// All-zero state at the given pose of the centre of mass.
    pub fn at_pose(
        variant: ModelVariant,
        x_g: f64,
        y_g: f64,
        psi: f64,
        speed: Option<f64>,
    ) -> Result<Self, ModelError> {
        let mut values = vec![0.0; variant.dim()];
        values[0] = x_g;
        values[1] = y_g;
        values[2] = psi;
        AbsState::new(variant, values, speed)
    }

    /// Sets a coordinate; panics if the variant has no such coordinate.
    pub fn with(mut self, c: Coord, value: f64) -> Self {
        let i = self
            .variant
            .index_of(c)
            .unwrap_or_else(|| panic!("{} has no {c:?}", self.variant));
        self.values[i] = value;
        self
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn speed(&self) -> Option<f64> {
        self.speed
    }

    pub fn get(&self, c: Coord) -> Option<f64> {
        self.variant.index_of(c).map(|i| self.values[i])
    }

    /// Same variant and speed, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self, ModelError> {
        AbsState::new(self.variant, values, self.speed)
    }

    /// Steering angle: from the state for torque-steered variants, from the input otherwise.
    pub fn steering_angle(&self, input: &DriveInput) -> f64 {
        self.get(Gamma).unwrap_or(input.gamma_cmd)
    }

    /// Longitudinal speed of the rear axle, whatever pseudo velocity the variant uses.
    pub fn rear_speed(&self, gamma: f64, l: f64) -> f64 {
        if let Some(v) = self.speed {
            return v;
        }
        if let Some(v) = self.get(Sigma1) {
            return v;
        }
        if let Some(v) = self.get(FrontSpeed) {
            return v * gamma.cos();
        }
        let yaw_rate = self
            .get(YawRate)
            .expect("every variant carries a speed-like coordinate");
        l * yaw_rate / gamma.tan()
    }
}
