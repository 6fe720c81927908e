use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::{integrate, SimError, SimTrace, TraceRow};
use crate::control::{
    driving_force, speed_command, steer_derivative_chain, steering_torque, ControlGains, FeedbackLaw, SpeedRates,
    WrapperOrder,
};
use crate::models::{
    constraining_forces, constraint_residuals, eom_rhs, lateral_acceleration, AbsState, Coord, DriveInput, DriveKind,
    ModelVariant, SteeringKind, VehicleParams,
};
use crate::path::{build_path, path_to_absolute, project, CurvatureProfile, PathTable, Pose};
use crate::pathframe::{pathframe_rhs, RelState, TrackPoint};

/// Which controllers are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    /// Inputs follow the open-loop schedule.
    None,
    /// Steering angle assigned from the path follower.
    #[default]
    SteerOnly,
    /// Path follower feeding the steering torque servo.
    SteerTorque,
    /// Assigned steering plus speed scheduling with the linearising driving force.
    SteerLongitudinal,
}

/// Coordinates the integrator works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Earth-frame states, projected onto the path at every evaluation.
    #[default]
    Absolute,
    /// Path coordinates integrated directly.
    Path,
}

/// When the controller is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlUpdate {
    /// At every integrator stage.
    #[default]
    Continuous,
    /// Once per step, held over the step.
    ZeroOrderHold,
}

/// Reference path of a scenario. Serialised flat: the profile tag sits next to
/// its own fields, the generated length and the table step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPathSpec", into = "RawPathSpec")]
pub struct PathSpec {
    pub profile: CurvatureProfile,
    /// Generated length; defaults to the closing length or, for open paths,
    /// enough to cover the run.
    pub length: Option<f64>,
    pub step: f64,
}

impl Default for PathSpec {
    fn default() -> Self {
        PathSpec {
            profile: CurvatureProfile::periodic(250.0, 4),
            length: None,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ProfileKind {
    Straight,
    Circle,
    Periodic,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPathSpec {
    #[serde(default = "default_kind")]
    profile: ProfileKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corners: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
    #[serde(default = "default_step")]
    step: f64,
}

fn default_kind() -> ProfileKind {
    ProfileKind::Periodic
}

fn default_step() -> f64 {
    PathSpec::default().step
}

impl TryFrom<RawPathSpec> for PathSpec {
    type Error = String;

    fn try_from(raw: RawPathSpec) -> Result<Self, String> {
        let stray = |key: &str, kind: &str| Err(format!("`{key}` does not apply to the {kind} profile"));
        let profile = match raw.profile {
            ProfileKind::Straight => {
                for (key, v) in [
                    ("kappa", raw.kappa),
                    ("kappa_max", raw.kappa_max),
                    ("period", raw.period),
                ] {
                    if v.is_some() {
                        return stray(key, "straight");
                    }
                }
                if raw.corners.is_some() {
                    return stray("corners", "straight");
                }
                CurvatureProfile::Straight
            }
            ProfileKind::Circle => {
                for (key, v) in [("kappa_max", raw.kappa_max), ("period", raw.period)] {
                    if v.is_some() {
                        return stray(key, "circle");
                    }
                }
                if raw.corners.is_some() {
                    return stray("corners", "circle");
                }
                CurvatureProfile::Circle {
                    kappa: raw.kappa.ok_or("circle profile needs `kappa`")?,
                }
            }
            ProfileKind::Periodic => {
                if raw.kappa.is_some() {
                    return stray("kappa", "periodic");
                }
                let period = raw.period.unwrap_or(250.0);
                let corners = raw.corners.unwrap_or(4);
                match raw.kappa_max {
                    Some(kappa_max) => CurvatureProfile::Periodic {
                        kappa_max,
                        period,
                        corners,
                    },
                    None => CurvatureProfile::periodic(period, corners),
                }
            }
        };
        Ok(PathSpec {
            profile,
            length: raw.length,
            step: raw.step,
        })
    }
}

impl From<PathSpec> for RawPathSpec {
    fn from(p: PathSpec) -> Self {
        let mut raw = RawPathSpec {
            profile: ProfileKind::Straight,
            kappa: None,
            kappa_max: None,
            period: None,
            corners: None,
            length: p.length,
            step: p.step,
        };
        match p.profile {
            CurvatureProfile::Straight => {}
            CurvatureProfile::Circle { kappa } => {
                raw.profile = ProfileKind::Circle;
                raw.kappa = Some(kappa);
            }
            CurvatureProfile::Periodic {
                kappa_max,
                period,
                corners,
            } => {
                raw.profile = ProfileKind::Periodic;
                raw.kappa_max = Some(kappa_max);
                raw.period = Some(period);
                raw.corners = Some(corners);
            }
        }
        raw
    }
}

/// Initial path coordinates of the tracked point and initial steering states.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialErrors {
    pub s: f64,
    pub e: f64,
    pub theta: f64,
    /// Steering angle of torque-steered variants.
    pub gamma: f64,
    /// Steering rate of torque-steered variants.
    pub sigma2: f64,
}

/// Input schedule for open-loop runs: `gamma(t) = offset + amplitude sin(frequency t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OpenLoop {
    pub gamma_offset: f64,
    pub gamma_amplitude: f64,
    pub gamma_frequency: f64,
    /// Rear driving force, or `r` times the rear torque for wheel variants.
    pub f_r: f64,
    pub f_f: f64,
    pub t_s: f64,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub variant: ModelVariant,
    pub point: TrackPoint,
    pub path: PathSpec,
    pub params: VehicleParams,
    pub gains: ControlGains,
    pub law: FeedbackLaw,
    pub wrapper: WrapperOrder,
    pub mode: ControlMode,
    pub frame: Frame,
    pub update: ControlUpdate,
    /// Constant speed, or the initial speed for force and torque driven variants.
    pub speed: f64,
    pub initial: InitialErrors,
    pub open_loop: OpenLoop,
    pub dt: f64,
    pub duration: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "custom".into(),
            variant: ModelVariant::SkateKinematic,
            point: TrackPoint::RearAxle,
            path: PathSpec::default(),
            params: VehicleParams::default(),
            gains: ControlGains::default(),
            law: FeedbackLaw::Wrapped,
            wrapper: WrapperOrder::Finite(2),
            mode: ControlMode::SteerOnly,
            frame: Frame::Absolute,
            update: ControlUpdate::Continuous,
            speed: 20.0,
            initial: InitialErrors::default(),
            open_loop: OpenLoop::default(),
            dt: 1e-3,
            duration: 30.0,
        }
    }
}

impl Scenario {
    /// Checks the scenario; errors name the offending setting by its config key.
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |key: &'static str, reason: String| Err(SimError::InvalidSetting { key, reason });
        if let Err(e) = self.params.validate() {
            return bad("vehicle", e.to_string());
        }
        if let Err(e) = self.path.profile.validate() {
            return bad("path", e.to_string());
        }
        if !(self.dt > 0.0) {
            return bad("sim.dt", format!("need dt > 0, got {}", self.dt));
        }
        if !(self.duration >= self.dt) {
            return bad("sim.duration", format!("need duration >= dt, got {}", self.duration));
        }
        if !(self.speed > 0.0) && self.variant.drive() == DriveKind::ConstantSpeed {
            return bad(
                "sim.speed",
                format!("constant-speed models need speed > 0, got {}", self.speed),
            );
        }
        if let WrapperOrder::Finite(n) = self.wrapper {
            if n < 2 {
                return bad("controller.wrapper_n", format!("wrapper order {n} < 2"));
            }
        }
        let v = self.variant;
        let ok = match self.mode {
            ControlMode::None => true,
            ControlMode::SteerOnly => v.steering() == SteeringKind::Assigned && v.drive() == DriveKind::ConstantSpeed,
            ControlMode::SteerTorque => v.steering() == SteeringKind::Torque,
            ControlMode::SteerLongitudinal => {
                matches!(v, ModelVariant::SkateForce | ModelVariant::WheelTorque) && self.point == TrackPoint::RearAxle
            }
        };
        if !ok {
            return bad(
                "controller.mode",
                format!("{:?} does not apply to {} tracking {:?}", self.mode, v, self.point),
            );
        }
        if self.frame == Frame::Path && !ModelVariant::PRIMARY.contains(&v) {
            return bad("sim.frame", format!("{v} has no path-frame form"));
        }
        if matches!(v, ModelVariant::SkateForceAltPseudo | ModelVariant::SkateForceLagrange)
            && self.mode != ControlMode::None
        {
            return bad("controller.mode", format!("{v} is only simulated open loop"));
        }
        Ok(())
    }

    /// Builds the reference path of the scenario.
    pub fn build_path(&self) -> Result<PathTable, SimError> {
        let length = match (self.path.length, self.path.profile.closed_length()) {
            (Some(l), _) => Some(l),
            (None, Some(_)) => None,
            (None, None) => {
                let fastest = self.speed.max(self.gains.v_max);
                Some(self.initial.s + 1.2 * fastest * self.duration + 200.0)
            }
        };
        Ok(build_path(&self.path.profile, self.path.step, length, Pose::default())?)
    }

    /// Initial absolute state of the vehicle.
    pub fn initial_state(&self, path: &PathTable) -> Result<AbsState, SimError> {
        let pose = path_to_absolute(path, self.initial.s, self.initial.e, self.initial.theta)?;
        let (x_g, y_g) = match self.point {
            TrackPoint::CenterOfMass => (pose.x, pose.y),
            TrackPoint::RearAxle => (
                pose.x + self.params.d * pose.psi.cos(),
                pose.y + self.params.d * pose.psi.sin(),
            ),
        };
        let v = self.variant;
        let speed = (v.drive() == DriveKind::ConstantSpeed).then_some(self.speed);
        let mut st = AbsState::at_pose(v, x_g, y_g, pose.psi, speed)?;
        let gamma0 = self.initial.gamma;
        if v.index_of(Coord::Gamma).is_some() {
            st = st.with(Coord::Gamma, gamma0).with(Coord::Sigma2, self.initial.sigma2);
        }
        if v.index_of(Coord::Sigma1).is_some() {
            st = st.with(Coord::Sigma1, self.speed);
        }
        let gamma_now = self.open_loop.gamma_offset;
        if v == ModelVariant::SkateForceAltPseudo {
            st = st.with(Coord::FrontSpeed, self.speed / gamma_now.cos());
        }
        if v == ModelVariant::SkateForceLagrange {
            st = st.with(Coord::YawRate, self.speed * gamma_now.tan() / self.params.l);
        }
        Ok(st)
    }
}

/// Controller output and the quantities logged with it.
#[derive(Debug, Clone, Copy, Default)]
struct Control {
    input: DriveInput,
    gamma_des: Option<f64>,
    gamma_ff: Option<f64>,
    gamma_fb: Option<f64>,
    t_s: Option<f64>,
    f_r: Option<f64>,
    a_des: Option<f64>,
    v_des: Option<f64>,
    iota: Option<f64>,
    a1: Option<f64>,
    a2: Option<f64>,
}

/// Path coordinates, speed and steering seen by the controller.
struct Observation {
    s: f64,
    e: f64,
    theta: f64,
    speed: f64,
    gamma_state: Option<f64>,
}

struct Runner<'a> {
    sc: &'a Scenario,
    path: PathTable,
    hint: Cell<f64>,
}

impl Runner<'_> {
    fn observe(&self, x: &[f64], input_gamma: f64) -> Result<Observation, SimError> {
        let sc = self.sc;
        match sc.frame {
            Frame::Path => {
                let rel = RelState::new(sc.variant, sc.point, x.to_vec(), self.speed_param())
                    .map_err(|e| SimError::InvalidScenario(e.to_string()))?;
                let speed = rel.speed().unwrap_or_else(|| rel.get(Coord::Sigma1).unwrap_or(0.0));
                Ok(Observation {
                    s: rel.s(),
                    e: rel.e(),
                    theta: rel.theta(),
                    speed,
                    gamma_state: rel.get(Coord::Gamma),
                })
            }
            Frame::Absolute => {
                let abs = self.abs(x)?;
                let psi = x[2];
                let (px, py) = match sc.point {
                    TrackPoint::CenterOfMass => (x[0], x[1]),
                    TrackPoint::RearAxle => (x[0] - sc.params.d * psi.cos(), x[1] - sc.params.d * psi.sin()),
                };
                let q = project(&self.path, px, py, psi, Some(self.hint.get()))?;
                let gamma_state = abs.get(Coord::Gamma);
                let speed = abs.rear_speed(gamma_state.unwrap_or(input_gamma), sc.params.l);
                Ok(Observation {
                    s: q.s,
                    e: q.e,
                    theta: q.theta,
                    speed,
                    gamma_state,
                })
            }
        }
    }

    fn speed_param(&self) -> Option<f64> {
        (self.sc.variant.drive() == DriveKind::ConstantSpeed).then_some(self.sc.speed)
    }

    fn abs(&self, x: &[f64]) -> Result<AbsState, SimError> {
        Ok(AbsState::new(self.sc.variant, x.to_vec(), self.speed_param())?)
    }

    fn open_loop_gamma(&self, t: f64) -> (f64, f64, f64) {
        let o = &self.sc.open_loop;
        let w = o.gamma_frequency;
        let (sn, cs) = (w * t).sin_cos();
        (
            o.gamma_offset + o.gamma_amplitude * sn,
            o.gamma_amplitude * w * cs,
            -o.gamma_amplitude * w * w * sn,
        )
    }

    fn control(&self, t: f64, obs: &Observation) -> Result<Control, SimError> {
        let sc = self.sc;
        let v = sc.variant;
        let mut c = Control::default();
        let guard = |e| SimError::guard(t, e);
        match sc.mode {
            ControlMode::None => {
                let o = &sc.open_loop;
                let mut u = DriveInput {
                    t_s: o.t_s,
                    ..Default::default()
                };
                if v.steering() == SteeringKind::Assigned {
                    let (g, gd, gdd) = self.open_loop_gamma(t);
                    u.gamma_cmd = g;
                    if v.drive() != DriveKind::ConstantSpeed {
                        u.gamma_dot = gd;
                        u.gamma_ddot = gdd;
                    }
                }
                match v.drive() {
                    DriveKind::Force => {
                        u.f_r = o.f_r;
                        u.f_f = o.f_f;
                    }
                    DriveKind::Torque => {
                        u.t_r = sc.params.r * o.f_r;
                        u.t_f = sc.params.r * o.f_f;
                    }
                    DriveKind::ConstantSpeed => {}
                }
                c.input = u;
            }
            ControlMode::SteerOnly | ControlMode::SteerTorque => {
                let cmd = steer_derivative_chain(
                    obs.s,
                    obs.e,
                    obs.theta,
                    SpeedRates::constant(obs.speed),
                    &self.path,
                    &sc.gains,
                    sc.law,
                    sc.wrapper,
                    &sc.params,
                )
                .map_err(guard)?;
                c.gamma_des = Some(cmd.gamma_des);
                c.gamma_ff = Some(cmd.gamma_ff);
                c.gamma_fb = Some(cmd.gamma_fb);
                if sc.mode == ControlMode::SteerOnly {
                    c.input = DriveInput::steering(cmd.gamma_des);
                } else {
                    let gamma = obs.gamma_state.expect("torque-steered state");
                    let t_s = steering_torque(gamma, cmd.gamma_des, &sc.gains);
                    c.t_s = Some(t_s);
                    let o = &sc.open_loop;
                    c.input = DriveInput {
                        t_s,
                        ..Default::default()
                    };
                    match v.drive() {
                        DriveKind::Force => {
                            c.input.f_r = o.f_r;
                            c.input.f_f = o.f_f;
                        }
                        DriveKind::Torque => {
                            c.input.t_r = sc.params.r * o.f_r;
                            c.input.t_f = sc.params.r * o.f_f;
                        }
                        DriveKind::ConstantSpeed => {}
                    }
                }
            }
            ControlMode::SteerLongitudinal => {
                let sigma1 = obs.speed;
                let kappa = self.path.curvature_at(obs.s)?;
                let s_dot = sigma1 * obs.theta.cos() / (1.0 - kappa * obs.e);
                let speed = speed_command(&self.path, obs.s, s_dot, sigma1, &sc.gains).map_err(guard)?;
                let rates = SpeedRates {
                    v: sigma1,
                    v_dot: speed.a_des,
                    v_ddot: speed.a_des_rate,
                };
                let cmd = steer_derivative_chain(
                    obs.s, obs.e, obs.theta, rates, &self.path, &sc.gains, sc.law, sc.wrapper, &sc.params,
                )
                .map_err(guard)?;
                let force = driving_force(
                    speed.a_des,
                    cmd.gamma_des,
                    cmd.gamma_dot,
                    cmd.gamma_ddot,
                    sigma1,
                    &sc.params,
                )
                .map_err(|e| SimError::guard(t, e))?;
                let mut u = DriveInput {
                    gamma_cmd: cmd.gamma_des,
                    gamma_dot: cmd.gamma_dot,
                    gamma_ddot: cmd.gamma_ddot,
                    ..Default::default()
                };
                if v.drive() == DriveKind::Torque {
                    u.t_r = sc.params.r * force.f_r;
                } else {
                    u.f_r = force.f_r;
                }
                c = Control {
                    input: u,
                    gamma_des: Some(cmd.gamma_des),
                    gamma_ff: Some(cmd.gamma_ff),
                    gamma_fb: Some(cmd.gamma_fb),
                    t_s: None,
                    f_r: Some(force.f_r),
                    a_des: Some(speed.a_des),
                    v_des: Some(speed.v_des),
                    iota: Some(force.iota),
                    a1: Some(force.a1),
                    a2: Some(force.a2),
                };
            }
        }
        Ok(c)
    }

    fn derivative(&self, t: f64, x: &[f64], input: &DriveInput) -> Result<Vec<f64>, SimError> {
        let sc = self.sc;
        match sc.frame {
            Frame::Absolute => eom_rhs(&self.abs(x)?, input, &sc.params).map_err(|e| SimError::guard(t, e)),
            Frame::Path => {
                let rel = RelState::new(sc.variant, sc.point, x.to_vec(), self.speed_param())
                    .map_err(|e| SimError::InvalidScenario(e.to_string()))?;
                pathframe_rhs(&rel, input, &self.path, &sc.params).map_err(|e| SimError::guard(t, e))
            }
        }
    }

    fn gamma_hint(&self, t: f64) -> f64 {
        if self.sc.mode == ControlMode::None {
            self.open_loop_gamma(t).0
        } else {
            0.0
        }
    }

    fn evaluate(&self, t: f64, x: &[f64]) -> Result<(Observation, Control), SimError> {
        let obs = match self.observe(x, self.gamma_hint(t)) {
            Ok(obs) => obs,
            // Open-loop runs may leave the reference path; the path columns then go blank.
            Err(SimError::Path(_)) if self.sc.mode == ControlMode::None => {
                let abs = self.abs(x)?;
                let gamma_state = abs.get(Coord::Gamma);
                let speed = abs.rear_speed(gamma_state.unwrap_or(self.gamma_hint(t)), self.sc.params.l);
                Observation {
                    s: f64::NAN,
                    e: f64::NAN,
                    theta: f64::NAN,
                    speed,
                    gamma_state,
                }
            }
            Err(SimError::Path(p)) => return Err(SimError::guard(t, p)),
            Err(other) => return Err(other),
        };
        let ctrl = self.control(t, &obs)?;
        Ok((obs, ctrl))
    }

    fn row(&self, t: f64, x: &[f64], obs: &Observation, ctrl: &Control) -> Result<TraceRow, SimError> {
        let sc = self.sc;
        let abs = match sc.frame {
            Frame::Absolute => self.abs(x)?,
            Frame::Path => RelState::new(sc.variant, sc.point, x.to_vec(), self.speed_param())
                .and_then(|r| r.to_abs(&self.path, &sc.params))
                .map_err(|e| SimError::guard(t, e))?,
        };
        let input = ctrl.input;
        let gamma = abs.steering_angle(&input);
        let deriv = eom_rhs(&abs, &input, &sc.params).map_err(|e| SimError::guard(t, e))?;
        let resid = constraint_residuals(&abs, &deriv, &input, &sc.params)
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max);
        let forces = match sc.variant {
            ModelVariant::SkateForce | ModelVariant::WheelTorque => constraining_forces(&abs, &input, &sc.params).ok(),
            _ => None,
        };
        let speed = abs.rear_speed(gamma, sc.params.l);
        Ok(TraceRow {
            t,
            x_g: abs.get(Coord::XG).unwrap_or_default(),
            y_g: abs.get(Coord::YG).unwrap_or_default(),
            psi: abs.get(Coord::Psi).unwrap_or_default(),
            gamma,
            sigma1: speed,
            sigma2: abs.get(Coord::Sigma2),
            s_c: obs.s,
            e_c: obs.e,
            theta_c: obs.theta,
            gamma_des: ctrl.gamma_des,
            gamma_ff: ctrl.gamma_ff,
            gamma_fb: ctrl.gamma_fb,
            t_s: ctrl.t_s,
            f_r: ctrl.f_r,
            a_des: ctrl.a_des,
            v_des: ctrl.v_des,
            a_lat: lateral_acceleration(speed, gamma, sc.params.l),
            iota: ctrl.iota,
            a1: ctrl.a1,
            a2: ctrl.a2,
            mu_r: forces.map(|f| f.mu_r),
            mu_f: forces.map(|f| f.mu_f),
            resid_max: resid,
            state: x.to_vec(),
        })
    }
}

/// Runs a scenario from `t = 0` to its duration.
pub fn run_scenario(sc: &Scenario) -> Result<SimTrace, SimError> {
    sc.validate()?;
    let path = sc.build_path()?;
    let abs0 = sc.initial_state(&path)?;
    let runner = Runner {
        sc,
        path,
        hint: Cell::new(sc.initial.s),
    };
    let x0 = match sc.frame {
        Frame::Absolute => abs0.values().to_vec(),
        Frame::Path => RelState::from_abs(&abs0, sc.point, &runner.path, Some(sc.initial.s), &sc.params)
            .map_err(|e| SimError::guard(0.0, e))?
            .values()
            .to_vec(),
    };
    let mut rows = Vec::new();
    let hold = sc.update == ControlUpdate::ZeroOrderHold;
    integrate(
        x0,
        sc.dt,
        sc.duration,
        |t, x| {
            let (obs, ctrl) = runner.evaluate(t, x)?;
            if obs.s.is_finite() {
                runner.hint.set(obs.s);
            }
            rows.push(runner.row(t, x, &obs, &ctrl)?);
            Ok(ctrl.input)
        },
        |t, x, held| {
            let input = if hold { *held } else { runner.evaluate(t, x)?.1.input };
            runner.derivative(t, x, &input)
        },
    )?;
    Ok(SimTrace {
        name: sc.name.clone(),
        variant: sc.variant,
        dt: sc.dt,
        rows,
    })
}
