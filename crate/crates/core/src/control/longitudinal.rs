use super::{chain::CurvatureSource, ControlGains, WrapperSpec};
use crate::models::{check_tan, ModelError, VehicleParams};
use crate::path::PathError;

/// Speed target for previewed peak curvature `kappa_m`.
pub fn target_speed(kappa_m: f64, gains: &ControlGains) -> f64 {
    if kappa_m <= 0.0 {
        return gains.v_max;
    }
    gains.v_max.min((gains.a_lat_max / kappa_m).sqrt())
}

/// Desired longitudinal acceleration `g(k_a (sigma1 - v_des))` bounded by `a_long_max`.
pub fn longitudinal_accel(sigma1: f64, v_des: f64, gains: &ControlGains) -> f64 {
    WrapperSpec::arctan(gains.a_long_max).value(gains.k_a * (sigma1 - v_des))
}

/// Speed scheduling output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedCommand {
    pub kappa_m: f64,
    pub v_des: f64,
    pub v_des_rate: f64,
    pub a_des: f64,
    /// Time derivative of `a_des` when the speed follows `a_des` exactly.
    pub a_des_rate: f64,
}

/// Target speed and desired acceleration at arc length `s` moving at `s_dot`.
///
/// The rates assume the closed loop `sigma1' = a_des`.
pub fn speed_command(
    path: &dyn CurvatureSource,
    s: f64,
    s_dot: f64,
    sigma1: f64,
    gains: &ControlGains,
) -> Result<SpeedCommand, PathError> {
    let (kappa_m, kappa_m_slope) = path.window_peak(s, gains.preview_dist)?;
    let v_des = target_speed(kappa_m, gains);
    let v_des_rate = if kappa_m > 0.0 && v_des < gains.v_max {
        -v_des / (2.0 * kappa_m) * kappa_m_slope * s_dot
    } else {
        0.0
    };
    let w = WrapperSpec::arctan(gains.a_long_max);
    let x = gains.k_a * (sigma1 - v_des);
    let a_des = w.value(x);
    let a_des_rate = w.deriv(x) * gains.k_a * (a_des - v_des_rate);
    Ok(SpeedCommand {
        kappa_m,
        v_des,
        v_des_rate,
        a_des,
        a_des_rate,
    })
}

/// Rear driving force realising `sigma1' = a_des` together with its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivingForce {
    pub f_r: f64,
    pub iota: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Feedback-linearising rear driving force for the force-driven skate model.
pub fn driving_force(
    a_des: f64,
    gamma: f64,
    gamma_dot: f64,
    gamma_ddot: f64,
    sigma1: f64,
    params: &VehicleParams,
) -> Result<DrivingForce, ModelError> {
    check_tan(gamma)?;
    let (m1, m2) = (params.m1(), params.m2());
    let t = gamma.tan();
    let c = gamma.cos();
    let iota = m2 / m1 * t * t;
    let a1 = m2 / m1 * gamma.sin() / (c * c * c) * gamma_dot * sigma1;
    let a2 = params.j_f / (m1 * params.l) * gamma_ddot * t;
    Ok(DrivingForce {
        f_r: m1 * ((1.0 + iota) * a_des + a1 + a2),
        iota,
        a1,
        a2,
    })
}
