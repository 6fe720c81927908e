use super::{saturation_rates, ControlGains, FeedbackLaw, WrapperOrder, WrapperSpec};
use crate::models::VehicleParams;
use crate::path::{CurvatureProfile, PathError, PathTable};

/// Anything that can report curvature and its arc-length derivatives.
pub trait CurvatureSource {
    /// `(kappa, d kappa/ds, d^2 kappa/ds^2)` at `s`.
    fn curvature(&self, s: f64) -> Result<(f64, f64, f64), PathError>;

    /// Peak `|kappa|` over `[s, s + window]` and its derivative with respect to `s`.
    fn window_peak(&self, s: f64, window: f64) -> Result<(f64, f64), PathError>;
}

impl CurvatureSource for CurvatureProfile {
    fn curvature(&self, s: f64) -> Result<(f64, f64, f64), PathError> {
        Ok((self.curvature_at(s), self.curvature_slope(s), self.curvature_bend(s)))
    }

    fn window_peak(&self, s: f64, window: f64) -> Result<(f64, f64), PathError> {
        Ok(CurvatureProfile::window_peak(self, s, window))
    }
}

impl CurvatureSource for PathTable {
    fn curvature(&self, s: f64) -> Result<(f64, f64, f64), PathError> {
        let p = self.point_at(s)?;
        Ok((p.kappa, p.kappa_slope, p.kappa_bend))
    }

    fn window_peak(&self, s: f64, window: f64) -> Result<(f64, f64), PathError> {
        PathTable::window_peak(self, s, window)
    }
}

/// Rear-axle speed and its first two time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedRates {
    pub v: f64,
    pub v_dot: f64,
    pub v_ddot: f64,
}

impl SpeedRates {
    pub fn constant(v: f64) -> Self {
        SpeedRates {
            v,
            v_dot: 0.0,
            v_ddot: 0.0,
        }
    }
}

/// Steering saturation and its time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRates {
    pub value: f64,
    pub rate: f64,
    pub accel: f64,
}

/// Desired steering angle with its parts and time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteerCommand {
    pub gamma_des: f64,
    pub gamma_ff: f64,
    pub gamma_fb: f64,
    pub gamma_sat: f64,
    /// Curvature fed forward (at the look-ahead point).
    pub kappa_ref: f64,
    pub gamma_dot: f64,
    pub gamma_ddot: f64,
}

/// Value, first and second time derivative of a scalar signal.
#[derive(Clone, Copy)]
struct Jet(f64, f64, f64);

fn arctan_jet(x: Jet, gain: f64) -> Jet {
    // atan(gain * x)
    let q = 1.0 + gain * gain * x.0 * x.0;
    Jet(
        (gain * x.0).atan(),
        gain * x.1 / q,
        gain * x.2 / q - 2.0 * gain.powi(3) * x.0 * x.1 * x.1 / (q * q),
    )
}

fn curvature_jet(path: &dyn CurvatureSource, s: Jet) -> Result<Jet, PathError> {
    let (k, k1, k2) = path.curvature(s.0)?;
    Ok(Jet(k, k1 * s.1, k2 * s.1 * s.1 + k1 * s.2))
}

/// Wrapper with a time-varying bound: `g(x; b) = b G(x / b)` where `G` has unit bound.
fn wrapped_jet(order: WrapperOrder, x: Jet, bound: Jet) -> Jet {
    let unit = WrapperSpec::new(order, 1.0);
    let b = bound;
    let u = x.0 / b.0;
    let num = x.1 * b.0 - x.0 * b.1;
    let u_dot = num / (b.0 * b.0);
    let u_ddot = (x.2 * b.0 - x.0 * b.2) / (b.0 * b.0) - 2.0 * b.1 * num / b.0.powi(3);
    let (g, g1, g2) = (unit.value(u), unit.deriv(u), super::wrapper_second_deriv(&unit, u));
    Jet(
        b.0 * g,
        b.1 * g + b.0 * g1 * u_dot,
        b.2 * g + 2.0 * b.1 * g1 * u_dot + b.0 * g2 * u_dot * u_dot + b.0 * g1 * u_ddot,
    )
}

/// Desired steering angle of the rear-axle path follower and its first two
/// time derivatives along the closed-loop flow with assigned steering.
///
/// The curvature and its derivatives come from `path`; the steering bound is
/// rescheduled from the speed, so speed derivatives enter through it as well as
/// through the path-frame kinematics and the look-ahead point.
#[allow(clippy::too_many_arguments)]
pub fn steer_derivative_chain(
    s: f64,
    e: f64,
    theta: f64,
    speed: SpeedRates,
    path: &dyn CurvatureSource,
    gains: &ControlGains,
    law: FeedbackLaw,
    order: WrapperOrder,
    params: &VehicleParams,
) -> Result<SteerCommand, PathError> {
    let l = params.l;
    let SpeedRates { v, v_dot, v_ddot } = speed;
    let (kappa, kappa_slope, _) = path.curvature(s)?;
    let tube = 1.0 - kappa * e;
    // one-sided: a state past the centre of curvature has left the tube
    if tube < 1e-9 {
        return Err(PathError::TubeSingularity { s, denom: tube });
    }
    let (sat, dsat, ddsat) = saturation_rates(v, gains, params);
    let bound = Jet(sat, dsat * v_dot, ddsat * v_dot * v_dot + dsat * v_ddot);

    let (st, ct) = theta.sin_cos();
    let s_dot = v * ct / tube;
    let e_dot = v * st;

    // values only; rates follow once gamma is known
    let look = gains.t_look;
    let kappa_l0 = path.curvature(s + v * look)?.0;
    let ff0 = (l * kappa_l0).atan();
    let x0 = match law {
        FeedbackLaw::Linear => gains.k1 * theta + gains.k1 * gains.k2 * e,
        _ => gains.k1 * (theta + (gains.k2 * e).atan()),
    };
    let fb0 = match law {
        FeedbackLaw::Wrapped => WrapperSpec::new(order, sat).value(x0),
        _ => x0,
    };
    let gamma = ff0 + fb0;
    let tg = gamma.tan();
    let cg2 = gamma.cos().powi(2);
    let theta_dot = v * tg / l - kappa * s_dot;

    let kappa_dot = kappa_slope * s_dot;
    let feedback = |theta_j: Jet, e_j: Jet| -> Jet {
        match law {
            FeedbackLaw::Linear => Jet(
                x0,
                gains.k1 * (theta_j.1 + gains.k2 * e_j.1),
                gains.k1 * (theta_j.2 + gains.k2 * e_j.2),
            ),
            _ => {
                let a = arctan_jet(e_j, gains.k2);
                Jet(x0, gains.k1 * (theta_j.1 + a.1), gains.k1 * (theta_j.2 + a.2))
            }
        }
    };
    let steer = |x: Jet| -> Jet {
        match law {
            FeedbackLaw::Wrapped => wrapped_jet(order, x, bound),
            _ => x,
        }
    };
    let ff_of = |s_c: Jet| -> Result<Jet, PathError> {
        let s_l = Jet(s_c.0 + v * look, s_c.1 + v_dot * look, s_c.2 + v_ddot * look);
        let k = curvature_jet(path, s_l)?;
        Ok(arctan_jet(k, l))
    };

    // first pass: second derivatives of s, e, theta need gamma_dot
    let fb_first = steer(feedback(Jet(theta, theta_dot, 0.0), Jet(e, e_dot, 0.0)));
    let ff_first = ff_of(Jet(s, s_dot, 0.0))?;
    let gamma_dot = ff_first.1 + fb_first.1;

    let s_ddot = (v_dot * ct - v * st * theta_dot) / tube + v * ct * (kappa_dot * e + kappa * e_dot) / (tube * tube);
    let e_ddot = v_dot * st + v * ct * theta_dot;
    let theta_ddot = v_dot * tg / l + v * gamma_dot / (l * cg2) - kappa_dot * s_dot - kappa * s_ddot;

    let fb = steer(feedback(Jet(theta, theta_dot, theta_ddot), Jet(e, e_dot, e_ddot)));
    let ff = ff_of(Jet(s, s_dot, s_ddot))?;
    Ok(SteerCommand {
        gamma_des: gamma,
        gamma_ff: ff0,
        gamma_fb: fb0,
        gamma_sat: sat,
        kappa_ref: kappa_l0,
        gamma_dot: ff.1 + fb.1,
        gamma_ddot: ff.2 + fb.2,
    })
}
