use super::{ControlGains, FeedbackLaw, WrapperOrder, WrapperSpec};
use crate::models::VehicleParams;

/// Steering angle that traces curvature `kappa` exactly.
pub fn feedforward_steer(kappa: f64, l: f64) -> f64 {
    (kappa * l).atan()
}

/// Relative yaw the nonlinear law steers towards at lateral error `e`.
pub fn desired_heading(e: f64, gains: &ControlGains) -> f64 {
    -(gains.k2 * e).atan()
}

fn inner(e: f64, theta: f64, gains: &ControlGains, law: FeedbackLaw) -> f64 {
    match law {
        FeedbackLaw::Linear => gains.k1 * theta + gains.k1 * gains.k2 * e,
        _ => gains.k1 * (theta + (gains.k2 * e).atan()),
    }
}

/// Feedback steering angle. The wrapped law uses the wrapper of the given order
/// bounded by `gamma_sat`.
pub fn feedback_steer(
    e: f64,
    theta: f64,
    gains: &ControlGains,
    gamma_sat: f64,
    law: FeedbackLaw,
    order: WrapperOrder,
) -> f64 {
    let x = inner(e, theta, gains, law);
    match law {
        FeedbackLaw::Wrapped => WrapperSpec::new(order, gamma_sat).value(x),
        _ => x,
    }
}

/// Steering bound from the lateral acceleration limit, capped by the mechanical limit.
pub fn steering_saturation(speed: f64, gains: &ControlGains, params: &VehicleParams) -> f64 {
    if speed == 0.0 {
        return params.gamma_max;
    }
    params
        .gamma_max
        .min((gains.a_lat_max * params.l / (speed * speed)).atan())
}

/// First and second derivatives of [`steering_saturation`] with respect to speed.
pub fn saturation_rates(speed: f64, gains: &ControlGains, params: &VehicleParams) -> (f64, f64, f64) {
    let sat = steering_saturation(speed, gains, params);
    if speed == 0.0 || sat >= params.gamma_max {
        return (sat, 0.0, 0.0);
    }
    let q = gains.a_lat_max * params.l / (speed * speed);
    let dq = -2.0 * q / speed;
    let ddq = 6.0 * q / (speed * speed);
    let den = 1.0 + q * q;
    (sat, dq / den, ddq / den - 2.0 * q * dq * dq / (den * den))
}

/// Steering servo torque `g(k_s (gamma - gamma_des))` bounded by `T_sat`.
pub fn steering_torque(gamma: f64, gamma_des: f64, gains: &ControlGains) -> f64 {
    WrapperSpec::arctan(gains.t_sat).value(gains.k_s * (gamma - gamma_des))
}

#[cfg(test)]
mod tests {
    use super::*;

    const W2: WrapperOrder = WrapperOrder::Finite(2);

    #[test]
    fn feedforward_values() {
        assert_eq!(feedforward_steer(0.0, 2.57), 0.0);
        assert!((feedforward_steer(1.0 / 200.0, 2.57) - 0.012_849_3).abs() < 1e-7);
        assert!((feedforward_steer(0.004 * std::f64::consts::PI, 2.57) - 0.032_284_351).abs() < 1e-9);
    }

    #[test]
    fn saturation_values() {
        let g = ControlGains::default();
        let p = VehicleParams::default();
        assert!((steering_saturation(20.0, &g, &p) - 0.025_694).abs() < 1e-6);
        assert_eq!(steering_saturation(0.0, &g, &p), p.gamma_max);
        assert_eq!(steering_saturation(0.01, &g, &p), p.gamma_max);
        let v_edge = (g.a_lat_max * p.l / p.gamma_max.tan()).sqrt();
        assert!((steering_saturation(v_edge, &g, &p) - p.gamma_max).abs() < 1e-12);
    }

    #[test]
    fn saturation_rate_differences() {
        let g = ControlGains::default();
        let p = VehicleParams::default();
        let h = 1e-4;
        for v in [8.0, 14.0, 25.0] {
            let (_, d1, d2) = saturation_rates(v, &g, &p);
            let fd1 = (steering_saturation(v + h, &g, &p) - steering_saturation(v - h, &g, &p)) / (2.0 * h);
            let fd2 = (saturation_rates(v + h, &g, &p).1 - saturation_rates(v - h, &g, &p).1) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-9 && (d2 - fd2).abs() < 1e-8);
        }
    }

    #[test]
    fn laws_vanish_at_zero_error() {
        let g = ControlGains::default();
        for law in [FeedbackLaw::Linear, FeedbackLaw::Nonlinear, FeedbackLaw::Wrapped] {
            assert_eq!(feedback_steer(0.0, 0.0, &g, 0.1, law, W2), 0.0);
        }
    }

    #[test]
    fn far_from_path_heading() {
        let g = ControlGains::default();
        let th = desired_heading(1e9, &g);
        assert!((th + std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        let sat = 0.03;
        let fb = feedback_steer(1e9, 0.2, &g, sat, FeedbackLaw::Wrapped, W2);
        let expect = WrapperSpec::arctan(sat).value(g.k1 * (0.2 + std::f64::consts::FRAC_PI_2));
        assert!((fb - expect).abs() < 1e-9);
    }

    #[test]
    fn torque_servo() {
        let g = ControlGains::default();
        assert_eq!(steering_torque(0.1, 0.1, &g), 0.0);
        assert!((steering_torque(100.0, 0.0, &g).abs() - 1.0).abs() < 1e-2);
        let t = steering_torque(1e-6, 0.0, &g);
        assert!((t + 6e-6).abs() < 1e-15);
    }
}
