//! Linearisations checked against central differences of the nonlinear closed
//! loops, assembled here from the model right-hand sides and control laws.

use nalgebra::DMatrix;
use nonholo::analysis::{linearize_kinematic, linearize_longitudinal, linearize_steering, LinearModel};
use nonholo::control::{
    feedback_steer, longitudinal_accel, steering_torque, target_speed, ControlGains, FeedbackLaw, WrapperOrder,
};
use nonholo::models::{eom_rhs, AbsState, Coord, DriveInput, ModelVariant, VehicleParams};
use nonholo::sim::rk4_step;

const H: f64 = 1e-5;

type Rhs<'a> = &'a dyn Fn(&[f64], &[f64]) -> Vec<f64>;

/// Jacobian of `f` at `x` (columns for states) and at `u` (columns for inputs).
fn jacobians(f: Rhs, x: &[f64], u: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = x.len();
    let central = |which: usize, j: usize, h: f64| -> Vec<f64> {
        let bump = |sign: f64| {
            let (mut xs, mut us) = (x.to_vec(), u.to_vec());
            if which == 0 {
                xs[j] += sign * h
            } else {
                us[j] += sign * h
            }
            f(&xs, &us)
        };
        bump(1.0)
            .iter()
            .zip(bump(-1.0))
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect()
    };
    // Richardson step on the central quotient
    let column = |which: usize, j: usize| -> Vec<f64> {
        let coarse = central(which, j, H);
        central(which, j, H / 2.0)
            .iter()
            .zip(coarse)
            .map(|(fine, c)| (4.0 * fine - c) / 3.0)
            .collect()
    };
    let a = DMatrix::from_fn(n, n, |i, j| column(0, j)[i]);
    let b = DMatrix::from_fn(n, u.len(), |i, j| column(1, j)[i]);
    (a, b)
}

fn assert_close(name: &str, fd: &DMatrix<f64>, model: &DMatrix<f64>) {
    let scale = model.amax().max(1.0);
    let worst = (fd - model).amax();
    assert!(worst <= 1e-6 * scale, "{name}: worst {worst:e}\nfd {fd}\nmodel {model}");
}

fn nonlinear_fb(e: f64, theta: f64, k1: f64, k2: f64) -> f64 {
    let g = ControlGains {
        k1,
        k2,
        ..ControlGains::default()
    };
    feedback_steer(e, theta, &g, 1.0, FeedbackLaw::Nonlinear, WrapperOrder::Finite(2))
}

/// Rear-axle path-frame rates `(s', e', theta')` for curvature `kappa`.
fn frame(v: f64, gamma: f64, e: f64, theta: f64, kappa: f64, l: f64) -> [f64; 3] {
    let s_dot = v * theta.cos() / (1.0 - kappa * e);
    [s_dot, v * theta.sin(), v * gamma.tan() / l - kappa * s_dot]
}

const POINTS: [(f64, f64, f64, f64); 5] = [
    (0.0, 20.0, -0.5, 0.02),
    (0.0125, 20.0, -0.5, 0.02),
    (-0.03, 12.0, -1.2, 0.1),
    (0.05, 8.0, -0.3, 0.2),
    (0.002, 30.0, -2.0, 0.05),
];

#[test]
fn kinematic_matches_differences() {
    let l = 2.57;
    for (kappa, v, k1, k2) in POINTS {
        for full in [false, true] {
            let model = linearize_kinematic(kappa, v, l, k1, k2, full);
            let f = |x: &[f64], u: &[f64]| {
                let k = kappa + u[0];
                let (e, th) = if full { (x[1], x[2]) } else { (x[0], x[1]) };
                let gamma = (k * l).atan() + nonlinear_fb(e, th, k1, k2);
                let r = frame(v, gamma, e, th, k, l);
                if full {
                    vec![r[0] - v, r[1], r[2]]
                } else {
                    vec![r[1], r[2]]
                }
            };
            let x0 = vec![0.0; model.states.len()];
            let (a, b) = jacobians(&f, &x0, &[0.0]);
            assert_close("kinematic A", &a, &model.a);
            assert_close("kinematic B", &b, &model.b);
        }
    }
}

#[test]
fn steering_matches_differences() {
    let p = VehicleParams::default();
    for (kappa, v, k1, k2) in POINTS {
        for t_look in [None, Some(0.3)] {
            let gains = ControlGains {
                k1,
                k2,
                ..ControlGains::default()
            };
            let model: LinearModel = linearize_steering(kappa, v, p.l, p.j_f, gains.k_s, k1, k2, t_look);
            let gamma_star = (kappa * p.l).atan();
            let f = |x: &[f64], u: &[f64]| {
                let (e, th, gamma, sigma2) = (x[0], x[1], gamma_star + x[2], x[3]);
                let k = kappa + u[0];
                let slope = u.get(1).copied().unwrap_or(0.0);
                let ahead = k + v * t_look.unwrap_or(0.0) * slope;
                let gamma_des = (p.l * ahead).atan() + nonlinear_fb(e, th, k1, k2);
                let st = AbsState::at_pose(ModelVariant::SkateTorqueSteer, 0.0, 0.0, 0.0, Some(v))
                    .unwrap()
                    .with(Coord::Gamma, gamma)
                    .with(Coord::Sigma2, sigma2);
                let u_in = DriveInput {
                    t_s: steering_torque(gamma, gamma_des, &gains),
                    ..Default::default()
                };
                let d = eom_rhs(&st, &u_in, &p).unwrap();
                let r = frame(v, gamma, e, th, k, p.l);
                vec![r[1], r[2], d[3], d[4]]
            };
            let (a, b) = jacobians(&f, &[0.0; 4], &vec![0.0; model.inputs.len()]);
            assert_close("steering A", &a, &model.a);
            assert_close("steering B", &b, &model.b);
        }
    }
}

#[test]
fn longitudinal_matches_differences() {
    let l = 2.57;
    let gains = ControlGains::default();
    for kappa in [0.004 * std::f64::consts::PI, 0.02, -0.05, 0.1] {
        let model = linearize_longitudinal(kappa, l, &gains).unwrap();
        let v_star = (gains.a_lat_max / kappa.abs()).sqrt();
        let f = |x: &[f64], u: &[f64]| {
            let (e, th, sigma1) = (x[1], x[2], v_star + x[3]);
            let gamma = (kappa * l).atan() + nonlinear_fb(e, th, gains.k1, gains.k2);
            let r = frame(sigma1, gamma, e, th, kappa, l);
            let a_des = longitudinal_accel(sigma1, target_speed(kappa.abs() + u[0], &gains), &gains);
            vec![r[0] - v_star, r[1], r[2], a_des]
        };
        let (a, b) = jacobians(&f, &[0.0; 4], &[0.0]);
        assert_close("longitudinal A", &a, &model.a);
        assert_close("longitudinal B", &b, &model.b);
    }
}

#[test]
fn rk4_is_fourth_order() {
    // y' = y on [0, 1]
    let err = |n: usize| {
        let dt = 1.0 / n as f64;
        let mut y = vec![1.0];
        for i in 0..n {
            y = rk4_step(i as f64 * dt, &y, dt, |_, y| Ok(y.to_vec())).unwrap();
        }
        (y[0] - std::f64::consts::E).abs()
    };
    let ratio = err(20) / err(40);
    assert!((ratio - 16.0).abs() < 0.5, "ratio {ratio}");
}

#[test]
fn rk4_keeps_a_circle() {
    // unit-speed rotation: x' = -y, y' = x
    let dt = 1e-3;
    let steps = (2.0 * std::f64::consts::PI / dt).round() as usize;
    let mut z = vec![1.0, 0.0];
    for i in 0..steps {
        z = rk4_step(i as f64 * dt, &z, dt, |_, z| Ok(vec![-z[1], z[0]])).unwrap();
    }
    assert!((z[0].hypot(z[1]) - 1.0).abs() < 1e-12);
}
