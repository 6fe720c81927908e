use nalgebra::{Complex, DMatrix};

use super::AnalysisError;
use crate::control::ControlGains;

/// `x' = A x + B u` around an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub states: Vec<&'static str>,
    pub inputs: Vec<&'static str>,
}

impl LinearModel {
    pub fn eigenvalues(&self) -> Vec<Complex<f64>> {
        self.a.clone().complex_eigenvalues().iter().copied().collect()
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.max_real_part() < 0.0
    }

    /// Index of a state by label.
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| *s == name)
    }
}

/// Kinematic model under the feedforward plus nonlinear feedback law.
///
/// States `(e, theta)`, or `(s, e, theta)` with `full`. The single curvature
/// input column is identically zero.
pub fn linearize_kinematic(kappa_star: f64, v: f64, l: f64, k1: f64, k2: f64, full: bool) -> LinearModel {
    let k2l2 = kappa_star * kappa_star * l * l;
    let a21 = v / l * (k1 * k2 * (1.0 + k2l2) - kappa_star * kappa_star * l);
    let a22 = v / l * k1 * (1.0 + k2l2);
    if full {
        LinearModel {
            a: DMatrix::from_row_slice(3, 3, &[0.0, v * kappa_star, 0.0, 0.0, 0.0, v, 0.0, a21, a22]),
            b: DMatrix::zeros(3, 1),
            states: vec!["s", "e", "theta"],
            inputs: vec!["kappa"],
        }
    } else {
        LinearModel {
            a: DMatrix::from_row_slice(2, 2, &[0.0, v, a21, a22]),
            b: DMatrix::zeros(2, 1),
            states: vec!["e", "theta"],
            inputs: vec!["kappa"],
        }
    }
}

/// Torque-steered model with the steering servo. States `(e, theta, gamma, sigma2)`;
/// inputs the curvature perturbation and, with look-ahead, its arc-length slope.
#[allow(clippy::too_many_arguments)]
pub fn linearize_steering(
    kappa_star: f64,
    v: f64,
    l: f64,
    j_f: f64,
    k_s: f64,
    k1: f64,
    k2: f64,
    t_look: Option<f64>,
) -> LinearModel {
    let q = 1.0 + kappa_star * kappa_star * l * l;
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(4, 4, &[
        0.0, v, 0.0, 0.0,
        -v * kappa_star * kappa_star, 0.0, v / l * q, 0.0,
        0.0, 0.0, 0.0, 1.0,
        -k_s * k1 * k2 / j_f, -k_s * k1 / j_f, k_s / j_f, -v / l * q,
    ]);
    let servo = -k_s * l / (j_f * q);
    match t_look {
        None => LinearModel {
            a,
            b: DMatrix::from_row_slice(4, 1, &[0.0, -v, 0.0, servo]),
            states: vec!["e", "theta", "gamma", "sigma2"],
            inputs: vec!["kappa"],
        },
        Some(t_l) => LinearModel {
            a,
            b: DMatrix::from_row_slice(4, 2, &[0.0, 0.0, -v, 0.0, 0.0, 0.0, servo, servo * v * t_l]),
            states: vec!["e", "theta", "gamma", "sigma2"],
            inputs: vec!["kappa", "kappa_slope"],
        },
    }
}

/// Force-driven model under speed scheduling, around the cornering equilibrium
/// `sigma1 = sqrt(a_lat_max / |kappa|)`. States `(s, e, theta, sigma1)`; input
/// the previewed peak curvature.
pub fn linearize_longitudinal(kappa_star: f64, l: f64, gains: &ControlGains) -> Result<LinearModel, AnalysisError> {
    let k_abs = kappa_star.abs();
    if k_abs == 0.0 {
        return Err(AnalysisError::DegenerateEquilibrium(
            "straight path: target speed saturates at v_max".into(),
        ));
    }
    let v = (gains.a_lat_max / k_abs).sqrt();
    if v >= gains.v_max {
        return Err(AnalysisError::DegenerateEquilibrium(format!(
            "cornering speed {v:.3} m/s is capped by v_max = {}",
            gains.v_max
        )));
    }
    let lateral = linearize_kinematic(kappa_star, v, l, gains.k1, gains.k2, false);
    let mut a = DMatrix::zeros(4, 4);
    a[(0, 1)] = v * kappa_star;
    a[(0, 3)] = 1.0;
    a.view_mut((1, 1), (2, 2)).copy_from(&lateral.a);
    a[(3, 3)] = gains.k_a;
    let mut b = DMatrix::zeros(4, 1);
    // d v_des / d kappa_m = -v / (2 kappa_m)
    b[(3, 0)] = gains.k_a * v / (2.0 * k_abs);
    Ok(LinearModel {
        a,
        b,
        states: vec!["s", "e", "theta", "sigma1"],
        inputs: vec!["kappa_m"],
    })
}
