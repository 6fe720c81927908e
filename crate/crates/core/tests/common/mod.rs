//! Reference formulas written out independently of the library.
#![allow(dead_code)]

use nonholo::models::{AbsState, DriveInput, ModelVariant, VehicleParams};
use rand::rngs::StdRng;
use rand::Rng;

pub struct Masses {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

pub fn masses(p: &VehicleParams) -> Masses {
    let (l, d) = (p.l, p.d);
    Masses {
        m1: p.m + p.m_r + p.m_f,
        m2: (p.j_g + p.m * d * d + p.j_r + p.j_f + p.m_f * l * l) / (l * l),
        m3: p.m_r - (l - d) / d * p.m_f,
        m4: p.m_f + d / l * p.m,
    }
}

/// Force-driven skate model with assigned steering, written from the table of
/// closed forms. Returns `sigma1'`.
pub fn skate_force_accel(sigma1: f64, g: f64, gd: f64, gdd: f64, f_r: f64, f_f: f64, p: &VehicleParams) -> f64 {
    let k = masses(p);
    let (t, c) = (g.tan(), g.cos());
    (f_r + f_f / c - k.m2 * t / (c * c) * sigma1 * gd - p.j_f / p.l * gdd * t) / (k.m1 + k.m2 * t * t)
}

/// Lagrange multipliers in terms of velocities.
pub fn multipliers(sigma1: f64, g: f64, gd: f64, gdd: f64, f_r: f64, f_f: f64, p: &VehicleParams) -> (f64, f64) {
    let Masses { m1, m2, m4, .. } = masses(p);
    let (t, c, l, j_f) = (g.tan(), g.cos(), p.l, p.j_f);
    let det = m1 + m2 * t * t;
    let lambda1 =
        (m2 - m4) * t / det * (f_r + f_f / c) - (m1 - m4) * sigma1 * sigma1 / l * t - m4 * sigma1 * gd / (c * c)
            + (m1 + m4 * t * t) / det * (m2 * sigma1 * gd / (c * c) + j_f / l * gdd);
    let lambda2 =
        -(m2 * f_r * t / c + (m2 - m1) * f_f * t + m1 * m2 * sigma1 * gd / c.powi(3) + m1 * j_f / l * gdd / c) / det
            - m4 * sigma1 * sigma1 * t / (l * c);
    (lambda1, lambda2)
}

/// Lateral skate forces from the free-body balance, using body accelerations
/// obtained by differentiating the velocity constraints.
#[allow(clippy::too_many_arguments)]
pub fn newtonian_forces(
    psi: f64,
    sigma1: f64,
    g: f64,
    gd: f64,
    gdd: f64,
    f_r: f64,
    f_f: f64,
    p: &VehicleParams,
) -> (f64, f64) {
    let Masses { m1, m3, .. } = masses(p);
    let (l, d) = (p.l, p.d);
    let (t, c) = (g.tan(), g.cos());
    let s1_dot = skate_force_accel(sigma1, g, gd, gdd, f_r, f_f, p);
    let psi_dot = sigma1 * t / l;
    let psi_ddot = (s1_dot * t + sigma1 * gd / (c * c)) / l;
    let (sp, cp) = psi.sin_cos();
    let k = d / l;
    let x_ddot = s1_dot * (cp - k * t * sp) + sigma1 * (-sp * psi_dot - k * (gd / (c * c) * sp + t * cp * psi_dot));
    let y_ddot = s1_dot * (sp + k * t * cp) + sigma1 * (cp * psi_dot + k * (gd / (c * c) * cp - t * sp * psi_dot));
    let (sg, cg) = g.sin_cos();
    let (spg, cpg) = (psi + g).sin_cos();
    let rear = (-f_r * cg - f_f - m3 * d * psi_ddot * sg
        + m3 * d * psi_dot * psi_dot * cg
        + m1 * (x_ddot * cpg + y_ddot * spg))
        / sg;
    let front = (f_r + f_f * cg - m3 * d * psi_dot * psi_dot - m1 * (x_ddot * cp + y_ddot * sp)) / sg;
    (rear, front)
}

/// Random force-driven state away from the singular steering angles.
pub fn random_skate_force(rng: &mut StdRng) -> (AbsState, DriveInput) {
    let gamma = {
        let mag = rng.random_range(0.05..1.3);
        if rng.random_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let state = AbsState::new(
        ModelVariant::SkateForce,
        vec![
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(0.5..35.0),
        ],
        None,
    )
    .expect("layout");
    let input = DriveInput {
        gamma_cmd: gamma,
        gamma_dot: rng.random_range(-0.5..0.5),
        gamma_ddot: rng.random_range(-2.0..2.0),
        f_r: rng.random_range(-3000.0..3000.0),
        f_f: rng.random_range(-3000.0..3000.0),
        ..DriveInput::default()
    };
    (state, input)
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}
