use super::forces::resistance;
use super::{
    check_tan, AbsState, Coord, DriveInput, DriveKind, ModelError, ModelVariant, VehicleParams, SINGULARITY_GUARD,
};
use crate::path::PlanarRates;

/// Rates of the centre of mass for rear-axle speed `v`.
pub fn centre_of_mass_rates(v: f64, psi: f64, gamma: f64, p: &VehicleParams) -> PlanarRates {
    let t = gamma.tan();
    let (sn, cs) = psi.sin_cos();
    let k = p.d / p.l * t;
    PlanarRates {
        x_dot: v * (cs - k * sn),
        y_dot: v * (sn + k * cs),
        psi_dot: v * t / p.l,
    }
}

/// Rates of the rear axle centre for rear-axle speed `v`.
pub fn rear_axle_rates(v: f64, psi: f64, gamma: f64, l: f64) -> PlanarRates {
    let (sn, cs) = psi.sin_cos();
    PlanarRates {
        x_dot: v * cs,
        y_dot: v * sn,
        psi_dot: v * gamma.tan() / l,
    }
}

/// Lateral acceleration of the rear axle centre, `speed^2 tan(gamma) / l`.
pub fn lateral_acceleration(speed: f64, gamma: f64, l: f64) -> f64 {
    speed * speed * gamma.tan() / l
}

/// Generalised driving force along the rear-axle speed, net of road resistance.
fn drive_force(variant: ModelVariant, input: &DriveInput, gamma: f64, sigma1: f64, p: &VehicleParams) -> f64 {
    let c = gamma.cos();
    let applied = match variant.drive() {
        DriveKind::Torque => (input.t_r + input.t_f / c) / p.r,
        _ => input.f_r + input.f_f / c,
    };
    applied - input.road.map_or(0.0, |road| resistance(&road, sigma1, p))
}

/// State derivative of the model carried by `state`.
///
/// Assigned-steering variants read the steering angle and its first two time
/// derivatives from `input`.
pub fn eom_rhs(state: &AbsState, input: &DriveInput, p: &VehicleParams) -> Result<Vec<f64>, ModelError> {
    let variant = state.variant();
    input.check(variant)?;
    let get = |c: Coord| state.get(c).expect("coordinate in layout");
    let psi = get(Coord::Psi);
    let gamma = state.steering_angle(input);
    if variant != ModelVariant::SkateForceAltPseudo {
        check_tan(gamma)?;
    }
    let (l, j_f) = (p.l, p.j_f);
    let (m1, m2) = (p.m1(), p.m2());
    let (sg, c) = gamma.sin_cos();
    let t = gamma.tan();

    let mut out = vec![0.0; variant.dim()];
    let mut put = |coord: Coord, value: f64| out[variant.index_of(coord).expect("coordinate in layout")] = value;

    match variant {
        ModelVariant::SkateForceAltPseudo => {
            let front = get(Coord::FrontSpeed);
            let (sn, cs) = psi.sin_cos();
            let k = p.d / l;
            put(Coord::XG, front * (cs * c - k * sn * sg));
            put(Coord::YG, front * (sn * c + k * cs * sg));
            put(Coord::Psi, front * sg / l);
            let drive = c * drive_force(variant, input, gamma, front * c, p);
            let num = drive + (m1 - m2) * front * input.gamma_dot * sg * c - j_f / l * input.gamma_ddot * sg;
            put(Coord::FrontSpeed, num / (m1 * c * c + m2 * sg * sg));
        }
        ModelVariant::SkateForceLagrange => {
            if gamma.abs() <= SINGULARITY_GUARD {
                return Err(ModelError::LagrangeSingularity { gamma });
            }
            let yaw_rate = get(Coord::YawRate);
            let (sn, cs) = psi.sin_cos();
            let cot = 1.0 / t;
            put(Coord::XG, (l * cs * cot - p.d * sn) * yaw_rate);
            put(Coord::YG, (l * sn * cot + p.d * cs) * yaw_rate);
            put(Coord::Psi, yaw_rate);
            let sigma1 = l * yaw_rate * cot;
            let drive = drive_force(variant, input, gamma, sigma1, p);
            let num =
                drive * t / l + m1 * input.gamma_dot * yaw_rate / (sg * c) - j_f / (l * l) * input.gamma_ddot * t * t;
            put(Coord::YawRate, num / (m1 + m2 * t * t));
        }
        _ => {
            let v = state.speed().unwrap_or_else(|| get(Coord::Sigma1));
            let g = centre_of_mass_rates(v, psi, gamma, p);
            put(Coord::XG, g.x_dot);
            put(Coord::YG, g.y_dot);
            put(Coord::Psi, g.psi_dot);
            if variant.has_wheels() {
                put(Coord::PhiR, v / p.r);
                put(Coord::PhiF, v / (p.r * c));
            }
            let c2 = c * c;
            match (variant.drive(), variant.steering()) {
                (DriveKind::ConstantSpeed, super::SteeringKind::Assigned) => {}
                (DriveKind::ConstantSpeed, super::SteeringKind::Torque) => {
                    let rate = get(Coord::Sigma2);
                    put(Coord::Gamma, rate);
                    put(Coord::Sigma2, input.t_s / j_f - v * rate / (l * c2));
                }
                (_, super::SteeringKind::Assigned) => {
                    let drive = drive_force(variant, input, gamma, v, p);
                    let num = drive - m2 * t / c2 * v * input.gamma_dot - j_f / l * input.gamma_ddot * t;
                    put(Coord::Sigma1, num / (m1 + m2 * t * t));
                }
                (_, super::SteeringKind::Torque) => {
                    let rate = get(Coord::Sigma2);
                    let drive = drive_force(variant, input, gamma, v, p);
                    let reduced = m2 - j_f / (l * l);
                    let det = m1 + reduced * t * t;
                    put(Coord::Gamma, rate);
                    put(
                        Coord::Sigma1,
                        (drive - reduced * t / c2 * v * rate - input.t_s * t / l) / det,
                    );
                    put(
                        Coord::Sigma2,
                        (-drive * t / l - m1 * v * rate / (l * c2) + input.t_s / j_f * (m1 + m2 * t * t)) / det,
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Left-hand sides of the kinematic constraints applicable to the variant:
/// the two lateral no-slip conditions, the two rolling conditions for wheel
/// variants and the assigned speed for constant-speed variants.
pub fn constraint_residuals(state: &AbsState, derivative: &[f64], input: &DriveInput, p: &VehicleParams) -> Vec<f64> {
    let variant = state.variant();
    let rate = |c: Coord| derivative[variant.index_of(c).expect("coordinate in layout")];
    let psi = state.get(Coord::Psi).expect("psi in layout");
    let gamma = state.steering_angle(input);
    let (x_dot, y_dot, psi_dot) = (rate(Coord::XG), rate(Coord::YG), rate(Coord::Psi));
    let (sn, cs) = psi.sin_cos();
    let (sf, cf) = (psi + gamma).sin_cos();
    let mut r = vec![
        x_dot * sn - y_dot * cs + p.d * psi_dot,
        x_dot * sf - y_dot * cf - (p.l - p.d) * psi_dot * gamma.cos(),
    ];
    if variant.has_wheels() {
        r.push(x_dot * cs + y_dot * sn - p.r * rate(Coord::PhiR));
        r.push(x_dot * cf + y_dot * sf + (p.l - p.d) * psi_dot * gamma.sin() - p.r * rate(Coord::PhiF));
    }
    if let Some(v) = state.speed() {
        r.push(x_dot * cs + y_dot * sn - v);
    }
    r
}
