//! Vehicle dynamics written in path coordinates `(s, e, theta)` of either the
//! rear axle centre or the centre of mass.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{check_tan, eom_rhs, AbsState, Coord, DriveInput, ModelError, ModelVariant, VehicleParams};
use crate::path::{path_to_absolute, project, PathError, PathTable};

/// Point of the vehicle whose path coordinates are tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackPoint {
    #[default]
    RearAxle,
    CenterOfMass,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no path-frame form for the {0} model")]
    Unsupported(ModelVariant),
}

/// Path-frame state: `(s, e, theta)` followed by the variant's non-planar coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RelState {
    variant: ModelVariant,
    point: TrackPoint,
    values: Vec<f64>,
    speed: Option<f64>,
}

fn supported(variant: ModelVariant) -> Result<(), FrameError> {
    if ModelVariant::PRIMARY.contains(&variant) {
        Ok(())
    } else {
        Err(FrameError::Unsupported(variant))
    }
}

impl RelState {
    pub fn new(
        variant: ModelVariant,
        point: TrackPoint,
        values: Vec<f64>,
        speed: Option<f64>,
    ) -> Result<Self, FrameError> {
        supported(variant)?;
        // reuse the absolute-state checks for dimension and speed
        AbsState::new(variant, values.clone(), speed)?;
        Ok(RelState {
            variant,
            point,
            values,
            speed,
        })
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn point(&self) -> TrackPoint {
        self.point
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn speed(&self) -> Option<f64> {
        self.speed
    }

    pub fn s(&self) -> f64 {
        self.values[0]
    }

    pub fn e(&self) -> f64 {
        self.values[1]
    }

    pub fn theta(&self) -> f64 {
        self.values[2]
    }

    pub fn get(&self, c: Coord) -> Option<f64> {
        match c {
            Coord::XG | Coord::YG | Coord::Psi => None,
            _ => self.variant.index_of(c).map(|i| self.values[i]),
        }
    }

    /// Non-planar part as an absolute state at the origin; those coordinates do
    /// not depend on position or yaw.
    fn inner(&self) -> AbsState {
        let mut v = self.values.clone();
        v[..3].fill(0.0);
        AbsState::new(self.variant, v, self.speed).expect("validated on construction")
    }

    /// Projects an absolute state onto the path.
    pub fn from_abs(
        abs: &AbsState,
        point: TrackPoint,
        path: &PathTable,
        hint: Option<f64>,
        params: &VehicleParams,
    ) -> Result<Self, FrameError> {
        supported(abs.variant())?;
        let get = |c| abs.get(c).expect("planar coordinate");
        let (x_g, y_g, psi) = (get(Coord::XG), get(Coord::YG), get(Coord::Psi));
        let (x, y) = match point {
            TrackPoint::CenterOfMass => (x_g, y_g),
            TrackPoint::RearAxle => (x_g - params.d * psi.cos(), y_g - params.d * psi.sin()),
        };
        let q = project(path, x, y, psi, hint)?;
        let mut values = abs.values().to_vec();
        values[0] = q.s;
        values[1] = q.e;
        values[2] = q.theta;
        Ok(RelState {
            variant: abs.variant(),
            point,
            values,
            speed: abs.speed(),
        })
    }

    /// Absolute state with the same non-planar coordinates.
    pub fn to_abs(&self, path: &PathTable, params: &VehicleParams) -> Result<AbsState, FrameError> {
        let pose = path_to_absolute(path, self.s(), self.e(), self.theta())?;
        let (x_g, y_g) = match self.point {
            TrackPoint::CenterOfMass => (pose.x, pose.y),
            TrackPoint::RearAxle => (pose.x + params.d * pose.psi.cos(), pose.y + params.d * pose.psi.sin()),
        };
        let mut values = self.values.clone();
        values[0] = x_g;
        values[1] = y_g;
        values[2] = pose.psi;
        Ok(AbsState::new(self.variant, values, self.speed)?)
    }
}

/// Path-frame rates of the tracked point for rear-axle speed `v` and steering `gamma`.
#[allow(clippy::too_many_arguments)]
pub fn planar_frame_rates(
    point: TrackPoint,
    v: f64,
    gamma: f64,
    e: f64,
    theta: f64,
    kappa: f64,
    s: f64,
    params: &VehicleParams,
) -> Result<[f64; 3], FrameError> {
    check_tan(gamma)?;
    let tube = 1.0 - kappa * e;
    // one-sided: a state past the centre of curvature has left the tube
    if tube < 1e-9 {
        return Err(PathError::TubeSingularity { s, denom: tube }.into());
    }
    let t = gamma.tan();
    let (st, ct) = theta.sin_cos();
    let (along, across) = match point {
        TrackPoint::RearAxle => (ct, st),
        TrackPoint::CenterOfMass => {
            let k = params.d / params.l * t;
            (ct - k * st, st + k * ct)
        }
    };
    let s_dot = v * along / tube;
    Ok([s_dot, v * across, v * t / params.l - kappa * s_dot])
}

/// State derivative in path coordinates.
pub fn pathframe_rhs(
    state: &RelState,
    input: &DriveInput,
    path: &PathTable,
    params: &VehicleParams,
) -> Result<Vec<f64>, FrameError> {
    let inner = state.inner();
    let mut out = eom_rhs(&inner, input, params)?;
    let gamma = inner.steering_angle(input);
    let v = state
        .speed
        .unwrap_or_else(|| state.get(Coord::Sigma1).expect("speed-like coordinate"));
    let kappa = path.curvature_at(state.s())?;
    let planar = planar_frame_rates(
        state.point,
        v,
        gamma,
        state.e(),
        state.theta(),
        kappa,
        state.s(),
        params,
    )?;
    out[..3].copy_from_slice(&planar);
    Ok(out)
}

/// Rear-axle path-frame dynamics when the speed follows `a_des` exactly
/// (force-driven model under the feedback-linearising driving force).
/// State layout `(s, e, theta, sigma1)`.
pub fn longitudinal_rhs(
    state: &[f64; 4],
    gamma: f64,
    a_des: f64,
    path: &PathTable,
    params: &VehicleParams,
) -> Result<[f64; 4], FrameError> {
    let [s, e, theta, sigma1] = *state;
    let kappa = path.curvature_at(s)?;
    let [s_dot, e_dot, theta_dot] =
        planar_frame_rates(TrackPoint::RearAxle, sigma1, gamma, e, theta, kappa, s, params)?;
    Ok([s_dot, e_dot, theta_dot, a_des])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{build_path, CurvatureProfile, Pose};

    fn params() -> VehicleParams {
        VehicleParams::default()
    }

    #[test]
    fn on_path_with_feedforward() {
        let path = build_path(&CurvatureProfile::periodic(250.0, 4), 0.1, None, Pose::default()).unwrap();
        let s = 80.0;
        let kappa = path.curvature_at(s).unwrap();
        let st = RelState::new(
            ModelVariant::SkateKinematic,
            TrackPoint::RearAxle,
            vec![s, 0.0, 0.0],
            Some(20.0),
        )
        .unwrap();
        let u = DriveInput::steering((kappa * 2.57).atan());
        let d = pathframe_rhs(&st, &u, &path, &params()).unwrap();
        assert!((d[0] - 20.0).abs() < 1e-12 && d[1] == 0.0 && d[2].abs() < 1e-15);
    }

    #[test]
    fn straight_reduction() {
        let path = build_path(&CurvatureProfile::Straight, 0.1, Some(100.0), Pose::default()).unwrap();
        let (e, theta, gamma, v) = (1.5, 0.3, 0.05, 12.0);
        let st = RelState::new(
            ModelVariant::SkateKinematic,
            TrackPoint::RearAxle,
            vec![10.0, e, theta],
            Some(v),
        )
        .unwrap();
        let d = pathframe_rhs(&st, &DriveInput::steering(gamma), &path, &params()).unwrap();
        assert!((d[0] - v * theta.cos()).abs() < 1e-12);
        assert!((d[1] - v * theta.sin()).abs() < 1e-12);
        assert!((d[2] - v / 2.57 * gamma.tan()).abs() < 1e-12);
    }

    #[test]
    fn abs_round_trip() {
        let path = build_path(&CurvatureProfile::periodic(250.0, 4), 0.1, None, Pose::default()).unwrap();
        for point in [TrackPoint::RearAxle, TrackPoint::CenterOfMass] {
            let rel = RelState::new(ModelVariant::SkateForce, point, vec![321.0, -2.5, 0.2, 14.0], None).unwrap();
            let abs = rel.to_abs(&path, &params()).unwrap();
            let back = RelState::from_abs(&abs, point, &path, Some(320.0), &params()).unwrap();
            for (a, b) in rel.values().iter().zip(back.values()) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_alternative_pseudo_velocities() {
        let r = RelState::new(
            ModelVariant::SkateForceLagrange,
            TrackPoint::RearAxle,
            vec![0.0; 4],
            None,
        );
        assert!(matches!(r, Err(FrameError::Unsupported(_))));
    }
}
