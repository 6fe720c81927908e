use super::{ControlMode, InitialErrors, PathSpec, Scenario};
use crate::control::ControlGains;
use crate::models::ModelVariant;
use crate::path::CurvatureProfile;

/// Names accepted by [`figure`].
pub const FIGURES: [&str; 7] = ["fig13", "fig14", "fig16", "fig17", "fig18", "fig20", "fig21"];

/// Built-in scenarios reproducing the reference experiments.
pub fn figure(name: &str) -> Option<Scenario> {
    let base = Scenario {
        name: name.to_string(),
        initial: InitialErrors {
            s: 0.0,
            e: -10.0,
            ..Default::default()
        },
        ..Scenario::default()
    };
    let closed = |period: f64| PathSpec {
        profile: CurvatureProfile::periodic(period, 4),
        ..PathSpec::default()
    };
    Some(match name {
        "fig13" => Scenario {
            path: PathSpec {
                profile: CurvatureProfile::Straight,
                ..PathSpec::default()
            },
            duration: 30.0,
            ..base
        },
        "fig14" => Scenario {
            path: PathSpec {
                profile: CurvatureProfile::circle_with_radius(200.0),
                ..PathSpec::default()
            },
            initial: InitialErrors {
                theta: 20f64.to_radians(),
                ..base.initial
            },
            duration: 30.0,
            ..base
        },
        "fig16" => Scenario {
            path: closed(250.0),
            duration: 60.0,
            ..base
        },
        "fig17" | "fig18" => Scenario {
            variant: ModelVariant::SkateTorqueSteer,
            mode: ControlMode::SteerTorque,
            path: closed(250.0),
            gains: ControlGains {
                t_look: if name == "fig18" { 0.3 } else { 0.0 },
                ..ControlGains::default()
            },
            duration: 60.0,
            ..base
        },
        "fig20" => Scenario {
            variant: ModelVariant::SkateForce,
            mode: ControlMode::SteerLongitudinal,
            path: closed(250.0),
            duration: 60.0,
            ..base
        },
        "fig21" => Scenario {
            variant: ModelVariant::SkateForce,
            mode: ControlMode::SteerLongitudinal,
            path: closed(50.0),
            gains: ControlGains {
                a_lat_max: 12.0,
                ..ControlGains::default()
            },
            duration: 40.0,
            ..base
        },
        _ => return None,
    })
}
