use std::fmt;

use super::AnalysisError;
use crate::models::{ModelVariant, SINGULARITY_GUARD};
use crate::path::CurvatureProfile;
use crate::sim::{figure, run_scenario, ControlMode, OpenLoop, PathSpec, Scenario, SimError, SimTrace, TraceRow};

/// Model pairs that must produce the same motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquivalencePair {
    /// Skate forces against wheel torques with `T = r F`.
    SkateWheel,
    /// Appell form against the Lagrange form with yaw rate as coordinate.
    AppellLagrange,
    /// Rear-axle speed against front-axle speed as pseudo-velocity.
    AltPseudo,
}

impl EquivalencePair {
    pub const ALL: [EquivalencePair; 3] = [Self::SkateWheel, Self::AppellLagrange, Self::AltPseudo];

    pub fn name(self) -> &'static str {
        match self {
            Self::SkateWheel => "skate_wheel",
            Self::AppellLagrange => "appell_lagrange",
            Self::AltPseudo => "alt_pseudo",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// The model compared against `reference`, if the pair covers it.
    pub fn counterpart(self, reference: ModelVariant) -> Option<ModelVariant> {
        use ModelVariant::*;
        match (self, reference) {
            (Self::SkateWheel, SkateForce) => Some(WheelTorque),
            (Self::SkateWheel, SkateForceTorqueSteer) => Some(WheelTorqueTorqueSteer),
            (Self::AppellLagrange, SkateForce) => Some(SkateForceLagrange),
            (Self::AltPseudo, SkateForce) => Some(SkateForceAltPseudo),
            _ => None,
        }
    }

    /// Default run for the pair, chosen to stay clear of its singular set.
    pub fn default_scenario(self) -> Scenario {
        match self {
            Self::SkateWheel => Scenario {
                name: "skate_wheel".into(),
                variant: ModelVariant::SkateForce,
                mode: ControlMode::SteerLongitudinal,
                duration: 10.0,
                ..figure("fig16").expect("built-in figure")
            },
            // Constant steering: the vehicle drives a circle while accelerating.
            Self::AppellLagrange => Scenario {
                name: "appell_lagrange".into(),
                variant: ModelVariant::SkateForce,
                mode: ControlMode::None,
                path: PathSpec {
                    profile: CurvatureProfile::Straight,
                    length: Some(400.0),
                    step: 0.5,
                },
                open_loop: OpenLoop {
                    gamma_offset: 0.1,
                    f_r: 300.0,
                    ..OpenLoop::default()
                },
                speed: 10.0,
                duration: 10.0,
                ..Scenario::default()
            },
            Self::AltPseudo => Scenario {
                name: "alt_pseudo".into(),
                variant: ModelVariant::SkateForce,
                mode: ControlMode::None,
                path: PathSpec {
                    profile: CurvatureProfile::Straight,
                    length: Some(400.0),
                    step: 0.5,
                },
                open_loop: OpenLoop {
                    gamma_amplitude: 0.1,
                    gamma_frequency: 0.5,
                    f_r: 200.0,
                    f_f: 100.0,
                    ..OpenLoop::default()
                },
                speed: 10.0,
                duration: 10.0,
                ..Scenario::default()
            },
        }
    }
}

impl fmt::Display for EquivalencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one equivalence check.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub pair: EquivalencePair,
    pub reference: ModelVariant,
    pub candidate: ModelVariant,
    /// Largest absolute difference over every compared channel and sample.
    pub max_deviation: f64,
    pub worst_time: f64,
    pub worst_channel: &'static str,
    pub min_abs_gamma: f64,
    pub samples: usize,
    pub tol: f64,
    pub pass: bool,
}

fn channels(row: &TraceRow) -> [(&'static str, Option<f64>); 6] {
    [
        ("x_G", Some(row.x_g)),
        ("y_G", Some(row.y_g)),
        ("psi", Some(row.psi)),
        ("sigma1", Some(row.sigma1)),
        ("gamma", Some(row.gamma)),
        ("sigma2", row.sigma2),
    ]
}

fn run(sc: &Scenario) -> Result<SimTrace, AnalysisError> {
    run_scenario(sc).map_err(|e| match e {
        SimError::GuardTripped { time, source } => AnalysisError::SingularEncounter {
            time,
            detail: source.to_string(),
        },
        other => AnalysisError::Sim(other),
    })
}

/// Integrates both members of `pair` with the same inputs, integrator and step
/// and compares the mapped states sample by sample.
pub fn verify_equivalence(
    pair: EquivalencePair,
    scenario: &Scenario,
    tol: f64,
) -> Result<EquivalenceReport, AnalysisError> {
    let reference = scenario.variant;
    let candidate = pair
        .counterpart(reference)
        .ok_or_else(|| AnalysisError::Sim(SimError::InvalidScenario(format!("{pair} does not cover {reference}"))))?;
    let lhs = run(scenario)?;

    // The Lagrange form divides by tan(gamma); a sign change means the
    // trajectory crossed the singular set between samples.
    if candidate == ModelVariant::SkateForceLagrange {
        for w in lhs.rows.windows(2) {
            let (g0, g1) = (w[0].gamma, w[1].gamma);
            if g0.abs() < SINGULARITY_GUARD || g0 * g1 <= 0.0 {
                return Err(AnalysisError::SingularEncounter {
                    time: w[0].t,
                    detail: format!("steering angle crosses zero ({g0:.3e} -> {g1:.3e})"),
                });
            }
        }
    }

    let rhs = run(&Scenario {
        variant: candidate,
        ..scenario.clone()
    })?;
    let mut report = EquivalenceReport {
        pair,
        reference,
        candidate,
        max_deviation: 0.0,
        worst_time: 0.0,
        worst_channel: "x_G",
        min_abs_gamma: f64::INFINITY,
        samples: lhs.rows.len().min(rhs.rows.len()),
        tol,
        pass: false,
    };
    for (a, b) in lhs.rows.iter().zip(&rhs.rows) {
        report.min_abs_gamma = report.min_abs_gamma.min(a.gamma.abs());
        for ((name, x), (_, y)) in channels(a).into_iter().zip(channels(b)) {
            if let (Some(x), Some(y)) = (x, y) {
                let dev = (x - y).abs();
                if !(dev <= report.max_deviation) {
                    report.max_deviation = dev;
                    report.worst_time = a.t;
                    report.worst_channel = name;
                }
            }
        }
    }
    report.pass = lhs.rows.len() == rhs.rows.len() && report.max_deviation < tol;
    Ok(report)
}

/// Runs `scenario` with the model swapped to `variant` and mode forced open loop.
pub fn simulate_open_loop(scenario: &Scenario, variant: ModelVariant) -> Result<SimTrace, AnalysisError> {
    run(&Scenario {
        variant,
        mode: ControlMode::None,
        ..scenario.clone()
    })
}
