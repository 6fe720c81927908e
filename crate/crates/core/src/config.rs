//! TOML scenario files.
//!
//! ```toml
//! name = "fig16"
//!
//! [vehicle]          # VehicleParams, SI units, steering limit in radians
//! l = 2.57
//!
//! [path]
//! profile = "periodic"   # straight | circle (kappa) | periodic (kappa_max, period, corners)
//! period = 250.0
//! corners = 4
//! step = 0.1
//!
//! [controller]
//! k1 = -0.5
//! law = "wrapped"        # linear | nonlinear | wrapped
//! wrapper_n = 2          # integer >= 2 or "inf"
//! mode = "steer_only"    # none | steer_only | steer_torque | steer_longitudinal
//!
//! [sim]
//! variant = "skate_kinematic"
//! dt = 0.001
//! duration = 60.0
//! speed = 20.0
//! initial = { e = -10.0 }
//!
//! [output]
//! dir = "out"
//! plot = true
//! stride = 10
//! ```
//!
//! Every block and key is optional; missing values take the defaults of
//! [`Scenario::default`]. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{ControlGains, FeedbackLaw, WrapperOrder};
use crate::models::{ModelVariant, VehicleParams};
use crate::pathframe::TrackPoint;
use crate::sim::{ControlMode, ControlUpdate, Frame, InitialErrors, OpenLoop, PathSpec, Scenario, SimError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Syntax(#[from] toml::de::Error),
    #[error("bad config key `{key}`: {source}")]
    Parse { key: String, source: toml::de::Error },
    #[error("cannot serialise config: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

/// Wrapper order as written in a config: an integer or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WrapperSetting {
    Order(u32),
    Named(Infinite),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Infinite {
    #[serde(rename = "inf")]
    Inf,
}

impl From<WrapperOrder> for WrapperSetting {
    fn from(w: WrapperOrder) -> Self {
        match w {
            WrapperOrder::Finite(n) => WrapperSetting::Order(n),
            WrapperOrder::Infinite => WrapperSetting::Named(Infinite::Inf),
        }
    }
}

impl From<WrapperSetting> for WrapperOrder {
    fn from(w: WrapperSetting) -> Self {
        match w {
            WrapperSetting::Order(n) => WrapperOrder::Finite(n),
            WrapperSetting::Named(Infinite::Inf) => WrapperOrder::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerBlock {
    pub k1: f64,
    pub k2: f64,
    pub k_s: f64,
    #[serde(rename = "T_sat")]
    pub t_sat: f64,
    pub k_a: f64,
    pub a_lat_max: f64,
    pub a_long_max: f64,
    pub v_max: f64,
    #[serde(rename = "t_L")]
    pub t_look: f64,
    pub preview_dist: f64,
    pub law: FeedbackLaw,
    pub wrapper_n: WrapperSetting,
    pub mode: ControlMode,
    pub update: ControlUpdate,
}

impl ControllerBlock {
    fn from_parts(
        g: &ControlGains,
        law: FeedbackLaw,
        wrapper: WrapperOrder,
        mode: ControlMode,
        update: ControlUpdate,
    ) -> Self {
        ControllerBlock {
            k1: g.k1,
            k2: g.k2,
            k_s: g.k_s,
            t_sat: g.t_sat,
            k_a: g.k_a,
            a_lat_max: g.a_lat_max,
            a_long_max: g.a_long_max,
            v_max: g.v_max,
            t_look: g.t_look,
            preview_dist: g.preview_dist,
            law,
            wrapper_n: wrapper.into(),
            mode,
            update,
        }
    }

    pub fn gains(&self) -> ControlGains {
        ControlGains {
            k1: self.k1,
            k2: self.k2,
            k_s: self.k_s,
            t_sat: self.t_sat,
            k_a: self.k_a,
            a_lat_max: self.a_lat_max,
            a_long_max: self.a_long_max,
            v_max: self.v_max,
            t_look: self.t_look,
            preview_dist: self.preview_dist,
        }
    }
}

impl Default for ControllerBlock {
    fn default() -> Self {
        let sc = Scenario::default();
        Self::from_parts(&sc.gains, sc.law, sc.wrapper, sc.mode, sc.update)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimBlock {
    pub variant: ModelVariant,
    pub point: TrackPoint,
    pub frame: Frame,
    pub dt: f64,
    pub duration: f64,
    pub speed: f64,
    pub initial: InitialErrors,
    pub open_loop: OpenLoop,
}

impl Default for SimBlock {
    fn default() -> Self {
        let sc = Scenario::default();
        SimBlock {
            variant: sc.variant,
            point: sc.point,
            frame: sc.frame,
            dt: sc.dt,
            duration: sc.duration,
            speed: sc.speed,
            initial: sc.initial,
            open_loop: sc.open_loop,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub plot: bool,
    /// Write every `stride`-th row of the trace.
    pub stride: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            dir: None,
            plot: true,
            stride: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub vehicle: VehicleParams,
    #[serde(default)]
    pub path: PathSpec,
    #[serde(default)]
    pub controller: ControllerBlock,
    #[serde(default)]
    pub sim: SimBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

fn default_name() -> String {
    Scenario::default().name
}

impl Default for Config {
    fn default() -> Self {
        Config::from_scenario(&Scenario::default())
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::parse(text)?;
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            key: e.path().to_string(),
            source: e.into_inner(),
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn dump(&self) -> Result<String, ConfigError> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_scenario(sc: &Scenario) -> Self {
        Config {
            name: sc.name.clone(),
            vehicle: sc.params,
            path: sc.path,
            controller: ControllerBlock::from_parts(&sc.gains, sc.law, sc.wrapper, sc.mode, sc.update),
            sim: SimBlock {
                variant: sc.variant,
                point: sc.point,
                frame: sc.frame,
                dt: sc.dt,
                duration: sc.duration,
                speed: sc.speed,
                initial: sc.initial,
                open_loop: sc.open_loop,
            },
            output: OutputBlock::default(),
        }
    }

    /// The scenario described by the file, checked for consistency.
    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        let sc = Scenario {
            name: self.name.clone(),
            variant: self.sim.variant,
            point: self.sim.point,
            path: self.path,
            params: self.vehicle,
            gains: self.controller.gains(),
            law: self.controller.law,
            wrapper: self.controller.wrapper_n.into(),
            mode: self.controller.mode,
            frame: self.sim.frame,
            update: self.controller.update,
            speed: self.sim.speed,
            initial: self.sim.initial,
            open_loop: self.sim.open_loop,
            dt: self.sim.dt,
            duration: self.sim.duration,
        };
        sc.validate().map_err(|e| match e {
            SimError::InvalidSetting { key, reason } => ConfigError::Invalid { key, reason },
            other => ConfigError::Invalid {
                key: "scenario",
                reason: other.to_string(),
            },
        })?;
        Ok(sc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{figure, FIGURES};

    #[test]
    fn figures_round_trip() {
        for name in FIGURES {
            let sc = figure(name).unwrap();
            let text = Config::from_scenario(&sc).dump().unwrap();
            let back = Config::parse(&text).unwrap().scenario().unwrap();
            assert_eq!(back, sc, "{name}\n{text}");
        }
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(Config::parse("").unwrap().scenario().unwrap(), Scenario::default());
    }

    #[test]
    fn unknown_key_named() {
        let err = Config::parse("[controller]\nk3 = 1.0\n").unwrap_err().to_string();
        assert!(err.contains("k3"), "{err}");
        let err = Config::parse("[path]\nprofile = \"straight\"\nkappa = 0.1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("kappa"), "{err}");
    }

    #[test]
    fn infinite_wrapper() {
        let c = Config::parse("[controller]\nwrapper_n = \"inf\"\n").unwrap();
        assert_eq!(c.scenario().unwrap().wrapper, WrapperOrder::Infinite);
        let c = Config::parse("[controller]\nwrapper_n = 5\n").unwrap();
        assert_eq!(c.scenario().unwrap().wrapper, WrapperOrder::Finite(5));
    }
}
