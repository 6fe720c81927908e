//! Single-track nonholonomic vehicle models, path-frame dynamics and
//! low-complexity path-following controllers.
//!
//! The crate is organised bottom-up:
//!
//! * [`path`] builds arc-length sampled reference paths and projects points onto them.
//! * [`models`] holds the closed-form equations of motion of the bicycle variants.
//! * [`pathframe`] rewrites those models in path coordinates `(s, e, theta)`.
//! * [`control`] contains the steering, torque and speed controllers.
//! * [`analysis`] linearises the closed loops and checks stability.
//! * [`sim`] integrates scenarios and records traces.
//! * [`config`] reads and writes the TOML scenario description used by the CLI.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod control;
pub mod fmt;
pub mod models;
pub mod path;
pub mod pathframe;
pub mod sim;

pub use analysis::{LinearModel, StabilityVerdict};
pub use control::{ControlGains, FeedbackLaw, SteerCommand, WrapperOrder, WrapperSpec};
pub use models::{AbsState, Coord, DriveInput, ModelError, ModelVariant, VehicleParams};
pub use path::{CurvatureProfile, PathError, PathQuery, PathTable};
pub use pathframe::{RelState, TrackPoint};
pub use sim::{Scenario, SimError, SimTrace};

/// Standard gravity used for force-to-weight ratios and resistance forces.
pub const GRAVITY: f64 = 9.81;
