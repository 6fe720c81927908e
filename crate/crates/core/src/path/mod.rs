//! Reference paths: curvature profiles, sampled tables, projection and the
//! conversion between Earth-frame and path-frame rates.

mod profile;
mod project;
mod table;

pub use profile::CurvatureProfile;
pub use project::{
    frame_rates, inverse_frame_rates, path_to_absolute, project, wrap_angle, FrameRates, PathQuery, PlanarRates,
};
pub use table::{build_path, PathPoint, PathSample, PathTable, Pose};

use thiserror::Error;

/// Failures raised by path construction and queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("invalid curvature profile: {0}")]
    InvalidProfile(String),
    #[error("invalid path length or step: {0}")]
    BadLength(String),
    #[error("closed path misses its start by {gap:.3e} m (tolerance {tolerance:.3e} m)")]
    NonClosure { gap: f64, tolerance: f64 },
    #[error("closest point is ambiguous: s = {s_a} and s = {s_b} are equidistant")]
    AmbiguousProjection { s_a: f64, s_b: f64 },
    #[error("point reached the centre of curvature (s = {s}, 1 - kappa*e = {denom:.3e})")]
    TubeSingularity { s: f64, denom: f64 },
    #[error("arc length {s} outside the path [{start}, {end}]")]
    OutOfRange { s: f64, start: f64, end: f64 },
    #[error("path csv: {0}")]
    Csv(String),
}
