use serde::{Deserialize, Serialize};

/// Controller parameters. Defaults reproduce the reference parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlGains {
    /// Heading feedback gain [m/s], negative for stability.
    pub k1: f64,
    /// Lateral-to-heading gain [1/m].
    pub k2: f64,
    /// Steering servo gain [N m].
    pub k_s: f64,
    /// Steering torque bound [N m].
    #[serde(rename = "T_sat")]
    pub t_sat: f64,
    /// Speed error gain [1/s].
    pub k_a: f64,
    pub a_lat_max: f64,
    pub a_long_max: f64,
    pub v_max: f64,
    /// Look-ahead time of the feedforward term [s].
    #[serde(rename = "t_L")]
    pub t_look: f64,
    /// Distance over which the peak curvature is previewed for speed scheduling [m].
    pub preview_dist: f64,
}

impl Default for ControlGains {
    fn default() -> Self {
        ControlGains {
            k1: -0.5,
            k2: 0.02,
            k_s: -6.0,
            t_sat: 1.0,
            k_a: -5.0,
            a_lat_max: 4.0,
            a_long_max: 6.0,
            v_max: 30.0,
            t_look: 0.0,
            preview_dist: 50.0,
        }
    }
}

/// Lateral feedback law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackLaw {
    /// `k1 theta + k1 k2 e`
    Linear,
    /// `k1 (theta + atan(k2 e))`
    Nonlinear,
    /// Nonlinear law passed through a wrapper bounded by the steering saturation.
    #[default]
    Wrapped,
}
