use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::PathError;

/// Curvature as a function of arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurvatureProfile {
    Straight,
    Circle {
        kappa: f64,
    },
    /// `kappa(s) = kappa_max/2 * (1 - cos(2 pi s / period))`, closing after `corners` periods.
    Periodic {
        kappa_max: f64,
        period: f64,
        corners: u32,
    },
}

impl CurvatureProfile {
    /// Periodic profile whose peak curvature is chosen so that the path closes.
    pub fn periodic(period: f64, corners: u32) -> Self {
        CurvatureProfile::Periodic {
            kappa_max: 4.0 * PI / (corners as f64 * period),
            period,
            corners,
        }
    }

    pub fn circle_with_radius(radius: f64) -> Self {
        CurvatureProfile::Circle { kappa: 1.0 / radius }
    }

    pub fn validate(&self) -> Result<(), PathError> {
        match *self {
            CurvatureProfile::Straight => Ok(()),
            CurvatureProfile::Circle { kappa } => {
                if kappa.is_finite() && kappa != 0.0 {
                    Ok(())
                } else {
                    Err(PathError::InvalidProfile(format!("circle curvature {kappa}")))
                }
            }
            CurvatureProfile::Periodic {
                kappa_max,
                period,
                corners,
            } => {
                if corners < 2 {
                    return Err(PathError::InvalidProfile(format!("corners = {corners}, need >= 2")));
                }
                if !(period > 0.0 && period.is_finite()) {
                    return Err(PathError::InvalidProfile(format!("period = {period}")));
                }
                if !(kappa_max >= 0.0) {
                    return Err(PathError::InvalidProfile(format!("kappa_max = {kappa_max}")));
                }
                let closing = 4.0 * PI / corners as f64;
                if ((kappa_max * period - closing) / closing).abs() > 1e-12 {
                    return Err(PathError::InvalidProfile(format!(
                        "kappa_max * period = {} but a closed path with {corners} corners needs {closing}",
                        kappa_max * period
                    )));
                }
                Ok(())
            }
        }
    }

    /// Curvature at arc length `s`.
    pub fn curvature_at(&self, s: f64) -> f64 {
        match *self {
            CurvatureProfile::Straight => 0.0,
            CurvatureProfile::Circle { kappa } => kappa,
            CurvatureProfile::Periodic { kappa_max, period, .. } => {
                0.5 * kappa_max * (1.0 - (2.0 * PI * s / period).cos())
            }
        }
    }

    /// `d kappa / ds`.
    pub fn curvature_slope(&self, s: f64) -> f64 {
        match *self {
            CurvatureProfile::Periodic { kappa_max, period, .. } => {
                let w = 2.0 * PI / period;
                0.5 * kappa_max * w * (w * s).sin()
            }
            _ => 0.0,
        }
    }

    /// `d^2 kappa / ds^2`.
    pub fn curvature_bend(&self, s: f64) -> f64 {
        match *self {
            CurvatureProfile::Periodic { kappa_max, period, .. } => {
                let w = 2.0 * PI / period;
                0.5 * kappa_max * w * w * (w * s).cos()
            }
            _ => 0.0,
        }
    }

    /// Length after which the generated path closes, if it does.
    pub fn closed_length(&self) -> Option<f64> {
        match *self {
            CurvatureProfile::Straight => None,
            CurvatureProfile::Circle { kappa } => Some(2.0 * PI / kappa.abs()),
            CurvatureProfile::Periodic { period, corners, .. } => Some(period * corners as f64),
        }
    }

    /// Largest `|kappa|` over `[s, s + window]`, together with its rate of change
    /// when the window slides forward at unit speed.
    ///
    /// The rate is zero when the maximum sits strictly inside the window and
    /// follows the curvature slope at whichever end attains it otherwise.
    pub fn window_peak(&self, s: f64, window: f64) -> (f64, f64) {
        match *self {
            CurvatureProfile::Straight => (0.0, 0.0),
            CurvatureProfile::Circle { kappa } => (kappa.abs(), 0.0),
            CurvatureProfile::Periodic { kappa_max, period, .. } => {
                // kappa >= 0 everywhere, peaks at s = period/2 + k period.
                let end = s + window;
                let first_peak = ((s - 0.5 * period) / period).ceil() * period + 0.5 * period;
                if window >= period || first_peak <= end {
                    return (kappa_max, 0.0);
                }
                let (ka, kb) = (self.curvature_at(s), self.curvature_at(end));
                if ka >= kb {
                    (ka, self.curvature_slope(s))
                } else {
                    (kb, self.curvature_slope(end))
                }
            }
        }
    }
}
