use serde::{Deserialize, Serialize};

use super::ModelError;

/// Geometry, inertia and steering limit of the single-track vehicle.
///
/// `m_r` and `m_f` are the effective axle masses. For rigid-wheel models they
/// already include the spin inertia contribution `I / r^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleParams {
    /// Wheelbase.
    pub l: f64,
    /// Rear axle to centre of mass.
    pub d: f64,
    /// Body mass.
    pub m: f64,
    #[serde(rename = "m_R")]
    pub m_r: f64,
    #[serde(rename = "m_F")]
    pub m_f: f64,
    #[serde(rename = "J_G")]
    pub j_g: f64,
    #[serde(rename = "J_R")]
    pub j_r: f64,
    #[serde(rename = "J_F")]
    pub j_f: f64,
    /// Wheel spin inertias.
    #[serde(rename = "I_R")]
    pub i_r: f64,
    #[serde(rename = "I_F")]
    pub i_f: f64,
    /// Wheel radius.
    pub r: f64,
    /// Mechanical steering limit in radians.
    pub gamma_max: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        VehicleParams {
            l: 2.57,
            d: 1.54,
            m: 1770.0,
            m_r: 10.0,
            m_f: 10.0,
            j_g: 1343.0,
            j_r: 0.25,
            j_f: 0.25,
            i_r: 0.45,
            i_f: 0.45,
            r: 0.3,
            gamma_max: 30f64.to_radians(),
        }
    }
}

const KEYS: [&str; 12] = [
    "l",
    "d",
    "m",
    "m_R",
    "m_F",
    "J_G",
    "J_R",
    "J_F",
    "I_R",
    "I_F",
    "r",
    "gamma_max",
];

impl VehicleParams {
    /// Total translating mass `m + m_R + m_F`.
    pub fn m1(&self) -> f64 {
        self.m + self.m_r + self.m_f
    }

    /// Yaw inertia about the rear axle divided by `l^2`.
    pub fn m2(&self) -> f64 {
        (self.j_g + self.m * self.d * self.d + self.j_r + self.j_f + self.m_f * self.l * self.l) / (self.l * self.l)
    }

    pub fn m3(&self) -> f64 {
        self.m_r - (self.l - self.d) / self.d * self.m_f
    }

    pub fn m4(&self) -> f64 {
        self.m_f + self.d / self.l * self.m
    }

    /// Builds parameters from raw wheel masses, folding the spin inertia into
    /// the effective axle masses.
    pub fn with_raw_wheel_masses(mut self, raw_m_r: f64, raw_m_f: f64) -> Self {
        self.m_r = raw_m_r + self.i_r / (self.r * self.r);
        self.m_f = raw_m_f + self.i_f / (self.r * self.r);
        self
    }

    /// Raw wheel masses implied by the effective masses and spin inertias.
    pub fn raw_wheel_masses(&self) -> (f64, f64) {
        let k = self.r * self.r;
        (self.m_r - self.i_r / k, self.m_f - self.i_f / k)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("m", self.m),
            ("m_R", self.m_r),
            ("m_F", self.m_f),
            ("J_G", self.j_g),
            ("J_R", self.j_r),
            ("J_F", self.j_f),
            ("I_R", self.i_r),
            ("I_F", self.i_f),
            ("r", self.r),
            ("d", self.d),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ModelError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.l > self.d) || !self.l.is_finite() {
            return Err(ModelError::InvalidParams(format!(
                "need l > d, got l = {}, d = {}",
                self.l, self.d
            )));
        }
        if !(self.gamma_max > 0.0 && self.gamma_max < std::f64::consts::FRAC_PI_2) {
            return Err(ModelError::InvalidParams(format!("gamma_max = {} rad", self.gamma_max)));
        }
        Ok(())
    }

    fn field_mut(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "l" => &mut self.l,
            "d" => &mut self.d,
            "m" => &mut self.m,
            "m_R" => &mut self.m_r,
            "m_F" => &mut self.m_f,
            "J_G" => &mut self.j_g,
            "J_R" => &mut self.j_r,
            "J_F" => &mut self.j_f,
            "I_R" => &mut self.i_r,
            "I_F" => &mut self.i_f,
            "r" => &mut self.r,
            "gamma_max" => &mut self.gamma_max,
            _ => return None,
        })
    }

    /// Parses a flat `key=value` parameter file. Missing keys keep their
    /// defaults; `#` starts a comment.
    pub fn parse_kv(text: &str) -> Result<Self, ModelError> {
        let mut p = VehicleParams::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ModelError::InvalidParams(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim();
            let slot = p
                .field_mut(key)
                .ok_or_else(|| ModelError::InvalidParams(format!("line {}: unknown key `{key}`", lineno + 1)))?;
            *slot = value
                .trim()
                .parse()
                .map_err(|_| ModelError::InvalidParams(format!("line {}: bad value for `{key}`", lineno + 1)))?;
        }
        p.validate()?;
        Ok(p)
    }

    /// Writes the parameters in the `key=value` format read by [`VehicleParams::parse_kv`].
    pub fn to_kv(&self) -> String {
        let mut copy = *self;
        KEYS.iter()
            .map(|k| format!("{k}={}\n", copy.field_mut(k).expect("known key")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_masses() {
        let p = VehicleParams::default();
        assert_eq!(p.m1(), 1790.0);
        assert!((p.m2() - 848.958).abs() < 1e-3);
        assert!((p.m4() - 1070.62).abs() < 1e-2);
        assert!((p.m3() - (10.0 - 1.03 / 1.54 * 10.0)).abs() < 1e-12);
        p.validate().unwrap();
    }

    #[test]
    fn raw_masses_round_trip() {
        let p = VehicleParams::default();
        let (a, b) = p.raw_wheel_masses();
        assert!((a - 5.0).abs() < 1e-12 && (b - 5.0).abs() < 1e-12);
        let q = p.with_raw_wheel_masses(a, b);
        assert!((q.m_r - p.m_r).abs() < 1e-12);
    }

    #[test]
    fn kv_round_trip() {
        let p = VehicleParams {
            l: 2.7,
            m_f: 12.5,
            ..Default::default()
        };
        let text = p.to_kv();
        assert!(text.starts_with("l=2.7\n"));
        let q = VehicleParams::parse_kv(&text).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn kv_rejects_unknown_and_invalid() {
        assert!(VehicleParams::parse_kv("wheelbase=2").is_err());
        assert!(VehicleParams::parse_kv("l=1.0\nd=1.5").is_err());
        assert!(VehicleParams::parse_kv("# comment\n\nm = 1500 # heavy\n").is_ok());
    }
}
