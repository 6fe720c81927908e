use std::io::{Read, Write};

use super::{CurvatureProfile, PathError};
use crate::fmt::sig12;

/// One row of a sampled path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub kappa: f64,
}

/// Planar pose.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
}

/// Path geometry evaluated at an arbitrary arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    /// Arc length, wrapped into the first lap on closed paths.
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub kappa: f64,
    /// `d kappa / ds`
    pub kappa_slope: f64,
    /// `d^2 kappa / ds^2`
    pub kappa_bend: f64,
}

/// Uniformly sampled path with cubic Hermite interpolation between samples.
///
/// Positions are interpolated with the unit tangents as slopes, heading with
/// the curvature as slope. When the generating profile is known, curvature
/// and its derivatives are evaluated from it directly.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTable {
    samples: Vec<PathSample>,
    slopes: Vec<f64>,
    step: f64,
    closed: bool,
    profile: Option<CurvatureProfile>,
}

fn path_rates(profile: &CurvatureProfile, s: f64, psi: f64) -> [f64; 3] {
    [psi.cos(), psi.sin(), profile.curvature_at(s)]
}

/// Integrates `dx/ds = cos psi`, `dy/ds = sin psi`, `dpsi/ds = kappa(s)` with
/// classical Runge-Kutta from `start`.
///
/// `length` defaults to the closing length of the profile. Periodic profiles
/// must be generated over exactly `corners * period`.
pub fn build_path(
    profile: &CurvatureProfile,
    step: f64,
    length: Option<f64>,
    start: Pose,
) -> Result<PathTable, PathError> {
    profile.validate()?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(PathError::BadLength(format!("step = {step}")));
    }
    let closing = profile.closed_length();
    let length = match (length, closing) {
        (Some(l), _) => l,
        (None, Some(l)) => l,
        (None, None) => return Err(PathError::BadLength("a straight path needs an explicit length".into())),
    };
    if !(length > 0.0 && length.is_finite()) {
        return Err(PathError::BadLength(format!("length = {length}")));
    }
    let closed = closing.is_some_and(|c| ((length - c) / c).abs() < 1e-9);
    if matches!(profile, CurvatureProfile::Periodic { .. }) && !closed {
        return Err(PathError::BadLength(format!(
            "periodic paths are generated over corners * period = {}, got {length}",
            closing.unwrap_or_default()
        )));
    }

    let n = ((length / step) - 1e-9).ceil().max(1.0) as usize;
    let h = length / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    let (mut x, mut y, mut psi) = (start.x, start.y, start.psi);
    for i in 0..=n {
        let s = i as f64 * h;
        samples.push(PathSample {
            s,
            x,
            y,
            psi,
            kappa: profile.curvature_at(s),
        });
        if i == n {
            break;
        }
        let k1 = path_rates(profile, s, psi);
        let k2 = path_rates(profile, s + 0.5 * h, psi + 0.5 * h * k1[2]);
        let k3 = path_rates(profile, s + 0.5 * h, psi + 0.5 * h * k2[2]);
        let k4 = path_rates(profile, s + h, psi + h * k3[2]);
        x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        psi += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
    }
    if closed {
        let last = samples[n];
        let gap = (last.x - start.x).hypot(last.y - start.y);
        let tolerance = 1e-6 * length;
        if gap > tolerance {
            return Err(PathError::NonClosure { gap, tolerance });
        }
    }
    let slopes = samples.iter().map(|p| profile.curvature_slope(p.s)).collect();
    Ok(PathTable {
        samples,
        slopes,
        step: h,
        closed,
        profile: Some(*profile),
    })
}

impl PathTable {
    /// Builds a table from raw samples. Curvature slopes are estimated by
    /// central differences; the path counts as closed when its ends meet.
    pub fn from_samples(samples: Vec<PathSample>) -> Result<Self, PathError> {
        if samples.len() < 2 {
            return Err(PathError::BadLength("need at least two samples".into()));
        }
        let n = samples.len() - 1;
        let step = (samples[n].s - samples[0].s) / n as f64;
        if !(step > 0.0) {
            return Err(PathError::BadLength("arc length must increase".into()));
        }
        for (i, w) in samples.windows(2).enumerate() {
            if ((w[1].s - w[0].s) - step).abs() > 1e-6 * step {
                return Err(PathError::BadLength(format!("non-uniform step at row {}", i + 1)));
            }
        }
        let length = samples[n].s - samples[0].s;
        let gap = (samples[n].x - samples[0].x).hypot(samples[n].y - samples[0].y);
        let turns = (samples[n].psi - samples[0].psi) / std::f64::consts::TAU;
        let closed = gap <= 1e-6 * length && (turns - turns.round()).abs() < 1e-6 && turns.round() != 0.0;
        let slopes = (0..=n)
            .map(|i| {
                let (a, b, span) = if i == 0 {
                    if closed {
                        (n - 1, 1, 2.0)
                    } else {
                        (0, 1, 1.0)
                    }
                } else if i == n {
                    if closed {
                        (n - 1, 1, 2.0)
                    } else {
                        (n - 1, n, 1.0)
                    }
                } else {
                    (i - 1, i + 1, 2.0)
                };
                (samples[b].kappa - samples[a].kappa) / (span * step)
            })
            .collect();
        Ok(PathTable {
            samples,
            slopes,
            step,
            closed,
            profile: None,
        })
    }

    pub fn samples(&self) -> &[PathSample] {
        &self.samples
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn profile(&self) -> Option<&CurvatureProfile> {
        self.profile.as_ref()
    }

    pub fn start_s(&self) -> f64 {
        self.samples[0].s
    }

    pub fn end_s(&self) -> f64 {
        self.samples[self.samples.len() - 1].s
    }

    /// Total arc length covered by the table.
    pub fn length(&self) -> f64 {
        self.end_s() - self.start_s()
    }

    /// Perimeter of a closed path.
    pub fn perimeter(&self) -> Option<f64> {
        self.closed.then(|| self.length())
    }

    /// Maps `s` into the table's range: modulo the perimeter on closed paths,
    /// range-checked otherwise.
    pub fn normalize_s(&self, s: f64) -> Result<f64, PathError> {
        let (start, end) = (self.start_s(), self.end_s());
        if self.closed {
            let len = end - start;
            let w = (s - start).rem_euclid(len);
            return Ok(start + if w >= len { 0.0 } else { w });
        }
        let slack = 1e-9 * (1.0 + self.length());
        if s < start - slack || s > end + slack || !s.is_finite() {
            return Err(PathError::OutOfRange { s, start, end });
        }
        Ok(s.clamp(start, end))
    }

    /// Signed arc-length difference `b - a`, taking the short way round on closed paths.
    pub fn arc_delta(&self, a: f64, b: f64) -> f64 {
        let d = b - a;
        match self.perimeter() {
            Some(p) => d - p * (d / p).round(),
            None => d,
        }
    }

    fn segment(&self, s: f64) -> (usize, f64) {
        let n = self.samples.len() - 1;
        let u = (s - self.start_s()) / self.step;
        let i = (u.floor().max(0.0) as usize).min(n - 1);
        (i, u - i as f64)
    }

    /// Geometry at arc length `s`.
    pub fn point_at(&self, s: f64) -> Result<PathPoint, PathError> {
        let s = self.normalize_s(s)?;
        let (i, t) = self.segment(s);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let h = self.step;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let x = h00 * a.x + h10 * h * a.psi.cos() + h01 * b.x + h11 * h * b.psi.cos();
        let y = h00 * a.y + h10 * h * a.psi.sin() + h01 * b.y + h11 * h * b.psi.sin();
        let psi = h00 * a.psi + h10 * h * a.kappa + h01 * b.psi + h11 * h * b.kappa;
        let (kappa, kappa_slope, kappa_bend) = match &self.profile {
            Some(p) => (p.curvature_at(s), p.curvature_slope(s), p.curvature_bend(s)),
            None => {
                let (ma, mb) = (self.slopes[i], self.slopes[i + 1]);
                let k = h00 * a.kappa + h10 * h * ma + h01 * b.kappa + h11 * h * mb;
                let d00 = 6.0 * t2 - 6.0 * t;
                let d10 = 3.0 * t2 - 4.0 * t + 1.0;
                let d11 = 3.0 * t2 - 2.0 * t;
                let dk = (d00 * (a.kappa - b.kappa)) / h + d10 * ma + d11 * mb;
                let e00 = 12.0 * t - 6.0;
                let e10 = 6.0 * t - 4.0;
                let e11 = 6.0 * t - 2.0;
                let ddk = (e00 * (a.kappa - b.kappa)) / (h * h) + (e10 * ma + e11 * mb) / h;
                (k, dk, ddk)
            }
        };
        Ok(PathPoint {
            s,
            x,
            y,
            psi,
            kappa,
            kappa_slope,
            kappa_bend,
        })
    }

    /// Curvature at `s`.
    pub fn curvature_at(&self, s: f64) -> Result<f64, PathError> {
        Ok(self.point_at(s)?.kappa)
    }

    /// Largest `|kappa|` over `[s, s + window]` and its rate with respect to `s`.
    pub fn window_peak(&self, s: f64, window: f64) -> Result<(f64, f64), PathError> {
        if let Some(p) = &self.profile {
            return Ok(p.window_peak(s, window));
        }
        let mut best = (self.point_at(s)?.kappa.abs(), s);
        let mut u = (s / self.step).floor() * self.step + self.step;
        while u < s + window {
            let k = self.point_at(u)?.kappa.abs();
            if k > best.0 {
                best = (k, u);
            }
            u += self.step;
        }
        let end = self.point_at(s + window)?;
        if end.kappa.abs() > best.0 {
            best = (end.kappa.abs(), s + window);
        }
        let rate = if best.1 == s || best.1 == s + window {
            let p = self.point_at(best.1)?;
            p.kappa.signum() * p.kappa_slope
        } else {
            0.0
        };
        Ok((best.0, rate))
    }

    /// Writes the table as CSV with header `s,x,y,psi,kappa`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), PathError> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| PathError::Csv(e.to_string());
        w.write_record(["s", "x", "y", "psi", "kappa"]).map_err(err)?;
        for p in &self.samples {
            w.write_record([sig12(p.s), sig12(p.x), sig12(p.y), sig12(p.psi), sig12(p.kappa)])
                .map_err(err)?;
        }
        w.flush().map_err(|e| PathError::Csv(e.to_string()))
    }

    /// Reads a table written by [`PathTable::write_csv`].
    pub fn read_csv<R: Read>(input: R) -> Result<Self, PathError> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers().map_err(|e| PathError::Csv(e.to_string()))?.clone();
        if header.iter().collect::<Vec<_>>() != ["s", "x", "y", "psi", "kappa"] {
            return Err(PathError::Csv(format!("unexpected header {:?}", header)));
        }
        let mut samples = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| PathError::Csv(e.to_string()))?;
            let v: Vec<f64> = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| PathError::Csv(format!("row {}: {e}", row + 1)))?;
            if v.len() != 5 {
                return Err(PathError::Csv(format!("row {}: expected 5 fields", row + 1)));
            }
            samples.push(PathSample {
                s: v[0],
                x: v[1],
                y: v[2],
                psi: v[3],
                kappa: v[4],
            });
        }
        Self::from_samples(samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn straight_path() {
        let t = build_path(&CurvatureProfile::Straight, 0.5, Some(100.0), Pose::default()).unwrap();
        assert_eq!(t.samples().len(), 201);
        assert!(!t.is_closed());
        for p in t.samples() {
            assert_eq!(p.psi, 0.0);
            assert_eq!(p.y, 0.0);
            assert!((p.x - p.s).abs() < 1e-12);
        }
        assert!(t.point_at(100.5).is_err());
    }

    #[test]
    fn quarter_heading_per_period() {
        let t = build_path(&CurvatureProfile::periodic(250.0, 4), 0.1, None, Pose::default()).unwrap();
        let p = t.point_at(250.0).unwrap();
        assert!((p.psi - PI / 2.0).abs() < 1e-10);
        assert!(t.is_closed());
        assert!((t.perimeter().unwrap() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn circle_geometry() {
        let t = build_path(&CurvatureProfile::circle_with_radius(200.0), 0.1, None, Pose::default()).unwrap();
        for k in 0..50 {
            let s = k as f64 * 25.0 + 0.037;
            let p = t.point_at(s).unwrap();
            assert!((p.x.hypot(p.y - 200.0) - 200.0).abs() < 1e-9);
            assert!((p.psi - s / 200.0).abs() < 1e-10);
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = build_path(&CurvatureProfile::periodic(50.0, 3), 0.25, None, Pose::default()).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("s,x,y,psi,kappa\n"));
        let back = PathTable::read_csv(buf.as_slice()).unwrap();
        assert!(back.is_closed());
        assert_eq!(back.samples().len(), t.samples().len());
        for s in [1.3, 40.0, 77.7, 149.9] {
            let (a, b) = (t.point_at(s).unwrap(), back.point_at(s).unwrap());
            assert!((a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9);
            assert!((a.kappa - b.kappa).abs() < 1e-6);
            assert!((a.kappa_slope - b.kappa_slope).abs() < 1e-5);
        }
    }

    #[test]
    fn window_peak_from_samples_matches_profile() {
        let t = build_path(&CurvatureProfile::periodic(250.0, 4), 0.1, None, Pose::default()).unwrap();
        let raw = PathTable::from_samples(t.samples().to_vec()).unwrap();
        for s in [0.0, 30.0, 100.0, 190.0, 610.0] {
            let (a, _) = t.window_peak(s, 50.0).unwrap();
            let (b, _) = raw.window_peak(s, 50.0).unwrap();
            assert!((a - b).abs() < 1e-8);
        }
    }
}
