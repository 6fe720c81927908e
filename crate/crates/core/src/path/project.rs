use super::{PathError, PathTable, Pose};

/// Closest-point query result: path coordinates of a planar pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathQuery {
    /// Arc length of the closest path point.
    pub s: f64,
    /// Signed lateral deviation, positive to the left of the path.
    pub e: f64,
    /// Path heading at the closest point.
    pub psi: f64,
    /// Path curvature at the closest point.
    pub kappa: f64,
    /// Relative yaw, wrapped to `[-pi, pi)`.
    pub theta: f64,
    pub kappa_slope: f64,
    pub kappa_bend: f64,
}

impl PathQuery {
    /// `1 - kappa * e`, the tube factor appearing in the frame rates.
    pub fn tube_factor(&self) -> f64 {
        1.0 - self.kappa * self.e
    }

    pub(crate) fn checked_tube_factor(&self) -> Result<f64, PathError> {
        let f = self.tube_factor();
        if f.abs() < 1e-9 {
            Err(PathError::TubeSingularity { s: self.s, denom: f })
        } else {
            Ok(f)
        }
    }
}

/// Earth-frame rates of a tracked point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarRates {
    pub x_dot: f64,
    pub y_dot: f64,
    pub psi_dot: f64,
}

/// Path-frame rates `(s_dot, e_dot, theta_dot)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRates {
    pub s_dot: f64,
    pub e_dot: f64,
    pub theta_dot: f64,
}

/// Wraps an angle to `[-pi, pi)` by subtracting the nearest multiple of `2 pi`
/// (ties rounded away from zero).
pub fn wrap_angle(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    a - tau * (a / tau).round()
}

/// Newton iteration on tangent orthogonality starting from `s0`.
fn refine(table: &PathTable, px: f64, py: f64, s0: f64) -> Result<(f64, f64), PathError> {
    let mut s = s0;
    let (start, end) = (table.start_s(), table.end_s());
    for _ in 0..50 {
        let c = table.point_at(s)?;
        let (dx, dy) = (px - c.x, py - c.y);
        let (sn, cs) = c.psi.sin_cos();
        let along = dx * cs + dy * sn;
        let lateral = -dx * sn + dy * cs;
        let curvature = 1.0 - c.kappa * lateral;
        let mut ds = if curvature > 0.05 { along / curvature } else { along };
        ds = ds.clamp(-table.step(), table.step());
        let mut next = s + ds;
        if !table.is_closed() {
            next = next.clamp(start, end);
        }
        let moved = (next - s).abs();
        s = next;
        if moved < 1e-12 * (1.0 + s.abs()) {
            break;
        }
    }
    let s = table.normalize_s(s)?;
    let c = table.point_at(s)?;
    Ok((s, (px - c.x).hypot(py - c.y)))
}

fn sample_dist2(table: &PathTable, i: usize, px: f64, py: f64) -> f64 {
    let p = &table.samples()[i];
    (px - p.x).powi(2) + (py - p.y).powi(2)
}

/// Projects the pose `(x, y, heading)` onto the path.
///
/// With a hint the search is local to the hint; without one every sample is
/// scanned and all local minima are refined.
pub fn project(table: &PathTable, x: f64, y: f64, heading: f64, hint: Option<f64>) -> Result<PathQuery, PathError> {
    let samples = table.samples();
    let n = samples.len() - 1;
    // on closed paths the last sample duplicates the first
    let count = if table.is_closed() { n } else { n + 1 };
    let s = match hint {
        Some(h) => {
            let h = table.normalize_s(h)?;
            let half = ((5.0 / table.step()).ceil() as isize).max(20);
            let centre = ((h - table.start_s()) / table.step()).round() as isize;
            let mut best = (f64::INFINITY, 0usize);
            for k in (centre - half)..=(centre + half) {
                let i = if table.is_closed() {
                    k.rem_euclid(count as isize) as usize
                } else if k < 0 || k > n as isize {
                    continue;
                } else {
                    k as usize
                };
                let d = sample_dist2(table, i, x, y);
                if d < best.0 {
                    best = (d, i);
                }
            }
            refine(table, x, y, samples[best.1].s)?.0
        }
        None => global_search(table, x, y, count)?,
    };
    query_at(table, x, y, heading, s)
}

fn global_search(table: &PathTable, x: f64, y: f64, count: usize) -> Result<f64, PathError> {
    let samples = table.samples();
    let d: Vec<f64> = (0..count).map(|i| sample_dist2(table, i, x, y)).collect();
    let closed = table.is_closed();
    let mut minima: Vec<usize> = (0..count)
        .filter(|&i| {
            let prev = if i > 0 {
                Some(d[i - 1])
            } else if closed {
                Some(d[count - 1])
            } else {
                None
            };
            let next = if i + 1 < count {
                Some(d[i + 1])
            } else if closed {
                Some(d[0])
            } else {
                None
            };
            prev.is_none_or(|p| d[i] <= p) && next.is_none_or(|q| d[i] <= q)
        })
        .collect();
    minima.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    minima.truncate(64);
    let mut refined = Vec::with_capacity(minima.len());
    for i in minima {
        refined.push(refine(table, x, y, samples[i].s)?);
    }
    refined.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best_s, best_d) = refined[0];
    let separation = 1e-3 * table.length();
    for &(s, dist) in &refined[1..] {
        if (dist - best_d).abs() <= 1e-9 && table.arc_delta(best_s, s).abs() > separation {
            return Err(PathError::AmbiguousProjection { s_a: best_s, s_b: s });
        }
    }
    Ok(best_s)
}

fn query_at(table: &PathTable, x: f64, y: f64, heading: f64, s: f64) -> Result<PathQuery, PathError> {
    let c = table.point_at(s)?;
    let (sn, cs) = c.psi.sin_cos();
    let e = -(x - c.x) * sn + (y - c.y) * cs;
    Ok(PathQuery {
        s: c.s,
        e,
        psi: c.psi,
        kappa: c.kappa,
        theta: wrap_angle(heading - c.psi),
        kappa_slope: c.kappa_slope,
        kappa_bend: c.kappa_bend,
    })
}

/// Converts Earth-frame rates of the tracked point into path-frame rates.
pub fn frame_rates(rates: PlanarRates, q: &PathQuery) -> Result<FrameRates, PathError> {
    let f = q.checked_tube_factor()?;
    let (sn, cs) = q.psi.sin_cos();
    let s_dot = (cs * rates.x_dot + sn * rates.y_dot) / f;
    Ok(FrameRates {
        s_dot,
        e_dot: -rates.x_dot * sn + rates.y_dot * cs,
        theta_dot: rates.psi_dot - q.kappa * s_dot,
    })
}

/// Inverse of [`frame_rates`].
pub fn inverse_frame_rates(rates: FrameRates, q: &PathQuery) -> PlanarRates {
    let f = q.tube_factor();
    let (sn, cs) = q.psi.sin_cos();
    PlanarRates {
        x_dot: cs * f * rates.s_dot - sn * rates.e_dot,
        y_dot: sn * f * rates.s_dot + cs * rates.e_dot,
        psi_dot: rates.theta_dot + q.kappa * rates.s_dot,
    }
}

/// Pose of the point with path coordinates `(s, e, theta)`.
pub fn path_to_absolute(table: &PathTable, s: f64, e: f64, theta: f64) -> Result<Pose, PathError> {
    let c = table.point_at(s)?;
    let (sn, cs) = c.psi.sin_cos();
    Ok(Pose {
        x: c.x - e * sn,
        y: c.y + e * cs,
        psi: theta + c.psi,
    })
}
