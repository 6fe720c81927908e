use std::io::Write;

use nalgebra::Complex;

use super::{linearize_kinematic, AnalysisError};

/// Eigenvalue and closed-form verdicts for one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub eigenvalues: Vec<Complex<f64>>,
    pub stable: bool,
    pub criterion_stable: bool,
    pub agree: bool,
}

/// Closed-form condition for the kinematic loop: `k1 < 0` and
/// `k1 k2 < kappa^2 l / (1 + kappa^2 l^2)`.
pub fn routh_hurwitz_kinematic(kappa_star: f64, l: f64, k1: f64, k2: f64) -> bool {
    let k2l = kappa_star * kappa_star * l;
    k1 < 0.0 && k1 * k2 < k2l / (1.0 + k2l * l)
}

/// Distance from the boundary of the closed-form region, in the two
/// quantities the condition compares against zero.
pub fn boundary_distance(kappa_star: f64, l: f64, k1: f64, k2: f64) -> f64 {
    let k2l = kappa_star * kappa_star * l;
    k1.abs().min((k1 * k2 - k2l / (1.0 + k2l * l)).abs())
}

pub fn kinematic_verdict(kappa_star: f64, v: f64, l: f64, k1: f64, k2: f64) -> StabilityVerdict {
    let eigenvalues = linearize_kinematic(kappa_star, v, l, k1, k2, false).eigenvalues();
    let stable = eigenvalues.iter().all(|z| z.re < 0.0);
    let criterion_stable = routh_hurwitz_kinematic(kappa_star, l, k1, k2);
    StabilityVerdict {
        eigenvalues,
        stable,
        criterion_stable,
        agree: stable == criterion_stable,
    }
}

/// Evenly spaced values `[lo, hi]` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.n > 1 {
            (self.hi - self.lo) / (self.n - 1) as f64
        } else {
            0.0
        };
        (0..self.n).map(move |i| {
            if i + 1 == self.n && self.n > 1 {
                self.hi
            } else {
                self.lo + step * i as f64
            }
        })
    }
}

/// One row of a stability map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityPoint {
    pub k1: f64,
    pub k2: f64,
    pub kappa_star: f64,
    pub criterion: bool,
    pub eig_max_real: f64,
    pub agree: bool,
    /// Inside the band around the boundary where the comparison is not scored.
    pub in_band: bool,
}

/// Evaluates both verdicts over a `(k1, k2)` grid for each curvature.
pub fn stability_grid(
    k1: GridAxis,
    k2: GridAxis,
    kappas: &[f64],
    v: f64,
    l: f64,
    band: f64,
) -> Result<Vec<StabilityPoint>, AnalysisError> {
    if k1.n == 0 || k2.n == 0 || kappas.is_empty() {
        return Err(AnalysisError::BadGrid("empty axis".into()));
    }
    if !(v > 0.0) || !(l > 0.0) {
        return Err(AnalysisError::BadGrid(format!(
            "need V > 0 and l > 0, got V = {v}, l = {l}"
        )));
    }
    let mut out = Vec::with_capacity(k1.n * k2.n * kappas.len());
    for &kappa_star in kappas {
        for a in k1.values() {
            for b in k2.values() {
                let verdict = kinematic_verdict(kappa_star, v, l, a, b);
                out.push(StabilityPoint {
                    k1: a,
                    k2: b,
                    kappa_star,
                    criterion: verdict.criterion_stable,
                    eig_max_real: verdict
                        .eigenvalues
                        .iter()
                        .map(|z| z.re)
                        .fold(f64::NEG_INFINITY, f64::max),
                    agree: verdict.agree,
                    in_band: boundary_distance(kappa_star, l, a, b) <= band,
                });
            }
        }
    }
    Ok(out)
}

pub fn write_stability_csv<W: Write>(mut out: W, points: &[StabilityPoint]) -> std::io::Result<()> {
    writeln!(out, "k1,k2,kappa_star,criterion,eig_max_real,agree")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{:e},{}",
            p.k1, p.k2, p.kappa_star, p.criterion, p.eig_max_real, p.agree
        )?;
    }
    Ok(())
}
