use std::io::Write;

use crate::fmt::sig12;
use crate::models::ModelVariant;

pub const TRACE_HEADER: [&str; 24] = [
    "t",
    "x_G",
    "y_G",
    "psi",
    "gamma",
    "sigma1",
    "sigma2",
    "s_C",
    "e_C",
    "theta_C",
    "gamma_des",
    "gamma_ff",
    "gamma_fb",
    "T_s",
    "F_R",
    "a_des",
    "v_des",
    "a_lat",
    "iota",
    "a1",
    "a2",
    "mu_R",
    "mu_F",
    "resid_max",
];

/// One time sample. Fields a scenario does not produce are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceRow {
    pub t: f64,
    pub x_g: f64,
    pub y_g: f64,
    pub psi: f64,
    pub gamma: f64,
    pub sigma1: f64,
    pub sigma2: Option<f64>,
    pub s_c: f64,
    pub e_c: f64,
    pub theta_c: f64,
    pub gamma_des: Option<f64>,
    pub gamma_ff: Option<f64>,
    pub gamma_fb: Option<f64>,
    pub t_s: Option<f64>,
    pub f_r: Option<f64>,
    pub a_des: Option<f64>,
    pub v_des: Option<f64>,
    pub a_lat: f64,
    pub iota: Option<f64>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub mu_r: Option<f64>,
    pub mu_f: Option<f64>,
    pub resid_max: f64,
    /// Raw integrator state.
    pub state: Vec<f64>,
}

impl TraceRow {
    fn fields(&self) -> [Option<f64>; 24] {
        [
            Some(self.t),
            Some(self.x_g),
            Some(self.y_g),
            Some(self.psi),
            Some(self.gamma),
            Some(self.sigma1),
            self.sigma2,
            Some(self.s_c),
            Some(self.e_c),
            Some(self.theta_c),
            self.gamma_des,
            self.gamma_ff,
            self.gamma_fb,
            self.t_s,
            self.f_r,
            self.a_des,
            self.v_des,
            Some(self.a_lat),
            self.iota,
            self.a1,
            self.a2,
            self.mu_r,
            self.mu_f,
            Some(self.resid_max),
        ]
    }
}

/// Time-indexed simulation log.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub name: String,
    pub variant: ModelVariant,
    pub dt: f64,
    pub rows: Vec<TraceRow>,
}

/// Headline numbers of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSummary {
    pub duration: f64,
    pub final_e: f64,
    pub max_abs_e: f64,
    pub rms_e: f64,
    /// Time after which `|e_C|` stays below 0.05 m, if it does.
    pub settling_time: Option<f64>,
    /// Sign changes of `e_C`.
    pub zero_crossings: usize,
    pub peak_a_lat: f64,
    pub max_residual: f64,
}

impl SimTrace {
    /// Writes every `stride`-th row (and the last one) as CSV.
    pub fn write_csv<W: Write>(&self, out: W, stride: usize) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRACE_HEADER)?;
        let stride = stride.max(1);
        let last = self.rows.len().saturating_sub(1);
        for (i, row) in self.rows.iter().enumerate() {
            if i % stride != 0 && i != last {
                continue;
            }
            w.write_record(row.fields().iter().map(|f| f.map(sig12).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.t)
    }

    /// Root mean square of `e_C` over rows with `t >= from`.
    pub fn rms_e_after(&self, from: f64) -> f64 {
        let (sum, n) = self
            .rows
            .iter()
            .filter(|r| r.t >= from)
            .fold((0.0, 0usize), |(s, n), r| (s + r.e_c * r.e_c, n + 1));
        if n == 0 {
            0.0
        } else {
            (sum / n as f64).sqrt()
        }
    }

    /// Last time `|e_C|` exceeded `threshold`, or zero if it never did.
    pub fn settling_time(&self, threshold: f64) -> Option<f64> {
        let last = self.rows.last()?;
        if last.e_c.abs() >= threshold {
            return None;
        }
        Some(
            self.rows
                .iter()
                .rev()
                .find(|r| r.e_c.abs() >= threshold)
                .map_or(0.0, |r| r.t),
        )
    }

    pub fn zero_crossings(&self) -> usize {
        let mut sign = 0.0;
        let mut count = 0;
        for r in &self.rows {
            if r.e_c != 0.0 {
                let s = r.e_c.signum();
                if sign != 0.0 && s != sign {
                    count += 1;
                }
                sign = s;
            }
        }
        count
    }

    pub fn summary(&self) -> TraceSummary {
        let fold_max = |f: &dyn Fn(&TraceRow) -> f64| self.rows.iter().map(f).fold(0.0_f64, f64::max);
        TraceSummary {
            duration: self.rows.last().map_or(0.0, |r| r.t),
            final_e: self.rows.last().map_or(0.0, |r| r.e_c),
            max_abs_e: fold_max(&|r| r.e_c.abs()),
            rms_e: self.rms_e_after(0.0),
            settling_time: self.settling_time(0.05),
            zero_crossings: self.zero_crossings(),
            peak_a_lat: fold_max(&|r| r.a_lat.abs()),
            max_residual: fold_max(&|r| r.resid_max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_leaves_absent_fields_empty() {
        let trace = SimTrace {
            name: "x".into(),
            variant: ModelVariant::SkateKinematic,
            dt: 0.1,
            rows: vec![TraceRow {
                t: 0.0,
                sigma1: 20.0,
                e_c: -10.0,
                ..Default::default()
            }],
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TRACE_HEADER.join(","));
        assert_eq!(lines.next().unwrap(), "0,0,0,0,0,20,,0,-10,0,,,,,,,,0,,,,,,0");
    }
}
