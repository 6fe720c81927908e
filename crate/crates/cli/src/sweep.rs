use std::fmt::Write as _;
use std::path::Path;
use std::thread;

use nonholo::control::{WrapperOrder, WrapperSpec};
use nonholo::path::CurvatureProfile;
use nonholo::sim::{run_scenario, Scenario, SimTrace};

use crate::args::{Global, SweepArgs};
use crate::error::CliError;
use crate::plot::{write_svg, Panel, Series};
use crate::simulate::{trace_panels, write_trace};
use crate::stability::parse_list;
use crate::{output, source};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    LookAhead,
    WrapperOrder,
    LateralLimit,
    Corners,
    Period,
}

impl Param {
    const ALL: [Param; 5] = [
        Param::LookAhead,
        Param::WrapperOrder,
        Param::LateralLimit,
        Param::Corners,
        Param::Period,
    ];

    fn name(self) -> &'static str {
        match self {
            Param::LookAhead => "t_L",
            Param::WrapperOrder => "wrapper_n",
            Param::LateralLimit => "a_lat_max",
            Param::Corners => "N",
            Param::Period => "s_T",
        }
    }

    fn parse(text: &str) -> Result<Self, CliError> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == text || (text == "n" && *p == Param::WrapperOrder))
            .ok_or_else(|| {
                let known: Vec<_> = Param::ALL.iter().map(|p| p.name()).collect();
                CliError::usage(
                    "--param",
                    format!("unknown parameter `{text}`, expected one of {}", known.join(", ")),
                )
            })
    }

    fn default_values(self) -> &'static str {
        match self {
            Param::LookAhead => "0,0.1,0.3,0.5,0.7",
            Param::WrapperOrder => "2,3,5,1000",
            Param::LateralLimit => "2,4,8,12",
            Param::Corners => "2,3,4,5",
            Param::Period => "50,100,250",
        }
    }

    fn default_figure(self) -> &'static str {
        match self {
            Param::LookAhead => "fig17",
            Param::LateralLimit => "fig20",
            _ => "fig16",
        }
    }

    /// Base scenario with the parameter set to `value`.
    fn apply(self, base: &Scenario, value: &str) -> Result<Scenario, CliError> {
        let bad = |reason: String| CliError::usage("--values", reason);
        let real = || -> Result<f64, CliError> {
            let v = parse_list("--values", value)?[0];
            if v < 0.0 {
                return Err(bad(format!("{} must be >= 0, got {v}", self.name())));
            }
            Ok(v)
        };
        let mut sc = base.clone();
        sc.name = format!("{}_{}_{value}", base.name, self.name());
        match self {
            Param::LookAhead => sc.gains.t_look = real()?,
            Param::LateralLimit => sc.gains.a_lat_max = real()?,
            Param::WrapperOrder => {
                sc.wrapper = match value {
                    "inf" => WrapperOrder::Infinite,
                    n => match n.parse::<u32>() {
                        Ok(n) if n >= 2 => WrapperOrder::Finite(n),
                        _ => {
                            return Err(bad(format!(
                                "wrapper order must be an integer >= 2 or `inf`, got `{n}`"
                            )))
                        }
                    },
                }
            }
            Param::Corners | Param::Period => {
                let CurvatureProfile::Periodic { period, corners, .. } = base.path.profile else {
                    return Err(bad(format!("{} needs a periodic base path", self.name())));
                };
                let profile = if self == Param::Corners {
                    match value.parse::<u32>() {
                        Ok(n) if n >= 2 => CurvatureProfile::periodic(period, n),
                        _ => return Err(bad(format!("N must be an integer >= 2, got `{value}`"))),
                    }
                } else {
                    CurvatureProfile::periodic(real()?, corners)
                };
                sc.path.profile = profile;
                sc.path.length = None;
            }
        }
        sc.validate()?;
        Ok(sc)
    }
}

struct Outcome {
    value: String,
    trace: SimTrace,
}

pub fn run(args: &SweepArgs, global: &Global) -> Result<(), CliError> {
    let param = Param::parse(&args.param)?;
    let mut cfg = source::load(&args.source, Some(param.default_figure()))?;
    if let Some(dt) = args.dt {
        cfg.sim.dt = dt;
    }
    let base = cfg.scenario()?;
    let text = args.values.as_deref().unwrap_or(param.default_values());
    let values: Vec<String> = text
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if values.is_empty() {
        return Err(CliError::usage("--values", "no values given"));
    }
    let scenarios = values
        .iter()
        .map(|v| param.apply(&base, v))
        .collect::<Result<Vec<_>, _>>()?;
    let dir = output::resolve(
        global.out.as_deref(),
        cfg.output.dir.as_deref(),
        &format!("sweep_{}", param.name()),
    )?;
    let plot = global.plot(cfg.output.plot);

    // one scenario per thread; each writes only into its own directory
    let results: Vec<Result<Outcome, CliError>> = thread::scope(|scope| {
        let handles: Vec<_> = values
            .iter()
            .zip(&scenarios)
            .map(|(value, sc)| {
                let sub = dir.join(format!("{}_{value}", param.name()));
                let stride = cfg.output.stride;
                scope.spawn(move || -> Result<Outcome, CliError> {
                    std::fs::create_dir_all(&sub).map_err(|e| CliError::output(sub.display(), e))?;
                    let trace = run_scenario(sc)?;
                    write_trace(&trace, &sub, stride)?;
                    if plot {
                        write_svg(
                            &sub.join("plot.svg"),
                            &trace_panels(&trace, &sc.build_path()?, stride),
                            2,
                        )?;
                    }
                    Ok(Outcome {
                        value: value.clone(),
                        trace,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let outcomes = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let from = args.transient.min(0.5 * base.duration);
    let mut table = format!("param,value,rms_e,rms_e_after_{from}s,max_abs_e,settling_time,peak_a_lat,max_residual\n");
    println!(
        "{:>10} {:>14} {:>16} {:>12} {:>10}",
        param.name(),
        "RMS e_C",
        format!("RMS e_C t>={from}"),
        "max|e_C|",
        "peak a_lat"
    );
    for o in &outcomes {
        let s = o.trace.summary();
        let after = o.trace.rms_e_after(from);
        let settle = s.settling_time.map(|t| t.to_string()).unwrap_or_default();
        writeln!(
            table,
            "{},{},{},{after},{},{settle},{},{}",
            param.name(),
            o.value,
            s.rms_e,
            s.max_abs_e,
            s.peak_a_lat,
            s.max_residual
        )
        .expect("write to string");
        println!(
            "{:>10} {:>14.6e} {:>16.6e} {:>12.6e} {:>10.4}",
            o.value, s.rms_e, after, s.max_abs_e, s.peak_a_lat
        );
    }
    if let Some(best) = outcomes
        .iter()
        .min_by(|a, b| a.trace.rms_e_after(from).total_cmp(&b.trace.rms_e_after(from)))
    {
        println!("lowest RMS e_C after {from} s at {} = {}", param.name(), best.value);
    }
    let csv = dir.join("sweep.csv");
    output::write_text(&csv, &table)?;
    println!("wrote {}", csv.display());

    match param {
        Param::WrapperOrder => wrapper_curves(&dir, &scenarios, &values, plot)?,
        Param::Corners | Param::Period => path_previews(&dir, &scenarios, &values, param, plot)?,
        _ => {}
    }
    Ok(())
}

/// `g_n` and `g_n'` on `[-5, 5]` with unit bound for each swept order.
fn wrapper_curves(dir: &Path, scenarios: &[Scenario], values: &[String], plot: bool) -> Result<(), CliError> {
    let xs: Vec<f64> = (0..=400).map(|i| -5.0 + 0.025 * i as f64).collect();
    let specs: Vec<WrapperSpec> = scenarios.iter().map(|sc| WrapperSpec::new(sc.wrapper, 1.0)).collect();
    let mut text = String::from("x");
    for v in values {
        write!(text, ",g_{v},dg_{v}").expect("write to string");
    }
    text.push('\n');
    for &x in &xs {
        text.push_str(&x.to_string());
        for w in &specs {
            write!(text, ",{},{}", w.value(x), w.deriv(x)).expect("write to string");
        }
        text.push('\n');
    }
    let csv = dir.join("wrapper.csv");
    output::write_text(&csv, &text)?;
    println!("wrote {}", csv.display());
    if plot {
        let curves = |f: &dyn Fn(&WrapperSpec, f64) -> f64| -> Vec<Series> {
            specs
                .iter()
                .zip(values)
                .map(|(w, v)| Series::new(format!("n = {v}"), xs.iter().map(|&x| (x, f(w, x))).collect()))
                .collect()
        };
        let panels = [
            Panel {
                title: "wrapper g_n".into(),
                x_label: "x",
                y_label: "g_n(x)",
                series: curves(&|w, x| w.value(x)),
                equal_axes: false,
            },
            Panel {
                title: "slope g_n'".into(),
                x_label: "x",
                y_label: "g_n'(x)",
                series: curves(&|w, x| w.deriv(x)),
                equal_axes: false,
            },
        ];
        let svg = dir.join("wrapper.svg");
        write_svg(&svg, &panels, 1)?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn path_previews(
    dir: &Path,
    scenarios: &[Scenario],
    values: &[String],
    param: Param,
    plot: bool,
) -> Result<(), CliError> {
    let mut series = Vec::new();
    for (sc, v) in scenarios.iter().zip(values) {
        let path = sc.build_path()?;
        let csv = dir.join(format!("{}_{v}", param.name())).join("path.csv");
        path.write_csv(output::create(&csv)?)?;
        let last = path.samples().last().expect("non-empty path");
        println!(
            "{} = {v}: length {:.3} m, closure gap {:.2e} m",
            param.name(),
            path.length(),
            last.x.hypot(last.y)
        );
        series.push(Series::new(
            format!("{} = {v}", param.name()),
            path.samples().iter().step_by(10).map(|p| (p.x, p.y)).collect(),
        ));
    }
    if plot {
        let svg = dir.join("paths.svg");
        write_svg(
            &svg,
            &[Panel {
                title: "reference paths".into(),
                x_label: "x [m]",
                y_label: "y [m]",
                series,
                equal_axes: true,
            }],
            1,
        )?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}
