use std::path::Path;
use std::time::Instant;

use nonholo::path::PathTable;
use nonholo::sim::{run_scenario, SimTrace};

use crate::args::{Global, SimulateArgs};
use crate::error::CliError;
use crate::plot::{write_svg, Panel, Series};
use crate::{output, source};

pub fn run(args: &SimulateArgs, global: &Global) -> Result<(), CliError> {
    let mut cfg = source::load(&args.source, None)?;
    if let Some(dt) = args.dt {
        cfg.sim.dt = dt;
    }
    let sc = cfg.scenario()?;
    if args.dump_config {
        print!("{}", cfg.dump()?);
        return Ok(());
    }
    let dir = output::resolve(global.out.as_deref(), cfg.output.dir.as_deref(), &sc.name)?;

    let started = Instant::now();
    let trace = run_scenario(&sc)?;
    let elapsed = started.elapsed().as_secs_f64();

    write_trace(&trace, &dir, cfg.output.stride)?;
    output::write_text(&dir.join("config.toml"), &cfg.dump()?)?;

    let s = trace.summary();
    println!(
        "scenario {} ({}, {} s at dt = {} s, {elapsed:.2} s wall)",
        sc.name, sc.variant, sc.duration, sc.dt
    );
    match s.settling_time {
        Some(t) => println!("settling time (|e_C| < 0.05 m): {t:.3} s"),
        None => println!("settling time (|e_C| < 0.05 m): not settled"),
    }
    println!("RMS e_C: {:.6} m", s.rms_e);
    println!("max |e_C|: {:.6} m, final e_C: {:.3e} m", s.max_abs_e, s.final_e);
    let overshoot = if s.zero_crossings == 0 {
        "no overshoot"
    } else {
        "overshoot"
    };
    println!("e_C zero crossings: {} ({overshoot})", s.zero_crossings);
    println!("peak a_lat: {:.4} m/s^2", s.peak_a_lat);
    println!("max constraint residual: {:.2e}", s.max_residual);
    println!("wrote {}", dir.join("trace.csv").display());

    if global.plot(cfg.output.plot) {
        let svg = dir.join("plot.svg");
        let path = sc.build_path()?;
        write_svg(&svg, &trace_panels(&trace, &path, cfg.output.stride), 2)?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn decimate<T: Copy>(items: &[T], max: usize) -> impl Iterator<Item = T> + '_ {
    let step = items.len().div_ceil(max.max(1)).max(1);
    items.iter().copied().step_by(step)
}

fn channel(trace: &SimTrace, stride: usize, f: impl Fn(&nonholo::sim::TraceRow) -> Option<f64>) -> Vec<(f64, f64)> {
    trace
        .rows
        .iter()
        .step_by(stride.max(1))
        .filter_map(|r| f(r).map(|v| (r.t, v)))
        .collect()
}

/// Trajectory, errors, steering and accelerations.
pub fn trace_panels(trace: &SimTrace, path: &PathTable, stride: usize) -> Vec<Panel> {
    let reference: Vec<(f64, f64)> = decimate(path.samples(), 4000).map(|p| (p.x, p.y)).collect();
    let vehicle = trace
        .rows
        .iter()
        .step_by(stride.max(1))
        .map(|r| (r.x_g, r.y_g))
        .collect();
    let keep = |series: Vec<Series>| series.into_iter().filter(|s| !s.points.is_empty()).collect();
    vec![
        Panel {
            title: "(a) trajectory".into(),
            x_label: "x [m]",
            y_label: "y [m]",
            series: vec![Series::new("path", reference), Series::new("centre of mass", vehicle)],
            equal_axes: true,
        },
        Panel {
            title: "(b) tracking errors".into(),
            x_label: "t [s]",
            y_label: "e_C [m], theta_C [rad]",
            series: vec![
                Series::new("e_C", channel(trace, stride, |r| Some(r.e_c))),
                Series::new("theta_C", channel(trace, stride, |r| Some(r.theta_c))),
            ],
            equal_axes: false,
        },
        Panel {
            title: "(c) steering".into(),
            x_label: "t [s]",
            y_label: "[rad]",
            series: keep(vec![
                Series::new("gamma", channel(trace, stride, |r| Some(r.gamma))),
                Series::new("gamma_des", channel(trace, stride, |r| r.gamma_des)),
                Series::new("gamma_ff", channel(trace, stride, |r| r.gamma_ff)),
                Series::new("gamma_fb", channel(trace, stride, |r| r.gamma_fb)),
            ]),
            equal_axes: false,
        },
        Panel {
            title: "(d) accelerations".into(),
            x_label: "t [s]",
            y_label: "[m/s^2]",
            series: keep(vec![
                Series::new("a_lat", channel(trace, stride, |r| Some(r.a_lat))),
                Series::new("a_des", channel(trace, stride, |r| r.a_des)),
            ]),
            equal_axes: false,
        },
    ]
}

pub fn write_trace(trace: &SimTrace, dir: &Path, stride: usize) -> Result<(), CliError> {
    let path = dir.join("trace.csv");
    trace
        .write_csv(output::create(&path)?, stride)
        .map_err(|e| CliError::output(path.display(), e))
}
