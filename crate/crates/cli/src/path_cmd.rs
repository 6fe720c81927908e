use nonholo::path::CurvatureProfile;

use crate::args::{Global, PathArgs};
use crate::error::CliError;
use crate::plot::{write_svg, Panel, Series};
use crate::{output, source};

pub fn run(args: &PathArgs, global: &Global) -> Result<(), CliError> {
    let mut cfg = source::load(&args.source, Some("fig16"))?;
    if args.corners.is_some() || args.period.is_some() {
        let (period, corners) = match cfg.path.profile {
            CurvatureProfile::Periodic { period, corners, .. } => (period, corners),
            _ => (250.0, 4),
        };
        cfg.path.profile = CurvatureProfile::periodic(args.period.unwrap_or(period), args.corners.unwrap_or(corners));
        cfg.path.length = None;
    }
    if let Some(step) = args.step {
        cfg.path.step = step;
    }
    let sc = cfg.scenario()?;
    let path = sc.build_path()?;
    let dir = output::resolve(
        global.out.as_deref(),
        cfg.output.dir.as_deref(),
        &format!("{}_path", sc.name),
    )?;
    let csv = dir.join("path.csv");
    path.write_csv(output::create(&csv)?)?;

    let first = path.samples()[0];
    let last = *path.samples().last().expect("non-empty path");
    println!("profile: {:?}", sc.path.profile);
    println!(
        "length: {:.6} m over {} samples (step {} m)",
        path.length(),
        path.samples().len(),
        path.step()
    );
    println!("total heading change: {:.12} rad", last.psi - first.psi);
    println!("end-point gap: {:.3e} m", (last.x - first.x).hypot(last.y - first.y));
    println!("wrote {}", csv.display());
    if global.plot(cfg.output.plot) {
        let svg = dir.join("path.svg");
        let xy = path.samples().iter().step_by(5).map(|p| (p.x, p.y)).collect();
        let kappa = path.samples().iter().step_by(5).map(|p| (p.s, p.kappa)).collect();
        let panels = [
            Panel {
                title: "path".into(),
                x_label: "x [m]",
                y_label: "y [m]",
                series: vec![Series::new("path", xy)],
                equal_axes: true,
            },
            Panel {
                title: "curvature".into(),
                x_label: "s [m]",
                y_label: "kappa [1/m]",
                series: vec![Series::new("kappa", kappa)],
                equal_axes: false,
            },
        ];
        write_svg(&svg, &panels, 1)?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}
