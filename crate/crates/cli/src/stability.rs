use nonholo::analysis::{
    boundary_distance, kinematic_verdict, stability_grid, write_stability_csv, GridAxis, StabilityPoint,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::args::{Global, StabilityArgs};
use crate::error::CliError;
use crate::output;

fn parse_axis(arg: &'static str, text: &str) -> Result<GridAxis, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(CliError::usage(arg, format!("expected lo:hi:n, got `{text}`")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| CliError::usage(arg, format!("`{s}`: {e}")))
    };
    let (lo, hi) = (num(lo)?, num(hi)?);
    let n = n
        .trim()
        .parse::<usize>()
        .map_err(|e| CliError::usage(arg, format!("`{n}`: {e}")))?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi || n == 0 || (n == 1 && lo != hi) {
        return Err(CliError::usage(
            arg,
            format!("need finite lo <= hi and n >= 1 (n = 1 only for lo = hi), got `{text}`"),
        ));
    }
    Ok(GridAxis { lo, hi, n })
}

pub fn parse_list(arg: &'static str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let v = s
                .trim()
                .parse::<f64>()
                .map_err(|e| CliError::usage(arg, format!("`{s}`: {e}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::usage(arg, format!("`{s}` is not finite")))
            }
        })
        .collect()
}

fn check_scalars(args: &StabilityArgs) -> Result<(), CliError> {
    if !(args.speed > 0.0 && args.speed.is_finite()) {
        return Err(CliError::usage("--speed", format!("need > 0, got {}", args.speed)));
    }
    if !(args.wheelbase > 0.0 && args.wheelbase.is_finite()) {
        return Err(CliError::usage(
            "--wheelbase",
            format!("need > 0, got {}", args.wheelbase),
        ));
    }
    if args.band.is_nan() || args.band < 0.0 {
        return Err(CliError::usage("--band", format!("need >= 0, got {}", args.band)));
    }
    Ok(())
}

pub fn run(args: &StabilityArgs, global: &Global) -> Result<(), CliError> {
    check_scalars(args)?;
    let kappas = parse_list("--kappa", &args.kappa)?;
    let (v, l) = (args.speed, args.wheelbase);

    if let Some(point) = &args.point {
        let &[k1, k2] = &parse_list("--point", point)?[..] else {
            return Err(CliError::usage("--point", format!("expected k1,k2, got `{point}`")));
        };
        for &kappa in &kappas {
            let verdict = kinematic_verdict(kappa, v, l, k1, k2);
            let word = if verdict.criterion_stable { "stable" } else { "unstable" };
            let eig: Vec<String> = verdict
                .eigenvalues
                .iter()
                .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
                .collect();
            println!("kappa* = {kappa}: k1 = {k1}, k2 = {k2}: {word}");
            println!("  eigenvalues: {}", eig.join(", "));
            println!("  eigenvalues agree with the criterion: {}", verdict.agree);
        }
        return Ok(());
    }

    let k1 = parse_axis("--k1", &args.k1)?;
    let k2 = parse_axis("--k2", &args.k2)?;
    let mut points = stability_grid(k1, k2, &kappas, v, l, args.band)?;
    let grid_len = points.len();
    let mut rng = StdRng::seed_from_u64(global.seed);
    for _ in 0..args.random {
        let kappa = kappas[rng.random_range(0..kappas.len())];
        let a = if k1.hi > k1.lo {
            rng.random_range(k1.lo..k1.hi)
        } else {
            k1.lo
        };
        let b = if k2.hi > k2.lo {
            rng.random_range(k2.lo..k2.hi)
        } else {
            k2.lo
        };
        points.push(sample(kappa, v, l, a, b, args.band));
    }

    let dir = output::resolve(global.out.as_deref(), None, "stability")?;
    let csv = dir.join("stability.csv");
    write_stability_csv(output::create(&csv)?, &points).map_err(|e| CliError::output(csv.display(), e))?;

    let scored: Vec<&StabilityPoint> = points.iter().filter(|p| !p.in_band).collect();
    let agree = scored.iter().filter(|p| p.agree).count();
    let stable = points.iter().filter(|p| p.criterion).count();
    println!(
        "{} points ({grid_len} on the grid, {} random with seed {}), {stable} stable by the criterion",
        points.len(),
        args.random,
        global.seed
    );
    for &kappa in &kappas {
        let here: Vec<_> = scored.iter().filter(|p| p.kappa_star == kappa).collect();
        let ok = here.iter().filter(|p| p.agree).count();
        println!("kappa* = {kappa}: {ok}/{} agree", here.len());
    }
    let pct = if scored.is_empty() {
        100.0
    } else {
        100.0 * agree as f64 / scored.len() as f64
    };
    println!(
        "agreement outside the boundary band: {agree}/{} ({pct:.2}%), {} in band",
        scored.len(),
        points.len() - scored.len()
    );
    println!("wrote {}", csv.display());
    Ok(())
}

fn sample(kappa_star: f64, v: f64, l: f64, k1: f64, k2: f64, band: f64) -> StabilityPoint {
    let verdict = kinematic_verdict(kappa_star, v, l, k1, k2);
    StabilityPoint {
        k1,
        k2,
        kappa_star,
        criterion: verdict.criterion_stable,
        eig_max_real: verdict
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max),
        agree: verdict.agree,
        in_band: boundary_distance(kappa_star, l, k1, k2) <= band,
    }
}
