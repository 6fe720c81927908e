use std::path::Path;
use std::process::{Command, Output};

use nonholo::config::Config;
use nonholo::sim::{figure, FIGURES, TRACE_HEADER};
use tempfile::TempDir;

fn nonholo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonholo"))
        .args(args)
        .current_dir(cwd)
        .env_remove("NONHOLO_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn simulate_figure_writes_trace_and_panels() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(&["simulate", "--figure", "fig16", "--out", "run"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let trace = std::fs::read_to_string(tmp.path().join("run/trace.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), TRACE_HEADER.join(","));
    let svg = std::fs::read_to_string(tmp.path().join("run/plot.svg")).unwrap();
    for panel in [
        "(a) trajectory",
        "(b) tracking errors",
        "(c) steering",
        "(d) accelerations",
    ] {
        assert!(svg.contains(panel), "missing {panel}");
    }
    let out = stdout(&o);
    assert!(
        out.contains("settling time") && out.contains("RMS e_C") && out.contains("peak a_lat"),
        "{out}"
    );
}

#[test]
fn straight_figure_without_plot_reports_no_overshoot() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(
        &["simulate", "--figure", "fig13", "--no-plot", "--out", "run"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(tmp.path().join("run/trace.csv").exists());
    assert!(!tmp.path().join("run/plot.svg").exists());
    assert!(
        stdout(&o).contains("zero crossings: 0 (no overshoot)"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn config_errors_name_the_key() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        ("unknown.toml", "[controller]\nk9 = 1.0\n", "controller.k9"),
        ("type.toml", "[controller]\nk1 = \"fast\"\n", "controller.k1"),
        ("step.toml", "[sim]\ndt = -0.1\n", "sim.dt"),
        ("top.toml", "colour = 3\n", "colour"),
    ];
    for (file, text, key) in cases {
        let cfg = write(tmp.path(), file, text);
        let o = nonholo(&["simulate", "--config", &cfg, "--no-plot"], tmp.path());
        assert_eq!(o.status.code(), Some(2), "{file}");
        assert!(stderr(&o).contains(key), "{file}: {}", stderr(&o));
    }
    let missing = nonholo(&["simulate", "--config", "nope.toml"], tmp.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn tripped_guard_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    // straight at the centre of a 20 m circle
    let cfg = write(
        tmp.path(),
        "centre.toml",
        "[path]\nprofile = \"circle\"\nkappa = 0.05\n[controller]\nk1 = 1e-4\nk2 = 0.0\n[sim]\nduration = 5.0\ninitial = { e = 19.9, theta = 1.5707963 }\n",
    );
    let o = nonholo(&["simulate", "--config", &cfg, "--no-plot"], tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(
        err.contains("guard tripped at t =") && err.contains("centre of curvature"),
        "{err}"
    );
}

#[test]
fn dumped_config_reparses_to_the_same_scenario() {
    let tmp = TempDir::new().unwrap();
    for name in FIGURES {
        let o = nonholo(&["simulate", "--figure", name, "--dump-config"], tmp.path());
        assert!(o.status.success());
        let text = stdout(&o);
        assert_eq!(
            Config::parse(&text).unwrap().scenario().unwrap(),
            figure(name).unwrap(),
            "{name}"
        );
        let file = write(tmp.path(), "dump.toml", &text);
        let again = nonholo(&["simulate", "--config", &file, "--dump-config"], tmp.path());
        assert_eq!(stdout(&again), text, "{name}");
    }
}

#[test]
fn dt_flag_overrides_the_config() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(
        &["simulate", "--figure", "fig13", "--dt", "0.01", "--dump-config"],
        tmp.path(),
    );
    assert!(Config::parse(&stdout(&o)).unwrap().scenario().unwrap().dt == 0.01);
}

#[test]
fn output_directory_precedence() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "short.toml",
        "name = \"short\"\n[sim]\nduration = 1.0\n[output]\ndir = \"from_config\"\n",
    );
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nonholo"));
        cmd.args(["simulate", "--config", &cfg, "--no-plot"])
            .args(extra)
            .current_dir(tmp.path())
            .env_remove("NONHOLO_OUT");
        if let Some(dir) = env {
            cmd.env("NONHOLO_OUT", dir);
        }
        assert!(cmd.output().unwrap().status.success());
    };
    run(&[], None);
    assert!(tmp.path().join("from_config/trace.csv").exists());
    run(&[], Some("from_env"));
    assert!(tmp.path().join("from_env/trace.csv").exists());
    run(&["--out", "from_flag"], Some("from_env_2"));
    assert!(tmp.path().join("from_flag/trace.csv").exists());
    assert!(!tmp.path().join("from_env_2").exists());
}

#[test]
fn every_figure_runs_through_the_cli() {
    let tmp = TempDir::new().unwrap();
    for name in FIGURES {
        let o = nonholo(&["simulate", "--figure", name, "--no-plot", "--out", name], tmp.path());
        assert!(o.status.success(), "{name}: {}", stderr(&o));
    }
}

#[test]
fn stability_grid_agrees_everywhere() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(&["stability", "--out", "st"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("agreement outside the boundary band: 2500/2500 (100.00%)"),
        "{}",
        stdout(&o)
    );
    let csv = std::fs::read_to_string(tmp.path().join("st/stability.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "k1,k2,kappa_star,criterion,eig_max_real,agree"
    );
    assert_eq!(csv.lines().count(), 2501);
}

#[test]
fn stability_single_points() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(&["stability", "--point", "-0.5,0.02"], tmp.path());
    let out = stdout(&o);
    assert!(
        out.contains(": stable") && out.contains("-0.452659") && out.contains("-3.438391"),
        "{out}"
    );
    let o = nonholo(&["stability", "--point", "0.1,0.02"], tmp.path());
    assert!(stdout(&o).contains(": unstable"), "{}", stdout(&o));
}

#[test]
fn stability_rejects_bad_ranges() {
    let tmp = TempDir::new().unwrap();
    for args in [["--k1", "1:0:5"], ["--k2", "0:1"], ["--kappa", "x"], ["--speed", "-1"]] {
        let o = nonholo(&["stability", args[0], args[1]], tmp.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn random_points_follow_the_seed() {
    let tmp = TempDir::new().unwrap();
    let csv = |seed: &str, dir: &str| {
        let o = nonholo(
            &[
                "stability",
                "--k1",
                "-1:0:2",
                "--k2",
                "0:0.1:2",
                "--random",
                "200",
                "--seed",
                seed,
                "--out",
                dir,
            ],
            tmp.path(),
        );
        assert!(o.status.success());
        assert!(stdout(&o).contains("(100.00%)"));
        std::fs::read_to_string(tmp.path().join(dir).join("stability.csv")).unwrap()
    };
    assert_eq!(csv("7", "a"), csv("7", "b"));
    assert_ne!(csv("7", "c"), csv("8", "d"));
}

#[test]
fn look_ahead_sweep_prefers_point_three_seconds() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(&["sweep", "--param", "t_L", "--no-plot", "--out", "sw"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("lowest RMS e_C after 20 s at t_L = 0.3"),
        "{}",
        stdout(&o)
    );
    let csv = std::fs::read_to_string(tmp.path().join("sw/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    for v in ["0", "0.1", "0.3", "0.5", "0.7"] {
        assert!(tmp.path().join(format!("sw/t_L_{v}/trace.csv")).exists());
    }
}

#[test]
fn wrapper_sweep_emits_curves() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(
        &["sweep", "--param", "wrapper_n", "--dt", "0.01", "--out", "w"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("w/wrapper.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "x,g_2,dg_2,g_3,dg_3,g_5,dg_5,g_1000,dg_1000"
    );
    // at x = 0 every curve passes the origin with unit slope
    let origin = csv.lines().find(|l| l.starts_with("0,")).unwrap();
    assert_eq!(origin, "0,0,1,0,1,0,1,0,1");
    assert!(tmp.path().join("w/wrapper.svg").exists());
}

#[test]
fn corner_sweep_previews_closed_paths() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(
        &["sweep", "--param", "N", "--dt", "0.01", "--no-plot", "--out", "n"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for n in 2..=5 {
        assert!(tmp.path().join(format!("n/N_{n}/path.csv")).exists());
        assert!(
            stdout(&o).contains(&format!("N = {n}: length {}.000 m", 250 * n)),
            "{}",
            stdout(&o)
        );
    }
}

#[test]
fn sweep_rejects_unknown_parameters() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(&["sweep", "--param", "k9"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("k9"));
    let o = nonholo(&["sweep", "--param", "N", "--values", "1"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn path_command_reports_closure() {
    let tmp = TempDir::new().unwrap();
    let o = nonholo(&["path", "--corners", "5", "--period", "100", "--out", "p"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("total heading change: 6.283185307"),
        "{}",
        stdout(&o)
    );
    let csv = std::fs::read_to_string(tmp.path().join("p/path.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5002);
    assert!(tmp.path().join("p/path.svg").exists());
}
