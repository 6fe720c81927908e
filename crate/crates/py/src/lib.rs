//! Python bindings: run scenarios, query stability verdicts, evaluate wrappers
//! and generate paths.

use nonholo::analysis::{kinematic_verdict, linearize_kinematic};
use nonholo::config::Config;
use nonholo::control::{WrapperOrder, WrapperSpec};
use nonholo::path::{build_path, CurvatureProfile, Pose};
use nonholo::sim::{figure, run_scenario, SimError, FIGURES, TRACE_HEADER};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    pynonholo,
    GuardTripped,
    PyRuntimeError,
    "A numerical guard stopped the simulation."
);

fn sim_err(e: SimError) -> PyErr {
    match e {
        SimError::GuardTripped { .. } => GuardTripped::new_err(e.to_string()),
        SimError::InvalidScenario(_) | SimError::InvalidSetting { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn load(figure_name: Option<&str>, config: Option<&str>) -> PyResult<Config> {
    match (figure_name, config) {
        (Some(_), Some(_)) => Err(PyValueError::new_err("give either figure or config, not both")),
        (None, Some(text)) => Config::parse(text).map_err(value_err),
        (name, None) => {
            let name = name.unwrap_or("fig16");
            figure(name)
                .map(|sc| Config::from_scenario(&sc))
                .ok_or_else(|| PyValueError::new_err(format!("unknown figure `{name}`")))
        }
    }
}

/// Names of the built-in figure scenarios.
#[pyfunction]
fn figures() -> Vec<&'static str> {
    FIGURES.to_vec()
}

/// TOML text of a figure scenario.
#[pyfunction]
#[pyo3(signature = (figure = "fig16"))]
fn dump_config(figure: &str) -> PyResult<String> {
    load(Some(figure), None)?.dump().map_err(value_err)
}

/// Runs a figure scenario or a TOML config given as text.
///
/// Returns a dict with one list per trace column (absent values as NaN) and a
/// `summary` dict.
#[pyfunction]
#[pyo3(signature = (figure = None, config = None, dt = None, duration = None))]
fn simulate<'py>(
    py: Python<'py>,
    figure: Option<&str>,
    config: Option<&str>,
    dt: Option<f64>,
    duration: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = load(figure, config)?;
    if let Some(dt) = dt {
        cfg.sim.dt = dt;
    }
    if let Some(d) = duration {
        cfg.sim.duration = d;
    }
    let sc = cfg.scenario().map_err(value_err)?;
    let trace = py.detach(|| run_scenario(&sc)).map_err(sim_err)?;

    let out = PyDict::new(py);
    let column = |f: &dyn Fn(&nonholo::sim::TraceRow) -> Option<f64>| -> Vec<f64> {
        trace.rows.iter().map(|r| f(r).unwrap_or(f64::NAN)).collect()
    };
    let columns: [(&str, Vec<f64>); 24] = [
        ("t", column(&|r| Some(r.t))),
        ("x_G", column(&|r| Some(r.x_g))),
        ("y_G", column(&|r| Some(r.y_g))),
        ("psi", column(&|r| Some(r.psi))),
        ("gamma", column(&|r| Some(r.gamma))),
        ("sigma1", column(&|r| Some(r.sigma1))),
        ("sigma2", column(&|r| r.sigma2)),
        ("s_C", column(&|r| Some(r.s_c))),
        ("e_C", column(&|r| Some(r.e_c))),
        ("theta_C", column(&|r| Some(r.theta_c))),
        ("gamma_des", column(&|r| r.gamma_des)),
        ("gamma_ff", column(&|r| r.gamma_ff)),
        ("gamma_fb", column(&|r| r.gamma_fb)),
        ("T_s", column(&|r| r.t_s)),
        ("F_R", column(&|r| r.f_r)),
        ("a_des", column(&|r| r.a_des)),
        ("v_des", column(&|r| r.v_des)),
        ("a_lat", column(&|r| Some(r.a_lat))),
        ("iota", column(&|r| r.iota)),
        ("a1", column(&|r| r.a1)),
        ("a2", column(&|r| r.a2)),
        ("mu_R", column(&|r| r.mu_r)),
        ("mu_F", column(&|r| r.mu_f)),
        ("resid_max", column(&|r| Some(r.resid_max))),
    ];
    debug_assert!(columns.iter().zip(TRACE_HEADER).all(|((name, _), h)| *name == h));
    for (name, values) in columns {
        out.set_item(name, values)?;
    }
    let s = trace.summary();
    let summary = PyDict::new(py);
    summary.set_item("settling_time", s.settling_time)?;
    summary.set_item("rms_e", s.rms_e)?;
    summary.set_item("max_abs_e", s.max_abs_e)?;
    summary.set_item("final_e", s.final_e)?;
    summary.set_item("zero_crossings", s.zero_crossings)?;
    summary.set_item("peak_a_lat", s.peak_a_lat)?;
    summary.set_item("max_residual", s.max_residual)?;
    out.set_item("summary", summary)?;
    Ok(out)
}

/// Routh-Hurwitz verdict and eigenvalues of the kinematic closed loop.
#[pyfunction]
#[pyo3(signature = (k1, k2, kappa = 0.0, speed = 20.0, wheelbase = 2.57))]
fn stability<'py>(
    py: Python<'py>,
    k1: f64,
    k2: f64,
    kappa: f64,
    speed: f64,
    wheelbase: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let v = kinematic_verdict(kappa, speed, wheelbase, k1, k2);
    let out = PyDict::new(py);
    out.set_item("stable", v.criterion_stable)?;
    out.set_item("agree", v.agree)?;
    out.set_item(
        "eigenvalues",
        v.eigenvalues.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>(),
    )?;
    Ok(out)
}

/// System matrix of the linearised kinematic loop in `(e, theta)`.
#[pyfunction]
#[pyo3(signature = (k1, k2, kappa = 0.0, speed = 20.0, wheelbase = 2.57))]
fn kinematic_matrix(k1: f64, k2: f64, kappa: f64, speed: f64, wheelbase: f64) -> Vec<Vec<f64>> {
    let m = linearize_kinematic(kappa, speed, wheelbase, k1, k2, false);
    m.a.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Wrapper `g_n(x)` and its slope; `n = None` is the hard clamp.
#[pyfunction]
#[pyo3(signature = (x, n = Some(2), g_sat = 1.0))]
fn wrapper(x: f64, n: Option<u32>, g_sat: f64) -> PyResult<(f64, f64)> {
    if g_sat.is_nan() || g_sat <= 0.0 || n.is_some_and(|n| n < 2) {
        return Err(PyValueError::new_err("need g_sat > 0 and n >= 2"));
    }
    let w = WrapperSpec::new(n.map_or(WrapperOrder::Infinite, WrapperOrder::Finite), g_sat);
    Ok((w.value(x), w.deriv(x)))
}

/// Samples `(s, x, y, psi, kappa)` of a closed periodic path.
#[pyfunction]
#[pyo3(signature = (corners = 4, period = 250.0, step = 0.1))]
fn periodic_path<'py>(py: Python<'py>, corners: u32, period: f64, step: f64) -> PyResult<Bound<'py, PyDict>> {
    let table = build_path(
        &CurvatureProfile::periodic(period, corners),
        step,
        None,
        Pose::default(),
    )
    .map_err(value_err)?;
    let out = PyDict::new(py);
    let samples = table.samples();
    out.set_item("s", samples.iter().map(|p| p.s).collect::<Vec<_>>())?;
    out.set_item("x", samples.iter().map(|p| p.x).collect::<Vec<_>>())?;
    out.set_item("y", samples.iter().map(|p| p.y).collect::<Vec<_>>())?;
    out.set_item("psi", samples.iter().map(|p| p.psi).collect::<Vec<_>>())?;
    out.set_item("kappa", samples.iter().map(|p| p.kappa).collect::<Vec<_>>())?;
    Ok(out)
}

#[pymodule]
fn pynonholo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GuardTripped", m.py().get_type::<GuardTripped>())?;
    m.add_function(wrap_pyfunction!(figures, m)?)?;
    m.add_function(wrap_pyfunction!(dump_config, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(stability, m)?)?;
    m.add_function(wrap_pyfunction!(kinematic_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(wrapper, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_path, m)?)?;
    Ok(())
}
