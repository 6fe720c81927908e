use super::SimError;

/// One classical Runge-Kutta step.
pub fn rk4_step<F>(t: f64, x: &[f64], dt: f64, mut rhs: F) -> Result<Vec<f64>, SimError>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, SimError>,
{
    let axpy = |a: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect() };
    let k1 = rhs(t, x)?;
    let k2 = rhs(t + 0.5 * dt, &axpy(0.5 * dt, &k1))?;
    let k3 = rhs(t + 0.5 * dt, &axpy(0.5 * dt, &k2))?;
    let k4 = rhs(t + dt, &axpy(dt, &k3))?;
    Ok(x.iter()
        .enumerate()
        .map(|(i, xi)| xi + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrates from `t = 0` to `duration` with fixed step `dt`.
///
/// `hook` runs at the start of every step and once at the final time; its
/// result is handed to every stage of that step (a zero-order hold when the
/// right-hand side uses it). Returns the states on the uniform grid.
pub fn integrate<C, H, F>(
    state0: Vec<f64>,
    dt: f64,
    duration: f64,
    mut hook: H,
    mut rhs: F,
) -> Result<Vec<(f64, Vec<f64>)>, SimError>
where
    H: FnMut(f64, &[f64]) -> Result<C, SimError>,
    F: FnMut(f64, &[f64], &C) -> Result<Vec<f64>, SimError>,
{
    if !(dt > 0.0) || !(duration >= dt) {
        return Err(SimError::InvalidScenario(format!("dt = {dt}, duration = {duration}")));
    }
    let steps = (duration / dt).round() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = state0;
    for k in 0..steps {
        let t = k as f64 * dt;
        let held = hook(t, &x)?;
        let next = rk4_step(t, &x, dt, |ts, xs| rhs(ts, xs, &held))?;
        out.push((t, std::mem::replace(&mut x, next)));
    }
    let t_end = steps as f64 * dt;
    hook(t_end, &x)?;
    out.push((t_end, x));
    Ok(out)
}
