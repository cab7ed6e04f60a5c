use crate::error::Result;

/// One classical four-stage Runge-Kutta step of `dr/dt = rate(t, r)`.
/// `dt` may be negative for backward tracing.
pub fn rk4_step<F>(mut rate: F, t: f64, r: f64, dt: f64) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let half = 0.5 * dt;
    let k1 = rate(t, r)?;
    let k2 = rate(t + half, r + half * k1)?;
    let k3 = rate(t + half, r + half * k2)?;
    let k4 = rate(t + dt, r + dt * k3)?;
    Ok(r + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}
