use crate::error::{Error, Result};

/// Solve `f(x) = target` on `[lo, hi]` for a strictly monotone `f`, using
/// bisection safeguarded Newton steps. `f` returns `(value, derivative)`.
pub fn invert_monotone<F>(f: F, target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    let glo = flo - target;
    let ghi = fhi - target;
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo.signum() == ghi.signum() || !glo.is_finite() || !ghi.is_finite() {
        return Err(Error::InversionFailure { r: target });
    }
    let increasing = ghi > 0.0;
    let (mut a, mut b) = (lo, hi);
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        let g = fx - target;
        if !g.is_finite() {
            return Err(Error::InversionFailure { r: target });
        }
        if g == 0.0 {
            return Ok(x);
        }
        if (g > 0.0) == increasing {
            b = x;
        } else {
            a = x;
        }
        let newton = x - g / dfx;
        let next = if dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= tol || (b - a) <= tol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::InversionFailure { r: target })
}
