use alloc::vec::Vec;

use crate::error::{Error, Result};

/// First derivative of uniformly sampled values by five-point, fourth-order
/// differences: centered in the interior, one-sided near the ends.
pub fn derivative_table(f: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = f.len();
    if n < 5 {
        return Err(Error::TooFewNodes { got: n, need: 5 });
    }
    let s = 1.0 / (12.0 * h);
    let mut d = Vec::with_capacity(n);
    d.push((-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s);
    d.push((-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s);
    for i in 2..n - 2 {
        d.push((f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s);
    }
    let m = n - 1;
    d.push((3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * s);
    d.push((25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * s);
    Ok(d)
}
