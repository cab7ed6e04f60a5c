use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Interpolating cubic spline with not-a-knot end conditions.
///
/// Not-a-knot ends make the spline reproduce any cubic exactly once there are
/// at least four nodes. Two nodes give the chord, three the parabola.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    uniform: Option<(f64, f64)>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput("spline nodes and values differ in length".into()));
        }
        if x.len() < 2 {
            return Err(Error::TooFewNodes { got: x.len(), need: 2 });
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("spline nodes must be strictly increasing".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let m = second_derivatives(&h, &y);
        Ok(CubicSpline { x, y, m, uniform: None })
    }

    /// Spline on nodes `x0 + i*h`. Evaluation locates intervals in O(1).
    pub fn uniform(x0: f64, h: f64, y: Vec<f64>) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::TooFewNodes { got: y.len(), need: 2 });
        }
        if !(h > 0.0) {
            return Err(Error::InvalidInput("spline spacing must be positive".into()));
        }
        let n = y.len();
        let x: Vec<f64> = (0..n).map(|i| x0 + i as f64 * h).collect();
        let m = second_derivatives(&vec![h; n - 1], &y);
        Ok(CubicSpline {
            x,
            y,
            m,
            uniform: Some((x0, h)),
        })
    }

    pub fn lo(&self) -> f64 {
        self.x[0]
    }

    pub fn hi(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn check(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.lo(), self.hi());
        let slack = 1e-12 * (hi - lo).max(1.0);
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(Error::OutOfRange { x, lo, hi });
        }
        Ok(x.clamp(lo, hi))
    }

    fn interval(&self, x: f64) -> usize {
        let last = self.x.len() - 2;
        match self.uniform {
            Some((x0, h)) => {
                let k = math::floor((x - x0) / h);
                if k <= 0.0 {
                    0
                } else {
                    (k as usize).min(last)
                }
            }
            None => match self.x.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
                Ok(i) => i.min(last),
                Err(i) => i.saturating_sub(1).min(last),
            },
        }
    }

    /// Value at `x`; `OutOfRange` outside the node range.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = self.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    /// Value, first and second derivative at `x`.
    pub fn eval_all(&self, x: f64) -> Result<[f64; 3]> {
        let x = self.check(x)?;
        let i = self.interval(x);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - x) / h;
        let b = 1.0 - a;
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let (yi, yj) = (self.y[i], self.y[i + 1]);
        let v = a * yi + b * yj + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let d1 = (yj - yi) / h - (3.0 * a * a - 1.0) / 6.0 * h * mi + (3.0 * b * b - 1.0) / 6.0 * h * mj;
        let d2 = a * mi + b * mj;
        Ok([v, d1, d2])
    }

    pub fn eval_d1(&self, x: f64) -> Result<f64> {
        Ok(self.eval_all(x)?[1])
    }

    pub fn eval_d2(&self, x: f64) -> Result<f64> {
        Ok(self.eval_all(x)?[2])
    }

    /// Value at `x`, which the caller guarantees lies in the node range.
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - x) / h;
        let b = 1.0 - a;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// Second derivatives at the nodes for interval widths `h` and values `y`.
fn second_derivatives(h: &[f64], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    if n == 2 {
        return m;
    }
    if n == 3 {
        // Single parabola through three points.
        let s0 = (y[1] - y[0]) / h[0];
        let s1 = (y[2] - y[1]) / h[1];
        let c = 2.0 * (s1 - s0) / (h[0] + h[1]);
        return vec![c; 3];
    }
    // Interior unknowns m[1..n-1]; the not-a-knot rows eliminate m[0] and
    // m[n-1] into the first and last interior equations.
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for r in 0..k {
        let i = r + 1;
        let (hl, hr) = (h[i - 1], h[i]);
        sub[r] = hl;
        diag[r] = 2.0 * (hl + hr);
        sup[r] = hr;
        rhs[r] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
    }
    let (h0, h1) = (h[0], h[1]);
    diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
    sup[0] = (h1 * h1 - h0 * h0) / h1;
    let (a, b) = (h[n - 3], h[n - 2]);
    sub[k - 1] = (a * a - b * b) / a;
    diag[k - 1] = (a + b) * (2.0 * a + b) / a;
    let inner = thomas(&sub, &diag, &sup, &rhs);
    m[1..n - 1].copy_from_slice(&inner);
    m[0] = ((h0 + h1) * m[1] - h0 * m[2]) / h1;
    m[n - 1] = ((a + b) * m[n - 2] - b * m[n - 3]) / a;
    m
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cube_on_five_nodes() {
        let y: Vec<f64> = (0..5).map(|i| (i as f64 * 0.25).powi(3)).collect();
        let s = CubicSpline::uniform(0.0, 0.25, y).unwrap();
        assert!((s.eval(0.37).unwrap() - 0.050653).abs() < 1e-14);
    }

    #[test]
    fn reproduces_cubic_on_uneven_nodes() {
        let x = vec![0.0, 0.1, 0.35, 0.4, 0.8, 1.0];
        let f = |x: f64| 2.0 * x * x * x - x * x + 0.5;
        let y = x.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for q in [0.05, 0.2, 0.39, 0.6, 0.99] {
            let [v, d1, d2] = s.eval_all(q).unwrap();
            assert!((v - f(q)).abs() < 1e-13);
            assert!((d1 - (6.0 * q * q - 2.0 * q)).abs() < 1e-12);
            assert!((d2 - (12.0 * q - 2.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn constant_table() {
        let s = CubicSpline::uniform(-1.0, 0.5, vec![2.5; 6]).unwrap();
        assert_eq!(s.eval(-0.3).unwrap(), 2.5);
    }

    #[test]
    fn outside_range_is_an_error() {
        let s = CubicSpline::uniform(0.0, 0.25, vec![0.0; 5]).unwrap();
        assert!(matches!(s.eval(1.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(s.eval(-0.01), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn short_tables() {
        let line = CubicSpline::uniform(0.0, 1.0, vec![1.0, 3.0]).unwrap();
        assert!((line.eval(0.25).unwrap() - 1.5).abs() < 1e-15);
        let par = CubicSpline::uniform(0.0, 1.0, vec![0.0, 1.0, 4.0]).unwrap();
        assert!((par.eval(1.5).unwrap() - 2.25).abs() < 1e-14);
        let cubic: Vec<f64> = (0..4).map(|i| (i as f64).powi(3)).collect();
        let four = CubicSpline::uniform(0.0, 1.0, cubic).unwrap();
        assert!((four.eval(2.5).unwrap() - 15.625).abs() < 1e-12);
    }
}
