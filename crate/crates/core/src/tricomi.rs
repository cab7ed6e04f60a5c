//! Degenerate Goursat problem for the Tricomi equation `y u_xx + u_yy = 0`
//! with `u(x, 0) = u0(x)`, `u_y(x, 0) = u1(x)` on `[x1, x2]`.
//!
//! With `t = sqrt(-y)` and the error variables
//!
//! ```text
//! R = Rbar - u1 - u0' t,   S = Sbar - u1 + u0' t,   W = u - u0
//! ```
//!
//! where `Rbar = u_y + t u_x` and `Sbar = u_y - t u_x`, the problem becomes a
//! first-order system with zero data on `t = 0` whose characteristics are the
//! explicit cubics `x = ±(2/3) t^3 + const`. It is solved by the same Picard
//! iteration as the Euler problem and has polynomial closed-form solutions,
//! which makes it the end-to-end check of the scheme.

use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::BoundaryFunction;
use crate::error::{Error, Result};
use crate::grid::{FieldTriple, LateralCurve, LevelSplines, ShearedGrid};
use crate::iteration::{weighted_distance, weighted_norm, IterationReport};
use crate::math;
use crate::numerics::{simpson_open, simpson_panel};
use crate::par;

/// `x_+(t)` and `x_-(t)` through `(eta, xi)`.
pub fn tricomi_characteristics(eta: f64, xi: f64, t: f64) -> (f64, f64) {
    let a = 2.0 / 3.0 * t * t * t;
    let b = 2.0 / 3.0 * xi * xi * xi;
    (a + eta - b, -a + eta + b)
}

/// Largest `t` at which the two boundary characteristics still bound a
/// non-empty interval: `cbrt(3 (x2 - x1) / 4)`.
pub fn closure_bound(x1: f64, x2: f64) -> f64 {
    math::cbrt(0.75 * (x2 - x1))
}

#[derive(Clone, Debug)]
pub struct TricomiProblem {
    pub x1: f64,
    pub x2: f64,
    /// `u(x, 0)`, needs derivatives to order 4.
    pub u0: BoundaryFunction,
    /// `u_y(x, 0)`, needs derivatives to order 3.
    pub u1: BoundaryFunction,
    pub delta: f64,
    /// Number of `t`-steps.
    pub nt: usize,
    /// Nodes per level.
    pub nr: usize,
}

/// `u0 = 3 x^2`, `u1 = 0`: `u = 3 x^2 - y^3`.
pub fn exact1(delta: f64, nt: usize, nr: usize) -> TricomiProblem {
    TricomiProblem {
        x1: 0.0,
        x2: 1.0,
        u0: BoundaryFunction::Poly(vec![0.0, 0.0, 3.0]),
        u1: BoundaryFunction::constant(0.0),
        delta,
        nt,
        nr,
    }
}

/// `u0 = 0`, `u1 = x^2`: `u = x^2 y - y^4 / 6`.
pub fn exact2(delta: f64, nt: usize, nr: usize) -> TricomiProblem {
    TricomiProblem {
        u0: BoundaryFunction::constant(0.0),
        u1: BoundaryFunction::Poly(vec![0.0, 0.0, 1.0]),
        ..exact1(delta, nt, nr)
    }
}

/// Zero data: the zero field is the fixed point.
pub fn zero(delta: f64, nt: usize, nr: usize) -> TricomiProblem {
    TricomiProblem {
        u0: BoundaryFunction::constant(0.0),
        ..exact1(delta, nt, nr)
    }
}

/// `(R, S, W)` of the closed-form solutions at `(x, t)`.
pub fn exact_fields(which: ExactCase, x: f64, t: f64) -> [f64; 3] {
    let (t2, t3) = (t * t, t * t * t);
    match which {
        ExactCase::Quadratic => [-3.0 * t2 * t2, -3.0 * t2 * t2, t3 * t3],
        ExactCase::Quartic => [
            2.0 / 3.0 * t3 * t3 - 2.0 * x * t3,
            2.0 / 3.0 * t3 * t3 + 2.0 * x * t3,
            -x * x * t2 - t2 * t3 * t3 / 6.0,
        ],
        ExactCase::Zero => [0.0; 3],
    }
}

/// Exact `u(x, y)` of the built-in cases.
pub fn exact_u(which: ExactCase, x: f64, y: f64) -> f64 {
    match which {
        ExactCase::Quadratic => 3.0 * x * x - y * y * y,
        ExactCase::Quartic => x * x * y - y * y * y * y / 6.0,
        ExactCase::Zero => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactCase {
    /// `u = 3 x^2 - y^3`.
    Quadratic,
    /// `u = x^2 y - y^4 / 6`.
    Quartic,
    Zero,
}

/// Boundary values needed along the characteristics.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Data {
    pub(crate) u0: f64,
    pub(crate) u0p: f64,
    pub(crate) u0pp: f64,
    pub(crate) u1: f64,
    pub(crate) u1p: f64,
}

impl TricomiProblem {
    pub fn validate(&self) -> Result<()> {
        if !(self.x1 < self.x2) || !self.x1.is_finite() || !self.x2.is_finite() {
            return Err(Error::InvalidInput(alloc::format!(
                "interval [{}, {}] is empty or not finite",
                self.x1,
                self.x2
            )));
        }
        let bound = closure_bound(self.x1, self.x2);
        if !(self.delta > 0.0 && self.delta < bound) {
            return Err(Error::InvalidInput(alloc::format!(
                "delta must lie in (0, {bound}) for [{}, {}], got {}",
                self.x1,
                self.x2,
                self.delta
            )));
        }
        Ok(())
    }

    /// The domain `x1 + (2/3) t^3 <= x <= x2 - (2/3) t^3`, `0 <= t <= delta`.
    pub fn grid(&self) -> Result<ShearedGrid> {
        self.validate()?;
        let side = |base| LateralCurve {
            base,
            quadratic: 0.0,
            cubic: 2.0 / 3.0,
        };
        ShearedGrid::new(self.delta, self.nt, self.nr, side(self.x1), side(self.x2))
    }

    pub(crate) fn data(&self, x: f64) -> Result<Data> {
        let a = self.u0.jet_at(x)?;
        let b = self.u1.jet_at(x)?;
        Ok(Data {
            u0: a.deriv(0),
            u0p: a.deriv(1),
            u0pp: a.deriv(2),
            u1: b.deriv(0),
            u1p: b.deriv(1),
        })
    }

    /// Sample maxima of the first `k + 1` derivative magnitudes.
    fn ck_norm(&self, f: &BoundaryFunction, k: usize) -> Result<f64> {
        let n = 401;
        let mut best: f64 = 0.0;
        for i in 0..n {
            let x = self.x1 + (self.x2 - self.x1) * i as f64 / (n - 1) as f64;
            let j = f.jet_at(x)?;
            let s: f64 = (0..=k).map(|d| j.deriv(d).abs()).sum();
            best = best.max(s);
        }
        Ok(best)
    }

    /// `1 + ||u1||_C3 + cbrt(3 (x2 - x1) / 4) ||u0||_C4`.
    pub fn k_estimate(&self) -> Result<f64> {
        Ok(1.0 + self.ck_norm(&self.u1, 3)? + closure_bound(self.x1, self.x2) * self.ck_norm(&self.u0, 4)?)
    }
}

/// Grid arrays of `(R, S, W)`.
pub type TricomiField = FieldTriple;

/// One application of the iteration map.
pub fn apply_t_tricomi(fields: &TricomiField, prob: &TricomiProblem) -> Result<TricomiField> {
    let splines = LevelSplines::new(fields)?;
    let g = fields.grid.clone();
    let dt = g.dt();
    let weighted = |j: usize, t: f64, x: f64| -> Result<[f64; 3]> {
        let s = g.s_of(t, x);
        if !(s >= -1e-10 && s <= 1.0 + 1e-10) {
            return Err(Error::DomainExit { family: None, t, r: x });
        }
        Ok(if t == g.t(j) {
            splines.weighted_at_level(j, s)
        } else {
            splines.weighted_between(j, t, s)
        })
    };
    // Right-hand sides at level or mid-level point (j, t) along each path.
    let rhs = |j: usize, t: f64, eta: f64, xi: f64| -> Result<[f64; 3]> {
        if t == 0.0 {
            return Ok([0.0; 3]);
        }
        let (xp, xm) = tricomi_characteristics(eta, xi, t);
        let wp = weighted(j, t, xp)?;
        let wm = weighted(j, t, xm)?;
        let (dp, dm) = (prob.data(xp)?, prob.data(xm)?);
        let t2 = t * t;
        // (r - s) / (2t) = t (w_r - w_s) / 2
        let fr = 0.5 * t * (wp[0] - wp[1]) - 2.0 * t2 * (dp.u1p + dp.u0pp * t);
        let fs = 0.5 * t * (wm[1] - wm[0]) + 2.0 * t2 * (dm.u1p - dm.u0pp * t);
        let fw = -2.0 * t * (t2 * wm[0] + dm.u1);
        Ok([fr, fs, fw])
    };
    let values = par::try_map(g.len(), |idx| {
        let (j, i) = (idx / g.nr, idx % g.nr);
        if j == 0 {
            return Ok([0.0; 3]);
        }
        let (xi, eta) = (g.t(j), g.r(j, i));
        let mut f = [vec![0.0; j + 1], vec![0.0; j + 1], vec![0.0; j + 1]];
        for k in 1..=j {
            let v = rhs(k, g.t(k), eta, xi)?;
            for c in 0..3 {
                f[c][k] = v[c];
            }
        }
        let mut out = [0.0; 3];
        if j == 1 {
            let mid = rhs(1, 0.5 * g.t(1), eta, xi)?;
            for c in 0..3 {
                out[c] = simpson_panel(0.0, mid[c], f[c][1], dt);
            }
        } else {
            for c in 0..3 {
                out[c] = simpson_open(&f[c], dt)?;
            }
        }
        Ok(out)
    })?;
    let mut next = FieldTriple::zeros(&g);
    for (idx, v) in values.into_iter().enumerate() {
        for c in 0..3 {
            next.f[c][idx] = v[c];
        }
    }
    Ok(next)
}

#[derive(Clone, Debug)]
pub struct TricomiSolution {
    pub fields: TricomiField,
    pub report: IterationReport,
    pub k_est: f64,
    /// `10 K_est`.
    pub m_est: f64,
    /// `d(T(F), F)` for the returned fields `F`.
    pub fixed_point_residual: f64,
}

/// Picard iteration from the zero seed until the weighted distance between
/// sweeps is at most `tol`.
pub fn solve_tricomi(prob: &TricomiProblem, tol: f64, max_iter: usize) -> Result<TricomiSolution> {
    if !(tol >= 0.0) || max_iter == 0 {
        return Err(Error::InvalidInput(alloc::format!(
            "need tol >= 0 and max_iter >= 1, got tol = {tol}, max_iter = {max_iter}"
        )));
    }
    let grid = prob.grid()?;
    let k_est = prob.k_estimate()?;
    let m_est = 10.0 * k_est;
    let mut current = FieldTriple::zeros(&grid);
    let mut report = IterationReport::new(tol, m_est);
    let mut last_step = f64::INFINITY;
    for _ in 0..max_iter {
        let next = apply_t_tricomi(&current, prob)?;
        let d = weighted_distance(&next, &current)?;
        let ratio = report.push(d, weighted_norm(&next)).ratio.unwrap_or(0.0);
        current = next;
        last_step = d;
        if !d.is_finite() || report.trailing_growth() >= 3 {
            return Err(Error::NoContraction {
                delta: prob.delta,
                sweeps: report.iterations(),
                last_ratio: ratio,
            });
        }
        if d <= tol {
            report.converged = true;
            break;
        }
    }
    let fixed_point_residual = if last_step == 0.0 {
        0.0
    } else {
        weighted_distance(&apply_t_tricomi(&current, prob)?, &current)?
    };
    Ok(TricomiSolution {
        fields: current,
        report,
        k_est,
        m_est,
        fixed_point_residual,
    })
}

/// `u` and the Riemann-type variables rebuilt from converged error fields.
#[derive(Clone, Debug, PartialEq)]
pub struct TricomiRecovery {
    pub grid: ShearedGrid,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    /// `y = -t^2`.
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    /// `u_y + sqrt(-y) u_x`.
    pub rbar: Vec<f64>,
    /// `u_y - sqrt(-y) u_x`.
    pub sbar: Vec<f64>,
}

pub fn recover_u(fields: &TricomiField, prob: &TricomiProblem) -> Result<TricomiRecovery> {
    let g = fields.grid.clone();
    let n = g.len();
    let mut out = TricomiRecovery {
        grid: g.clone(),
        x: vec![0.0; n],
        t: vec![0.0; n],
        y: vec![0.0; n],
        u: vec![0.0; n],
        rbar: vec![0.0; n],
        sbar: vec![0.0; n],
    };
    for j in 0..g.levels() {
        let t = g.t(j);
        for i in 0..g.nr {
            let k = g.index(j, i);
            let x = g.r(j, i);
            let d = prob.data(x)?;
            out.x[k] = x;
            out.t[k] = t;
            out.y[k] = -t * t;
            out.u[k] = fields.f[2][k] + d.u0;
            out.rbar[k] = fields.f[0][k] + d.u1 + d.u0p * t;
            out.sbar[k] = fields.f[1][k] + d.u1 - d.u0p * t;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristics_are_anchored() {
        let (p, m) = tricomi_characteristics(0.3, 0.4, 0.4);
        assert!((p - 0.3).abs() < 1e-15 && (m - 0.3).abs() < 1e-15);
        let (p, _) = tricomi_characteristics(0.5, 0.5, 0.0);
        assert!((p - (0.5 - 2.0 / 3.0 * 0.125)).abs() < 1e-15);
        let (p, m) = tricomi_characteristics(0.5, 0.3, 0.2);
        assert!((p - m - 4.0 / 3.0 * (0.008 - 0.027)).abs() < 1e-15);
    }

    #[test]
    fn delta_must_stay_below_closure() {
        let bound = closure_bound(0.0, 1.0);
        assert!(exact1(bound, 8, 9).grid().is_err());
        assert!(exact1(0.5 * bound, 8, 9).grid().is_ok());
        assert!(exact1(0.0, 8, 9).grid().is_err());
    }

    #[test]
    fn first_sweep_of_case_one() {
        let prob = exact1(0.4, 16, 17);
        let f0 = FieldTriple::zeros(&prob.grid().unwrap());
        let f1 = apply_t_tricomi(&f0, &prob).unwrap();
        let g = &f1.grid;
        for j in 0..g.levels() {
            let t = g.t(j);
            for i in 0..g.nr {
                assert!((f1.get(0, j, i) + 3.0 * t.powi(4)).abs() < 1e-14);
                assert!((f1.get(1, j, i) + 3.0 * t.powi(4)).abs() < 1e-14);
                assert_eq!(f1.get(2, j, i), 0.0);
            }
        }
    }

    #[test]
    fn zero_data_is_a_fixed_point() {
        let sol = solve_tricomi(&zero(0.4, 8, 9), 1e-12, 5).unwrap();
        assert!(sol.report.converged);
        assert_eq!(sol.report.iterations(), 1);
        assert!(sol.fields.f.iter().all(|c| c.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn k_estimate_of_case_one() {
        // ||u1||_C3 = 0, ||3x^2||_C4 = 3 + 6 + 6 on [0, 1]
        let k = exact1(0.4, 8, 9).k_estimate().unwrap();
        assert!((k - (1.0 + 0.75f64.cbrt() * 15.0)).abs() < 1e-12);
    }
}
