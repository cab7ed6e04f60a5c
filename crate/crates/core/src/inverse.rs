//! From the hodograph solution back to the physical plane.
//!
//! Positions come from integrating `x_t` and `y_t` along lines of constant
//! `r` starting on the sonic curve, entropy and Bernoulli values are carried
//! along third-family characteristics from `t = 0`, and the state follows
//! algebraically from `(t, r, S, B)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::HodographBoundary;
use crate::error::{Error, Family, Result};
use crate::gas::GasConstants;
use crate::grid::{FieldTriple, LevelSplines, ShearedGrid};
use crate::hodograph::Tracer;
use crate::math;
use crate::numerics::{simpson_open, simpson_panel};
use crate::par;

/// `(Ubar, Vbar, Hbar)` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarState {
    pub u: f64,
    pub v: f64,
    pub h: f64,
}

/// `2 Ubar Vbar + G Hbar (Vbar - Ubar)`, the factor shared by every
/// denominator of the inverse map.
pub fn jacobian_factor(s: &BarState, t: f64, gc: &GasConstants) -> f64 {
    2.0 * s.u * s.v + gc.g(t) * s.h * (s.v - s.u)
}

/// `j = dx dy / dt dr = t / (2 F [2 Ubar Vbar + G Hbar (Vbar - Ubar)])`.
pub fn jacobian_j(s: &BarState, t: f64, r: f64, gc: &GasConstants) -> Result<f64> {
    let d = jacobian_factor(s, t, gc);
    if !(d < 0.0) {
        return Err(Error::SingularDenominator {
            term: "2 Ubar Vbar + G Hbar (Vbar - Ubar)",
            t,
            r,
        });
    }
    Ok(t / (2.0 * gc.f(t) * d))
}

/// `(x_t, y_t)` at `(t, r)`.
pub fn xy_rates(s: &BarState, t: f64, r: f64, gc: &GasConstants) -> Result<(f64, f64)> {
    let d = jacobian_factor(s, t, gc);
    if !(d < 0.0) {
        return Err(Error::SingularDenominator {
            term: "2 Ubar Vbar + G Hbar (Vbar - Ubar)",
            t,
            r,
        });
    }
    let sq = math::sqrt(1.0 - t * t);
    let (sr, cr) = (math::sin(r), math::cos(r));
    let k = -t / (2.0 * gc.f(t) * d);
    let xt = k * ((t * cr + sq * sr) * s.u + (t * cr - sq * sr) * s.v);
    let yt = k * ((t * sr - sq * cr) * s.u + (t * sr + sq * cr) * s.v);
    Ok((xt, yt))
}

/// `(x_r, y_r)` at `(t, r)` for `t > 0`.
pub fn xy_r_derivatives(s: &BarState, t: f64, r: f64, gc: &GasConstants) -> Result<(f64, f64)> {
    let d = jacobian_factor(s, t, gc);
    if !(d < 0.0) || !(t > 0.0) {
        return Err(Error::SingularDenominator {
            term: "2 t sqrt(1 - t^2) [2 Ubar Vbar + G Hbar (Vbar - Ubar)]",
            t,
            r,
        });
    }
    let sq = math::sqrt(1.0 - t * t);
    let (sr, cr) = (math::sin(r), math::cos(r));
    let gh = gc.g(t) * s.h;
    let den = 2.0 * t * sq * d;
    let xr = ((t * cr + sq * sr) * s.u - (t * cr - sq * sr) * s.v + 2.0 * t * cr * gh) / den;
    let yr = ((t * sr - sq * cr) * s.u - (t * sr + sq * cr) * s.v + 2.0 * t * sr * gh) / den;
    Ok((xr, yr))
}

/// Evaluates `(Ubar, Vbar, Hbar)` anywhere in the domain from grid fields.
pub struct BarFields<'a> {
    splines: LevelSplines,
    hb: &'a HodographBoundary,
}

impl<'a> BarFields<'a> {
    pub fn new(fields: &FieldTriple, hb: &'a HodographBoundary) -> Result<Self> {
        Ok(BarFields {
            splines: LevelSplines::new(fields)?,
            hb,
        })
    }

    pub fn grid(&self) -> &ShearedGrid {
        self.splines.grid()
    }

    fn shift(&self, w: [f64; 3], t: f64, r: f64) -> Result<BarState> {
        let bp = self.hb.at(r)?;
        let t2 = t * t;
        Ok(BarState {
            u: t2 * w[0] - bp.a0 + bp.a1 * t,
            v: t2 * w[1] + bp.a0 + bp.a1 * t,
            h: t2 * w[2] + bp.h0,
        })
    }

    fn s_checked(&self, t: f64, r: f64) -> Result<f64> {
        let s = self.grid().s_of(t, r);
        if !(s >= -1e-10 && s <= 1.0 + 1e-10) {
            return Err(Error::DomainExit { family: None, t, r });
        }
        Ok(s)
    }

    /// On level `j` at `r`.
    pub fn at_level(&self, j: usize, r: f64) -> Result<BarState> {
        let t = self.grid().t(j);
        let s = self.s_checked(t, r)?;
        let w = if j == 0 {
            [0.0; 3]
        } else {
            self.splines.weighted_at_level(j, s)
        };
        self.shift(w, t, r)
    }

    /// At `t` between levels `j - 1` and `j`.
    pub fn between(&self, j: usize, t: f64, r: f64) -> Result<BarState> {
        let s = self.s_checked(t, r)?;
        self.shift(self.splines.weighted_between(j, t, s), t, r)
    }
}

/// Physical coordinates of every node, integrating `x_t`, `y_t` at fixed `r`
/// from the sonic curve with Simpson's rule over the levels below.
pub fn integrate_xy(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let bar = BarFields::new(fields, hb)?;
    let g = &fields.grid;
    let dt = g.dt();
    let xy = par::try_map(g.len(), |idx| {
        let (j, i) = (idx / g.nr, idx % g.nr);
        let r = g.r(j, i);
        let (x0, y0) = (hb.x_bar(r)?, hb.y_bar(r)?);
        if j == 0 {
            return Ok((x0, y0));
        }
        let mut xt = vec![0.0; j + 1];
        let mut yt = vec![0.0; j + 1];
        for k in 1..=j {
            let t = g.t(k);
            (xt[k], yt[k]) = xy_rates(&bar.at_level(k, r)?, t, r, gc)?;
        }
        let (dx, dy) = if j == 1 {
            let tm = 0.5 * g.t(1);
            let (xm, ym) = xy_rates(&bar.between(1, tm, r)?, tm, r, gc)?;
            (simpson_panel(0.0, xm, xt[1], dt), simpson_panel(0.0, ym, yt[1], dt))
        } else {
            (simpson_open(&xt, dt)?, simpson_open(&yt, dt)?)
        };
        Ok((x0 + dx, y0 + dy))
    })?;
    Ok(xy.into_iter().unzip())
}

/// Entropy and Bernoulli values carried along third-family characteristics
/// from their boundary values on `t = 0`.
pub fn transport_sb(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let tracer = Tracer::new(fields, hb, gc)?;
    let g = &fields.grid;
    let sb = par::try_map(g.len(), |idx| {
        let (j, i) = (idx / g.nr, idx % g.nr);
        let r0 = if j == 0 {
            g.r(0, i)
        } else {
            tracer.trace(Family::Third, j, g.r(j, i), false)?.r[0]
        };
        Ok((hb.s0(r0)?, hb.b0(r0)?))
    })?;
    Ok(sb.into_iter().unzip())
}

/// Velocity, density and pressure from the Mach angle, flow angle, entropy
/// and Bernoulli value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalState {
    pub c: f64,
    pub u: f64,
    pub v: f64,
    pub rho: f64,
    pub p: f64,
}

pub fn physical_state(t: f64, theta: f64, s: f64, b: f64, gc: &GasConstants) -> Result<PhysicalState> {
    let k = gc.kappa;
    let sin2 = 1.0 - t * t;
    let sin_w = math::sqrt(sin2);
    let c2 = 2.0 * k * sin2 * b / (k + sin2);
    let c = math::sqrt(c2);
    let base = 2.0 * k * b * sin2 / (gc.gamma * (k + sin2) * s);
    let rho = math::powf(base, 1.0 / (gc.gamma - 1.0));
    let p = s * math::powf(rho, gc.gamma);
    for (quantity, value) in [("c", c), ("rho", rho), ("p", p)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveState { t, r: theta, quantity });
        }
    }
    Ok(PhysicalState {
        c,
        u: c * math::cos(theta) / sin_w,
        v: c * math::sin(theta) / sin_w,
        rho,
        p,
    })
}

/// The physical solution, parametrized by the hodograph grid. Every column
/// is stored row-major by level like [`FieldTriple`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalSolution {
    pub grid: ShearedGrid,
    pub gc: GasConstants,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub theta: Vec<f64>,
    pub omega: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// `Hbar`.
    pub h: Vec<f64>,
    pub s: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
    /// Specific total energy `(u^2 + v^2)/2 + p/((gamma - 1) rho)`.
    pub e: Vec<f64>,
    /// Error variables `(U, V, W)`.
    pub err: [Vec<f64>; 3],
    pub ubar: Vec<f64>,
    pub vbar: Vec<f64>,
    /// `2 Ubar Vbar + G Hbar (Vbar - Ubar)`.
    pub jac_factor: Vec<f64>,
    /// `j = dx dy / dt dr`; zero on `t = 0`.
    pub jac: Vec<f64>,
}

impl PhysicalSolution {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

pub fn recover_physical(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<PhysicalSolution> {
    let (x, y) = integrate_xy(fields, hb, gc)?;
    let (s, b) = transport_sb(fields, hb, gc)?;
    assemble_physical(fields, hb, gc, [x, y, s, b])
}

/// Node-wise physical state from error fields and already integrated
/// `[x, y, S, B]` columns.
pub fn assemble_physical(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
    columns: [Vec<f64>; 4],
) -> Result<PhysicalSolution> {
    let g = fields.grid.clone();
    let n = g.len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::GridMismatch);
    }
    let [x, y, s, b] = columns;
    let mut out = PhysicalSolution {
        grid: g.clone(),
        gc: *gc,
        t: vec![0.0; n],
        r: vec![0.0; n],
        x,
        y,
        theta: vec![0.0; n],
        omega: vec![0.0; n],
        alpha: vec![0.0; n],
        beta: vec![0.0; n],
        h: vec![0.0; n],
        s,
        b,
        c: vec![0.0; n],
        u: vec![0.0; n],
        v: vec![0.0; n],
        rho: vec![0.0; n],
        p: vec![0.0; n],
        e: vec![0.0; n],
        err: fields.f.clone(),
        ubar: vec![0.0; n],
        vbar: vec![0.0; n],
        jac_factor: vec![0.0; n],
        jac: vec![0.0; n],
    };
    for j in 0..g.levels() {
        let t = g.t(j);
        let omega = math::acos(t);
        for i in 0..g.nr {
            let k = g.index(j, i);
            let r = g.r(j, i);
            let bp = hb.at(r)?;
            let bs = BarState {
                u: fields.f[0][k] - bp.a0 + bp.a1 * t,
                v: fields.f[1][k] + bp.a0 + bp.a1 * t,
                h: fields.f[2][k] + bp.h0,
            };
            let st = physical_state(t, r, out.s[k], out.b[k], gc)?;
            out.t[k] = t;
            out.r[k] = r;
            out.theta[k] = r;
            out.omega[k] = omega;
            out.alpha[k] = r + omega;
            out.beta[k] = r - omega;
            out.h[k] = bs.h;
            out.ubar[k] = bs.u;
            out.vbar[k] = bs.v;
            out.c[k] = st.c;
            out.u[k] = st.u;
            out.v[k] = st.v;
            out.rho[k] = st.rho;
            out.p[k] = st.p;
            out.e[k] = 0.5 * (st.u * st.u + st.v * st.v) + st.p / ((gc.gamma - 1.0) * st.rho);
            out.jac_factor[k] = jacobian_factor(&bs, t, gc);
            out.jac[k] = if j == 0 { 0.0 } else { jacobian_j(&bs, t, r, gc)? };
        }
    }
    Ok(out)
}

/// Inverse-distance-weighted resampling of one column onto points `(x, y)`,
/// using the `k` nearest mapped nodes with `t > 0` or on the sonic curve.
pub fn resample_idw(sol: &PhysicalSolution, column: &[f64], points: &[(f64, f64)], k: usize) -> Vec<f64> {
    let k = k.max(1).min(sol.len());
    points
        .iter()
        .map(|&(px, py)| {
            let mut near: Vec<(f64, usize)> = (0..sol.len())
                .map(|n| {
                    let (dx, dy) = (sol.x[n] - px, sol.y[n] - py);
                    (dx * dx + dy * dy, n)
                })
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            if near[0].0 == 0.0 {
                return column[near[0].1];
            }
            let (mut num, mut den) = (0.0, 0.0);
            for &(d2, n) in &near[..k] {
                let w = 1.0 / d2;
                num += w * column[n];
                den += w;
            }
            num / den
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn air() -> GasConstants {
        GasConstants::new(1.4).unwrap()
    }

    #[test]
    fn jacobian_near_the_sonic_line() {
        let gc = air();
        let s = BarState { u: 0.5, v: -0.5, h: 0.0 };
        assert!((jacobian_factor(&s, 0.0, &gc) + 0.5).abs() < 1e-15);
        let t = 1e-3;
        let j = jacobian_j(&s, t, 0.0, &gc).unwrap();
        assert!((j + t / 1.2).abs() < 1e-8);
        let bad = BarState { u: 0.5, v: 0.5, h: 0.0 };
        assert!(matches!(jacobian_j(&bad, t, 0.0, &gc), Err(Error::SingularDenominator { .. })));
    }

    #[test]
    fn r_derivatives_give_the_stated_jacobian() {
        let gc = air();
        let s = BarState { u: 0.61, v: -0.47, h: 0.08 };
        let (t, r) = (0.3, -0.2);
        let (xt, yt) = xy_rates(&s, t, r, &gc).unwrap();
        let (xr, yr) = xy_r_derivatives(&s, t, r, &gc).unwrap();
        let j = jacobian_j(&s, t, r, &gc).unwrap();
        assert!((xt * yr - xr * yt - j).abs() < 1e-12 * j.abs().max(1.0));
    }

    #[test]
    fn sonic_state_matches_boundary_speed() {
        let gc = air();
        let st = physical_state(0.0, 0.0, 1.4f64.powf(-1.4), 3.0, &gc).unwrap();
        assert!((st.c - 1.0).abs() < 1e-14);
        assert!((st.u - 1.0).abs() < 1e-14);
        assert!((st.rho - 1.4).abs() < 1e-13);
        assert!((st.p - 1.0).abs() < 1e-13);
    }

    #[test]
    fn supersonic_away_from_the_sonic_line() {
        let gc = air();
        let st = physical_state(0.5, 0.1, 0.6, 3.0, &gc).unwrap();
        assert!((st.c * st.c - 0.9 / 0.95).abs() < 1e-14);
        let q2 = st.u * st.u + st.v * st.v;
        assert!(q2 > st.c * st.c);
        assert!((q2 - st.c * st.c - st.c * st.c * 0.25 / 0.75).abs() < 1e-13);
        assert!((0.5 * q2 + st.c * st.c / 0.4 - 3.0).abs() < 1e-13);
        assert!((st.p * st.rho.powf(-1.4) - 0.6).abs() < 1e-13);
    }

    #[test]
    fn non_positive_bernoulli_is_rejected() {
        let err = physical_state(0.2, 0.0, 0.6, -1.0, &air()).unwrap_err();
        assert!(matches!(err, Error::NonPositiveState { .. }));
    }
}
