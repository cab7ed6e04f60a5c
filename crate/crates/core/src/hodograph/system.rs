//! Coefficients of the error-variable system: denominators, characteristic
//! speeds and source terms.
//!
//! The singular factor `(U + V) / (2t)` is carried as the state member `g`,
//! computed from the weighted fields so that it is finite (and zero) at
//! `t = 0`. The third speed and source are written with the denominator
//! `2 F (g + a1) = F (U + V + 2 a1 t) / t`, which does not vanish on the
//! data line.

use crate::boundary::BoundaryPoint;
use crate::error::{Error, Family, Result};
use crate::gas::GasConstants;
use crate::math;

/// Denominators smaller than this in magnitude are treated as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// Error variables at one point, plus `g = (U + V) / (2t)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct State {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub g: f64,
}

impl State {
    pub fn new(u: f64, v: f64, w: f64, t: f64) -> Self {
        let g = if t > 0.0 { (u + v) / (2.0 * t) } else { 0.0 };
        State { u, v, w, g }
    }

    /// From weighted values `f / t^2`.
    pub fn from_weighted(wu: f64, wv: f64, ww: f64, t: f64) -> Self {
        let t2 = t * t;
        State {
            u: wu * t2,
            v: wv * t2,
            w: ww * t2,
            g: 0.5 * t * (wu + wv),
        }
    }
}

/// `t`-dependent factors shared by every coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeFactors {
    pub t: f64,
    /// `F(t)`
    pub f: f64,
    /// `G(t)`
    pub g: f64,
    /// `sqrt(1 - t^2)`
    pub sq: f64,
}

impl TimeFactors {
    pub fn new(t: f64, gc: &GasConstants) -> Self {
        TimeFactors {
            t,
            f: gc.f(t),
            g: gc.g(t),
            sq: math::sqrt(1.0 - t * t),
        }
    }
}

/// `psi = a0 + a1 t - G H0` and `phi = -a0 + a1 t + G H0`.
pub fn psi_phi(t: f64, bp: &BoundaryPoint, gc: &GasConstants) -> (f64, f64) {
    let gh = gc.g(t) * bp.h0;
    (bp.a0 + bp.a1 * t - gh, -bp.a0 + bp.a1 * t + gh)
}

fn guard(den: f64, term: &'static str, t: f64, r: f64) -> Result<f64> {
    if !(den.abs() >= SINGULAR_THRESHOLD) {
        return Err(Error::SingularDenominator { term, t, r });
    }
    Ok(den)
}

/// The three denominators `F[V - G W + psi]`, `F[U + G W + phi]` and
/// `2 F (g + a1)`.
pub fn denominators(st: &State, tf: &TimeFactors, r: f64, bp: &BoundaryPoint) -> Result<[f64; 3]> {
    let t = tf.t;
    let gh = tf.g * bp.h0;
    let psi = bp.a0 + bp.a1 * t - gh;
    let phi = -bp.a0 + bp.a1 * t + gh;
    let d1 = guard(tf.f * (st.v - tf.g * st.w + psi), "F*(V - G*W + psi)", t, r)?;
    let d2 = guard(tf.f * (st.u + tf.g * st.w + phi), "F*(U + G*W + phi)", t, r)?;
    let d3 = guard(2.0 * tf.f * (st.g + bp.a1), "F*(U + V + 2*a1*t)/t", t, r)?;
    Ok([d1, d2, d3])
}

/// Characteristic speed of one family.
pub fn lambda(
    family: Family,
    st: &State,
    tf: &TimeFactors,
    r: f64,
    bp: &BoundaryPoint,
) -> Result<f64> {
    let t = tf.t;
    let t2 = t * t;
    let gh = tf.g * bp.h0;
    match family {
        Family::First => {
            let den = guard(tf.f * (st.v - tf.g * st.w + bp.a0 + bp.a1 * t - gh), "F*(V - G*W + psi)", t, r)?;
            Ok(-tf.sq * (st.v + bp.a0 + bp.a1 * t) * t2 / den)
        }
        Family::Second => {
            let den = guard(tf.f * (st.u + tf.g * st.w - bp.a0 + bp.a1 * t + gh), "F*(U + G*W + phi)", t, r)?;
            Ok(tf.sq * (st.u - bp.a0 + bp.a1 * t) * t2 / den)
        }
        Family::Third => {
            let den = guard(2.0 * tf.f * (st.g + bp.a1), "F*(U + V + 2*a1*t)/t", t, r)?;
            Ok(tf.sq * (st.u - st.v - 2.0 * bp.a0) * t / den)
        }
    }
}

/// All three characteristic speeds.
pub fn lambdas(st: &State, tf: &TimeFactors, r: f64, bp: &BoundaryPoint) -> Result<[f64; 3]> {
    Ok([
        lambda(Family::First, st, tf, r, bp)?,
        lambda(Family::Second, st, tf, r, bp)?,
        lambda(Family::Third, st, tf, r, bp)?,
    ])
}

/// Source term `b_i` of one family.
pub fn source(
    family: Family,
    st: &State,
    tf: &TimeFactors,
    r: f64,
    bp: &BoundaryPoint,
    gc: &GasConstants,
) -> Result<f64> {
    let t = tf.t;
    let t2 = t * t;
    let k = gc.kappa;
    let gh = tf.g * bp.h0;
    let gw = tf.g * (st.w + bp.h0);
    let vp = st.v + bp.a0 + bp.a1 * t;
    let um = st.u - bp.a0 + bp.a1 * t;
    let ga = st.g + bp.a1;
    match family {
        Family::First => {
            let den = guard(tf.f * (st.v - tf.g * st.w + bp.a0 + bp.a1 * t - gh), "F*(V - G*W + psi)", t, r)?;
            let brace = (k + 1.0) * 2.0 * t * ga - t2 * ((k + 2.0 - t2) * vp - (k + 1.0 - t2) * gw);
            let slope = t2 * tf.sq * (-bp.a0p + bp.a1p * t) * vp;
            let last = ((k + 2.0 - 2.0 * t2) * um + (k + 1.0 - t2) * gw) * vp * t;
            Ok((-ga * brace + slope + last) / den)
        }
        Family::Second => {
            let den = guard(tf.f * (st.u + tf.g * st.w - bp.a0 + bp.a1 * t + gh), "F*(U + G*W + phi)", t, r)?;
            let brace = (k + 1.0) * 2.0 * t * ga - t2 * ((k + 2.0 - t2) * um + (k + 1.0 - t2) * gw);
            let slope = -t2 * tf.sq * (bp.a0p + bp.a1p * t) * um;
            let last = ((k + 2.0 - 2.0 * t2) * vp - (k + 1.0 - t2) * gw) * um * t;
            Ok((-ga * brace + slope + last) / den)
        }
        Family::Third => {
            if bp.h0p == 0.0 {
                return Ok(0.0);
            }
            let den = guard(2.0 * tf.f * ga, "F*(U + V + 2*a1*t)/t", t, r)?;
            Ok(-t * tf.sq * (st.u - st.v - 2.0 * bp.a0) * bp.h0p / den)
        }
    }
}

/// All three source terms.
pub fn sources(
    st: &State,
    tf: &TimeFactors,
    r: f64,
    bp: &BoundaryPoint,
    gc: &GasConstants,
) -> Result<[f64; 3]> {
    Ok([
        source(Family::First, st, tf, r, bp, gc)?,
        source(Family::Second, st, tf, r, bp, gc)?,
        source(Family::Third, st, tf, r, bp, gc)?,
    ])
}

/// Right-hand side of one transport equation: `g + b_1`, `g + b_2` or `b_3`.
pub fn integrand(
    family: Family,
    st: &State,
    tf: &TimeFactors,
    r: f64,
    bp: &BoundaryPoint,
    gc: &GasConstants,
) -> Result<f64> {
    let b = source(family, st, tf, r, bp, gc)?;
    Ok(match family {
        Family::Third => b,
        _ => st.g + b,
    })
}
