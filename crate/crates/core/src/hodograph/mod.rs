//! Picard iteration for the error variables `(U, V, W)` on the shrinking
//! domain `0 <= t <= delta`.
//!
//! One sweep of the iteration map evaluates, at every node `(xi, eta)`,
//!
//! ```text
//! U = int_0^xi (g + b1) dt   along the first-family path through (xi, eta)
//! V = int_0^xi (g + b2) dt   along the second-family path
//! W = int_0^xi  b3      dt   along the third-family path
//! ```
//!
//! with coefficients frozen at the previous iterate. Sweeps continue from the
//! zero seed until the weighted distance between iterates drops below the
//! tolerance.

pub mod system;
pub mod trace;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::HodographBoundary;
use crate::error::{Error, Family, Result};
use crate::gas::GasConstants;
use crate::grid::{FieldTriple, LateralCurve, ShearedGrid};
use crate::iteration::{weighted_distance, weighted_norm, IterationReport};
use crate::numerics::{simpson_open, simpson_panel};
use crate::par;

pub use system::{denominators, lambda, lambdas, psi_phi, source, sources, State, TimeFactors};
pub use trace::{trace_characteristic, Path, Tracer};

/// Integrate a traced path's right-hand side from `t = 0` to its top level.
pub(crate) fn integrate_path(path: &Path, dt: f64) -> Result<f64> {
    let j = path.integrand.len() - 1;
    match j {
        0 => Ok(0.0),
        1 => Ok(simpson_panel(
            path.integrand[0],
            path.mid_integrand.unwrap_or(0.5 * path.integrand[1]),
            path.integrand[1],
            dt,
        )),
        _ => simpson_open(&path.integrand, dt),
    }
}

/// One application of the iteration map.
pub fn apply_t(fields: &FieldTriple, hb: &HodographBoundary, gc: &GasConstants) -> Result<FieldTriple> {
    let tracer = Tracer::new(fields, hb, gc)?;
    let g = fields.grid.clone();
    let dt = g.dt();
    let skip_third = hb.h0_is_flat();
    let values = par::try_map(g.len(), |idx| {
        let (j, i) = (idx / g.nr, idx % g.nr);
        let mut out = [0.0; 3];
        if j == 0 {
            return Ok(out);
        }
        let eta = g.r(j, i);
        for fam in Family::ALL {
            if fam == Family::Third && skip_third {
                continue;
            }
            let path = tracer.trace(fam, j, eta, true)?;
            out[fam.index()] = integrate_path(&path, dt)?;
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

/// Iterate from the zero seed until the weighted distance between sweeps is
/// at most `tol`, or `max_iter` sweeps have run.
///
/// Three consecutive sweeps with ratio at least one, or a non-finite
/// distance, end the run with `NoContraction`.
pub fn solve_fixed_point(
    hb: &HodographBoundary,
    gc: &GasConstants,
    grid: &ShearedGrid,
    tol: f64,
    max_iter: usize,
    norm_bound: f64,
) -> Result<(FieldTriple, IterationReport)> {
    let mut current = FieldTriple::zeros(grid);
    let mut report = IterationReport::new(tol, norm_bound);
    for _ in 0..max_iter {
        let next = apply_t(&current, hb, gc)?;
        let d = weighted_distance(&next, &current)?;
        let norm = weighted_norm(&next);
        let ratio = report.push(d, norm).ratio.unwrap_or(0.0);
        current = next;
        if !d.is_finite() || !norm.is_finite() {
            return Err(Error::NoContraction {
                delta: grid.delta,
                sweeps: report.iterations(),
                last_ratio: ratio,
            });
        }
        if d <= tol {
            report.converged = true;
            break;
        }
        if report.trailing_growth() >= 3 {
            return Err(Error::NoContraction {
                delta: grid.delta,
                sweeps: report.iterations(),
                last_ratio: ratio,
            });
        }
    }
    Ok((current, report))
}

/// Inverse of the error-variable shift: `(Ubar, Vbar, Hbar)` at every node.
pub fn reconstruct_bar_fields(fields: &FieldTriple, hb: &HodographBoundary) -> Result<[Vec<f64>; 3]> {
    let g = &fields.grid;
    let n = g.len();
    let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for j in 0..g.levels() {
        let t = g.t(j);
        for i in 0..g.nr {
            let k = g.index(j, i);
            let bp = hb.at(g.r(j, i))?;
            out[0][k] = fields.f[0][k] - bp.a0 + bp.a1 * t;
            out[1][k] = fields.f[1][k] + bp.a0 + bp.a1 * t;
            out[2][k] = fields.f[2][k] + bp.h0;
        }
    }
    Ok(out)
}

/// Outcome of tracing every family from the nodes next to the lateral
/// boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminacyReport {
    pub traced: usize,
    pub first_exit: Option<Error>,
}

impl DeterminacyReport {
    pub fn passed(&self) -> bool {
        self.first_exit.is_none()
    }
}

pub fn check_strong_determinacy(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<DeterminacyReport> {
    let tracer = Tracer::new(fields, hb, gc)?;
    let g = &fields.grid;
    let mut cols = vec![0, 1, g.nr - 2, g.nr - 1];
    cols.dedup();
    let mut traced = 0;
    for j in 1..g.levels() {
        for &i in &cols {
            for fam in Family::ALL {
                traced += 1;
                match tracer.trace(fam, j, g.r(j, i), false) {
                    Ok(_) => {}
                    Err(e @ Error::DomainExit { .. }) => {
                        return Ok(DeterminacyReport {
                            traced,
                            first_exit: Some(e),
                        })
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(DeterminacyReport {
        traced,
        first_exit: None,
    })
}

/// Lateral curves whose inward speed dominates the zero-seed characteristic
/// drift by `safety`.
///
/// The third speed is `O(t)` near the data line, so its drift is matched by a
/// quadratic shrink; the first two are `O(t^2)` and matched by a cubic one.
/// A path drifting down (positive speed, traced backward) threatens the lower
/// curve, a path drifting up the upper one.
pub fn default_lateral_curves(
    hb: &HodographBoundary,
    gc: &GasConstants,
    delta: f64,
    safety: f64,
) -> Result<(LateralCurve, LateralCurve)> {
    let (nt, nr) = (32, 65);
    let st = State::default();
    let mut quad = [0.0f64; 2];
    let mut cubic = [0.0f64; 2];
    for k in 1..=nt {
        let t = delta * k as f64 / nt as f64;
        let tf = TimeFactors::new(t, gc);
        for i in 0..nr {
            let r = hb.r1 + (hb.r2 - hb.r1) * i as f64 / (nr - 1) as f64;
            let bp = hb.at(r)?;
            let l = lambdas(&st, &tf, r, &bp)?;
            quad[0] = quad[0].max(l[2].max(0.0) / t);
            quad[1] = quad[1].max((-l[2]).max(0.0) / t);
            for li in [l[0], l[1]] {
                cubic[0] = cubic[0].max(li.max(0.0) / (t * t));
                cubic[1] = cubic[1].max((-li).max(0.0) / (t * t));
            }
        }
    }
    Ok((
        LateralCurve {
            base: hb.r1,
            quadratic: safety * quad[0] / 2.0,
            cubic: safety * cubic[0] / 3.0,
        },
        LateralCurve {
            base: hb.r2,
            quadratic: safety * quad[1] / 2.0,
            cubic: safety * cubic[1] / 3.0,
        },
    ))
}

pub fn default_grid(
    hb: &HodographBoundary,
    gc: &GasConstants,
    delta: f64,
    nt: usize,
    nr: usize,
    safety: f64,
) -> Result<ShearedGrid> {
    let (lower, upper) = default_lateral_curves(hb, gc, delta, safety)?;
    ShearedGrid::new(delta, nt, nr, lower, upper)
}

/// `1 + ||a0||_C3 + ||a1||_C3 + ||H0||_C3 + sup F + sup G`.
pub fn k_estimate(hb: &HodographBoundary, gc: &GasConstants) -> f64 {
    let [a0, a1, h0] = hb.c3_norms();
    // F and G are decreasing on [0, 1), so their suprema sit at t = 0.
    1.0 + a0 + a1 + h0 + gc.f(0.0) + gc.g(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    /// Initial `delta`.
    pub delta: f64,
    /// Number of `t`-steps.
    pub nt: usize,
    /// Nodes per level.
    pub nr: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// How many times `delta` may be halved after a failed attempt.
    pub max_halvings: usize,
    /// Factor by which the lateral shrink dominates the estimated drift.
    pub shrink_safety: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            delta: 0.1,
            nt: 64,
            nr: 65,
            tol: 1e-10,
            max_iter: 50,
            max_halvings: 6,
            shrink_safety: 3.0,
        }
    }
}

/// One attempted `delta` and why it was abandoned, if it was.
#[derive(Clone, Debug, PartialEq)]
pub struct Attempt {
    pub delta: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub fields: FieldTriple,
    pub report: IterationReport,
    pub delta: f64,
    pub attempts: Vec<Attempt>,
    pub k_est: f64,
    /// `64 K_est`, the weighted-norm bound iterates are checked against.
    pub m_est: f64,
    /// `1 / M_est`, the conservative extent the contraction argument allows.
    pub proof_delta: f64,
}

/// Solve with adaptive `delta`: start from `settings.delta` and halve after
/// a contraction failure, a lateral exit or a singular coefficient.
pub fn solve(hb: &HodographBoundary, gc: &GasConstants, settings: &SolverSettings) -> Result<Solution> {
    if !(settings.tol >= 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be non-negative, got {}", settings.tol)));
    }
    if settings.max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be at least 1".into()));
    }
    let k_est = k_estimate(hb, gc);
    let m_est = 64.0 * k_est;
    let mut attempts = Vec::new();
    let mut delta = settings.delta;
    let mut last_err = None;
    for _ in 0..=settings.max_halvings {
        let outcome = default_grid(hb, gc, delta, settings.nt, settings.nr, settings.shrink_safety)
            .and_then(|grid| solve_fixed_point(hb, gc, &grid, settings.tol, settings.max_iter, m_est));
        match outcome {
            Ok((fields, report)) => {
                attempts.push(Attempt { delta, failure: None });
                return Ok(Solution {
                    fields,
                    report,
                    delta,
                    attempts,
                    k_est,
                    m_est,
                    proof_delta: 1.0 / m_est,
                });
            }
            Err(e @ (Error::NoContraction { .. } | Error::DomainExit { .. } | Error::SingularDenominator { .. })) => {
                attempts.push(Attempt {
                    delta,
                    failure: Some(format!("{e}")),
                });
                last_err = Some(e);
                delta *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::NoContraction {
        delta,
        sweeps: 0,
        last_ratio: f64::NAN,
    }))
}
