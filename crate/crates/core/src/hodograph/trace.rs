//! Backward characteristic tracing on frozen iterate fields.

use alloc::vec;
use alloc::vec::Vec;

use super::system::{self, State, TimeFactors};
use crate::boundary::{BoundaryPoint, HodographBoundary};
use crate::error::{Error, Family, Result};
use crate::gas::GasConstants;
use crate::grid::{FieldTriple, LevelSplines, ShearedGrid};
use crate::numerics::rk4_step;

/// Slack in normalized position before a path counts as having left the domain.
pub const EXIT_SLACK: f64 = 1e-10;

/// Everything known at one point of a path.
#[derive(Clone, Copy, Debug)]
pub struct Probe {
    pub r: f64,
    pub st: State,
    pub tf: TimeFactors,
    pub bp: BoundaryPoint,
}

/// A traced path from level `j` down to `t = 0`.
#[derive(Clone, Debug)]
pub struct Path {
    pub family: Family,
    /// `r` on levels `0..=j`.
    pub r: Vec<f64>,
    /// Transport right-hand side on levels `0..=j` (zero at `t = 0`).
    pub integrand: Vec<f64>,
    /// For `j = 1`: the right-hand side at the interval midpoint.
    pub mid_integrand: Option<f64>,
}

pub struct Tracer<'a> {
    splines: LevelSplines,
    hb: &'a HodographBoundary,
    gc: &'a GasConstants,
    level_tf: Vec<TimeFactors>,
    mid_tf: Vec<TimeFactors>,
}

impl<'a> Tracer<'a> {
    pub fn new(fields: &FieldTriple, hb: &'a HodographBoundary, gc: &'a GasConstants) -> Result<Self> {
        let splines = LevelSplines::new(fields)?;
        let g = &fields.grid;
        let level_tf = (0..g.levels()).map(|j| TimeFactors::new(g.t(j), gc)).collect();
        let mut mid_tf = vec![TimeFactors::new(0.0, gc)];
        for j in 1..g.levels() {
            mid_tf.push(TimeFactors::new(0.5 * (g.t(j - 1) + g.t(j)), gc));
        }
        Ok(Tracer {
            splines,
            hb,
            gc,
            level_tf,
            mid_tf,
        })
    }

    pub fn grid(&self) -> &ShearedGrid {
        self.splines.grid()
    }

    fn locate(&self, family: Option<Family>, t: f64, r: f64) -> Result<f64> {
        let s = self.grid().s_of(t, r);
        if !(s >= -EXIT_SLACK && s <= 1.0 + EXIT_SLACK) {
            return Err(Error::DomainExit { family, t, r });
        }
        Ok(s.clamp(0.0, 1.0))
    }

    /// Fields and boundary data at `r` on level `j`.
    pub fn probe_level(&self, family: Option<Family>, j: usize, r: f64) -> Result<Probe> {
        let tf = self.level_tf[j];
        let s = self.locate(family, tf.t, r)?;
        let w = self.splines.weighted_at_level(j, s);
        let st = if j == 0 {
            State::default()
        } else {
            State::from_weighted(w[0], w[1], w[2], tf.t)
        };
        Ok(Probe {
            r,
            st,
            tf,
            bp: self.hb.at(r)?,
        })
    }

    /// Fields at `r` halfway between levels `j - 1` and `j`.
    pub fn probe_mid(&self, family: Option<Family>, j: usize, r: f64) -> Result<Probe> {
        let tf = self.mid_tf[j];
        let s = self.locate(family, tf.t, r)?;
        let w = self.splines.weighted_between(j, tf.t, s);
        Ok(Probe {
            r,
            st: State::from_weighted(w[0], w[1], w[2], tf.t),
            tf,
            bp: self.hb.at(r)?,
        })
    }

    pub fn lambda(&self, family: Family, p: &Probe) -> Result<f64> {
        system::lambda(family, &p.st, &p.tf, p.r, &p.bp)
    }

    pub fn integrand(&self, family: Family, p: &Probe) -> Result<f64> {
        system::integrand(family, &p.st, &p.tf, p.r, &p.bp, self.gc)
    }

    /// Trace family `family` from `(t_j, eta)` back to `t = 0` with one RK4
    /// step per level. With `with_integrand` the transport right-hand side is
    /// recorded on every level.
    pub fn trace(&self, family: Family, j: usize, eta: f64, with_integrand: bool) -> Result<Path> {
        let g = self.grid();
        let dt = g.dt();
        let mut r_path = vec![0.0; j + 1];
        let mut integrand = vec![0.0; j + 1];
        let mut r = eta;
        self.locate(Some(family), g.t(j), r)?;
        let mut lambda_top = 0.0;
        for k in (1..=j).rev() {
            r_path[k] = r;
            let (tk, tk1) = (g.t(k), g.t(k - 1));
            let mut first: Option<Probe> = None;
            let mut first_lambda = 0.0;
            r = rk4_step(
                |t, rr| {
                    let p = if (t - tk).abs() < 0.25 * dt {
                        self.probe_level(Some(family), k, rr)?
                    } else if (t - tk1).abs() < 0.25 * dt {
                        self.probe_level(Some(family), k - 1, rr)?
                    } else {
                        self.probe_mid(Some(family), k, rr)?
                    };
                    let l = self.lambda(family, &p)?;
                    if first.is_none() {
                        first = Some(p);
                        first_lambda = l;
                    }
                    Ok(l)
                },
                tk,
                r,
                -dt,
            )?;
            self.locate(Some(family), tk1, r)?;
            if with_integrand {
                integrand[k] = self.integrand(family, first.as_ref().unwrap())?;
            }
            if k == 1 {
                lambda_top = first_lambda;
            }
        }
        r_path[0] = r;
        let mid_integrand = if with_integrand && j == 1 {
            // Cubic Hermite midpoint of the path; the speed vanishes at t = 0.
            let r_mid = 0.5 * (r_path[0] + r_path[1]) - dt * lambda_top / 8.0;
            let p = self.probe_mid(Some(family), 1, r_mid)?;
            Some(self.integrand(family, &p)?)
        } else {
            None
        };
        Ok(Path {
            family,
            r: r_path,
            integrand,
            mid_integrand,
        })
    }
}

/// Trace one characteristic family from node `(j, i)` of the fields' grid
/// back to `t = 0`; returns `r` on levels `0..=j`.
pub fn trace_characteristic(
    family: Family,
    j: usize,
    i: usize,
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<Vec<f64>> {
    let tracer = Tracer::new(fields, hb, gc)?;
    let eta = fields.grid.r(j, i);
    Ok(tracer.trace(family, j, eta, false)?.r)
}
