//! The weighted metric and the bookkeeping of a fixed-point run.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::FieldTriple;

/// `d(A, B) = sum_c max_{t > 0} |A_c - B_c| / t^2`.
pub fn weighted_distance(a: &FieldTriple, b: &FieldTriple) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let g = &a.grid;
    let mut total = 0.0;
    for c in 0..3 {
        let mut sup: f64 = 0.0;
        for j in 1..g.levels() {
            let inv = 1.0 / (g.t(j) * g.t(j));
            let row = j * g.nr;
            for i in 0..g.nr {
                let d = (a.f[c][row + i] - b.f[c][row + i]).abs() * inv;
                if !(d <= sup) {
                    sup = if d.is_nan() { f64::INFINITY } else { d };
                }
            }
        }
        total += sup;
    }
    Ok(total)
}

/// Weighted sup-norm `sum_c max_{t > 0} |A_c| / t^2`.
pub fn weighted_norm(a: &FieldTriple) -> f64 {
    let g = &a.grid;
    let mut total = 0.0;
    for c in 0..3 {
        let mut sup: f64 = 0.0;
        for j in 1..g.levels() {
            let inv = 1.0 / (g.t(j) * g.t(j));
            for v in a.level(c, j) {
                let w = v.abs() * inv;
                if !(w <= sup) {
                    sup = if w.is_nan() { f64::INFINITY } else { w };
                }
            }
        }
        total += sup;
    }
    total
}

/// One sweep of a fixed-point run.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    /// Distance between this iterate and the previous one.
    pub distance: f64,
    /// `distance / previous distance`; absent for the first sweep.
    pub ratio: Option<f64>,
    /// Weighted sup-norm of the new iterate.
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport {
    pub sweeps: Vec<Sweep>,
    pub converged: bool,
    pub tol: f64,
    /// Bound the weighted norms are checked against.
    pub norm_bound: f64,
}

impl IterationReport {
    pub fn new(tol: f64, norm_bound: f64) -> Self {
        IterationReport {
            sweeps: Vec::new(),
            converged: false,
            tol,
            norm_bound,
        }
    }

    pub fn push(&mut self, distance: f64, norm: f64) -> &Sweep {
        let ratio = self.sweeps.last().map(|s| distance / s.distance);
        self.sweeps.push(Sweep {
            distance,
            ratio,
            norm,
        });
        self.sweeps.last().unwrap()
    }

    pub fn iterations(&self) -> usize {
        self.sweeps.len()
    }

    pub fn final_distance(&self) -> Option<f64> {
        self.sweeps.last().map(|s| s.distance)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.sweeps.iter().filter_map(|s| s.ratio).collect()
    }

    /// Largest ratio from sweep `from` (1-based) onward.
    pub fn max_ratio_from(&self, from: usize) -> Option<f64> {
        self.sweeps
            .iter()
            .skip(from.saturating_sub(1))
            .filter_map(|s| s.ratio)
            .fold(None, |m, r| Some(m.map_or(r, |m: f64| m.max(r))))
    }

    pub fn max_norm(&self) -> f64 {
        self.sweeps.iter().map(|s| s.norm).fold(0.0, f64::max)
    }

    /// True when every iterate stayed inside the norm bound.
    pub fn bound_holds(&self) -> bool {
        self.sweeps.iter().all(|s| s.norm <= self.norm_bound)
    }

    /// Number of trailing sweeps whose ratio is at least one.
    pub fn trailing_growth(&self) -> usize {
        self.sweeps
            .iter()
            .rev()
            .take_while(|s| s.ratio.is_some_and(|r| !(r < 1.0)))
            .count()
    }
}
