//! Sheared grids on `0 <= t <= delta` and fields stored on them.
//!
//! Level `j` sits at `t_j = j * delta / nt` and carries `nr` nodes spaced
//! uniformly between the lateral curves `lower(t_j)` and `upper(t_j)`, so the
//! grid shears as the domain narrows. Positions inside a level are addressed
//! by the normalized coordinate `s = (r - lower) / (upper - lower)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::CubicSpline;

/// A lateral boundary `base ± (quadratic t^2 + cubic t^3)`, moving inward.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LateralCurve {
    pub base: f64,
    pub quadratic: f64,
    pub cubic: f64,
}

impl LateralCurve {
    pub fn fixed(base: f64) -> Self {
        LateralCurve {
            base,
            quadratic: 0.0,
            cubic: 0.0,
        }
    }

    /// Inward displacement at `t`.
    pub fn shrink(&self, t: f64) -> f64 {
        t * t * (self.quadratic + self.cubic * t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShearedGrid {
    pub delta: f64,
    pub nt: usize,
    pub nr: usize,
    /// Moves up with `t`.
    pub lower: LateralCurve,
    /// Moves down with `t`.
    pub upper: LateralCurve,
}

impl ShearedGrid {
    pub fn new(delta: f64, nt: usize, nr: usize, lower: LateralCurve, upper: LateralCurve) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidInput(alloc::format!("delta must be positive, got {delta}")));
        }
        if nt < 2 || nr < 4 {
            return Err(Error::InvalidInput(alloc::format!(
                "grid needs nt >= 2 and nr >= 4, got nt = {nt}, nr = {nr}"
            )));
        }
        for c in [lower, upper] {
            if c.quadratic < 0.0 || c.cubic < 0.0 {
                return Err(Error::InvalidInput("lateral curves must shrink inward".into()));
            }
        }
        let g = ShearedGrid {
            delta,
            nt,
            nr,
            lower,
            upper,
        };
        if !(g.lo(delta) < g.hi(delta)) {
            return Err(Error::DomainExit {
                family: None,
                t: delta,
                r: 0.5 * (g.lo(delta) + g.hi(delta)),
            });
        }
        Ok(g)
    }

    pub fn levels(&self) -> usize {
        self.nt + 1
    }

    pub fn len(&self) -> usize {
        self.levels() * self.nr
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.delta / self.nt as f64
    }

    pub fn t(&self, j: usize) -> f64 {
        if j == self.nt {
            self.delta
        } else {
            j as f64 * self.dt()
        }
    }

    pub fn lo(&self, t: f64) -> f64 {
        self.lower.base + self.lower.shrink(t)
    }

    pub fn hi(&self, t: f64) -> f64 {
        self.upper.base - self.upper.shrink(t)
    }

    pub fn width(&self, t: f64) -> f64 {
        self.hi(t) - self.lo(t)
    }

    /// `r` of node `i` on level `j`.
    pub fn r(&self, j: usize, i: usize) -> f64 {
        let t = self.t(j);
        if i == self.nr - 1 {
            self.hi(t)
        } else {
            self.lo(t) + i as f64 * self.width(t) / (self.nr - 1) as f64
        }
    }

    pub fn s_of(&self, t: f64, r: f64) -> f64 {
        let w = self.width(t);
        if w > 0.0 {
            (r - self.lo(t)) / w
        } else {
            0.0
        }
    }

    pub fn r_of(&self, t: f64, s: f64) -> f64 {
        self.lo(t) + s * self.width(t)
    }

    pub fn index(&self, j: usize, i: usize) -> usize {
        j * self.nr + i
    }

    /// Spacing used for convergence-order estimates: the larger of the
    /// `t`-step and the `r`-step on the data line.
    pub fn spacing(&self) -> f64 {
        self.dt().max(self.width(0.0) / (self.nr - 1) as f64)
    }
}

/// Three fields on a grid, row-major by level.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTriple {
    pub grid: ShearedGrid,
    pub f: [Vec<f64>; 3],
}

impl FieldTriple {
    pub fn zeros(grid: &ShearedGrid) -> Self {
        let n = grid.len();
        FieldTriple {
            grid: grid.clone(),
            f: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    /// Fill from a function of `(t, r)` returning the three components.
    pub fn from_fn(grid: &ShearedGrid, f: impl Fn(f64, f64) -> [f64; 3]) -> Self {
        let mut out = FieldTriple::zeros(grid);
        for j in 0..grid.levels() {
            for i in 0..grid.nr {
                let v = f(grid.t(j), grid.r(j, i));
                let k = grid.index(j, i);
                for c in 0..3 {
                    out.f[c][k] = v[c];
                }
            }
        }
        out
    }

    pub fn get(&self, c: usize, j: usize, i: usize) -> f64 {
        self.f[c][self.grid.index(j, i)]
    }

    pub fn level(&self, c: usize, j: usize) -> &[f64] {
        let n = self.grid.nr;
        &self.f[c][j * n..(j + 1) * n]
    }
}

/// Per-level splines in `s` of the weighted fields `f / t^2`.
///
/// Level 0 holds the linear extrapolation of levels 1 and 2, the natural
/// continuous value of the weighted field at `t = 0`.
pub struct LevelSplines {
    grid: ShearedGrid,
    weighted: Vec<[CubicSpline; 3]>,
}

impl LevelSplines {
    pub fn new(fields: &FieldTriple) -> Result<Self> {
        let g = &fields.grid;
        let ds = 1.0 / (g.nr - 1) as f64;
        let mut weighted: Vec<[Vec<f64>; 3]> = Vec::with_capacity(g.levels());
        weighted.push([vec![0.0; g.nr], vec![0.0; g.nr], vec![0.0; g.nr]]);
        for j in 1..g.levels() {
            let t2 = g.t(j) * g.t(j);
            let mut w: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
            for (c, wc) in w.iter_mut().enumerate() {
                *wc = fields.level(c, j).iter().map(|v| v / t2).collect();
            }
            weighted.push(w);
        }
        for c in 0..3 {
            for i in 0..g.nr {
                weighted[0][c][i] = 2.0 * weighted[1][c][i] - weighted[2][c][i];
            }
        }
        let weighted = weighted
            .into_iter()
            .map(|[a, b, c]| -> Result<[CubicSpline; 3]> {
                Ok([
                    CubicSpline::uniform(0.0, ds, a)?,
                    CubicSpline::uniform(0.0, ds, b)?,
                    CubicSpline::uniform(0.0, ds, c)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LevelSplines {
            grid: g.clone(),
            weighted,
        })
    }

    pub fn grid(&self) -> &ShearedGrid {
        &self.grid
    }

    /// Weighted values `f / t^2` on level `j` at normalized position `s`.
    pub fn weighted_at_level(&self, j: usize, s: f64) -> [f64; 3] {
        let s = s.clamp(0.0, 1.0);
        let w = &self.weighted[j];
        [
            w[0].eval_unchecked(s),
            w[1].eval_unchecked(s),
            w[2].eval_unchecked(s),
        ]
    }

    /// Weighted values at an arbitrary `t` between levels `j - 1` and `j`,
    /// linearly interpolated in `t` at common `s`.
    pub fn weighted_between(&self, j: usize, t: f64, s: f64) -> [f64; 3] {
        let (t0, t1) = (self.grid.t(j - 1), self.grid.t(j));
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let a = self.weighted_at_level(j - 1, s);
        let b = self.weighted_at_level(j, s);
        [
            a[0] + w * (b[0] - a[0]),
            a[1] + w * (b[1] - a[1]),
            a[2] + w * (b[2] - a[2]),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> ShearedGrid {
        ShearedGrid::new(
            0.2,
            8,
            9,
            LateralCurve {
                base: -0.6,
                quadratic: 1.0,
                cubic: 0.5,
            },
            LateralCurve {
                base: 0.0,
                quadratic: 0.5,
                cubic: 0.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn nodes_follow_the_lateral_curves() {
        let g = grid();
        assert_eq!(g.r(0, 0), -0.6);
        assert_eq!(g.r(0, 8), 0.0);
        let t = g.t(8);
        assert!((g.r(8, 0) - (-0.6 + t * t + 0.5 * t * t * t)).abs() < 1e-15);
        assert!((g.r(8, 8) - (-0.5 * t * t)).abs() < 1e-15);
        assert!((g.s_of(t, g.r(8, 4)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn crossing_boundaries_are_rejected() {
        let lower = LateralCurve {
            base: 0.0,
            quadratic: 10.0,
            cubic: 0.0,
        };
        let err = ShearedGrid::new(0.5, 4, 5, lower, LateralCurve::fixed(0.1)).unwrap_err();
        assert!(matches!(err, Error::DomainExit { family: None, .. }));
    }

    #[test]
    fn weighted_splines_recover_quadratic_fields() {
        let g = grid();
        let f = FieldTriple::from_fn(&g, |t, r| [t * t * (1.0 + r), -3.0 * t * t, 0.0]);
        let ls = LevelSplines::new(&f).unwrap();
        let w = ls.weighted_between(3, 0.5 * (g.t(2) + g.t(3)), 0.25);
        let r = g.r_of(0.5 * (g.t(2) + g.t(3)), 0.25);
        // the weighted field 1 + r is not constant in s across levels, so only
        // check the t-independent component exactly
        assert!((w[1] + 3.0).abs() < 1e-13);
        assert!((w[0] - (1.0 + r)).abs() < 1e-3);
        let w0 = ls.weighted_at_level(0, 0.5);
        assert!((w0[1] + 3.0).abs() < 1e-13);
    }
}
