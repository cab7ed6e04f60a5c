//! Finite-difference residuals of the governing identities on solver output.
//!
//! All derivatives are taken in the sheared `(t, r)` chart: index-space
//! differences (second-order centered inside, second-order one-sided at the
//! edges) are converted by the chain rule using the node positions, and
//! physical-plane derivatives use the inverse of the differenced map
//! `(t, r) -> (x, y)`. Residuals are reported on the fixed subregion
//! `delta / 4 <= t <= 15 delta / 16`, `1/16 <= s <= 15/16` of the sheared
//! grid, so the region does not creep towards the lateral edges (where the
//! solution may be steep) as the grid is refined.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::HodographBoundary;
use crate::error::{Error, Family, Result};
use crate::gas::GasConstants;
use crate::grid::{FieldTriple, ShearedGrid};
use crate::hodograph::{State, TimeFactors};
use crate::hodograph::system;
use crate::inverse::PhysicalSolution;
use crate::math;
use crate::tricomi::{TricomiProblem, TricomiRecovery};

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualEntry {
    pub name: String,
    pub max_abs: f64,
    /// Grid spacing the residual was measured at.
    pub h: f64,
    /// Observed order against a coarser run, when one was supplied.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    fn push(&mut self, name: &str, max_abs: f64, h: f64) {
        self.entries.push(ResidualEntry {
            name: name.into(),
            max_abs,
            h,
            order: None,
        });
    }

    pub fn get(&self, name: &str) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Largest residual over all entries.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs).fold(0.0, f64::max)
    }

    pub fn h(&self) -> f64 {
        self.entries.first().map_or(f64::NAN, |e| e.h)
    }

    /// Copy of `fine` with per-entry orders estimated against `coarse`.
    pub fn with_orders(coarse: &ResidualReport, fine: &ResidualReport) -> ResidualReport {
        let mut out = fine.clone();
        for e in &mut out.entries {
            if let Some(c) = coarse.get(&e.name) {
                e.order = Some(observed_order(c.max_abs, c.h, e.max_abs, e.h));
            }
        }
        out
    }

    /// Observed order of the largest residual between two resolutions.
    pub fn order_of_max(coarse: &ResidualReport, fine: &ResidualReport) -> f64 {
        observed_order(coarse.max_abs(), coarse.h(), fine.max_abs(), fine.h())
    }
}

/// `log(e_coarse / e_fine) / log(h_coarse / h_fine)`.
pub fn observed_order(e_coarse: f64, h_coarse: f64, e_fine: f64, h_fine: f64) -> f64 {
    math::ln(e_coarse / e_fine) / math::ln(h_coarse / h_fine)
}

/// Index-space derivative along one axis of a row-major `levels x nr` array.
fn index_diff(f: &[f64], levels: usize, nr: usize, along_t: bool) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    let (n, stride) = if along_t { (levels, nr) } else { (nr, 1) };
    let lines = if along_t { nr } else { levels };
    for line in 0..lines {
        let base = if along_t { line } else { line * nr };
        let at = |k: usize| f[base + k * stride];
        for k in 0..n {
            out[base + k * stride] = if k == 0 {
                0.5 * (-3.0 * at(0) + 4.0 * at(1) - at(2))
            } else if k == n - 1 {
                0.5 * (3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2))
            } else {
                0.5 * (at(k + 1) - at(k - 1))
            };
        }
    }
    out
}

/// Chain-rule derivatives on a sheared grid.
pub struct Chart {
    grid: ShearedGrid,
    /// `dr/dj` and `dr/di` at every node.
    r_j: Vec<f64>,
    r_i: Vec<f64>,
}

impl Chart {
    pub fn new(grid: &ShearedGrid) -> Self {
        let r: Vec<f64> = (0..grid.len()).map(|k| grid.r(k / grid.nr, k % grid.nr)).collect();
        Chart {
            grid: grid.clone(),
            r_j: index_diff(&r, grid.levels(), grid.nr, true),
            r_i: index_diff(&r, grid.levels(), grid.nr, false),
        }
    }

    pub fn grid(&self) -> &ShearedGrid {
        &self.grid
    }

    /// `(f_t, f_r)` at every node.
    pub fn derivatives(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let g = &self.grid;
        let fj = index_diff(f, g.levels(), g.nr, true);
        let fi = index_diff(f, g.levels(), g.nr, false);
        let dt = g.dt();
        let mut ft = vec![0.0; f.len()];
        let mut fr = vec![0.0; f.len()];
        for k in 0..f.len() {
            fr[k] = fi[k] / self.r_i[k];
            ft[k] = (fj[k] - fr[k] * self.r_j[k]) / dt;
        }
        (ft, fr)
    }

    /// Nodes where residuals are reported.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let g = &self.grid;
        let band = |n: usize, parts: usize| n.div_ceil(parts).max(2);
        let (j0, jm) = (band(g.nt, 4), band(g.nt, 16));
        let im = band(g.nr - 1, 16);
        (j0..=g.nt - jm).flat_map(move |j| (im..g.nr - im).map(move |i| (j, i)))
    }
}

/// Physical-plane derivatives through the differenced map `(t, r) -> (x, y)`.
pub struct PhysicalChart {
    chart: Chart,
    x_t: Vec<f64>,
    x_r: Vec<f64>,
    y_t: Vec<f64>,
    y_r: Vec<f64>,
    jac: Vec<f64>,
}

impl PhysicalChart {
    pub fn new(grid: &ShearedGrid, x: &[f64], y: &[f64]) -> Result<Self> {
        let chart = Chart::new(grid);
        let (x_t, x_r) = chart.derivatives(x);
        let (y_t, y_r) = chart.derivatives(y);
        let jac: Vec<f64> = (0..x.len()).map(|k| x_t[k] * y_r[k] - x_r[k] * y_t[k]).collect();
        for (j, i) in chart.interior() {
            let k = grid.index(j, i);
            if !(jac[k] != 0.0) {
                return Err(Error::SingularDenominator {
                    term: "x_t y_r - x_r y_t",
                    t: grid.t(j),
                    r: grid.r(j, i),
                });
            }
        }
        Ok(PhysicalChart {
            chart,
            x_t,
            x_r,
            y_t,
            y_r,
            jac,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// `(f_x, f_y)` at every node.
    pub fn gradient(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (ft, fr) = self.chart.derivatives(f);
        let n = f.len();
        let mut fx = vec![0.0; n];
        let mut fy = vec![0.0; n];
        for k in 0..n {
            fx[k] = (ft[k] * self.y_r[k] - fr[k] * self.y_t[k]) / self.jac[k];
            fy[k] = (-ft[k] * self.x_r[k] + fr[k] * self.x_t[k]) / self.jac[k];
        }
        (fx, fy)
    }

    /// `cos(a) f_x + sin(a) f_y` with `a` given per node.
    pub fn directional(&self, f: &[f64], angle: &[f64]) -> Vec<f64> {
        let (fx, fy) = self.gradient(f);
        (0..f.len())
            .map(|k| math::cos(angle[k]) * fx[k] + math::sin(angle[k]) * fy[k])
            .collect()
    }
}

fn max_over(chart: &Chart, res: impl Fn(usize) -> f64) -> f64 {
    let g = chart.grid();
    chart
        .interior()
        .map(|(j, i)| res(g.index(j, i)).abs())
        .fold(0.0, |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

/// Residual of the transport system for `(U, V, W)`:
/// `U_t + lambda1 U_r = (U + V)/(2t) + b1`, the analogue for `V` with the
/// second family and `W_t + lambda3 W_r = b3`.
pub fn residual_hodograph_system(
    fields: &FieldTriple,
    hb: &HodographBoundary,
    gc: &GasConstants,
) -> Result<ResidualReport> {
    let g = &fields.grid;
    let chart = Chart::new(g);
    let d: Vec<(Vec<f64>, Vec<f64>)> = fields.f.iter().map(|f| chart.derivatives(f)).collect();
    let mut worst = [0.0f64; 3];
    for (j, i) in chart.interior() {
        let k = g.index(j, i);
        let t = g.t(j);
        let r = g.r(j, i);
        let tf = TimeFactors::new(t, gc);
        let st = State::new(fields.f[0][k], fields.f[1][k], fields.f[2][k], t);
        let bp = hb.at(r)?;
        for fam in Family::ALL {
            let c = fam.index();
            let l = system::lambda(fam, &st, &tf, r, &bp)?;
            let rhs = system::integrand(fam, &st, &tf, r, &bp, gc)?;
            let res = (d[c].0[k] + l * d[c].1[k] - rhs).abs();
            worst[c] = if res.is_nan() { f64::INFINITY } else { worst[c].max(res) };
        }
    }
    let mut rep = ResidualReport::default();
    let h = g.spacing();
    rep.push("U", worst[0], h);
    rep.push("V", worst[1], h);
    rep.push("W", worst[2], h);
    Ok(rep)
}

/// Residuals of the characteristic form in the physical plane:
///
/// ```text
/// d+ theta + cos^2 w / (sin^2 w + kappa) d+ omega - sin(2w) G H
/// d- theta - cos^2 w / (sin^2 w + kappa) d- omega - sin(2w) G H
/// d0 H,  d0 S,  d0 B
/// ```
///
/// with `d+`, `d-`, `d0` the unit derivatives along `alpha`, `beta`, `theta`.
pub fn residual_characteristic_form(phys: &PhysicalSolution) -> Result<ResidualReport> {
    let pc = PhysicalChart::new(&phys.grid, &phys.x, &phys.y)?;
    let chart = pc.chart();
    let gc = &phys.gc;
    let dp_theta = pc.directional(&phys.theta, &phys.alpha);
    let dp_omega = pc.directional(&phys.omega, &phys.alpha);
    let dm_theta = pc.directional(&phys.theta, &phys.beta);
    let dm_omega = pc.directional(&phys.omega, &phys.beta);
    let d0 = |f: &[f64]| pc.directional(f, &phys.theta);
    let (d0h, d0s, d0b) = (d0(&phys.h), d0(&phys.s), d0(&phys.b));
    let coef = |k: usize| {
        let (s, c) = (math::sin(phys.omega[k]), math::cos(phys.omega[k]));
        (c * c / (s * s + gc.kappa), math::sin(2.0 * phys.omega[k]) * gc.g(phys.t[k]) * phys.h[k])
    };
    let h = phys.grid.spacing();
    let mut rep = ResidualReport::default();
    rep.push(
        "plus",
        max_over(chart, |k| {
            let (a, b) = coef(k);
            dp_theta[k] + a * dp_omega[k] - b
        }),
        h,
    );
    rep.push(
        "minus",
        max_over(chart, |k| {
            let (a, b) = coef(k);
            dm_theta[k] - a * dm_omega[k] - b
        }),
        h,
    );
    rep.push("transport_H", max_over(chart, |k| d0h[k]), h);
    rep.push("transport_S", max_over(chart, |k| d0s[k]), h);
    rep.push("transport_B", max_over(chart, |k| d0b[k]), h);
    Ok(rep)
}

/// `Xi = ln(sin^2 w / (kappa + sin^2 w)) / (4 kappa) - (ln S / gamma - ln B) / (4 kappa)`.
pub fn xi_field(phys: &PhysicalSolution) -> Vec<f64> {
    let gc = &phys.gc;
    let k4 = 4.0 * gc.kappa;
    (0..phys.len())
        .map(|k| {
            let s2 = 1.0 - phys.t[k] * phys.t[k];
            math::ln(s2 / (gc.kappa + s2)) / k4 - (math::ln(phys.s[k]) / gc.gamma - math::ln(phys.b[k])) / k4
        })
        .collect()
}

/// Residuals of the second-order characteristic decompositions of `Xi`,
/// formed by nested first differences, and of `d+ Xi = Ubar`,
/// `d- Xi = Vbar`.
pub fn residual_decomposition_xi(phys: &PhysicalSolution) -> Result<ResidualReport> {
    let pc = PhysicalChart::new(&phys.grid, &phys.x, &phys.y)?;
    let chart = pc.chart();
    let gc = &phys.gc;
    let xi = xi_field(phys);
    let up = pc.directional(&xi, &phys.alpha);
    let vm = pc.directional(&xi, &phys.beta);
    let dm_up = pc.directional(&up, &phys.beta);
    let dp_vm = pc.directional(&vm, &phys.alpha);
    let parts = |k: usize| {
        let w = phys.omega[k];
        let (s, c) = (math::sin(w), math::cos(w));
        let c2w = math::cos(2.0 * w);
        let gh = (gc.kappa + s * s) * gc.g(phys.t[k]) * phys.h[k];
        (c * c, c2w, gh)
    };
    let h = phys.grid.spacing();
    let mut rep = ResidualReport::default();
    rep.push(
        "plus",
        max_over(chart, |k| {
            let (cc, c2w, gh) = parts(k);
            let (u, v) = (up[k], vm[k]);
            let rhs = (gc.kappa * u + gh) / cc * (u - c2w * v) + u / cc * (u + c2w * c2w * v);
            dm_up[k] - rhs
        }),
        h,
    );
    rep.push(
        "minus",
        max_over(chart, |k| {
            let (cc, c2w, gh) = parts(k);
            let (u, v) = (up[k], vm[k]);
            let rhs = (gc.kappa * v - gh) / cc * (v - c2w * u) + v / cc * (v + c2w * c2w * u);
            dp_vm[k] - rhs
        }),
        h,
    );
    rep.push("ubar", max_over(chart, |k| up[k] - phys.ubar[k]), h);
    rep.push("vbar", max_over(chart, |k| vm[k] - phys.vbar[k]), h);
    Ok(rep)
}

/// Residuals of the four conservation laws for mass, momentum and energy.
pub fn residual_euler(phys: &PhysicalSolution) -> Result<ResidualReport> {
    let pc = PhysicalChart::new(&phys.grid, &phys.x, &phys.y)?;
    let chart = pc.chart();
    let n = phys.len();
    let col = |f: &dyn Fn(usize) -> f64| (0..n).map(f).collect::<Vec<f64>>();
    let (rho, u, v, p, e) = (&phys.rho, &phys.u, &phys.v, &phys.p, &phys.e);
    let pairs: [(&str, Vec<f64>, Vec<f64>); 4] = [
        ("mass", col(&|k| rho[k] * u[k]), col(&|k| rho[k] * v[k])),
        (
            "momentum_x",
            col(&|k| rho[k] * u[k] * u[k] + p[k]),
            col(&|k| rho[k] * u[k] * v[k]),
        ),
        (
            "momentum_y",
            col(&|k| rho[k] * u[k] * v[k]),
            col(&|k| rho[k] * v[k] * v[k] + p[k]),
        ),
        (
            "energy",
            col(&|k| (rho[k] * e[k] + p[k]) * u[k]),
            col(&|k| (rho[k] * e[k] + p[k]) * v[k]),
        ),
    ];
    let h = phys.grid.spacing();
    let mut rep = ResidualReport::default();
    for (name, fx, fy) in pairs {
        let (dx, _) = pc.gradient(&fx);
        let (_, dy) = pc.gradient(&fy);
        rep.push(name, max_over(chart, |k| dx[k] + dy[k]), h);
    }
    Ok(rep)
}

/// Largest relative change of `p rho^-gamma` from its transported entropy.
pub fn entropy_consistency(phys: &PhysicalSolution) -> f64 {
    (0..phys.len())
        .map(|k| {
            let s = phys.p[k] * math::powf(phys.rho[k], -phys.gc.gamma);
            ((s - phys.s[k]) / phys.s[k]).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest `|(u^2 + v^2)/2 + c^2/(gamma - 1) - B|`.
pub fn bernoulli_consistency(phys: &PhysicalSolution) -> f64 {
    (0..phys.len())
        .map(|k| {
            let q2 = phys.u[k] * phys.u[k] + phys.v[k] * phys.v[k];
            (0.5 * q2 + phys.c[k] * phys.c[k] / (phys.gc.gamma - 1.0) - phys.b[k]).abs()
        })
        .fold(0.0, f64::max)
}

/// Residual of the Tricomi error system for `(R, S, W)`.
pub fn residual_tricomi_system(fields: &FieldTriple, prob: &TricomiProblem) -> Result<ResidualReport> {
    let g = &fields.grid;
    let chart = Chart::new(g);
    let d: Vec<(Vec<f64>, Vec<f64>)> = fields.f.iter().map(|f| chart.derivatives(f)).collect();
    let mut worst = [0.0f64; 3];
    for (j, i) in chart.interior() {
        let k = g.index(j, i);
        let (t, x) = (g.t(j), g.r(j, i));
        let dat = prob.data(x)?;
        let (r, s) = (fields.f[0][k], fields.f[1][k]);
        let t2 = t * t;
        let res = [
            d[0].0[k] + 2.0 * t2 * d[0].1[k] - ((r - s) / (2.0 * t) - 2.0 * t2 * (dat.u1p + dat.u0pp * t)),
            d[1].0[k] - 2.0 * t2 * d[1].1[k] - ((s - r) / (2.0 * t) + 2.0 * t2 * (dat.u1p - dat.u0pp * t)),
            d[2].0[k] - 2.0 * t2 * d[2].1[k] + 2.0 * t * (r + dat.u1),
        ];
        for c in 0..3 {
            worst[c] = worst[c].max(res[c].abs());
        }
    }
    let h = g.spacing();
    let mut rep = ResidualReport::default();
    rep.push("R", worst[0], h);
    rep.push("S", worst[1], h);
    rep.push("W", worst[2], h);
    Ok(rep)
}

/// `y u_xx + u_yy` on the recovered solution, with
/// `u_yy = (u_tt - u_t / t) / (4 t^2)` for `t = sqrt(-y)`.
pub fn residual_tricomi_pde(rec: &TricomiRecovery) -> ResidualReport {
    let chart = Chart::new(&rec.grid);
    let (ut, ux) = chart.derivatives(&rec.u);
    let (utt, _) = chart.derivatives(&ut);
    let (_, uxx) = chart.derivatives(&ux);
    let mut rep = ResidualReport::default();
    rep.push(
        "tricomi",
        max_over(&chart, |k| {
            let t = rec.t[k];
            rec.y[k] * uxx[k] + (utt[k] - ut[k] / t) / (4.0 * t * t)
        }),
        rec.grid.spacing(),
    );
    rep
}
