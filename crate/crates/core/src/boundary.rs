//! Sonic-curve boundary data: validation, derived boundary quantities and
//! their transfer to the partial hodograph line `t = 0`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gas::GasConstants;
use crate::jet::Jet;
use crate::math;
use crate::numerics::{derivative_table, invert_monotone, CubicSpline};

/// Margin required by strict inequalities at every sample.
pub const STRICT_MARGIN: f64 = 1e-8;
/// Relative tolerance of the sonic identity `gamma p = rho q^2`.
pub const SONIC_TOLERANCE: f64 = 1e-10;
/// Default number of validation samples on `[x1, x2]`.
pub const DEFAULT_SAMPLES: usize = 601;
/// Default number of uniform samples on `[r1, r2]`.
pub const DEFAULT_R_SAMPLES: usize = 2049;

type AnalyticFn = dyn Fn(Jet) -> Jet + Send + Sync;

/// A scalar boundary function of `x` that can report derivatives to order 4.
#[derive(Clone)]
pub enum BoundaryFunction {
    /// `c[0] + c[1] x + c[2] x^2 + ...`
    Poly(Vec<f64>),
    /// Uniformly sampled table; derivatives by repeated fourth-order differences.
    Table(TableFunction),
    /// Closed form evaluated on jets, e.g. `|x| x.cos()`.
    Analytic(Arc<AnalyticFn>),
}

impl fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryFunction::Poly(c) => f.debug_tuple("Poly").field(c).finish(),
            BoundaryFunction::Table(t) => f
                .debug_struct("Table")
                .field("lo", &t.levels[0].lo())
                .field("hi", &t.levels[0].hi())
                .field("nodes", &t.levels[0].nodes().len())
                .finish(),
            BoundaryFunction::Analytic(_) => f.write_str("Analytic(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableFunction {
    /// Splines of `f, f', f'', f''', f''''`.
    levels: Vec<CubicSpline>,
}

impl BoundaryFunction {
    pub fn constant(c: f64) -> Self {
        BoundaryFunction::Poly(alloc::vec![c])
    }

    pub fn analytic<F>(f: F) -> Self
    where
        F: Fn(Jet) -> Jet + Send + Sync + 'static,
    {
        BoundaryFunction::Analytic(Arc::new(f))
    }

    /// Table on uniformly spaced nodes (at least five).
    pub fn table(x: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if x.len() != f.len() {
            return Err(Error::InvalidInput(String::from(
                "table x and f must have the same length",
            )));
        }
        if x.len() < 5 {
            return Err(Error::TooFewNodes { got: x.len(), need: 5 });
        }
        let n = x.len();
        let h = (x[n - 1] - x[0]) / (n - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidInput(String::from("table nodes must increase")));
        }
        for (i, xi) in x.iter().enumerate() {
            let expect = x[0] + i as f64 * h;
            if (xi - expect).abs() > 1e-9 * h.max(xi.abs()) {
                return Err(Error::InvalidInput(String::from(
                    "table nodes must be uniformly spaced",
                )));
            }
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(String::from("table values must be finite")));
        }
        let mut arrays = alloc::vec![f];
        for k in 0..4 {
            let d = derivative_table(&arrays[k], h)?;
            arrays.push(d);
        }
        let levels = arrays
            .into_iter()
            .map(|a| CubicSpline::uniform(x[0], h, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryFunction::Table(TableFunction { levels }))
    }

    /// Value and derivatives at `x` as a jet.
    pub fn jet_at(&self, x: f64) -> Result<Jet> {
        match self {
            BoundaryFunction::Poly(c) => {
                let var = Jet::variable(x);
                let mut acc = Jet::constant(0.0);
                for &ck in c.iter().rev() {
                    acc = acc * var + ck;
                }
                Ok(acc)
            }
            BoundaryFunction::Table(t) => {
                let mut d = [0.0; 5];
                for (dk, s) in d.iter_mut().zip(t.levels.iter()) {
                    *dk = s.eval(x)?;
                }
                Ok(Jet::from_derivatives(&d))
            }
            BoundaryFunction::Analytic(f) => Ok(f(Jet::variable(x))),
        }
    }
}

/// The sonic curve `y = phi(x)` on `[x1, x2]` with primitive data on it.
#[derive(Clone, Debug)]
pub struct SonicBoundaryData {
    pub x1: f64,
    pub x2: f64,
    pub phi: BoundaryFunction,
    pub rho: BoundaryFunction,
    pub u: BoundaryFunction,
    pub v: BoundaryFunction,
    pub p: BoundaryFunction,
}

/// Primitive jets at one point of the curve.
#[derive(Clone, Copy, Debug)]
struct Primitive {
    phi: Jet,
    rho: Jet,
    u: Jet,
    v: Jet,
    p: Jet,
}

impl SonicBoundaryData {
    fn check_interval(&self) -> Result<()> {
        if !(self.x1 < self.x2) || !self.x1.is_finite() || !self.x2.is_finite() {
            return Err(Error::InvalidInput(alloc::format!(
                "interval [{}, {}] is empty or not finite",
                self.x1,
                self.x2
            )));
        }
        Ok(())
    }

    fn sample_points(&self, n: usize) -> Result<Vec<f64>> {
        self.check_interval()?;
        if n < 2 {
            return Err(Error::TooFewNodes { got: n, need: 2 });
        }
        let h = (self.x2 - self.x1) / (n - 1) as f64;
        Ok((0..n)
            .map(|i| if i == n - 1 { self.x2 } else { self.x1 + i as f64 * h })
            .collect())
    }

    fn primitive(&self, x: f64) -> Result<Primitive> {
        Ok(Primitive {
            phi: self.phi.jet_at(x)?,
            rho: self.rho.jet_at(x)?,
            u: self.u.jet_at(x)?,
            v: self.v.jet_at(x)?,
            p: self.p.jet_at(x)?,
        })
    }
}

/// One checked condition with its worst sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub name: &'static str,
    /// Smallest margin over the samples; the condition holds iff it is `>= 0`.
    pub worst_margin: f64,
    /// Value of the checked quantity at the worst sample.
    pub worst_value: f64,
    pub at_x: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    pub conditions: Vec<ConditionReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// The error for the first failing condition, in checking order.
    pub fn first_failure(&self) -> Option<Error> {
        let c = self.conditions.iter().find(|c| !c.passed)?;
        Some(match c.name {
            "sonic" => Error::NonSonicData {
                x: c.at_x,
                relative_error: c.worst_value,
            },
            "density_positive" => Error::PositivityViolation {
                x: c.at_x,
                quantity: "density",
                value: c.worst_value,
            },
            "pressure_positive" => Error::PositivityViolation {
                x: c.at_x,
                quantity: "pressure",
                value: c.worst_value,
            },
            "theta_decreasing" => Error::MonotonicityViolation {
                x: c.at_x,
                slope: c.worst_value,
            },
            "pressure_nonincreasing" => Error::PressureViolation {
                x: c.at_x,
                slope: c.worst_value,
            },
            name => Error::GeometryViolation {
                x: c.at_x,
                condition: name,
                value: c.worst_value,
            },
        })
    }
}

struct Tracker {
    name: &'static str,
    margin: f64,
    value: f64,
    x: f64,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Tracker {
            name,
            margin: f64::INFINITY,
            value: f64::NAN,
            x: f64::NAN,
        }
    }

    fn see(&mut self, margin: f64, value: f64, x: f64) {
        // NaN margins count as failures.
        if !(margin >= self.margin) {
            self.margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
            self.value = value;
            self.x = x;
        }
    }

    fn finish(self) -> ConditionReport {
        ConditionReport {
            name: self.name,
            worst_margin: self.margin,
            worst_value: self.value,
            at_x: self.x,
            passed: self.margin >= 0.0,
        }
    }
}

/// Evaluate every admissibility condition on `samples` uniform points and
/// report the worst margin of each. Failing conditions are reported, not
/// returned as errors.
pub fn assess_boundary(
    data: &SonicBoundaryData,
    gc: &GasConstants,
    samples: usize,
) -> Result<ValidationReport> {
    let xs = data.sample_points(samples)?;
    let mut sonic = Tracker::new("sonic");
    let mut rho_pos = Tracker::new("density_positive");
    let mut p_pos = Tracker::new("pressure_positive");
    let mut mono = Tracker::new("theta_decreasing");
    let mut tangent = Tracker::new("cos(theta)*phi' - sin(theta)");
    let mut normal = Tracker::new("cos(theta) + phi'*sin(theta)");
    let mut pressure = Tracker::new("pressure_nonincreasing");
    for &x in &xs {
        let pr = data.primitive(x)?;
        let (rho, p) = (pr.rho.value(), pr.p.value());
        let (u, v) = (pr.u.value(), pr.v.value());
        let q2 = u * u + v * v;
        let rel = (gc.gamma * p - rho * q2).abs() / (gc.gamma * p).abs().max(f64::MIN_POSITIVE);
        sonic.see(SONIC_TOLERANCE - rel, rel, x);
        rho_pos.see(rho - STRICT_MARGIN, rho, x);
        p_pos.see(p - STRICT_MARGIN, p, x);
        let theta = Jet::atan2(&pr.v, &pr.u);
        let dtheta = theta.deriv(1);
        mono.see(-dtheta - STRICT_MARGIN, dtheta, x);
        let (s, c) = (math::sin(theta.value()), math::cos(theta.value()));
        let dphi = pr.phi.deriv(1);
        let g1 = c * dphi - s;
        let g2 = c + dphi * s;
        tangent.see(g1 - STRICT_MARGIN, g1, x);
        normal.see(g2 - STRICT_MARGIN, g2, x);
        let dp = pr.p.deriv(1);
        pressure.see(-dp, dp, x);
    }
    Ok(ValidationReport {
        samples: xs.len(),
        conditions: alloc::vec![
            sonic.finish(),
            rho_pos.finish(),
            p_pos.finish(),
            mono.finish(),
            tangent.finish(),
            normal.finish(),
            pressure.finish(),
        ],
    })
}

/// Validate on the default sample count; the first failing condition (in the
/// order sonic, positivity, monotonicity, geometry, pressure) is an error.
pub fn validate_boundary(data: &SonicBoundaryData, gc: &GasConstants) -> Result<ValidationReport> {
    let report = assess_boundary(data, gc, DEFAULT_SAMPLES)?;
    match report.first_failure() {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

/// Derived boundary quantities at one point of the curve, as jets in `x`.
/// Jets built from first derivatives of the data are valid to order 3.
#[derive(Clone, Copy, Debug)]
pub struct DerivedPoint {
    pub x: f64,
    pub phi: Jet,
    pub s_hat: Jet,
    pub b_hat: Jet,
    pub theta: Jet,
    pub h_hat: Jet,
    /// `H` on the curve from its definition through `S` and `B`.
    pub h_hat_definition: Jet,
    pub a0: Jet,
    pub a1: Jet,
}

/// Boundary data together with the derived quantities on `[x1, x2]`.
#[derive(Clone, Debug)]
pub struct DerivedBoundary {
    pub data: SonicBoundaryData,
    pub gc: GasConstants,
    samples: Vec<DerivedPoint>,
}

/// Compute entropy, Bernoulli function, flow angle, `H` and the derivative
/// data `a0`, `a1` along the curve.
pub fn derive_boundary(data: &SonicBoundaryData, gc: &GasConstants) -> Result<DerivedBoundary> {
    derive_boundary_with(data, gc, DEFAULT_SAMPLES)
}

pub fn derive_boundary_with(
    data: &SonicBoundaryData,
    gc: &GasConstants,
    samples: usize,
) -> Result<DerivedBoundary> {
    let xs = data.sample_points(samples)?;
    let mut out: Vec<DerivedPoint> = Vec::with_capacity(xs.len());
    let mut prev_theta: Option<f64> = None;
    for &x in &xs {
        let mut pt = derived_point(data, gc, x)?;
        if let Some(prev) = prev_theta {
            pt.theta = unwrap_near(pt.theta, prev);
        }
        prev_theta = Some(pt.theta.value());
        out.push(pt);
    }
    Ok(DerivedBoundary {
        data: data.clone(),
        gc: *gc,
        samples: out,
    })
}

fn unwrap_near(theta: Jet, reference: f64) -> Jet {
    let tau = 2.0 * math::PI;
    let k = math::floor((reference - theta.value()) / tau + 0.5);
    theta + k * tau
}

fn derived_point(data: &SonicBoundaryData, gc: &GasConstants, x: f64) -> Result<DerivedPoint> {
    let pr = data.primitive(x)?;
    let gamma = gc.gamma;
    let s_hat = pr.p * pr.rho.powf(-gamma);
    let b_hat = (pr.u * pr.u + pr.v * pr.v) * 0.5 + pr.p / pr.rho * (gamma / (gamma - 1.0));
    let theta = Jet::atan2(&pr.v, &pr.u);
    let (st, ct) = (theta.sin(), theta.cos());
    let dphi = pr.phi.derivative();
    let dtheta = theta.derivative();
    let den_t = ct * dphi - st;
    let den_n = ct + dphi * st;
    for (what, den) in [("cos(theta)*phi' - sin(theta)", den_t), ("cos(theta) + phi'*sin(theta)", den_n)] {
        if !(den.value() > 0.0) {
            return Err(Error::DomainError {
                what,
                value: den.value(),
            });
        }
    }
    if !(pr.p.value() > 0.0) || !(pr.rho.value() > 0.0) {
        return Err(Error::DomainError {
            what: "boundary pressure or density",
            value: pr.p.value().min(pr.rho.value()),
        });
    }
    let c_h = 1.0 / gc.g0;
    let h_hat = -c_h * pr.p.derivative() / (2.0 * gamma * pr.p * den_t);
    let z = s_hat.ln() * (1.0 / (4.0 * gc.kappa * gamma)) - b_hat.ln() * (1.0 / (4.0 * gc.kappa));
    let h_hat_definition = z.derivative() / den_t * (1.0 / gc.g0);
    let a0 = dtheta / (den_n * 2.0);
    let a1 = (st - dphi * ct) / den_n * (gc.g0 * h_hat - a0);
    Ok(DerivedPoint {
        x,
        phi: pr.phi,
        s_hat,
        b_hat,
        theta,
        h_hat,
        h_hat_definition,
        a0,
        a1,
    })
}

impl DerivedBoundary {
    pub fn samples(&self) -> &[DerivedPoint] {
        &self.samples
    }

    /// Derived quantities at arbitrary `x`, with the flow angle on the same
    /// continuous branch as the samples.
    pub fn at(&self, x: f64) -> Result<DerivedPoint> {
        let mut pt = derived_point(&self.data, &self.gc, x)?;
        pt.theta = unwrap_near(pt.theta, self.theta_reference(x));
        Ok(pt)
    }

    fn theta_reference(&self, x: f64) -> f64 {
        let n = self.samples.len();
        let (x1, x2) = (self.data.x1, self.data.x2);
        let pos = ((x - x1) / (x2 - x1) * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
        let k = (math::floor(pos) as usize).min(n - 2);
        let w = pos - k as f64;
        (1.0 - w) * self.samples[k].theta.value() + w * self.samples[k + 1].theta.value()
    }

    fn theta_and_slope(&self, x: f64) -> (f64, f64) {
        match self.at(x) {
            Ok(pt) => (pt.theta.value(), pt.theta.deriv(1)),
            Err(_) => (f64::NAN, f64::NAN),
        }
    }

    /// Flow-angle range `[r1, r2] = [theta(x2), theta(x1)]`.
    pub fn r_range(&self) -> (f64, f64) {
        let n = self.samples.len();
        (self.samples[n - 1].theta.value(), self.samples[0].theta.value())
    }

    /// Invert the flow angle: the `x` with `theta(x) = r`.
    pub fn x_of_r(&self, r: f64) -> Result<f64> {
        invert_monotone(|x| self.theta_and_slope(x), r, self.data.x1, self.data.x2, 1e-12)
    }
}

/// Boundary functions of `r` and their derivatives, expanded about one `r`.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryJets {
    pub a0: Jet,
    pub a1: Jet,
    pub h0: Jet,
    pub x_bar: Jet,
    pub y_bar: Jet,
    pub s0: Jet,
    pub b0: Jet,
}

/// `a0, a1, H0` and their first derivatives at one `r`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoundaryPoint {
    pub a0: f64,
    pub a0p: f64,
    pub a1: f64,
    pub a1p: f64,
    pub h0: f64,
    pub h0p: f64,
}

/// Boundary functions on the hodograph line `t = 0`, `r` in `[r1, r2]`.
///
/// Stored as uniform samples of exact jets and evaluated by cubic Hermite
/// interpolation of value and slope.
#[derive(Clone, Debug)]
pub struct HodographBoundary {
    pub r1: f64,
    pub r2: f64,
    pub eps0: f64,
    h: f64,
    samples: Vec<BoundaryJets>,
    h0_flat: bool,
}

/// Transfer derived boundary data to functions of the flow angle.
pub fn to_hodograph(db: &DerivedBoundary) -> Result<HodographBoundary> {
    to_hodograph_with(db, DEFAULT_R_SAMPLES)
}

pub fn to_hodograph_with(db: &DerivedBoundary, n: usize) -> Result<HodographBoundary> {
    for pt in db.samples() {
        let slope = pt.theta.deriv(1);
        if !(slope < 0.0) {
            return Err(Error::InversionFailure { r: pt.theta.value() });
        }
    }
    let (r1, r2) = db.r_range();
    if !(r1 < r2) {
        return Err(Error::InversionFailure { r: r1 });
    }
    HodographBoundary::from_functions(r1, r2, n, |r| {
        let x = db.x_of_r(r)?;
        let pt = db.at(x)?;
        if (pt.theta.value() - r).abs() > 1e-10 {
            return Err(Error::InversionFailure { r });
        }
        let x_bar = pt.theta.revert(x).ok_or(Error::InversionFailure { r })?;
        Ok(BoundaryJets {
            a0: pt.a0.compose(&x_bar),
            a1: pt.a1.compose(&x_bar),
            h0: pt.h_hat.compose(&x_bar),
            x_bar,
            y_bar: pt.phi.compose(&x_bar),
            s0: pt.s_hat.compose(&x_bar),
            b0: pt.b_hat.compose(&x_bar),
        })
    })
}

impl HodographBoundary {
    /// Sample boundary functions given directly as jets in `r`.
    pub fn from_functions<F>(r1: f64, r2: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<BoundaryJets>,
    {
        if !(r1 < r2) {
            return Err(Error::InvalidInput(alloc::format!("empty r-range [{r1}, {r2}]")));
        }
        if n < 2 {
            return Err(Error::TooFewNodes { got: n, need: 2 });
        }
        let h = (r2 - r1) / (n - 1) as f64;
        let mut samples = Vec::with_capacity(n);
        let mut min_margin = f64::INFINITY;
        let mut h0_flat = true;
        for k in 0..n {
            let r = if k == n - 1 { r2 } else { r1 + k as f64 * h };
            let bj = f(r)?;
            for j in [bj.a0, bj.a1, bj.h0] {
                for d in 0..=1 {
                    if !j.deriv(d).is_finite() {
                        return Err(Error::InvalidInput(alloc::format!(
                            "boundary function not finite at r = {r}"
                        )));
                    }
                }
            }
            min_margin = min_margin.min(-bj.a0.value()).min(-bj.a1.value());
            if bj.h0.deriv(1) != 0.0 {
                h0_flat = false;
            }
            samples.push(bj);
        }
        if !(min_margin > 0.0) {
            return Err(Error::MarginFailure { eps0: min_margin });
        }
        Ok(HodographBoundary {
            r1,
            r2,
            eps0: 0.99 * min_margin,
            h,
            samples,
            h0_flat,
        })
    }

    pub fn samples(&self) -> &[BoundaryJets] {
        &self.samples
    }

    pub fn sample_r(&self, k: usize) -> f64 {
        if k == self.samples.len() - 1 {
            self.r2
        } else {
            self.r1 + k as f64 * self.h
        }
    }

    /// True when `H0'` vanishes at every sample, so `W` stays zero.
    pub fn h0_is_flat(&self) -> bool {
        self.h0_flat
    }

    fn locate(&self, r: f64) -> Result<(usize, f64)> {
        let slack = 1e-9 * (self.r2 - self.r1);
        if !(r >= self.r1 - slack && r <= self.r2 + slack) {
            return Err(Error::OutOfRange {
                x: r,
                lo: self.r1,
                hi: self.r2,
            });
        }
        let pos = ((r - self.r1) / self.h).clamp(0.0, (self.samples.len() - 1) as f64);
        let k = (math::floor(pos) as usize).min(self.samples.len() - 2);
        Ok((k, pos - k as f64))
    }

    fn hermite(&self, k: usize, s: f64, f: impl Fn(&BoundaryJets) -> (f64, f64)) -> f64 {
        let (v0, d0) = f(&self.samples[k]);
        let (v1, d1) = f(&self.samples[k + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * self.h * d0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * self.h * d1
    }

    /// `a0, a1, H0` and first derivatives at `r`.
    pub fn at(&self, r: f64) -> Result<BoundaryPoint> {
        let (k, s) = self.locate(r)?;
        let v = |j: fn(&BoundaryJets) -> Jet| {
            (
                self.hermite(k, s, |b| (j(b).deriv(0), j(b).deriv(1))),
                self.hermite(k, s, |b| (j(b).deriv(1), j(b).deriv(2))),
            )
        };
        let (a0, a0p) = v(|b| b.a0);
        let (a1, a1p) = v(|b| b.a1);
        let (h0, h0p) = if self.h0_flat {
            (self.hermite(k, s, |b| (b.h0.deriv(0), 0.0)), 0.0)
        } else {
            v(|b| b.h0)
        };
        Ok(BoundaryPoint {
            a0,
            a0p,
            a1,
            a1p,
            h0,
            h0p,
        })
    }

    fn scalar(&self, r: f64, j: fn(&BoundaryJets) -> Jet) -> Result<f64> {
        let (k, s) = self.locate(r)?;
        Ok(self.hermite(k, s, |b| (j(b).deriv(0), j(b).deriv(1))))
    }

    pub fn x_bar(&self, r: f64) -> Result<f64> {
        self.scalar(r, |b| b.x_bar)
    }

    pub fn y_bar(&self, r: f64) -> Result<f64> {
        self.scalar(r, |b| b.y_bar)
    }

    pub fn s0(&self, r: f64) -> Result<f64> {
        self.scalar(r, |b| b.s0)
    }

    pub fn b0(&self, r: f64) -> Result<f64> {
        self.scalar(r, |b| b.b0)
    }

    /// Sample maxima of `|f| + |f'| + |f''| + |f'''|` for `a0`, `a1`, `H0`.
    pub fn c3_norms(&self) -> [f64; 3] {
        let norm = |j: fn(&BoundaryJets) -> Jet| {
            self.samples
                .iter()
                .map(|b| {
                    let jet = j(b);
                    (0..=3)
                        .map(|d| {
                            let v = jet.deriv(d);
                            if v.is_finite() {
                                v.abs()
                            } else {
                                0.0
                            }
                        })
                        .sum::<f64>()
                })
                .fold(0.0, f64::max)
        };
        [norm(|b| b.a0), norm(|b| b.a1), norm(|b| b.h0)]
    }
}
