//! Truncated Taylor series ("jets") in one variable.
//!
//! A [`Jet`] stores normalized coefficients `c[k] = f^(k)(x0) / k!` for
//! `k <= ORDER`. Arithmetic on jets propagates exact derivatives through
//! closed-form boundary formulas, so the boundary module never has to
//! difference a derived quantity numerically.
//!
//! Every jet also carries `order`, the highest coefficient that is still
//! meaningful. Differentiating lowers it by one; combining two jets keeps the
//! smaller of the two. Coefficients above `order` are zero.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

/// Highest derivative order carried by a jet.
pub const ORDER: usize = 4;
const N: usize = ORDER + 1;

const FACT: [f64; N] = [1.0, 1.0, 2.0, 6.0, 24.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; N],
    order: usize,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Jet { c, order: ORDER }
    }

    /// The independent variable itself, expanded about `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = x0;
        c[1] = 1.0;
        Jet { c, order: ORDER }
    }

    /// Build from plain derivatives `[f, f', f'', ...]`. Missing entries
    /// lower the validity order.
    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut c = [0.0; N];
        let n = d.len().min(N);
        for (k, ck) in c.iter_mut().enumerate().take(n) {
            *ck = d[k] / FACT[k];
        }
        Jet {
            c,
            order: n.saturating_sub(1),
        }
    }

    pub fn from_coeffs(c: [f64; N], order: usize) -> Self {
        Jet { c, order: order.min(ORDER) }.truncated()
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> [f64; N] {
        self.c
    }

    /// `k`-th derivative at the expansion point. Returns NaN past `order`.
    pub fn deriv(&self, k: usize) -> f64 {
        if k > self.order {
            f64::NAN
        } else {
            self.c[k] * FACT[k]
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = self.order.min(order);
        self.truncated()
    }

    fn truncated(mut self) -> Self {
        for k in self.order + 1..N {
            self.c[k] = 0.0;
        }
        self
    }

    /// Jet of the derivative.
    pub fn derivative(&self) -> Self {
        let mut c = [0.0; N];
        for k in 0..ORDER {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Jet {
            c,
            order: self.order.saturating_sub(1),
        }
        .truncated()
    }

    /// Jet of an antiderivative with value `c0` at the expansion point.
    pub fn integral(&self, c0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = c0;
        for k in 1..N {
            c[k] = self.c[k - 1] / k as f64;
        }
        Jet {
            c,
            order: (self.order + 1).min(ORDER),
        }
        .truncated()
    }

    /// Compose an outer scalar function with this jet, given the outer
    /// function's plain derivatives `[g(v), g'(v), ...]` at `v = self.value()`.
    pub fn compose_with(&self, outer: [f64; N]) -> Self {
        let mut h = *self;
        h.c[0] = 0.0;
        let mut out = [0.0; N];
        out[0] = outer[0];
        let mut pow = h;
        for k in 1..N {
            let scale = outer[k] / FACT[k];
            for (o, p) in out.iter_mut().zip(pow.c.iter()) {
                *o += scale * p;
            }
            pow = pow * h;
        }
        Jet { c: out, order: self.order }.truncated()
    }

    /// Compose with an inner jet: `self(inner)`. The inner jet's value must
    /// coincide with this jet's expansion point.
    pub fn compose(&self, inner: &Jet) -> Self {
        let mut h = *inner;
        h.c[0] = 0.0;
        let mut out = [0.0; N];
        out[0] = self.c[0];
        let mut pow = h;
        for k in 1..N {
            for (o, p) in out.iter_mut().zip(pow.c.iter()) {
                *o += self.c[k] * p;
            }
            pow = pow * h;
        }
        Jet {
            c: out,
            order: self.order.min(inner.order),
        }
        .truncated()
    }

    /// Series reversion: if `self` expands `f` about `x0`, return the jet of
    /// `f^{-1}` about `f(x0)`, with value `x0`. Requires `f'(x0) != 0`.
    pub fn revert(&self, x0: f64) -> Option<Self> {
        let c1 = self.c[1];
        if c1 == 0.0 || !c1.is_finite() || self.order == 0 {
            return None;
        }
        // Solve h = (e - (c2 h^2 + c3 h^3 + ...)) / c1 by fixed point; each
        // pass fixes one more coefficient.
        let e = Jet::variable(0.0);
        let mut nonlinear = *self;
        nonlinear.c[0] = 0.0;
        nonlinear.c[1] = 0.0;
        let mut h = e * (1.0 / c1);
        for _ in 1..ORDER {
            let rest = nonlinear.compose(&h);
            h = (e - rest) * (1.0 / c1);
        }
        h.c[0] = x0;
        h.order = self.order;
        Some(h.truncated())
    }

    pub fn recip(&self) -> Self {
        let v = self.c[0];
        let mut d = [0.0; N];
        let mut p = 1.0 / v;
        let mut sign = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = sign * FACT[k] * p;
            p /= v;
            sign = -sign;
        }
        self.compose_with(d)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (math::sin(self.c[0]), math::cos(self.c[0]));
        self.compose_with([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (math::sin(self.c[0]), math::cos(self.c[0]));
        self.compose_with([c, -s, -c, s, c])
    }

    pub fn exp(&self) -> Self {
        let e = math::exp(self.c[0]);
        self.compose_with([e; N])
    }

    pub fn ln(&self) -> Self {
        let v = self.c[0];
        self.compose_with([
            math::ln(v),
            1.0 / v,
            -1.0 / (v * v),
            2.0 / (v * v * v),
            -6.0 / (v * v * v * v),
        ])
    }

    pub fn powf(&self, p: f64) -> Self {
        let v = self.c[0];
        let mut d = [0.0; N];
        let mut coef = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = coef * math::powf(v, p - k as f64);
            coef *= p - k as f64;
        }
        self.compose_with(d)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// Two-argument arctangent of `(y, x)` with the branch fixed by the
    /// value at the expansion point.
    pub fn atan2(y: &Jet, x: &Jet) -> Self {
        let base = math::atan2(y.c[0], x.c[0]);
        let rate = (*x * y.derivative() - *y * x.derivative()) / (*x * *x + *y * *y);
        rate.integral(base).with_order(x.order.min(y.order))
    }

    /// Evaluate the truncated polynomial at offset `h` from the expansion point.
    pub fn eval_offset(&self, h: f64) -> f64 {
        let mut acc = 0.0;
        for k in (0..=self.order).rev() {
            acc = acc * h + self.c[k];
        }
        acc
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
        Jet {
            c,
            order: self.order.min(o.order),
        }
        .truncated()
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut c = [0.0; N];
        for (i, a) in self.c.iter().enumerate().take(order + 1) {
            for (j, b) in o.c.iter().enumerate().take(order + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Jet { c, order }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.c[0] += o;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, o: f64) -> Jet {
        self.c[0] -= o;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, o: f64) -> Jet {
        for a in self.c.iter_mut() {
            *a *= o;
        }
        self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        o * self
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        o + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        (-o) + self
    }
}
