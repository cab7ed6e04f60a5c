use crate::error::{Error, Result};
use crate::math;

/// Polytropic gas constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasConstants {
    pub gamma: f64,
    /// `(gamma - 1) / 2`
    pub kappa: f64,
    /// `(kappa + 1)^(-(kappa + 1) / (2 kappa))`, the value of `G` on the sonic line.
    pub g0: f64,
}

impl GasConstants {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidInput(alloc::format!(
                "gamma must be a finite number greater than 1, got {gamma}"
            )));
        }
        let kappa = 0.5 * (gamma - 1.0);
        let g0 = math::powf(kappa + 1.0, -(kappa + 1.0) / (2.0 * kappa));
        Ok(GasConstants { gamma, kappa, g0 })
    }

    /// Exponent `(kappa + 1) / (2 kappa)` of `G`.
    pub fn g_exponent(&self) -> f64 {
        (self.kappa + 1.0) / (2.0 * self.kappa)
    }

    /// `F(t) = (1 - t^2)(kappa + 1 - t^2)`.
    pub fn f_of_t(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.f(t))
    }

    /// `G(t) = ((1 - t^2) / (kappa + 1 - t^2))^((kappa + 1) / (2 kappa))`.
    pub fn g_of_t(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.g(t))
    }

    #[inline]
    pub(crate) fn f(&self, t: f64) -> f64 {
        let s = 1.0 - t * t;
        s * (self.kappa + s)
    }

    #[inline]
    pub(crate) fn g(&self, t: f64) -> f64 {
        let s = 1.0 - t * t;
        math::powf(s / (self.kappa + s), self.g_exponent())
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::DomainError { what: "t", value: t });
    }
    Ok(())
}
