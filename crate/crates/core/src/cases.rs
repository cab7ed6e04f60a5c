//! Built-in sonic boundary data used by tests, examples and the CLI.

use alloc::vec;

use crate::boundary::{BoundaryFunction, SonicBoundaryData};
use crate::jet::Jet;

/// `phi(x) = x`, `theta(x) = -x`, `p = 1`, `rho = 1.4`, `q = 1` on `[0, x2]`.
///
/// Sonic for `gamma = 1.4`; admissible while `x2 < pi/4`.
pub fn smoke(x2: f64) -> SonicBoundaryData {
    SonicBoundaryData {
        x1: 0.0,
        x2,
        phi: BoundaryFunction::Poly(vec![0.0, 1.0]),
        rho: BoundaryFunction::constant(1.4),
        u: BoundaryFunction::analytic(|x| x.cos()),
        v: BoundaryFunction::analytic(|x| -(x.sin())),
        p: BoundaryFunction::constant(1.0),
    }
}

/// Smoke geometry with `p = 1 - 0.1 x` and `q = sqrt(p)` on `[0, 0.6]`, so
/// the boundary value of `H` is positive.
pub fn pressure() -> SonicBoundaryData {
    fn q(x: Jet) -> Jet {
        (1.0 - 0.1 * x).sqrt()
    }
    SonicBoundaryData {
        x1: 0.0,
        x2: 0.6,
        phi: BoundaryFunction::Poly(vec![0.0, 1.0]),
        rho: BoundaryFunction::constant(1.4),
        u: BoundaryFunction::analytic(|x| q(x) * x.cos()),
        v: BoundaryFunction::analytic(|x| -(q(x) * x.sin())),
        p: BoundaryFunction::Poly(vec![1.0, -0.1]),
    }
}

/// Purely polynomial sonic data on `[0, 0.3]`: `u = 1 - x`, `v = -x/2`,
/// `rho = 1.4`, `p = u^2 + v^2`, `phi(x) = x`.
pub fn polynomial() -> SonicBoundaryData {
    SonicBoundaryData {
        x1: 0.0,
        x2: 0.3,
        phi: BoundaryFunction::Poly(vec![0.0, 1.0]),
        rho: BoundaryFunction::constant(1.4),
        u: BoundaryFunction::Poly(vec![1.0, -1.0]),
        v: BoundaryFunction::Poly(vec![0.0, -0.5]),
        p: BoundaryFunction::Poly(vec![1.0, -2.0, 1.25]),
    }
}
