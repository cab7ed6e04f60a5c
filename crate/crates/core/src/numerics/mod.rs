//! Shared numerical kernels: interpolation, quadrature, ODE stepping,
//! monotone inversion and finite-difference tables.

pub mod fd;
pub mod invert;
pub mod ode;
pub mod quad;
pub mod spline;

pub use fd::derivative_table;
pub use invert::invert_monotone;
pub use ode::rk4_step;
pub use quad::{simpson_open, simpson_panel};
pub use spline::CubicSpline;
