//! Classical sonic-supersonic solutions of the two-dimensional steady full
//! Euler equations near a prescribed sonic curve.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`boundary`] validates sonic-curve data and derives the boundary values
//!    of the flow angle, entropy, Bernoulli function and the auxiliary
//!    quantities `a0`, `a1`, `H0` on the partial hodograph line `t = 0`.
//! 2. [`hodograph`] solves the singular first-order system for the error
//!    variables `(U, V, W)` on a shrinking domain `0 <= t <= delta` by Picard
//!    iteration along characteristics, measured in a `1/t^2` weighted metric.
//! 3. [`inverse`] maps the hodograph solution back to the physical plane and
//!    recovers `(rho, u, v, p)`.
//! 4. [`verify`] evaluates finite-difference residuals of the governing
//!    identities on the output.
//!
//! [`tricomi`] carries the same iteration for the Tricomi equation, whose
//! degenerate Goursat problem has closed-form polynomial solutions.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std`
//! feature. The `parallel` feature (default) maps grid sweeps over a rayon
//! thread pool; results are bitwise identical either way.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod boundary;
pub mod cases;
pub mod error;
pub mod gas;
pub mod grid;
pub mod hodograph;
pub mod inverse;
pub mod iteration;
pub mod jet;
pub mod numerics;
pub mod tricomi;
pub mod verify;

mod math;
mod par;

pub use boundary::{
    BoundaryFunction, DerivedBoundary, HodographBoundary, SonicBoundaryData, ValidationReport,
};
pub use error::{Error, Result};
pub use gas::GasConstants;
pub use grid::{FieldTriple, LateralCurve, ShearedGrid};
pub use hodograph::{SolverSettings, Solution};
pub use inverse::PhysicalSolution;
pub use iteration::{weighted_distance, IterationReport};
pub use jet::Jet;
pub use tricomi::{TricomiField, TricomiProblem};
