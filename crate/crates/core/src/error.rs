use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Characteristic family used when tracing paths backward to `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    First,
    Second,
    Third,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::First, Family::Second, Family::Third];

    pub fn index(self) -> usize {
        match self {
            Family::First => 0,
            Family::Second => 1,
            Family::Third => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda{}", self.index() + 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Invalid constructor or configuration input.
    InvalidInput(String),
    /// `gamma * p != rho * q^2` somewhere on the curve.
    NonSonicData { x: f64, relative_error: f64 },
    /// Density or pressure not positive on the curve.
    PositivityViolation { x: f64, quantity: &'static str, value: f64 },
    /// The boundary flow angle is not strictly decreasing.
    MonotonicityViolation { x: f64, slope: f64 },
    /// One of the two trigonometric transversality conditions fails.
    GeometryViolation { x: f64, condition: &'static str, value: f64 },
    /// Boundary pressure increases somewhere along the curve.
    PressureViolation { x: f64, slope: f64 },
    /// Argument outside the domain of a formula.
    DomainError { what: &'static str, value: f64 },
    /// Monotone inversion of the flow angle failed.
    InversionFailure { r: f64 },
    /// `a0` or `a1` is not bounded away from zero.
    MarginFailure { eps0: f64 },
    /// A denominator of the hodograph system vanished.
    SingularDenominator { term: &'static str, t: f64, r: f64 },
    /// A characteristic left the lateral boundaries of the domain.
    DomainExit { family: Option<Family>, t: f64, r: f64 },
    /// Two field arrays live on different grids.
    GridMismatch,
    /// The fixed-point iteration failed to contract within its retry budget.
    NoContraction { delta: f64, sweeps: usize, last_ratio: f64 },
    /// Recovered density, pressure or sound speed not positive.
    NonPositiveState { t: f64, r: f64, quantity: &'static str },
    /// Query outside the range of a sampled function.
    OutOfRange { x: f64, lo: f64, hi: f64 },
    /// Quadrature called with too few nodes.
    TooFewNodes { got: usize, need: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NonSonicData { x, relative_error } => write!(
                f,
                "boundary data is not sonic at x = {x}: relative error {relative_error:e} in gamma*p = rho*q^2"
            ),
            Error::PositivityViolation { x, quantity, value } => {
                write!(f, "{quantity} = {value} is not positive at x = {x}")
            }
            Error::MonotonicityViolation { x, slope } => write!(
                f,
                "flow angle is not strictly decreasing at x = {x} (theta' = {slope})"
            ),
            Error::GeometryViolation { x, condition, value } => {
                write!(f, "geometry condition {condition} > 0 fails at x = {x} (value {value})")
            }
            Error::PressureViolation { x, slope } => {
                write!(f, "boundary pressure increases at x = {x} (p' = {slope})")
            }
            Error::DomainError { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InversionFailure { r } => {
                write!(f, "flow angle could not be inverted at r = {r}")
            }
            Error::MarginFailure { eps0 } => {
                write!(f, "a0 and a1 are not bounded away from zero (eps0 = {eps0})")
            }
            Error::SingularDenominator { term, t, r } => {
                write!(f, "singular denominator {term} at (t, r) = ({t}, {r})")
            }
            Error::DomainExit { family, t, r } => match family {
                Some(fam) => write!(f, "{fam} characteristic left the domain at (t, r) = ({t}, {r})"),
                None => write!(f, "lateral boundaries cross at t = {t} (r = {r})"),
            },
            Error::GridMismatch => write!(f, "fields live on different grids"),
            Error::NoContraction { delta, sweeps, last_ratio } => write!(
                f,
                "iteration did not contract (delta = {delta}, {sweeps} sweeps, last ratio {last_ratio})"
            ),
            Error::NonPositiveState { t, r, quantity } => {
                write!(f, "recovered {quantity} is not positive at (t, r) = ({t}, {r})")
            }
            Error::OutOfRange { x, lo, hi } => write!(f, "query {x} outside [{lo}, {hi}]"),
            Error::TooFewNodes { got, need } => {
                write!(f, "need at least {need} nodes, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}
