use thiserror::Error;

/// Failures reported by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadrature did not reach tolerance {tol:e} (error estimate {estimate:e}) within {intervals} subintervals")]
    Quadrature {
        tol: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("numerical stability: {0}")]
    NumericalStability(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("point lies on the symmetry axis, azimuth is undefined")]
    AxisAmbiguity,

    #[error("no critical catenoid found: {0}")]
    NoCriticalCatenoid(String),

    #[error("degenerate Robin problem (boundary determinant {det:e})")]
    Degenerate { det: f64 },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("under-resolved grid: spacing {spacing:.3e} exceeds the required {required:.3e}")]
    UnderResolved { spacing: f64, required: f64 },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("Newton iteration stagnated after {} residual evaluations (last {:e})", history.len(), history.last().copied().unwrap_or(f64::NAN))]
    Stagnation { history: Vec<f64> },

    #[error("field does not change sign, no interface to extract")]
    EmptyInterface,
}

pub type Result<T> = std::result::Result<T, Error>;
