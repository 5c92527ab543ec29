//! Axisymmetric Newton solver for `α²Δu + u − u³ = 0` in the container
//! with homogeneous Neumann data, and the diagnostics used to compare its
//! solutions with the constructed approximation.

mod continuation;
mod diagnostics;
mod grid;
mod newton;

pub use continuation::{continuation_study, ContinuationConfig, ContinuationRow, ContinuationTable, Seed};
pub use diagnostics::{
    catenoid_polyline, energy, hausdorff, hausdorff_to_catenoid, zero_level_set, Interface, CATENOID_SAMPLES,
};
pub use grid::{build_grid, build_grid_with, MeridianGrid};
pub use newton::{discrete_residual, newton_solve, resolution_for, solve_screened, NewtonConfig, SolveReport};
