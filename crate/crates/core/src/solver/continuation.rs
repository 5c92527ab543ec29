//! Solves over a decreasing list of `α` on the critical catenoid of a
//! container, collecting energies and interface distances.

use serde::{Deserialize, Serialize};

use super::diagnostics::{hausdorff_to_catenoid, zero_level_set};
use super::grid::{build_grid_with, MeridianGrid};
use super::newton::{discrete_residual, newton_solve, resolution_for, NewtonConfig, SolveReport};
use crate::approx::{build_approximation, ApproximationSpec};
use crate::catenoid::area;
use crate::domain::{critical_placement, AxisymDomain};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::jacobi::solve_reduced_h;
use crate::profile::compute_constants;

/// Initial guess of each member solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seed {
    /// The constructed approximation at the member's own `α`.
    Approximation,
    /// The previous member's solution, interpolated onto the new grid.
    Previous,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationConfig {
    pub newton: NewtonConfig,
    pub with_psi1: bool,
    pub with_reduced_h: bool,
    pub seed: Seed,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self {
            newton: NewtonConfig::default(),
            with_psi1: true,
            with_reduced_h: true,
            seed: Seed::Approximation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationRow {
    pub alpha: f64,
    pub n: usize,
    /// Discrete residual of the initial guess.
    pub initial_residual: f64,
    pub report: Option<SolveReport>,
    pub failure: Option<String>,
    pub energy_gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuationTable {
    /// `σ₀ · Area(M ∩ Ω)`.
    pub limit_energy: f64,
    pub rows: Vec<ContinuationRow>,
    pub all_converged: bool,
    pub energy_gap_decreasing: bool,
    pub distance_decreasing: bool,
    pub sup_distance_decreasing: bool,
}

fn strictly_decreasing(v: &[Option<f64>]) -> bool {
    v.iter().all(Option::is_some) && v.windows(2).all(|w| w[1].unwrap() < w[0].unwrap())
}

pub fn continuation_study(
    domain: &AxisymDomain,
    alphas: &[f64],
    config: &ContinuationConfig,
    exec: Exec,
) -> Result<ContinuationTable> {
    if alphas.is_empty() || alphas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Precondition("α list must be non-empty and strictly decreasing".into()));
    }
    config.newton.validate()?;
    let placement = critical_placement(domain)?;
    let constants = compute_constants(1e-13)?;
    let limit_energy = constants.sigma0 * area(placement.c, -placement.y_bar, placement.y_bar);

    let member = |alpha: f64, previous: Option<&(MeridianGrid, Vec<f64>)>| -> (ContinuationRow, Option<(MeridianGrid, Vec<f64>)>) {
        let n = resolution_for(domain.a, domain.b, alpha, config.newton.points_per_width);
        let mut row = ContinuationRow {
            alpha,
            n,
            initial_residual: f64::NAN,
            report: None,
            failure: None,
            energy_gap: None,
        };
        let outcome = (|| -> Result<(MeridianGrid, Vec<f64>, f64, SolveReport)> {
            let grid = build_grid_with(domain, n, exec)?;
            let initial = match (previous, config.seed) {
                (Some((g, u)), Seed::Previous) => grid.sample(|r, x3| g.interpolate(u, r, x3), exec),
                _ => {
                    let mut spec = ApproximationSpec::new(alpha, placement).with_psi1(config.with_psi1);
                    if config.with_reduced_h {
                        spec = spec.with_h(solve_reduced_h(&placement, alpha, &constants)?);
                    }
                    let approx = build_approximation(spec)?;
                    grid.sample(|r, x3| approx.value(r, x3), exec)
                }
            };
            let r0 = discrete_residual(&grid, alpha, &initial, exec).iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let (field, mut report) = newton_solve(&grid, alpha, &initial, &config.newton, exec)?;
            let interface = zero_level_set(&grid, &field.values)?;
            report.interface_distance = Some(hausdorff_to_catenoid(&interface, &placement));
            Ok((grid, field.values, r0, report))
        })();
        match outcome {
            Ok((grid, u, r0, report)) => {
                row.initial_residual = r0;
                row.energy_gap = Some((report.energy - limit_energy).abs());
                row.report = Some(report);
                (row, Some((grid, u)))
            }
            Err(e) => {
                row.failure = Some(e.to_string());
                (row, None)
            }
        }
    };

    let rows: Vec<ContinuationRow> = match config.seed {
        // members are independent and may run concurrently
        Seed::Approximation => exec.map(alphas, |&a| member(a, None).0),
        Seed::Previous => {
            let mut rows = Vec::with_capacity(alphas.len());
            let mut previous = None;
            for &alpha in alphas {
                let (row, next) = member(alpha, previous.as_ref());
                rows.push(row);
                previous = next;
            }
            rows
        }
    };

    let all_converged = rows.iter().all(|r| r.report.is_some());
    let gaps: Vec<Option<f64>> = rows.iter().map(|r| r.energy_gap).collect();
    let dists: Vec<Option<f64>> = rows.iter().map(|r| r.report.as_ref().and_then(|s| s.interface_distance)).collect();
    let sups: Vec<Option<f64>> = rows.iter().map(|r| r.report.as_ref().map(|s| s.sup_distance)).collect();
    Ok(ContinuationTable {
        limit_energy,
        all_converged,
        energy_gap_decreasing: strictly_decreasing(&gaps),
        distance_decreasing: strictly_decreasing(&dists),
        sup_distance_decreasing: strictly_decreasing(&sups),
        rows,
    })
}
