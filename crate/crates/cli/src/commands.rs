use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use phase_catenoid::approx::{build_approximation, residual_orders, ApproximationSpec, OrderStudy};
use phase_catenoid::domain::{critical_placement, CriticalPlacement};
use phase_catenoid::jacobi::{nondeg_determinant, solve_reduced_h, spectrum, RobinSpectralReport, ZERO_TOLERANCE};
use phase_catenoid::profile::{compute_constants, solve_psi1, HeteroclinicProfile, ProfileConstants};
use phase_catenoid::solver::{continuation_study, ContinuationConfig, ContinuationTable, NewtonConfig};
use phase_catenoid::{Error, Exec};
use serde::Serialize;

use crate::config::{DomainSpec, RunConfig};

/// Failure of a subcommand after the configuration was accepted; exit code 1.
#[derive(Debug)]
pub struct RunError(pub String);

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError(format!("output: {e}"))
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError(format!("output: {e}"))
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError(format!("output: {e}"))
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), RunError> {
    fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn csv_writer(dir: &Path, name: &str) -> Result<csv::Writer<File>, RunError> {
    fs::create_dir_all(dir)?;
    Ok(csv::Writer::from_path(dir.join(name))?)
}

#[derive(Serialize)]
struct Psi1Summary {
    t_max: f64,
    slope_at_origin: f64,
    ode_residual: f64,
    weighted_sup: f64,
}

#[derive(Serialize)]
struct ConstantsOut {
    #[serde(flatten)]
    constants: ProfileConstants,
    quadrature_tolerance: f64,
    psi1: Psi1Summary,
}

#[derive(Serialize)]
struct ProfileRow {
    t: f64,
    w: f64,
    dw: f64,
    psi1: f64,
    dpsi1: f64,
}

/// Writes `constants.json` and `profile.csv`.
pub fn cmd_profile(cfg: &RunConfig) -> Result<(), RunError> {
    let constants = compute_constants(cfg.tolerances.quadrature)?;
    let psi = solve_psi1(cfg.t_max, 1.0)?;
    let out = ConstantsOut {
        constants,
        quadrature_tolerance: cfg.tolerances.quadrature,
        psi1: Psi1Summary {
            t_max: cfg.t_max,
            slope_at_origin: psi.eval(0.0).1,
            ode_residual: psi.ode_residual(8.0),
            weighted_sup: psi.weighted_sup(0, 1.0),
        },
    };
    write_json(&cfg.out_dir, "constants.json", &out)?;
    let p = HeteroclinicProfile;
    let mut w = csv_writer(&cfg.out_dir, "profile.csv")?;
    for i in 0..psi.t.len() {
        let t = psi.t[i];
        w.serialize(ProfileRow {
            t,
            w: p.w(t),
            dw: p.dw(t),
            psi1: psi.psi[i],
            dpsi1: psi.dpsi[i],
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PlaceOut {
    domain: DomainSpec,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    placement: Option<CriticalPlacement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    determinant: Option<f64>,
    /// Verdict for axisymmetric variations.
    #[serde(skip_serializing_if = "Option::is_none")]
    nondegenerate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<RobinSpectralReport>,
}

/// Writes `place.json`. A container without a critical catenoid is a
/// documented outcome, reported with `"found": false`.
pub fn cmd_place(cfg: &RunConfig) -> Result<(), RunError> {
    let domain = cfg.domain.build().map_err(|e| RunError(e.0))?;
    let mut out = PlaceOut {
        domain: cfg.domain,
        found: false,
        reason: None,
        placement: None,
        determinant: None,
        nondegenerate: None,
        spectrum: None,
    };
    match critical_placement(&domain) {
        Ok(p) => {
            let (k1, k2) = p.kappa();
            let det = nondeg_determinant(-p.y_bar, p.y_bar, k1, k2);
            // nondegeneracy among axisymmetric variations; the full report may
            // contain the mode-1 kernel of rotations of a ball
            let axial = spectrum(-p.y_bar, p.y_bar, k1, k2, &[0], cfg.eigenvalues)?;
            let report = spectrum(-p.y_bar, p.y_bar, k1, k2, &cfg.modes, cfg.eigenvalues)?;
            out.found = true;
            out.placement = Some(p);
            out.determinant = Some(det);
            out.nondegenerate = Some(axial.nondegenerate && det.abs() > ZERO_TOLERANCE);
            out.spectrum = Some(report);
        }
        Err(e @ Error::NoCriticalCatenoid(_)) => {
            eprintln!("none found: {e}");
            out.reason = Some(e.to_string());
        }
        Err(e) => return Err(e.into()),
    }
    write_json(&cfg.out_dir, "place.json", &out)
}

#[derive(Serialize)]
struct SlopesOut {
    domain: DomainSpec,
    with_psi1: bool,
    with_reduced_h: bool,
    #[serde(flatten)]
    study: OrderStudy,
}

#[derive(Serialize)]
struct ResidualRow {
    alpha: f64,
    interior_sup: f64,
    interior_weighted_sup: f64,
    collar_sup: f64,
    blend_sup: f64,
    far_sup: f64,
    neumann_sup: f64,
    neumann_projected: f64,
}

/// Writes `slopes.json` and `residuals.csv`.
pub fn cmd_residual(cfg: &RunConfig, exec: Exec) -> Result<(), RunError> {
    let domain = cfg.domain.build().map_err(|e| RunError(e.0))?;
    let alphas = cfg.alphas.clone().unwrap_or_else(|| vec![0.16, 0.08, 0.04]);
    let placement = critical_placement(&domain)?;
    let constants = compute_constants(cfg.tolerances.quadrature)?;
    let make = |a: f64| {
        let mut spec = ApproximationSpec::new(a, placement).with_psi1(cfg.with_psi1);
        if cfg.with_reduced_h {
            spec = spec.with_h(solve_reduced_h(&placement, a, &constants)?);
        }
        build_approximation(spec)
    };
    let study = residual_orders(&domain, &alphas, make, exec)?;
    let mut w = csv_writer(&cfg.out_dir, "residuals.csv")?;
    for r in &study.reports {
        w.serialize(ResidualRow {
            alpha: r.alpha,
            interior_sup: r.interior_sup,
            interior_weighted_sup: r.interior_weighted_sup,
            collar_sup: r.collar_sup,
            blend_sup: r.blend_sup,
            far_sup: r.far_sup,
            neumann_sup: r.neumann.sup,
            neumann_projected: r.neumann.projected,
        })?;
    }
    w.flush()?;
    write_json(
        &cfg.out_dir,
        "slopes.json",
        &SlopesOut {
            domain: cfg.domain,
            with_psi1: cfg.with_psi1,
            with_reduced_h: cfg.with_reduced_h,
            study,
        },
    )
}

#[derive(Serialize)]
struct ReportOut {
    domain: DomainSpec,
    config: ContinuationConfig,
    #[serde(flatten)]
    table: ContinuationTable,
}

#[derive(Serialize)]
struct SolveRow {
    alpha: f64,
    n: usize,
    converged: bool,
    iterations: Option<usize>,
    residual: Option<f64>,
    energy: Option<f64>,
    energy_gap: Option<f64>,
    sup_distance: Option<f64>,
    h1_distance: Option<f64>,
    interface_distance: Option<f64>,
}

/// Writes `report.json` and `solve.csv`; fails with exit code 1 when a
/// member of the continuation did not converge.
pub fn cmd_solve(cfg: &RunConfig, exec: Exec) -> Result<(), RunError> {
    let domain = cfg.domain.build().map_err(|e| RunError(e.0))?;
    let mut alphas = cfg.alphas.clone().unwrap_or_else(|| vec![0.2, 0.1, 0.05]);
    alphas.sort_by(|a, b| b.total_cmp(a));
    alphas.dedup();
    let config = ContinuationConfig {
        newton: NewtonConfig {
            tol: cfg.tolerances.newton,
            max_iter: cfg.tolerances.max_iter,
            min_damping: cfg.tolerances.min_damping,
            points_per_width: cfg.points_per_width,
        },
        with_psi1: cfg.with_psi1,
        with_reduced_h: cfg.with_reduced_h,
        seed: cfg.seed,
    };
    let table = continuation_study(&domain, &alphas, &config, exec)?;
    let mut w = csv_writer(&cfg.out_dir, "solve.csv")?;
    for row in &table.rows {
        let r = row.report.as_ref();
        w.serialize(SolveRow {
            alpha: row.alpha,
            n: row.n,
            converged: r.is_some_and(|r| r.converged),
            iterations: r.map(|r| r.iterations),
            residual: r.map(|r| r.residual),
            energy: r.map(|r| r.energy),
            energy_gap: row.energy_gap,
            sup_distance: r.map(|r| r.sup_distance),
            h1_distance: r.map(|r| r.h1_distance),
            interface_distance: r.and_then(|r| r.interface_distance),
        })?;
    }
    w.flush()?;
    let failures: Vec<String> = table
        .rows
        .iter()
        .filter_map(|r| r.failure.as_ref().map(|f| format!("α = {}: {f}", r.alpha)))
        .collect();
    write_json(
        &cfg.out_dir,
        "report.json",
        &ReportOut {
            domain: cfg.domain,
            config,
            table,
        },
    )?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(RunError(failures.join("; ")))
    }
}
