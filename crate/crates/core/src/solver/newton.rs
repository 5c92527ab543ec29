//! Damped Newton iteration for `α²Δu + u − u³ = 0` with zero Neumann data.
//!
//! The iterate is carried as `u = U + δ` with the initial field `U` frozen,
//! so that the residual of the small correction `δ` is evaluated without
//! cancellation in the finely resolved cells near the origin.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, SymbolicSparseColMat};
use faer::MatMut;
use serde::{Deserialize, Serialize};

use super::diagnostics::energy;
use super::grid::MeridianGrid;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::MeridianField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NewtonConfig {
    /// Stop when the max-norm residual drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest step fraction tried by the line search.
    pub min_damping: f64,
    /// Required cells per layer width `α√2`.
    pub points_per_width: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 15,
            min_damping: 1.0 / 1024.0,
            points_per_width: 8.0,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::Precondition(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Precondition("max_iter must be at least 1".into()));
        }
        if !(self.min_damping > 0.0 && self.min_damping <= 1.0) {
            return Err(Error::Precondition(format!("min_damping must lie in (0, 1], got {}", self.min_damping)));
        }
        if !(self.points_per_width >= 8.0) {
            return Err(Error::Precondition(format!(
                "points_per_width must be at least 8, got {}",
                self.points_per_width
            )));
        }
        Ok(())
    }
}

/// Grid resolution `n` meeting the layer-resolution rule for `α`.
pub fn resolution_for(a: f64, b: f64, alpha: f64, points_per_width: f64) -> usize {
    let n = (points_per_width * a.max(b) / (alpha * std::f64::consts::SQRT_2)).ceil();
    (n as usize).max(32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub alpha: f64,
    pub n_xi: usize,
    pub n_phi: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Final max-norm residual.
    pub residual: f64,
    pub residual_history: Vec<f64>,
    pub energy: f64,
    /// Energy of each iterate, logged for inspection.
    pub energy_history: Vec<f64>,
    /// Hausdorff distance of the zero level set to the placed catenoid,
    /// filled in when a placement is known.
    pub interface_distance: Option<f64>,
    /// `max |u − U|` against the initial field.
    pub sup_distance: f64,
    /// `‖u − U‖_{H¹(Ω)}`.
    pub h1_distance: f64,
    pub max_abs: f64,
}

struct Jacobian {
    symbolic: SymbolicSparseColMat<usize>,
    lu_symbolic: SymbolicLu<usize>,
    /// CSC position of each stencil entry and of each diagonal entry.
    offdiag_pos: Vec<usize>,
    diag_pos: Vec<usize>,
    nnz: usize,
}

impl Jacobian {
    fn new(grid: &MeridianGrid) -> Result<Self> {
        let n = grid.len();
        let lap = &grid.lap;
        let m = lap.col.len();
        // (column, row, tag); tags below m are stencil entries.
        let mut entries: Vec<(usize, usize, usize)> = Vec::with_capacity(m + n);
        for i in 0..n {
            for k in lap.row_ptr[i]..lap.row_ptr[i + 1] {
                entries.push((lap.col[k], i, k));
            }
            entries.push((i, i, m + i));
        }
        entries.sort_unstable();
        let mut col_ptr = vec![0usize; n + 1];
        let mut row_idx = Vec::with_capacity(entries.len());
        let mut offdiag_pos = vec![0usize; m];
        let mut diag_pos = vec![0usize; n];
        for (pos, &(c, r, tag)) in entries.iter().enumerate() {
            col_ptr[c + 1] += 1;
            row_idx.push(r);
            if tag < m {
                offdiag_pos[tag] = pos;
            } else {
                diag_pos[tag - m] = pos;
            }
        }
        for c in 0..n {
            col_ptr[c + 1] += col_ptr[c];
        }
        let nnz = row_idx.len();
        let symbolic = SymbolicSparseColMat::new_checked(n, n, col_ptr, None, row_idx);
        let lu_symbolic = SymbolicLu::try_new(symbolic.as_ref())
            .map_err(|e| Error::LinearSolve(format!("symbolic factorisation failed: {e:?}")))?;
        Ok(Self { symbolic, lu_symbolic, offdiag_pos, diag_pos, nnz })
    }

    /// Factors `scale·L + diag(d)`.
    fn factor(&self, grid: &MeridianGrid, scale: f64, d: &[f64]) -> Result<Lu<usize, f64>> {
        let lap = &grid.lap;
        let mut val = vec![0.0; self.nnz];
        for (k, &p) in self.offdiag_pos.iter().enumerate() {
            val[p] = scale * lap.val[k];
        }
        for (i, &p) in self.diag_pos.iter().enumerate() {
            val[p] = scale * lap.diagonal(i) + d[i];
        }
        let mat = SparseColMat::new(self.symbolic.clone(), val);
        Lu::try_new_with_symbolic(self.lu_symbolic.clone(), mat.as_ref())
            .map_err(|e| Error::LinearSolve(format!("numeric factorisation failed: {e:?}")))
    }
}

fn residual(grid: &MeridianGrid, alpha: f64, base: &[f64], lap_base: &[f64], delta: &[f64], exec: Exec) -> Vec<f64> {
    let a2 = alpha * alpha;
    exec.map_range(grid.len(), |i| {
        let u = base[i] + delta[i];
        a2 * (lap_base[i] + grid.lap.apply_at(delta, i)) + u * (1.0 - u) * (1.0 + u)
    })
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// Solves the screened problem `−Δ_h u + μu = f` with zero Neumann data.
pub fn solve_screened(grid: &MeridianGrid, mu: f64, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != grid.len() {
        return Err(Error::Grid(format!("right-hand side has {} values for {} cells", f.len(), grid.len())));
    }
    let jac = Jacobian::new(grid)?;
    let lu = jac.factor(grid, -1.0, &vec![mu; grid.len()])?;
    let mut u = f.to_vec();
    lu.solve_in_place(MatMut::from_column_major_slice_mut(&mut u, grid.len(), 1));
    Ok(u)
}

/// Discrete residual `α²Δ_h u + u − u³` of a field on the grid.
pub fn discrete_residual(grid: &MeridianGrid, alpha: f64, u: &[f64], exec: Exec) -> Vec<f64> {
    let zero = vec![0.0; u.len()];
    let lap = grid.laplacian(u, exec);
    residual(grid, alpha, u, &lap, &zero, exec)
}

pub fn newton_solve(
    grid: &MeridianGrid,
    alpha: f64,
    initial: &[f64],
    config: &NewtonConfig,
    exec: Exec,
) -> Result<(MeridianField, SolveReport)> {
    config.validate()?;
    if initial.len() != grid.len() {
        return Err(Error::Grid(format!(
            "initial field has {} values for {} cells",
            initial.len(),
            grid.len()
        )));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Precondition(format!("α must be positive, got {alpha}")));
    }
    let required = alpha * std::f64::consts::SQRT_2 / config.points_per_width;
    if grid.max_spacing > required {
        return Err(Error::UnderResolved { spacing: grid.max_spacing, required });
    }

    let base = initial.to_vec();
    let lap_base = grid.laplacian(&base, exec);
    let mut delta = vec![0.0; base.len()];
    let mut res = residual(grid, alpha, &base, &lap_base, &delta, exec);
    let mut norm = max_norm(&res);
    let mut history = vec![norm];
    let current = |delta: &[f64]| -> Vec<f64> { base.iter().zip(delta).map(|(b, d)| b + d).collect() };
    let mut energy_history = vec![energy(grid, &base, alpha)];
    let mut jacobian: Option<Jacobian> = None;
    let mut iterations = 0;

    while !(norm < config.tol) {
        if !norm.is_finite() || iterations >= config.max_iter {
            return Err(Error::Stagnation { history });
        }
        let jac = match &jacobian {
            Some(j) => j,
            None => jacobian.insert(Jacobian::new(grid)?),
        };
        let d: Vec<f64> = current(&delta).iter().map(|u| 1.0 - 3.0 * u * u).collect();
        let lu = jac.factor(grid, alpha * alpha, &d)?;
        let mut step: Vec<f64> = res.iter().map(|r| -r).collect();
        lu.solve_in_place(MatMut::from_column_major_slice_mut(&mut step, grid.len(), 1));

        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = delta.iter().zip(&step).map(|(d, s)| d + lambda * s).collect();
            let trial_res = residual(grid, alpha, &base, &lap_base, &trial, exec);
            let trial_norm = max_norm(&trial_res);
            if trial_norm < norm {
                delta = trial;
                res = trial_res;
                norm = trial_norm;
                break;
            }
            lambda *= 0.5;
            if lambda < config.min_damping {
                history.push(trial_norm);
                return Err(Error::Stagnation { history });
            }
        }
        iterations += 1;
        history.push(norm);
        energy_history.push(energy(grid, &current(&delta), alpha));
    }

    let u = current(&delta);
    let sup_distance = max_norm(&delta);
    let l2: f64 = grid.integrate(&delta.iter().map(|d| d * d).collect::<Vec<_>>());
    let h1_distance = (grid.dirichlet_energy(&delta) + l2).max(0.0).sqrt();
    let report = SolveReport {
        alpha,
        n_xi: grid.n_xi,
        n_phi: grid.n_phi,
        iterations,
        converged: true,
        residual: norm,
        residual_history: history,
        energy: *energy_history.last().unwrap_or(&f64::NAN),
        energy_history,
        interface_distance: None,
        sup_distance,
        h1_distance,
        max_abs: max_norm(&u),
    };
    Ok((grid.field(u), report))
}
