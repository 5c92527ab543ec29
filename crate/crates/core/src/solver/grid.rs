//! Cell-centred finite-volume discretisation of the axisymmetric Laplacian
//! on the elliptic-polar grid `r = aξ sin φ`, `x₃ = bξ cos φ`,
//! `(ξ, φ) ∈ (0, 1) × (0, π)`.
//!
//! Fluxes are taken through the four faces of each cell with the full
//! mapped metric (the `ξφ` cross term vanishes for balls). The outer faces
//! `ξ = 1` carry zero flux, which is the homogeneous Neumann condition since
//! the boundary is a level set of `ξ`; the faces on the axis and at the
//! origin carry zero flux because the axisymmetric weight vanishes there.

use serde::Serialize;
use std::f64::consts::PI;

use crate::domain::AxisymDomain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Layout, MeridianField};

#[derive(Clone, Debug, Serialize)]
pub struct MeridianGrid {
    pub a: f64,
    pub b: f64,
    pub n_xi: usize,
    pub n_phi: usize,
    pub d_xi: f64,
    pub d_phi: f64,
    /// Cell centres, index `i * n_phi + j`.
    pub r: Vec<f64>,
    pub x3: Vec<f64>,
    /// Cell volumes including the `2π` azimuthal factor.
    pub weight: Vec<f64>,
    /// Cells adjacent to `ξ = 1`.
    pub boundary: Vec<bool>,
    /// Cells adjacent to the symmetry axis (`φ = 0` or `φ = π`).
    pub axis: Vec<bool>,
    /// Outward unit normal of the container at the boundary faces, zero
    /// for other cells.
    pub normal: Vec<(f64, f64)>,
    /// Largest distance between neighbouring cell centres.
    pub max_spacing: f64,
    #[serde(skip)]
    pub(crate) lap: Stencil,
    #[serde(skip)]
    pub(crate) dirichlet: Vec<(usize, usize, f64)>,
    /// Per cell: prefactor and the `ξ±`, `φ±` neighbours of the central
    /// differences in the cross term of the Dirichlet form.
    #[serde(skip)]
    pub(crate) cross: Vec<(f64, [usize; 4])>,
}

/// Off-diagonal part of the discrete Laplacian in CSR form. The row sums
/// vanish, so `(Lu)_i = Σ_k val[k] (u[col[k]] - u[i])`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Stencil {
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Stencil {
    pub fn apply_at(&self, u: &[f64], i: usize) -> f64 {
        let ui = u[i];
        let mut s = 0.0;
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            s += self.val[k] * (u[self.col[k]] - ui);
        }
        s
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        -self.val[self.row_ptr[i]..self.row_ptr[i + 1]].iter().sum::<f64>()
    }
}

/// Metric coefficients `(W g^{ξξ}, W g^{ξφ}, W g^{φφ})` of the logical
/// coordinates, with the axisymmetric weight `W = r |∂(r, x₃)/∂(ξ, φ)| =
/// a²b ξ² sin φ`.
fn metric(a: f64, b: f64, xi: f64, phi: f64) -> (f64, f64, f64) {
    let (s, c) = phi.sin_cos();
    let gxx = xi * xi * s * (a * a * c * c + b * b * s * s) / b;
    let gxp = -xi * (a * a - b * b) * s * s * c / b;
    let gpp = s * (a * a * s * s + b * b * c * c) / b;
    (gxx, gxp, gpp)
}

pub fn build_grid(domain: &AxisymDomain, n: usize) -> Result<MeridianGrid> {
    build_grid_with(domain, n, Exec::default())
}

pub fn build_grid_with(domain: &AxisymDomain, n: usize, exec: Exec) -> Result<MeridianGrid> {
    if n < 32 {
        return Err(Error::Grid(format!("resolution n = {n} is below the minimum of 32")));
    }
    let (a, b) = (domain.a, domain.b);
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Grid(format!("degenerate mapping Jacobian for semi-axes ({a}, {b})")));
    }
    let n_xi = n;
    let n_phi = (PI * n as f64).ceil() as usize;
    let d_xi = 1.0 / n_xi as f64;
    let d_phi = PI / n_phi as f64;
    let cells = n_xi * n_phi;
    let idx = |i: usize, j: usize| i * n_phi + j;

    let mut r = vec![0.0; cells];
    let mut x3 = vec![0.0; cells];
    let mut weight = vec![0.0; cells];
    let mut boundary = vec![false; cells];
    let mut axis = vec![false; cells];
    let mut normal = vec![(0.0, 0.0); cells];
    for i in 0..n_xi {
        let xi = (i as f64 + 0.5) * d_xi;
        let (xm, xp) = (i as f64 * d_xi, (i + 1) as f64 * d_xi);
        for j in 0..n_phi {
            let phi = (j as f64 + 0.5) * d_phi;
            let k = idx(i, j);
            r[k] = a * xi * phi.sin();
            x3[k] = b * xi * phi.cos();
            let (pm, pp) = (j as f64 * d_phi, (j + 1) as f64 * d_phi);
            weight[k] = 2.0 * PI * a * a * b * (xp.powi(3) - xm.powi(3)) / 3.0 * (pm.cos() - pp.cos());
            axis[k] = j == 0 || j + 1 == n_phi;
            if i + 1 == n_xi {
                boundary[k] = true;
                let (nr, nz) = (phi.sin() / a, phi.cos() / b);
                let m = nr.hypot(nz);
                normal[k] = (nr / m, nz / m);
            }
        }
    }

    // Ghost rule: mirror across the axis in φ, through the origin in ξ,
    // and across the boundary face at ξ = 1.
    let cell = |i: isize, j: isize| -> usize {
        let mut j = j;
        if j < 0 {
            j = -1 - j;
        } else if j >= n_phi as isize {
            j = 2 * n_phi as isize - 1 - j;
        }
        let (i, j) = if i < 0 {
            (-1 - i, n_phi as isize - 1 - j)
        } else if i >= n_xi as isize {
            (2 * n_xi as isize - 1 - i, j)
        } else {
            (i, j)
        };
        idx(i as usize, j as usize)
    };

    // Flux through the face between (i, j) and (i + 1, j), positive in +ξ.
    let xi_flux = |i: usize, j: usize, out: &mut Vec<(usize, f64)>| {
        if i + 1 >= n_xi {
            return;
        }
        let xf = (i + 1) as f64 * d_xi;
        let phi = (j as f64 + 0.5) * d_phi;
        let (gxx, gxp, _) = metric(a, b, xf, phi);
        let (ii, jj) = (i as isize, j as isize);
        let s = gxx * d_phi / d_xi;
        out.push((cell(ii + 1, jj), s));
        out.push((cell(ii, jj), -s));
        if gxp != 0.0 {
            let t = gxp / 4.0;
            out.push((cell(ii, jj + 1), t));
            out.push((cell(ii, jj - 1), -t));
            out.push((cell(ii + 1, jj + 1), t));
            out.push((cell(ii + 1, jj - 1), -t));
        }
    };
    // Flux through the face between (i, j) and (i, j + 1), positive in +φ.
    let phi_flux = |i: usize, j: usize, out: &mut Vec<(usize, f64)>| {
        if j + 1 >= n_phi {
            return;
        }
        let xi = (i as f64 + 0.5) * d_xi;
        let pf = (j + 1) as f64 * d_phi;
        let (_, gxp, gpp) = metric(a, b, xi, pf);
        let (ii, jj) = (i as isize, j as isize);
        let s = gpp * d_xi / d_phi;
        out.push((cell(ii, jj + 1), s));
        out.push((cell(ii, jj), -s));
        if gxp != 0.0 {
            let t = gxp / 4.0;
            out.push((cell(ii + 1, jj), t));
            out.push((cell(ii - 1, jj), -t));
            out.push((cell(ii + 1, jj + 1), t));
            out.push((cell(ii - 1, jj + 1), -t));
        }
    };

    let vol: Vec<f64> = weight.iter().map(|w| w / (2.0 * PI)).collect();
    let rows: Vec<Vec<(usize, f64)>> = exec.map_range(cells, |k| {
        let (i, j) = (k / n_phi, k % n_phi);
        let mut plus = Vec::with_capacity(12);
        let mut minus = Vec::with_capacity(12);
        xi_flux(i, j, &mut plus);
        phi_flux(i, j, &mut plus);
        if i > 0 {
            xi_flux(i - 1, j, &mut minus);
        }
        if j > 0 {
            phi_flux(i, j - 1, &mut minus);
        }
        let mut entries: Vec<(usize, f64)> = plus
            .into_iter()
            .chain(minus.into_iter().map(|(c, v)| (c, -v)))
            .filter(|&(c, _)| c != k)
            .map(|(c, v)| (c, v / vol[k]))
            .collect();
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        merged
    });
    let mut lap = Stencil { row_ptr: Vec::with_capacity(cells + 1), col: Vec::new(), val: Vec::new() };
    lap.row_ptr.push(0);
    for row in rows {
        for (c, v) in row {
            lap.col.push(c);
            lap.val.push(v);
        }
        lap.row_ptr.push(lap.col.len());
    }

    // Dirichlet form: principal face terms plus a cell-centred cross term.
    let mut dirichlet = Vec::with_capacity(2 * cells);
    let mut cross = Vec::new();
    let scale = 2.0 * PI;
    for i in 0..n_xi {
        for j in 0..n_phi {
            if i + 1 < n_xi {
                let (gxx, _, _) = metric(a, b, (i + 1) as f64 * d_xi, (j as f64 + 0.5) * d_phi);
                dirichlet.push((idx(i, j), idx(i + 1, j), scale * gxx * d_phi / d_xi));
            }
            if j + 1 < n_phi {
                let (_, _, gpp) = metric(a, b, (i as f64 + 0.5) * d_xi, (j + 1) as f64 * d_phi);
                dirichlet.push((idx(i, j), idx(i, j + 1), scale * gpp * d_xi / d_phi));
            }
        }
    }
    if a != b {
        cross.reserve(cells);
        for i in 0..n_xi {
            for j in 0..n_phi {
                let (_, gxp, _) = metric(a, b, (i as f64 + 0.5) * d_xi, (j as f64 + 0.5) * d_phi);
                // 2 g^{ξφ} u_ξ u_φ ΔξΔφ with central differences.
                let (ii, jj) = (i as isize, j as isize);
                cross.push((
                    scale * gxp / 2.0,
                    [cell(ii + 1, jj), cell(ii - 1, jj), cell(ii, jj + 1), cell(ii, jj - 1)],
                ));
            }
        }
    }

    let mut max_spacing = 0.0f64;
    for i in 0..n_xi {
        for j in 0..n_phi {
            let k = idx(i, j);
            if i + 1 < n_xi {
                let l = idx(i + 1, j);
                max_spacing = max_spacing.max((r[k] - r[l]).hypot(x3[k] - x3[l]));
            }
            if j + 1 < n_phi {
                let l = idx(i, j + 1);
                max_spacing = max_spacing.max((r[k] - r[l]).hypot(x3[k] - x3[l]));
            }
        }
    }

    Ok(MeridianGrid {
        a,
        b,
        n_xi,
        n_phi,
        d_xi,
        d_phi,
        r,
        x3,
        weight,
        boundary,
        axis,
        normal,
        max_spacing,
        lap,
        dirichlet,
        cross,
    })
}

impl MeridianGrid {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }

    /// Discrete Laplacian of the cell values `u`.
    pub fn laplacian(&self, u: &[f64], exec: Exec) -> Vec<f64> {
        assert_eq!(u.len(), self.len());
        exec.map_range(self.len(), |i| self.lap.apply_at(u, i))
    }

    /// `∫_Ω f` by the cell-midpoint rule.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weight.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// `∫_Ω |∇u|²` from the discrete Dirichlet form.
    pub fn dirichlet_energy(&self, u: &[f64]) -> f64 {
        let mut s: f64 = self.dirichlet.iter().map(|&(p, q, c)| c * (u[q] - u[p]) * (u[q] - u[p])).sum();
        for (f, [xp, xm, pp, pm]) in &self.cross {
            s += f * (u[*xp] - u[*xm]) * (u[*pp] - u[*pm]);
        }
        s
    }

    /// Samples `f(r, x₃)` at the cell centres.
    pub fn sample<F>(&self, f: F, exec: Exec) -> Vec<f64>
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        exec.map_range(self.len(), |k| f(self.r[k], self.x3[k]))
    }

    pub fn field(&self, values: Vec<f64>) -> MeridianField {
        MeridianField::new(
            self.r.clone(),
            self.x3.clone(),
            values,
            Layout::Polar { n_xi: self.n_xi, n_phi: self.n_phi },
        )
    }

    /// Logical coordinates `(ξ, φ)` of a meridian point.
    pub fn logical(&self, r: f64, x3: f64) -> (f64, f64) {
        let (p, q) = (r / self.a, x3 / self.b);
        (p.hypot(q), p.atan2(q))
    }

    /// Bilinear interpolation of cell values in logical coordinates, with
    /// the same ghost reflections as the stencil.
    pub fn interpolate(&self, u: &[f64], r: f64, x3: f64) -> f64 {
        let (xi, phi) = self.logical(r, x3);
        let s = (xi.min(1.0) / self.d_xi - 0.5).max(-0.5);
        let t = phi.clamp(0.0, PI) / self.d_phi - 0.5;
        let (i0, j0) = (s.floor() as isize, t.floor() as isize);
        let (fs, ft) = (s - i0 as f64, t - j0 as f64);
        let at = |i: isize, j: isize| -> f64 {
            let (n_xi, n_phi) = (self.n_xi as isize, self.n_phi as isize);
            let mut j = j;
            if j < 0 {
                j = -1 - j;
            } else if j >= n_phi {
                j = 2 * n_phi - 1 - j;
            }
            let (i, j) = if i < 0 {
                (-1 - i, n_phi - 1 - j)
            } else if i >= n_xi {
                (2 * n_xi - 1 - i, j)
            } else {
                (i, j)
            };
            u[self.index(i as usize, j as usize)]
        };
        (1.0 - fs) * ((1.0 - ft) * at(i0, j0) + ft * at(i0, j0 + 1))
            + fs * ((1.0 - ft) * at(i0 + 1, j0) + ft * at(i0 + 1, j0 + 1))
    }
}
