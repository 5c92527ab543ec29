//! Energy, interface extraction and interface-to-catenoid distance.

use serde::Serialize;

use super::grid::MeridianGrid;
use crate::catenoid::meridian_point;
use crate::domain::CriticalPlacement;
use crate::error::{Error, Result};

/// `J_α(u) = ∫_Ω (α/2)|∇u|² + (1/4α)(1 − u²)²`.
pub fn energy(grid: &MeridianGrid, u: &[f64], alpha: f64) -> f64 {
    let potential: Vec<f64> = u
        .iter()
        .map(|&v| {
            let p = (1.0 - v) * (1.0 + v);
            p * p
        })
        .collect();
    0.5 * alpha * grid.dirichlet_energy(u) + grid.integrate(&potential) / (4.0 * alpha)
}

/// Zero level set of a grid field as a meridian polyline ordered by `x₃`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interface {
    pub points: Vec<(f64, f64)>,
}

/// Sign changes along grid edges in both logical directions, located by
/// linear interpolation in the logical coordinates. Crossings between cells
/// of the outermost ring are repeated on the boundary `ξ = 1`, where the
/// zero-flux condition makes the boundary value equal to the ring value to
/// second order.
pub fn zero_level_set(grid: &MeridianGrid, u: &[f64]) -> Result<Interface> {
    if u.len() != grid.len() {
        return Err(Error::Grid(format!("field has {} values for {} cells", u.len(), grid.len())));
    }
    let map = |s: f64, t: f64| -> (f64, f64) {
        let xi = (s + 0.5) * grid.d_xi;
        let phi = (t + 0.5) * grid.d_phi;
        (grid.a * xi * phi.sin(), grid.b * xi * phi.cos())
    };
    let mut points = Vec::new();
    for i in 0..grid.n_xi {
        for j in 0..grid.n_phi {
            let p = grid.index(i, j);
            let up = u[p];
            for (di, dj) in [(1usize, 0usize), (0, 1)] {
                if i + di >= grid.n_xi || j + dj >= grid.n_phi {
                    continue;
                }
                let uq = u[grid.index(i + di, j + dj)];
                if (up < 0.0) != (uq < 0.0) {
                    let f = up / (up - uq);
                    points.push(map(i as f64 + f * di as f64, j as f64 + f * dj as f64));
                    if dj == 1 && i + 1 == grid.n_xi {
                        points.push(map(i as f64 + 0.5, j as f64 + f));
                    }
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyInterface);
    }
    points.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(Interface { points })
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - s * dx).hypot(p.1 - a.1 - s * dy)
}

fn polyline_distance(p: (f64, f64), line: &[(f64, f64)]) -> f64 {
    if line.len() == 1 {
        return (p.0 - line[0].0).hypot(p.1 - line[0].1);
    }
    line.windows(2).map(|w| segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two polylines.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let ab = a.iter().map(|&p| polyline_distance(p, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|&p| polyline_distance(p, a)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Samples of the catenoid meridian `r = c cosh(x₃/c)` inside the container.
pub fn catenoid_polyline(placement: &CriticalPlacement, samples: usize) -> Vec<(f64, f64)> {
    let samples = samples.max(2);
    let y = placement.y_bar;
    (0..samples)
        .map(|k| meridian_point(placement.c, -y + 2.0 * y * k as f64 / (samples - 1) as f64))
        .collect()
}

pub const CATENOID_SAMPLES: usize = 4001;

pub fn hausdorff_to_catenoid(interface: &Interface, placement: &CriticalPlacement) -> f64 {
    hausdorff(&interface.points, &catenoid_polyline(placement, CATENOID_SAMPLES))
}
