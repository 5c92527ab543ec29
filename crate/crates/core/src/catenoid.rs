//! Geometry of the catenoid `r = c cosh(x₃/c)` in the arclength chart
//! `Y(y, θ) = (√(1+y²) cos θ, √(1+y²) sin θ, asinh y)`, scaled by `c`.
//!
//! The unit normal `ν` points toward the axis side `S⁺`.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartValue {
    pub position: Vec3,
    pub normal: Vec3,
    pub metric: [[f64; 2]; 2],
    pub a_norm_sq: f64,
    pub gauss_k: f64,
}

/// Chart data at `(y, θ)` of the catenoid with neck radius `c`.
pub fn chart_eval(c: f64, y: f64, theta: f64) -> ChartValue {
    let s = (1.0 + y * y).sqrt();
    let (st, ct) = theta.sin_cos();
    let q = 1.0 + y * y;
    let a2 = 2.0 / (c * c * q * q);
    ChartValue {
        position: [c * s * ct, c * s * st, c * y.asinh()],
        normal: [-ct / s, -st / s, y / s],
        metric: [[c * c, 0.0], [0.0, c * c * q]],
        a_norm_sq: a2,
        gauss_k: -0.5 * a2,
    }
}

/// Meridian point `(r, x₃)` at chart parameter `y`.
pub fn meridian_point(c: f64, y: f64) -> (f64, f64) {
    (c * (1.0 + y * y).sqrt(), c * y.asinh())
}

/// Meridian components `(ν_r, ν₃)` of the unit normal.
pub fn meridian_normal(y: f64) -> (f64, f64) {
    let s = (1.0 + y * y).sqrt();
    (-1.0 / s, y / s)
}

/// Unit meridian tangent `(∂_y r, ∂_y x₃) / c`, pointing toward increasing `y`.
pub fn meridian_tangent(y: f64) -> (f64, f64) {
    let s = (1.0 + y * y).sqrt();
    (y / s, 1.0 / s)
}

/// Principal curvatures `(k_meridian, k_parallel) = (1, -1) / (c(1+y²))`
/// with respect to `ν`.
pub fn principal_curvatures(c: f64, y: f64) -> (f64, f64) {
    let k = 1.0 / (c * (1.0 + y * y));
    (k, -k)
}

/// `|A|²` at chart parameter `y`.
pub fn a_norm_sq(c: f64, y: f64) -> f64 {
    let q = 1.0 + y * y;
    2.0 / (c * c * q * q)
}

/// Distance along the normal at which Fermi coordinates fold over.
pub fn focal_radius(c: f64, y: f64) -> f64 {
    c * (1.0 + y * y)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JacobiFieldPair {
    pub z1: f64,
    pub dz1: f64,
    pub d2z1: f64,
    pub z2: f64,
    pub dz2: f64,
    pub d2z2: f64,
}

/// Closed forms of `z₁ = y/√(1+y²)` (vertical translation) and
/// `z₂ = z₁ asinh y - 1` (dilation), with two derivatives each.
pub fn jacobi_fields(y: f64) -> JacobiFieldPair {
    let q = 1.0 + y * y;
    let s = q.sqrt();
    let a = y.asinh();
    let z1 = y / s;
    let dz1 = 1.0 / (q * s);
    let d2z1 = -3.0 * y / (q * q * s);
    let z2 = z1 * a - 1.0;
    let dz2 = y / q + a / (q * s);
    // d/dy [y/(1+y²)] = (1 - y²)/q², d/dy [a q^{-3/2}] = q^{-2} - 3 y a q^{-5/2}
    let d2z2 = (1.0 - y * y) / (q * q) + 1.0 / (q * q) - 3.0 * y * a / (q * q * s);
    JacobiFieldPair {
        z1,
        dz1,
        d2z1,
        z2,
        dz2,
        d2z2,
    }
}

/// Solves `z₂(y) = target` for `y > 0`. `z₂` increases from `-1` to `∞` on
/// `(0, ∞)`, so a root exists for every `target > -1`.
pub fn z2_inverse(target: f64) -> Result<f64> {
    if !(target > -1.0) || !target.is_finite() {
        return Err(Error::Domain(format!("z₂ takes values in (-1, ∞) for y > 0, got {target}")));
    }
    let f = |y: f64| jacobi_fields(y).z2 - target;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::NoConvergence("z₂ bracket expansion overflowed".into()));
        }
    }
    // safeguarded Newton inside the bracket
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let j = jacobi_fields(y);
        let r = j.z2 - target;
        if r < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let mut next = y - r / j.dz2;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-15 * y.max(1.0) || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::NoConvergence("z₂ inversion did not converge".into()))
}

/// Positive zero `ȳ*` of `z₂`.
pub fn z2_root() -> f64 {
    z2_inverse(0.0).expect("z₂ has a positive root")
}

/// `2πc² ∫ √(1+y²) dy` over `[y_a, y_b]`.
pub fn area(c: f64, y_a: f64, y_b: f64) -> f64 {
    let prim = |y: f64| 0.5 * (y * (1.0 + y * y).sqrt() + y.asinh());
    2.0 * PI * c * c * (prim(y_b) - prim(y_a))
}

/// `∫ K dA` over `[y_a, y_b]`; independent of `c`.
pub fn total_curvature(_c: f64, y_a: f64, y_b: f64) -> f64 {
    let prim = |y: f64| y / (1.0 + y * y).sqrt();
    -2.0 * PI * (prim(y_b) - prim(y_a))
}

/// Tubular neighbourhood `|z| < η + δ log(2 + r)` of the surface, `r` the
/// unit-chart distance `√(1+y²)` of the foot point from the axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct Tube {
    pub eta: f64,
    pub delta: f64,
}

impl Tube {
    /// `η = 0.5c`, `δ = 0.25c`.
    pub fn for_scale(c: f64) -> Self {
        Self {
            eta: 0.5 * c,
            delta: 0.25 * c,
        }
    }

    pub fn radius(&self, y: f64) -> f64 {
        self.eta + self.delta * (2.0 + (1.0 + y * y).sqrt()).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FermiPoint {
    pub y: f64,
    pub theta: f64,
    /// Signed offset along `ν`; positive on the axis side.
    pub z: f64,
}

pub fn fermi_map(c: f64, y: f64, theta: f64, z: f64) -> Result<Vec3> {
    if !(z.abs() < focal_radius(c, y)) {
        return Err(Error::Domain(format!(
            "offset {z} reaches the focal radius {} at y = {y}",
            focal_radius(c, y)
        )));
    }
    let v = chart_eval(c, y, theta);
    Ok([
        v.position[0] + z * v.normal[0],
        v.position[1] + z * v.normal[1],
        v.position[2] + z * v.normal[2],
    ])
}

/// Foot point on the meridian of `(r, x₃)`: returns `(y, z)`.
///
/// Fails when the foot-point equation has no root within the focal radius.
pub fn meridian_invert(c: f64, r: f64, x3: f64) -> Result<(f64, f64)> {
    // (P - X(y)) · ∂_y X = 0
    let g = |y: f64| {
        let s = (1.0 + y * y).sqrt();
        r * y - c * y * s + x3 - c * y.asinh()
    };
    let dg = |y: f64| r - 2.0 * c * (1.0 + y * y).sqrt();
    let mut y = (x3 / c).sinh();
    if !y.is_finite() {
        return Err(Error::NoConvergence(format!("height {x3} is out of range for scale {c}")));
    }
    // g → +∞ as y → -∞ and → -∞ as y → +∞: bracket around the guess
    let mut step = 0.25 * (1.0 + y.abs());
    let (mut lo, mut hi) = (y, y);
    let mut it = 0;
    while g(lo) < 0.0 {
        lo -= step;
        step *= 2.0;
        it += 1;
        if it > 200 {
            return Err(Error::NoConvergence("foot point bracket failed".into()));
        }
    }
    step = 0.25 * (1.0 + y.abs());
    while g(hi) > 0.0 {
        hi += step;
        step *= 2.0;
        it += 1;
        if it > 400 {
            return Err(Error::NoConvergence("foot point bracket failed".into()));
        }
    }
    if lo == hi {
        // guess is an exact root
    } else {
        y = y.clamp(lo, hi);
        let mut converged = false;
        for _ in 0..200 {
            let gy = g(y);
            if gy == 0.0 {
                converged = true;
                break;
            }
            if gy > 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            let d = dg(y);
            let mut next = if d != 0.0 { y - gy / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - y).abs() <= 1e-15 * (1.0 + y.abs()) || hi - lo <= 1e-15 * (1.0 + y.abs());
            y = next;
            if done {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence("foot point Newton did not converge".into()));
        }
    }
    let (mr, mx) = meridian_point(c, y);
    let (nr, nx) = meridian_normal(y);
    let z = (r - mr) * nr + (x3 - mx) * nx;
    if !(z.abs() < focal_radius(c, y)) {
        return Err(Error::NoConvergence(format!(
            "point ({r}, {x3}) lies beyond the focal radius of its foot point"
        )));
    }
    Ok((y, z))
}

/// Fermi coordinates of an ambient point within the default tube.
pub fn fermi_invert(c: f64, position: Vec3) -> Result<FermiPoint> {
    fermi_invert_in(c, position, Tube::for_scale(c))
}

pub fn fermi_invert_in(c: f64, position: Vec3, tube: Tube) -> Result<FermiPoint> {
    let [x1, x2, x3] = position;
    let r = x1.hypot(x2);
    if r == 0.0 {
        return Err(Error::AxisAmbiguity);
    }
    let (y, z) = meridian_invert(c, r, x3)?;
    if z.abs() >= tube.radius(y) {
        return Err(Error::NoConvergence(format!(
            "point lies outside the tube: |z| = {} ≥ {}",
            z.abs(),
            tube.radius(y)
        )));
    }
    let mut theta = x2.atan2(x1);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    Ok(FermiPoint { y, theta, z })
}

/// Residual `(P - X(y)) · ∂_y X / c` of the normality condition.
pub fn normality_residual(c: f64, r: f64, x3: f64, y: f64) -> f64 {
    let (mr, mx) = meridian_point(c, y);
    let (tr, tx) = meridian_tangent(y);
    (r - mr) * tr + (x3 - mx) * tx
}
