//! Axisymmetric containers, critical placement of a catenoid meeting the
//! boundary orthogonally, and the boundary data entering the Robin problem.

use serde::{Deserialize, Serialize};

use crate::catenoid::{jacobi_fields, meridian_normal, meridian_point, meridian_tangent, z2_inverse};
use crate::error::{Error, Result};

/// A container described in the meridian half-plane by a level-set function.
pub trait MeridianLevelSet {
    /// Negative inside, zero on the boundary.
    fn phi(&self, r: f64, x3: f64) -> f64;
    fn grad_phi(&self, r: f64, x3: f64) -> (f64, f64);
}

/// Ellipsoid of revolution `r²/a² + x₃²/b² < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisymDomain {
    pub a: f64,
    pub b: f64,
}

pub fn make_ball(radius: f64) -> Result<AxisymDomain> {
    make_ellipsoid(radius, radius)
}

pub fn make_ellipsoid(a: f64, b: f64) -> Result<AxisymDomain> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("semi-axes must be positive and finite, got a = {a}, b = {b}")));
    }
    Ok(AxisymDomain { a, b })
}

impl MeridianLevelSet for AxisymDomain {
    fn phi(&self, r: f64, x3: f64) -> f64 {
        r * r / (self.a * self.a) + x3 * x3 / (self.b * self.b) - 1.0
    }

    fn grad_phi(&self, r: f64, x3: f64) -> (f64, f64) {
        (2.0 * r / (self.a * self.a), 2.0 * x3 / (self.b * self.b))
    }
}

impl AxisymDomain {
    pub fn is_ball(&self) -> bool {
        self.a == self.b
    }

    /// Volume `4πa²b/3`.
    pub fn volume(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.a * self.a * self.b / 3.0
    }

    /// Point `(a sin φ, b cos φ)` of the boundary meridian, `φ ∈ [0, π]`.
    pub fn boundary_point(&self, phi: f64) -> (f64, f64) {
        (self.a * phi.sin(), self.b * phi.cos())
    }

    /// Boundary meridian point nearest to `(r, x₃)`, as the angle `φ`.
    pub fn nearest_boundary_angle(&self, r: f64, x3: f64) -> f64 {
        let d2 = |p: f64| {
            let (br, bx) = self.boundary_point(p);
            (br - r).powi(2) + (bx - x3).powi(2)
        };
        let n = 256;
        let mut best = 0.0;
        let mut best_d = f64::INFINITY;
        for k in 0..=n {
            let p = std::f64::consts::PI * k as f64 / n as f64;
            let d = d2(p);
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        // Newton on the stationarity condition
        let (a, b) = (self.a, self.b);
        let mut p = best;
        for _ in 0..50 {
            let (s, co) = p.sin_cos();
            let f = (a * s - r) * a * co - (b * co - x3) * b * s;
            let df = a * a * (co * co - s * s) + r * a * s - b * b * (co * co - s * s) + x3 * b * co;
            if df.abs() < 1e-300 {
                break;
            }
            let next = (p - f / df).clamp(0.0, std::f64::consts::PI);
            let done = (next - p).abs() < 1e-15;
            p = next;
            if done {
                break;
            }
        }
        if d2(p) <= best_d {
            p
        } else {
            best
        }
    }

    /// `|⟨catenoid meridian tangent at y, boundary meridian tangent⟩|`, the
    /// latter taken at the boundary point nearest to `c Y(y)`.
    pub fn orthogonality_residual(&self, c: f64, y: f64) -> f64 {
        let (r, x3) = meridian_point(c, y);
        let p = self.nearest_boundary_angle(r, x3);
        let (br, bx) = self.boundary_point(p);
        let (gr, gx) = self.grad_phi(br, bx);
        let g = gr.hypot(gx);
        // boundary tangent is the rotated unit normal
        let (tr, tx) = (-gx / g, gr / g);
        let (cr, cx) = meridian_tangent(y);
        (cr * tr + cx * tx).abs()
    }
}

/// A cone whose meridian is the straight line through `c Y(y₀)` along
/// `ν(y₀)`: it meets the catenoid orthogonally with zero boundary curvature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalCone {
    pub c: f64,
    pub y0: f64,
}

impl MeridianLevelSet for NormalCone {
    fn phi(&self, r: f64, x3: f64) -> f64 {
        let (pr, px) = meridian_point(self.c, self.y0);
        let (tr, tx) = meridian_tangent(self.y0);
        (r - pr) * tr + (x3 - px) * tx
    }

    fn grad_phi(&self, _r: f64, _x3: f64) -> (f64, f64) {
        meridian_tangent(self.y0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPlacement {
    pub c: f64,
    pub y_bar: f64,
    /// Boundary curvature at the bottom curve `y = -ȳ`.
    pub k1: f64,
    /// Boundary curvature at the top curve `y = ȳ`.
    pub k2: f64,
    /// Robin coefficient `I` at the top curve.
    pub i_robin: f64,
    pub m1: f64,
    /// `max |Φ(c Y(±ȳ))|`.
    pub boundary_residual: f64,
    pub orthogonality_residual: f64,
    /// `|z₂(ȳ) - (b²/a² - 1)|`, the scale-free form of the orthogonality condition.
    pub scalar_check: f64,
    pub newton_iterations: usize,
}

impl CriticalPlacement {
    /// Chart-scaled Robin coefficients `(K₁c, K₂c)`.
    pub fn kappa(&self) -> (f64, f64) {
        (self.k1 * self.c, self.k2 * self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryCurvature {
    pub k: f64,
    pub i_robin: f64,
    pub m1: f64,
    /// `∂_z G(0)`, zero for an orthogonal intersection.
    pub dg: f64,
}

/// `(Φ(c Y(y)), orthogonality defect)`.
fn placement_equations(d: &AxisymDomain, c: f64, y: f64) -> [f64; 2] {
    let (r, x3) = meridian_point(c, y);
    let (gr, gx) = d.grad_phi(r, x3);
    let g = gr.hypot(gx);
    let (tr, tx) = meridian_tangent(y);
    // cross product of catenoid tangent and boundary normal
    [d.phi(r, x3), (tr * gx - tx * gr) / g]
}

/// Critical placement seeded with `ȳ` from `z₂(ȳ) = b²/a² − 1` and `c` fitted
/// to the boundary. Placements whose neck radius is below `1e-6` of the
/// container size are reported as not found.
pub fn critical_placement(domain: &AxisymDomain) -> Result<CriticalPlacement> {
    let target = domain.b * domain.b / (domain.a * domain.a) - 1.0;
    let y0 = z2_inverse(target).map_err(|e| Error::NoCriticalCatenoid(format!("no seed for ȳ: {e}")))?;
    let (r, x3) = meridian_point(1.0, y0);
    let c0 = 1.0 / (r * r / (domain.a * domain.a) + x3 * x3 / (domain.b * domain.b)).sqrt();
    let scale = domain.a.max(domain.b);
    if !(c0 >= MIN_NECK * scale) {
        return Err(Error::NoCriticalCatenoid(format!(
            "neck radius {c0:e} is below {MIN_NECK:e} of the container size"
        )));
    }
    critical_placement_from(domain, c0, y0)
}

/// Smallest neck radius, relative to `max(a, b)`, accepted as a placement.
pub const MIN_NECK: f64 = 1e-6;

/// Two-unknown Newton solve for `(c, ȳ)` with a finite-difference Jacobian.
pub fn critical_placement_from(domain: &AxisymDomain, c_guess: f64, y_guess: f64) -> Result<CriticalPlacement> {
    let scale = domain.a.max(domain.b);
    let (mut c, mut y) = (c_guess, y_guess.abs());
    let norm = |f: [f64; 2]| f[0].abs().max(f[1].abs());
    let mut f = placement_equations(domain, c, y);
    let mut iterations = 0;
    while norm(f) > 1e-14 {
        iterations += 1;
        if iterations > 100 || !f[0].is_finite() || !f[1].is_finite() {
            return Err(Error::NoCriticalCatenoid(format!(
                "Newton for (c, ȳ) failed after {iterations} iterations (residual {:e})",
                norm(f)
            )));
        }
        let hc = 1e-7 * c;
        let hy = 1e-7 * (1.0 + y);
        let fcp = placement_equations(domain, c + hc, y);
        let fcm = placement_equations(domain, c - hc, y);
        let fyp = placement_equations(domain, c, y + hy);
        let fym = placement_equations(domain, c, y - hy);
        let j = [
            [(fcp[0] - fcm[0]) / (2.0 * hc), (fyp[0] - fym[0]) / (2.0 * hy)],
            [(fcp[1] - fcm[1]) / (2.0 * hc), (fyp[1] - fym[1]) / (2.0 * hy)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoCriticalCatenoid("singular placement Jacobian".into()));
        }
        let dc = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dy = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        // damp so that c stays positive and the step halves the residual
        let mut t = 1.0;
        loop {
            let (nc, ny) = (c - t * dc, y - t * dy);
            if nc > 0.0 && ny > 0.0 {
                let nf = placement_equations(domain, nc, ny);
                if norm(nf) < norm(f) || t < 1e-3 {
                    c = nc;
                    y = ny;
                    f = nf;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return Err(Error::NoCriticalCatenoid("line search failed".into()));
            }
        }
        if (dc * t).abs() < 1e-16 * scale && (dy * t).abs() < 1e-16 * (1.0 + y) {
            break;
        }
    }
    if norm(f) > 1e-10 {
        return Err(Error::NoCriticalCatenoid(format!("residual {:e} above 1e-10", norm(f))));
    }
    // the catenoid piece must lie inside the container
    let n = 400;
    for k in 1..n {
        let s = -y + 2.0 * y * k as f64 / n as f64;
        let (r, x3) = meridian_point(c, s);
        if domain.phi(r, x3) >= 0.0 {
            return Err(Error::NoCriticalCatenoid(format!(
                "orthogonal catenoid (c = {c}, ȳ = {y}) leaves the container at y = {s}"
            )));
        }
    }
    let top = boundary_curvature(domain, c, y)?;
    let bottom = boundary_curvature(domain, c, -y)?;
    let (rt, xt) = meridian_point(c, y);
    let (rb, xb) = meridian_point(c, -y);
    let ratio = domain.b * domain.b / (domain.a * domain.a);
    Ok(CriticalPlacement {
        c,
        y_bar: y,
        k1: bottom.k,
        k2: top.k,
        i_robin: top.i_robin,
        m1: top.m1,
        boundary_residual: domain.phi(rt, xt).abs().max(domain.phi(rb, xb).abs()),
        orthogonality_residual: domain.orthogonality_residual(c, y).max(domain.orthogonality_residual(c, -y)),
        scalar_check: (jacobi_fields(y).z2 - (ratio - 1.0)).abs(),
        newton_iterations: iterations,
    })
}

/// `G(z)`: the chart parameter near `y_b` at which the normal line at
/// offset `z` meets the boundary.
pub fn boundary_foot<D: MeridianLevelSet + ?Sized>(domain: &D, c: f64, y_b: f64, z: f64) -> Result<f64> {
    let f = |g: f64| {
        let (r, x3) = meridian_point(c, g);
        let (nr, nx) = meridian_normal(g);
        domain.phi(r + z * nr, x3 + z * nx)
    };
    let df = |g: f64| {
        let s = (1.0 + g * g).sqrt();
        let s3 = s * s * s;
        let (r, x3) = meridian_point(c, g);
        let (nr, nx) = meridian_normal(g);
        let (pr, px) = domain.grad_phi(r + z * nr, x3 + z * nx);
        pr * (c * g / s + z * g / s3) + px * (c / s + z / s3)
    };
    let mut g = y_b;
    for _ in 0..100 {
        let v = f(g);
        let d = df(g);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = v / d;
        g -= step;
        if step.abs() <= 1e-16 * (1.0 + g.abs()) {
            return Ok(g);
        }
    }
    if f(g).abs() < 1e-13 {
        Ok(g)
    } else {
        Err(Error::NoConvergence(format!("boundary foot point at z = {z} not found")))
    }
}

/// Boundary data at the catenoid curve `y = y_b` (bottom if `y_b < 0`).
///
/// `K` is signed so that the Robin rows read `h'(y₁) + K₁c h(y₁)` and
/// `h'(y₂) - K₂c h(y₂)`; it equals `1/R` on a ball.
pub fn boundary_curvature<D: MeridianLevelSet + ?Sized>(domain: &D, c: f64, y_b: f64) -> Result<BoundaryCurvature> {
    let (r, x3) = meridian_point(c, y_b);
    let (gr, gx) = domain.grad_phi(r, x3);
    if domain.phi(r, x3).abs() > 1e-9 * (1.0 + gr.hypot(gx) * c) {
        return Err(Error::Domain(format!("y = {y_b} does not lie on the boundary")));
    }
    let g0 = boundary_foot(domain, c, y_b, 0.0)?;
    // second differences on a geometric ladder of steps, Richardson in h²
    let h0 = 0.02 * c;
    let levels = 4;
    let mut d2 = [[0.0; 4]; 4];
    let mut d1 = [[0.0; 4]; 4];
    for l in 0..levels {
        let h = h0 / (1 << l) as f64;
        let gp = boundary_foot(domain, c, y_b, h)?;
        let gm = boundary_foot(domain, c, y_b, -h)?;
        d2[l][0] = (gp - 2.0 * g0 + gm) / (h * h);
        d1[l][0] = (gp - gm) / (2.0 * h);
    }
    for k in 1..levels {
        let f = 4f64.powi(k as i32);
        for l in k..levels {
            d2[l][k] = (f * d2[l][k - 1] - d2[l - 1][k - 1]) / (f - 1.0);
            d1[l][k] = (f * d1[l][k - 1] - d1[l - 1][k - 1]) / (f - 1.0);
        }
    }
    let gzz = d2[levels - 1][levels - 1];
    let gz = d1[levels - 1][levels - 1];
    let k = if y_b < 0.0 { c * gzz } else { -c * gzz };
    Ok(BoundaryCurvature {
        k,
        i_robin: k,
        m1: 1.0 / (c * (1.0 + y_b * y_b)),
        dg: gz,
    })
}
