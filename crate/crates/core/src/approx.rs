//! The approximate Allen–Cahn solution built from the transition layer
//! placed along a critical catenoid, and its residual diagnostics.
//!
//! Inside the tube `|z| < η` the approximation is
//! `u₂ = w(t) + α²|A(y)|² ψ₁(t)`, `t = z/α - h(y)`; it is blended into the
//! pure phases `±1` by a quintic cutoff supported in `η/2 ≤ |z| ≤ η`.

use serde::Serialize;
use std::sync::{Arc, OnceLock};

use crate::catenoid::{self, meridian_invert, meridian_normal, meridian_point, Tube, Vec3};
use crate::domain::{boundary_foot, AxisymDomain, CriticalPlacement, MeridianLevelSet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Layout, MeridianField};
use crate::jacobi::ReducedH;
use crate::profile::{nonlinearity, solve_psi1, HeteroclinicProfile, Psi1Correction};

/// Half-width of the ψ₁ table used by the approximation.
pub const PSI1_TMAX: f64 = 12.0;

/// Weight exponent of the interior weighted residual norm.
pub const DEFAULT_SIGMA: f64 = 1.0;

fn shared_psi1() -> Result<Arc<Psi1Correction>> {
    static TABLE: OnceLock<std::result::Result<Arc<Psi1Correction>, Error>> = OnceLock::new();
    TABLE
        .get_or_init(|| solve_psi1(PSI1_TMAX, DEFAULT_SIGMA).map(Arc::new))
        .clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproximationSpec {
    pub alpha: f64,
    pub placement: CriticalPlacement,
    pub h: ReducedH,
    pub with_psi1: bool,
    pub tube: Tube,
}

impl ApproximationSpec {
    /// Layer along the catenoid itself (`h = 0`), ψ₁ switched on, default tube.
    pub fn new(alpha: f64, placement: CriticalPlacement) -> Self {
        Self {
            alpha,
            placement,
            h: ReducedH::zero(placement.y_bar),
            with_psi1: true,
            tube: Tube::for_scale(placement.c),
        }
    }

    pub fn with_h(mut self, h: ReducedH) -> Self {
        self.h = h;
        self
    }

    pub fn with_psi1(mut self, on: bool) -> Self {
        self.with_psi1 = on;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::Precondition(format!("α must be positive, got {}", self.alpha)));
        }
        let c = self.placement.c;
        // the blend region must stay clear of the focal set, radius ≥ c
        if !(self.tube.eta > 0.0 && self.tube.eta < 0.5 * c + 1e-12) {
            return Err(Error::Precondition(format!(
                "cutoff width η = {} must lie in (0, c/2]",
                self.tube.eta
            )));
        }
        Ok(())
    }
}

/// Quintic smoothstep: 1 for `|z| ≤ η/2`, 0 for `|z| ≥ η`.
pub fn cutoff(z: f64, eta: f64) -> f64 {
    let s = (z.abs() - 0.5 * eta) / (0.5 * eta);
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
    }
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub spec: ApproximationSpec,
    psi: Arc<Psi1Correction>,
}

pub fn build_approximation(spec: ApproximationSpec) -> Result<Approximation> {
    spec.check()?;
    Ok(Approximation {
        spec,
        psi: shared_psi1()?,
    })
}

/// Fermi data of a point inside the tube.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalCoordinates {
    pub y: f64,
    pub z: f64,
    pub t: f64,
    pub beta: f64,
}

impl Approximation {
    pub fn alpha(&self) -> f64 {
        self.spec.alpha
    }

    /// `+1` on the axis side of the catenoid, `-1` outside.
    pub fn phase(&self, r: f64, x3: f64) -> f64 {
        let c = self.spec.placement.c;
        if r < c * (x3 / c).cosh() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn local(&self, r: f64, x3: f64) -> Option<LocalCoordinates> {
        let c = self.spec.placement.c;
        let (y, z) = meridian_invert(c, r.abs(), x3).ok()?;
        if z.abs() >= self.spec.tube.eta {
            return None;
        }
        let (h, _) = self.spec.h.eval(y);
        Some(LocalCoordinates {
            y,
            z,
            t: z / self.spec.alpha - h,
            beta: cutoff(z, self.spec.tube.eta),
        })
    }

    fn amplitude(&self, y: f64) -> f64 {
        if self.spec.with_psi1 {
            self.spec.alpha.powi(2) * catenoid::a_norm_sq(self.spec.placement.c, y)
        } else {
            0.0
        }
    }

    fn inner(&self, y: f64, t: f64) -> f64 {
        let w = HeteroclinicProfile.w(t);
        let a = self.amplitude(y);
        if a == 0.0 {
            w
        } else {
            w + a * self.psi.value(t)
        }
    }

    pub fn value(&self, r: f64, x3: f64) -> f64 {
        match self.local(r, x3) {
            None => self.phase(r, x3),
            Some(l) if l.beta == 1.0 => self.inner(l.y, l.t),
            Some(l) => l.beta * self.inner(l.y, l.t) + (1.0 - l.beta) * self.phase(r, x3),
        }
    }

    pub fn value3(&self, p: Vec3) -> f64 {
        self.value(p[0].hypot(p[1]), p[2])
    }

    /// Samples the approximation at the given meridian points.
    pub fn sample(&self, r: &[f64], x3: &[f64], exec: Exec) -> Vec<f64> {
        exec.map_range(r.len(), |i| self.value(r[i], x3[i]))
    }

    /// Axisymmetric five-point Laplacian with step `α/100`, Richardson
    /// extrapolated from steps `h` and `h/2`.
    pub fn laplacian_fd(&self, r: f64, x3: f64) -> f64 {
        axisym_laplacian(|r, x3| self.value(r, x3), r, x3, self.spec.alpha / 100.0)
    }

    /// `S(U) = α²ΔU + f(U)`.
    pub fn residual_at(&self, r: f64, x3: f64) -> f64 {
        self.spec.alpha.powi(2) * self.laplacian_fd(r, x3) + nonlinearity(self.value(r, x3))
    }

    /// Laplacian of `u₂` in Fermi coordinates, defined where the cutoff is
    /// identically one. With `truncated` the metric is replaced by its
    /// expansion `∂_zz - |A|²z ∂_z + Δ_M`.
    pub fn fermi_laplacian(&self, r: f64, x3: f64, truncated: bool) -> Option<f64> {
        let l = self.local(r, x3)?;
        if l.beta != 1.0 || l.z.abs() >= 0.5 * self.spec.tube.eta {
            return None;
        }
        let alpha = self.spec.alpha;
        let c = self.spec.placement.c;
        let (y, z, t) = (l.y, l.z, l.t);
        let q = 1.0 + y * y;
        let p = HeteroclinicProfile.eval(t);
        let (psi, dpsi, d2psi) = self.psi.eval(t);
        let (_, dh, d2h) = self.spec.h.eval2(y);
        let (a, da, d2a) = if self.spec.with_psi1 {
            let k = alpha * alpha / (c * c);
            (
                2.0 * k / (q * q),
                -8.0 * k * y / (q * q * q),
                -8.0 * k * (q - 6.0 * y * y) / (q * q * q * q),
            )
        } else {
            (0.0, 0.0, 0.0)
        };
        let g1 = p.dw + a * dpsi;
        let g2 = p.d2w + a * d2psi;
        let uz = g1 / alpha;
        let uzz = g2 / (alpha * alpha);
        let uy = -dh * g1 + da * psi;
        let uyy = dh * dh * g2 - d2h * g1 - 2.0 * dh * da * dpsi + d2a * psi;
        if truncated {
            let a2 = catenoid::a_norm_sq(c, y);
            return Some(uzz - a2 * z * uz + (uyy + y / q * uy) / (c * c));
        }
        let k = 1.0 / (c * q);
        let dk = -2.0 * y / (c * q * q);
        let one = 1.0 - k * k * z * z;
        let g = 1.0 / (c * c * (1.0 + k * z).powi(2));
        let log_jg = y / q - 2.0 * k * dk * z * z / one - 2.0 * dk * z / (1.0 + k * z);
        Some(uzz - 2.0 * k * k * z / one * uz + g * uyy + g * log_jg * uy)
    }

    /// Outward derivative `∂U/∂n` along the unit vector `n`, by centred
    /// differences with step `α/200` and one Richardson level.
    pub fn directional_derivative(&self, r: f64, x3: f64, n: (f64, f64)) -> f64 {
        let d = |h: f64| (self.value(r + h * n.0, x3 + h * n.1) - self.value(r - h * n.0, x3 - h * n.1)) / (2.0 * h);
        let h = self.spec.alpha / 200.0;
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    }
}

fn laplacian_stencil<F: Fn(f64, f64) -> f64>(f: &F, r: f64, x3: f64, h: f64) -> f64 {
    let u0 = f(r, x3);
    let up = f(r + h, x3);
    let um = f((r - h).abs(), x3);
    let uzz = (f(r, x3 + h) + f(r, x3 - h) - 2.0 * u0) / (h * h);
    if r == 0.0 {
        return 2.0 * (up + um - 2.0 * u0) / (h * h) + uzz;
    }
    (up + um - 2.0 * u0) / (h * h) + (up - um) / (2.0 * h * r) + uzz
}

/// Laplacian of an axisymmetric function `f(r, x₃)` by the five-point
/// stencil with steps `h` and `h/2` and one Richardson level.
pub fn axisym_laplacian<F: Fn(f64, f64) -> f64>(f: F, r: f64, x3: f64, h: f64) -> f64 {
    let l1 = laplacian_stencil(&f, r, x3, h);
    let l2 = laplacian_stencil(&f, r, x3, 0.5 * h);
    (4.0 * l2 - l1) / 3.0
}

/// Sample points of the meridian section of a container.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeGrid {
    pub r: Vec<f64>,
    pub x3: Vec<f64>,
    pub spacing: f64,
}

impl ProbeGrid {
    /// Lattice `(i + ½)s, j s` clipped to `Φ < 0`.
    pub fn covering(domain: &AxisymDomain, spacing: f64) -> Self {
        let nr = (domain.a / spacing).ceil() as usize;
        let nz = (domain.b / spacing).ceil() as i64;
        let mut r = Vec::new();
        let mut x3 = Vec::new();
        for j in -nz..=nz {
            let x = j as f64 * spacing;
            for i in 0..nr {
                let rr = (i as f64 + 0.5) * spacing;
                if domain.phi(rr, x) < 0.0 {
                    r.push(rr);
                    x3.push(x);
                }
            }
        }
        Self { r, x3, spacing }
    }

    /// The covering lattice restricted to points within `margin` of the tube.
    pub fn around_tube(domain: &AxisymDomain, approx: &Approximation, spacing: f64, margin: f64) -> Self {
        let full = Self::covering(domain, spacing);
        let eta = approx.spec.tube.eta;
        let c = approx.spec.placement.c;
        let keep: Vec<bool> = (0..full.r.len())
            .map(|i| matches!(meridian_invert(c, full.r[i], full.x3[i]), Ok((_, z)) if z.abs() < eta + margin))
            .collect();
        let pick = |v: &[f64]| v.iter().zip(&keep).filter(|(_, &k)| k).map(|(x, _)| *x).collect();
        Self {
            r: pick(&full.r),
            x3: pick(&full.x3),
            spacing,
        }
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

/// Region of a probe point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `|z| ≤ η/2` and farther than the collar from the boundary.
    Interior,
    /// `|z| ≤ η/2` inside the boundary collar.
    Collar,
    /// `η/2 < |z| < η`.
    Blend,
    /// Outside the tube, where `U ≡ ±1`.
    Far,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub alpha: f64,
    pub spacing: f64,
    pub collar: f64,
    pub interior_sup: f64,
    /// `sup e^{σ|t|} |S(U)|` over the interior region.
    pub interior_weighted_sup: f64,
    pub sigma: f64,
    pub collar_sup: f64,
    pub blend_sup: f64,
    pub far_sup: f64,
    pub counts: RegionCounts,
    pub neumann: NeumannReport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RegionCounts {
    pub interior: usize,
    pub collar: usize,
    pub blend: usize,
    pub far: usize,
}

/// Width `4α|log α|` of the boundary collar excluded from the interior norm.
pub fn collar_width(alpha: f64) -> f64 {
    4.0 * alpha * alpha.ln().abs()
}

fn boundary_distance(domain: &AxisymDomain, r: f64, x3: f64) -> f64 {
    let p = domain.nearest_boundary_angle(r, x3);
    let (br, bx) = domain.boundary_point(p);
    (br - r).hypot(bx - x3)
}

/// `S(U)` on the probe points, with region labels.
pub fn residual_field(approx: &Approximation, domain: &AxisymDomain, grid: &ProbeGrid, exec: Exec) -> Result<(MeridianField, Vec<Region>)> {
    let alpha = approx.alpha();
    let required = alpha / 8.0;
    if grid.spacing > required * (1.0 + 1e-12) {
        return Err(Error::UnderResolved {
            spacing: grid.spacing,
            required,
        });
    }
    let eta = approx.spec.tube.eta;
    let collar = collar_width(alpha);
    let step = alpha / 100.0;
    let out: Vec<(f64, Region)> = exec.map_range(grid.len(), |i| {
        let (r, x3) = (grid.r[i], grid.x3[i]);
        let c = approx.spec.placement.c;
        match meridian_invert(c, r, x3) {
            Ok((_, z)) if z.abs() < eta + 2.0 * step => {
                let region = if z.abs() <= 0.5 * eta {
                    if boundary_distance(domain, r, x3) > collar {
                        Region::Interior
                    } else {
                        Region::Collar
                    }
                } else if z.abs() < eta {
                    Region::Blend
                } else {
                    Region::Far
                };
                (approx.residual_at(r, x3), region)
            }
            // every stencil point is a pure phase
            _ => (0.0, Region::Far),
        }
    });
    let values = out.iter().map(|p| p.0).collect();
    let regions = out.iter().map(|p| p.1).collect();
    Ok((
        MeridianField::new(grid.r.clone(), grid.x3.clone(), values, Layout::Lattice { spacing: grid.spacing }),
        regions,
    ))
}

/// Neumann defect along one boundary curve of the placement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeumannProfile {
    pub z: Vec<f64>,
    pub t: Vec<f64>,
    /// `α ∂U/∂n` at the boundary point reached along the normal line at offset `z`.
    pub defect: Vec<f64>,
}

impl NeumannProfile {
    pub fn sup(&self) -> f64 {
        self.defect.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// `∫ α∂U/∂n · w'(t) dt / ‖w'‖²`, the component along the layer mode.
    pub fn projected(&self) -> f64 {
        let p = HeteroclinicProfile;
        let c0 = 2.0 * std::f64::consts::SQRT_2 / 3.0;
        let mut s = 0.0;
        for k in 1..self.t.len() {
            let f0 = self.defect[k - 1] * p.dw(self.t[k - 1]);
            let f1 = self.defect[k] * p.dw(self.t[k]);
            s += 0.5 * (f0 + f1) * (self.t[k] - self.t[k - 1]);
        }
        s / c0
    }
}

/// Samples the Neumann defect at `count` boundary points with `|z| < η`
/// near the curve `y = y_b`.
pub fn neumann_profile(approx: &Approximation, domain: &AxisymDomain, y_b: f64, count: usize) -> Result<NeumannProfile> {
    let c = approx.spec.placement.c;
    let eta = approx.spec.tube.eta;
    let alpha = approx.alpha();
    let mut out = NeumannProfile {
        z: Vec::with_capacity(count),
        t: Vec::with_capacity(count),
        defect: Vec::with_capacity(count),
    };
    for k in 0..count {
        let z = -eta + 2.0 * eta * (k as f64 + 0.5) / count as f64;
        let g = boundary_foot(domain, c, y_b, z)?;
        let (mr, mx) = meridian_point(c, g);
        let (nr, nx) = meridian_normal(g);
        let (r, x3) = (mr + z * nr, mx + z * nx);
        let (gr, gx) = domain.grad_phi(r, x3);
        let gn = gr.hypot(gx);
        let d = approx.directional_derivative(r, x3, (gr / gn, gx / gn));
        let (h, _) = approx.spec.h.eval(g);
        out.z.push(z);
        out.t.push(z / alpha - h);
        out.defect.push(alpha * d);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NeumannReport {
    /// `sup α|∂U/∂n|` over the boundary.
    pub sup: f64,
    /// Largest layer-mode component over the two boundary curves.
    pub projected: f64,
    pub projected_top: f64,
    pub projected_bottom: f64,
}

/// Number of boundary samples per curve in [`neumann_report`].
pub const NEUMANN_SAMPLES: usize = 2001;

pub fn neumann_report(approx: &Approximation, domain: &AxisymDomain) -> Result<NeumannReport> {
    let y = approx.spec.placement.y_bar;
    let top = neumann_profile(approx, domain, y, NEUMANN_SAMPLES)?;
    let bottom = neumann_profile(approx, domain, -y, NEUMANN_SAMPLES)?;
    let (pt, pb) = (top.projected(), bottom.projected());
    Ok(NeumannReport {
        sup: top.sup().max(bottom.sup()),
        projected: pt.abs().max(pb.abs()),
        projected_top: pt,
        projected_bottom: pb,
    })
}

/// Full residual diagnostics on a probe lattice of the given spacing
/// restricted to a neighbourhood of the tube.
pub fn residual_report(approx: &Approximation, domain: &AxisymDomain, spacing: f64, exec: Exec) -> Result<(MeridianField, ResidualReport)> {
    let grid = ProbeGrid::around_tube(domain, approx, spacing, 2.0 * spacing);
    let (field, regions) = residual_field(approx, domain, &grid, exec)?;
    let c = approx.spec.placement.c;
    let mut counts = RegionCounts::default();
    let mut sups = [0.0f64; 4];
    let mut weighted = 0.0f64;
    for i in 0..field.len() {
        let v = field.values[i].abs();
        let k = match regions[i] {
            Region::Interior => {
                counts.interior += 1;
                if let Ok((y, z)) = meridian_invert(c, field.r[i], field.x3[i]) {
                    let t = z / approx.alpha() - approx.spec.h.eval(y).0;
                    weighted = weighted.max((DEFAULT_SIGMA * t.abs()).exp() * v);
                }
                0
            }
            Region::Collar => {
                counts.collar += 1;
                1
            }
            Region::Blend => {
                counts.blend += 1;
                2
            }
            Region::Far => {
                counts.far += 1;
                3
            }
        };
        sups[k] = if v.is_nan() { f64::NAN } else { sups[k].max(v) };
    }
    let neumann = neumann_report(approx, domain)?;
    let report = ResidualReport {
        alpha: approx.alpha(),
        spacing,
        collar: collar_width(approx.alpha()),
        interior_sup: sups[0],
        interior_weighted_sup: weighted,
        sigma: DEFAULT_SIGMA,
        collar_sup: sups[1],
        blend_sup: sups[2],
        far_sup: sups[3],
        counts,
        neumann,
    };
    Ok((field, report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderStudy {
    pub alphas: Vec<f64>,
    pub reports: Vec<ResidualReport>,
    pub interior_slope: f64,
    pub neumann_slope: f64,
    pub projected_slope: f64,
    /// False when the interior residuals do not decrease with α.
    pub interior_monotone: bool,
    pub neumann_monotone: bool,
}

/// Least-squares slope of `log v` against `log α`.
pub fn loglog_slope(alphas: &[f64], values: &[f64]) -> f64 {
    let n = alphas.len() as f64;
    let xs: Vec<f64> = alphas.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Residual orders over a geometric list of α; `make` builds the
/// approximation for each α and the probe spacing is `α/8`.
pub fn residual_orders<F>(domain: &AxisymDomain, alphas: &[f64], make: F, exec: Exec) -> Result<OrderStudy>
where
    F: Fn(f64) -> Result<Approximation>,
{
    if alphas.len() < 3 {
        return Err(Error::Precondition("need at least three α values".into()));
    }
    let mut reports = Vec::with_capacity(alphas.len());
    for &a in alphas {
        let approx = make(a)?;
        let (_, rep) = residual_report(&approx, domain, a / 8.0, exec)?;
        reports.push(rep);
    }
    let int: Vec<f64> = reports.iter().map(|r| r.interior_sup).collect();
    let neu: Vec<f64> = reports.iter().map(|r| r.neumann.sup).collect();
    let proj: Vec<f64> = reports.iter().map(|r| r.neumann.projected).collect();
    let monotone = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..alphas.len()).collect();
        idx.sort_by(|&i, &j| alphas[i].total_cmp(&alphas[j]));
        idx.windows(2).all(|w| v[w[0]] < v[w[1]])
    };
    Ok(OrderStudy {
        alphas: alphas.to_vec(),
        interior_slope: loglog_slope(alphas, &int),
        neumann_slope: loglog_slope(alphas, &neu),
        projected_slope: loglog_slope(alphas, &proj),
        interior_monotone: monotone(&int),
        neumann_monotone: monotone(&neu),
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::z2_root;
    use crate::domain::{critical_placement, make_ball};

    fn ball() -> (AxisymDomain, CriticalPlacement) {
        let ys = z2_root();
        let d = make_ball((1.0 + ys * ys) / ys).unwrap();
        let p = critical_placement(&d).unwrap();
        (d, p)
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.2, 0.5), 1.0);
        assert_eq!(cutoff(-0.25, 0.5), 1.0);
        assert_eq!(cutoff(0.5, 0.5), 0.0);
        assert!((cutoff(0.375, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn value_examples() {
        let (_, p) = ball();
        let a = build_approximation(ApproximationSpec::new(0.1, p)).unwrap();
        // on the neck circle with h = 0
        let v = a.value(1.0, 0.0);
        let psi0 = a.psi.value(0.0);
        assert!((v - 0.01 * 2.0 * psi0).abs() < 1e-13);
        assert_eq!(a.value(0.0, 0.0), 1.0);
        assert_eq!(a.value(2.0, 0.0), -1.0);
        let off = build_approximation(ApproximationSpec::new(0.1, p).with_psi1(false)).unwrap();
        assert!(off.value(1.0, 0.0).abs() < 1e-13);
        // the two sides of the surface carry opposite layer values
        let (nr, nx) = meridian_normal(0.3);
        let (mr, mx) = meridian_point(1.0, 0.3);
        let up = off.value(mr + 0.05 * nr, mx + 0.05 * nx);
        let down = off.value(mr - 0.05 * nr, mx - 0.05 * nx);
        assert!((up + down).abs() < 1e-12 && up > 0.0);
    }

    #[test]
    fn rejects_bad_spec() {
        let (_, p) = ball();
        assert!(build_approximation(ApproximationSpec::new(0.0, p)).is_err());
        let mut s = ApproximationSpec::new(0.1, p);
        s.tube.eta = 2.0;
        assert!(build_approximation(s).is_err());
    }

    #[test]
    fn under_resolved_probe_grid_is_refused() {
        let (d, p) = ball();
        let a = build_approximation(ApproximationSpec::new(0.1, p)).unwrap();
        let g = ProbeGrid::covering(&d, 0.1);
        assert!(matches!(residual_field(&a, &d, &g, Exec::Sequential), Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn slope_of_power_law() {
        let a = [0.16, 0.08, 0.04];
        let v: Vec<f64> = a.iter().map(|x: &f64| 3.0 * x.powi(4)).collect();
        assert!((loglog_slope(&a, &v) - 4.0).abs() < 1e-12);
    }
}
