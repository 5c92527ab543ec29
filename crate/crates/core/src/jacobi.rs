//! The Jacobi operator of the catenoid restricted to Fourier modes,
//! with Robin boundary conditions on a chart interval `[y₁, y₂]`.
//!
//! Mode `m` of the operator is
//! `L_m h = h'' + (y/(1+y²)) h' + (2/(1+y²)² - m²/(1+y²)) h`
//! and the boundary rows are `h'(y₁) + κ₁h(y₁) = g₁`, `h'(y₂) - κ₂h(y₂) = g₂`
//! with `κᵢ = Kᵢc` in chart units.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catenoid::jacobi_fields;
use crate::domain::CriticalPlacement;
use crate::error::{Error, Result};
use crate::profile::ProfileConstants;
use crate::quadrature::{integrate, QuadSettings};
use crate::tridiag::{thomas, SymTridiag};

/// Eigenvalues with `|λ|` below this are treated as zero.
pub const ZERO_TOLERANCE: f64 = 1e-8;

/// Exponent of the Lebesgue norms in [`star_norm`].
pub const STAR_NORM_P: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeCoefficients {
    /// Coefficient of `h'`.
    pub first: f64,
    /// Coefficient of `h`.
    pub zeroth: f64,
}

pub fn mode_operator(m: u32, y: f64) -> ModeCoefficients {
    let q = 1.0 + y * y;
    let m2 = (m as f64) * (m as f64);
    ModeCoefficients {
        first: y / q,
        zeroth: 2.0 / (q * q) - m2 / q,
    }
}

/// `L_m h` from pointwise values of `h`, `h'`, `h''`.
pub fn apply_mode_operator(m: u32, y: f64, h: f64, dh: f64, d2h: f64) -> f64 {
    let k = mode_operator(m, y);
    d2h + k.first * dh + k.zeroth * h
}

/// Determinant of the boundary rows applied to the fundamental system
/// `(z₁, z₂)`; zero exactly when the homogeneous mode-0 problem has a
/// nontrivial solution.
pub fn nondeg_determinant(y1: f64, y2: f64, kappa1: f64, kappa2: f64) -> f64 {
    let [a, b, c, d] = boundary_matrix(y1, y2, kappa1, kappa2);
    a * d - b * c
}

fn boundary_matrix(y1: f64, y2: f64, kappa1: f64, kappa2: f64) -> [f64; 4] {
    let l = jacobi_fields(y1);
    let r = jacobi_fields(y2);
    [
        l.dz1 + kappa1 * l.z1,
        l.dz2 + kappa1 * l.z2,
        r.dz1 - kappa2 * r.z1,
        r.dz2 - kappa2 * r.z2,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RobinProblem {
    pub y1: f64,
    pub y2: f64,
    pub mode: u32,
    pub kappa1: f64,
    pub kappa2: f64,
    pub g1: f64,
    pub g2: f64,
}

impl RobinProblem {
    pub fn homogeneous(y1: f64, y2: f64, mode: u32, kappa1: f64, kappa2: f64) -> Self {
        Self {
            y1,
            y2,
            mode,
            kappa1,
            kappa2,
            g1: 0.0,
            g2: 0.0,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.y1 < self.y2) || !self.y1.is_finite() || !self.y2.is_finite() {
            return Err(Error::Domain(format!("need y1 < y2, got [{}, {}]", self.y1, self.y2)));
        }
        Ok(())
    }
}

/// Samples of a solution on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobinSolution {
    pub y: Vec<f64>,
    pub h: Vec<f64>,
    pub dh: Vec<f64>,
    pub d2h: Vec<f64>,
}

fn uniform(y1: f64, y2: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| y1 + (y2 - y1) * i as f64 / n as f64).collect()
}

/// Mode-0 solve through the fundamental system and variation of parameters,
/// sampled at `n + 1` uniform points.
pub fn solve_robin_fundamental<F>(p: &RobinProblem, f: F, n: usize) -> Result<RobinSolution>
where
    F: Fn(f64) -> f64,
{
    p.check()?;
    if p.mode != 0 {
        return Err(Error::Domain(format!("the fundamental system covers mode 0 only, got mode {}", p.mode)));
    }
    if n < 2 {
        return Err(Error::Precondition("need at least two intervals".into()));
    }
    let y = uniform(p.y1, p.y2, n);
    // A(y) = ∫ z₂ f ρ, B(y) = ∫ z₁ f ρ from y₁, with 1/W = ρ = √(1+y²)
    let settings = QuadSettings {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        max_intervals: 400,
    };
    let mut big_a = vec![0.0; n + 1];
    let mut big_b = vec![0.0; n + 1];
    for i in 1..=n {
        let qa = integrate(
            |s| jacobi_fields(s).z2 * f(s) * (1.0 + s * s).sqrt(),
            y[i - 1],
            y[i],
            settings,
        )?;
        let qb = integrate(
            |s| jacobi_fields(s).z1 * f(s) * (1.0 + s * s).sqrt(),
            y[i - 1],
            y[i],
            settings,
        )?;
        big_a[i] = big_a[i - 1] + qa.value;
        big_b[i] = big_b[i - 1] + qb.value;
    }
    let hp = |i: usize| {
        let j = jacobi_fields(y[i]);
        (-j.z1 * big_a[i] + j.z2 * big_b[i], -j.dz1 * big_a[i] + j.dz2 * big_b[i])
    };
    let (hp1, dhp1) = hp(0);
    let (hp2, dhp2) = hp(n);
    let m = boundary_matrix(p.y1, p.y2, p.kappa1, p.kappa2);
    let det = m[0] * m[3] - m[1] * m[2];
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs())).powi(2);
    if det.abs() <= 1e-12 * scale {
        return Err(Error::Degenerate { det });
    }
    let r1 = p.g1 - (dhp1 + p.kappa1 * hp1);
    let r2 = p.g2 - (dhp2 - p.kappa2 * hp2);
    let ca = (r1 * m[3] - r2 * m[1]) / det;
    let cb = (m[0] * r2 - m[2] * r1) / det;
    let mut out = RobinSolution {
        y: y.clone(),
        h: vec![0.0; n + 1],
        dh: vec![0.0; n + 1],
        d2h: vec![0.0; n + 1],
    };
    for i in 0..=n {
        let j = jacobi_fields(y[i]);
        let (a, b) = hp(i);
        let h = ca * j.z1 + cb * j.z2 + a;
        let dh = ca * j.dz1 + cb * j.dz2 + b;
        let k = mode_operator(0, y[i]);
        out.h[i] = h;
        out.dh[i] = dh;
        out.d2h[i] = f(y[i]) - k.first * dh - k.zeroth * h;
    }
    Ok(out)
}

/// Second-order finite differences for any mode, with one-sided Robin
/// closures folded into a tridiagonal system.
pub fn solve_robin_fd<F>(p: &RobinProblem, f: F, n: usize) -> Result<RobinSolution>
where
    F: Fn(f64) -> f64,
{
    p.check()?;
    if n < 4 {
        return Err(Error::Precondition("need at least four intervals".into()));
    }
    if p.mode == 0 {
        let m = boundary_matrix(p.y1, p.y2, p.kappa1, p.kappa2);
        let det = m[0] * m[3] - m[1] * m[2];
        let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs())).powi(2);
        if det.abs() <= 1e-12 * scale {
            return Err(Error::Degenerate { det });
        }
    }
    let y = uniform(p.y1, p.y2, n);
    let dx = (p.y2 - p.y1) / n as f64;
    let fv: Vec<f64> = y.iter().map(|&s| f(s)).collect();
    let mut lower = vec![0.0; n + 1];
    let mut diag = vec![0.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    let mut rhs = fv.clone();
    let row = |i: usize| {
        let k = mode_operator(p.mode, y[i]);
        (
            1.0 / (dx * dx) - k.first / (2.0 * dx),
            -2.0 / (dx * dx) + k.zeroth,
            1.0 / (dx * dx) + k.first / (2.0 * dx),
        )
    };
    for i in 1..n {
        let (a, b, c) = row(i);
        lower[i] = a;
        diag[i] = b;
        upper[i] = c;
    }
    let (a1, b1, c1) = row(1);
    diag[0] = -1.5 / dx + p.kappa1 + a1 / (2.0 * dx * c1);
    upper[0] = 2.0 / dx + b1 / (2.0 * dx * c1);
    rhs[0] = p.g1 + fv[1] / (2.0 * dx * c1);
    let (an, bn, cn) = row(n - 1);
    diag[n] = 1.5 / dx - p.kappa2 - cn / (2.0 * dx * an);
    lower[n] = -2.0 / dx - bn / (2.0 * dx * an);
    rhs[n] = p.g2 - fv[n - 1] / (2.0 * dx * an);
    let h = thomas(&lower, &diag, &upper, &rhs).map_err(|e| match e {
        Error::LinearSolve(_) => Error::Degenerate { det: 0.0 },
        other => other,
    })?;
    let mut dh = vec![0.0; n + 1];
    for i in 1..n {
        dh[i] = (h[i + 1] - h[i - 1]) / (2.0 * dx);
    }
    dh[0] = (-3.0 * h[0] + 4.0 * h[1] - h[2]) / (2.0 * dx);
    dh[n] = (3.0 * h[n] - 4.0 * h[n - 1] + h[n - 2]) / (2.0 * dx);
    let d2h = (0..=n)
        .map(|i| {
            let k = mode_operator(p.mode, y[i]);
            fv[i] - k.first * dh[i] - k.zeroth * h[i]
        })
        .collect();
    Ok(RobinSolution { y, h, dh, d2h })
}

fn trapezoid_weights(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|i| {
            let l = if i > 0 { y[i] - y[i - 1] } else { 0.0 };
            let r = if i + 1 < n { y[i + 1] - y[i] } else { 0.0 };
            0.5 * (l + r)
        })
        .collect()
}

/// `‖D²h‖_{L^p(M)} + ‖h'‖_∞ + ‖h‖_∞` for an axially symmetric `h` on the
/// unit catenoid piece, with `|D²h|² = h''² + (y h'/(1+y²))²`.
pub fn star_norm(sol: &RobinSolution, p: f64) -> f64 {
    let w = trapezoid_weights(&sol.y);
    let mut lp = 0.0;
    for i in 0..sol.y.len() {
        let y = sol.y[i];
        let q = 1.0 + y * y;
        let hess = sol.d2h[i].hypot(y * sol.dh[i] / q);
        lp += w[i] * 2.0 * std::f64::consts::PI * q.sqrt() * hess.powf(p);
    }
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    lp.powf(1.0 / p) + sup(&sol.dh) + sup(&sol.h)
}

/// `‖f‖_{L^p(M)} + ‖g‖_{L^p(∂M)}` for axially symmetric data.
pub fn data_norm<F: Fn(f64) -> f64>(prob: &RobinProblem, f: F, n: usize, p: f64) -> f64 {
    let y = uniform(prob.y1, prob.y2, n);
    let w = trapezoid_weights(&y);
    let two_pi = 2.0 * std::f64::consts::PI;
    let fp: f64 = y
        .iter()
        .zip(&w)
        .map(|(&s, &wi)| wi * two_pi * (1.0 + s * s).sqrt() * f(s).abs().powf(p))
        .sum();
    let rho = |s: f64| (1.0 + s * s).sqrt();
    let gp = two_pi * (rho(prob.y1) * prob.g1.abs().powf(p) + rho(prob.y2) * prob.g2.abs().powf(p));
    fp.powf(1.0 / p) + gp.powf(1.0 / p)
}

/// Quadratic form `Q(h, h)` of mode `m` with the Robin boundary terms; the
/// eigenvalues of `J_m` satisfy `Q(h, h) = -λ ∫ h² ρ`.
pub fn quadratic_form<H>(y1: f64, y2: f64, m: u32, kappa1: f64, kappa2: f64, h: H) -> Result<f64>
where
    H: Fn(f64) -> (f64, f64),
{
    let m2 = (m as f64).powi(2);
    let q = integrate(
        |y| {
            let (v, dv) = h(y);
            let s = 1.0 + y * y;
            (dv * dv + m2 * v * v / s - 2.0 * v * v / (s * s)) * s.sqrt()
        },
        y1,
        y2,
        QuadSettings::rel(1e-12),
    )?;
    let rho = |y: f64| (1.0 + y * y).sqrt();
    let (h1, _) = h(y1);
    let (h2, _) = h(y2);
    Ok(q.value - kappa1 * rho(y1) * h1 * h1 - kappa2 * rho(y2) * h2 * h2)
}

/// Discrete spectrum of `J_m` on `n` uniform intervals, `count` largest
/// eigenvalues in descending order.
pub fn mode_eigenvalues(y1: f64, y2: f64, m: u32, kappa1: f64, kappa2: f64, n: usize, count: usize) -> Result<Vec<f64>> {
    if !(y1 < y2) {
        return Err(Error::Domain(format!("need y1 < y2, got [{y1}, {y2}]")));
    }
    if n < 4 {
        return Err(Error::Eigen("need at least four intervals".into()));
    }
    let y = uniform(y1, y2, n);
    let dx = (y2 - y1) / n as f64;
    let rho = |s: f64| (1.0 + s * s).sqrt();
    let m2 = (m as f64).powi(2);
    let w = trapezoid_weights(&y);
    // Q as a symmetric form: midpoint stiffness, lumped potential and mass
    let mut s_diag = vec![0.0; n + 1];
    let mut s_off = vec![0.0; n];
    for i in 0..n {
        let k = rho(0.5 * (y[i] + y[i + 1])) / dx;
        s_diag[i] += k;
        s_diag[i + 1] += k;
        s_off[i] = -k;
    }
    let mut mass = vec![0.0; n + 1];
    for i in 0..=n {
        let q = 1.0 + y[i] * y[i];
        s_diag[i] += w[i] * (m2 / q - 2.0 / (q * q)) * rho(y[i]);
        mass[i] = w[i] * rho(y[i]);
    }
    s_diag[0] -= kappa1 * rho(y1);
    s_diag[n] -= kappa2 * rho(y2);
    // λ is an eigenvalue of -M^{-1/2} S M^{-1/2}
    let d: Vec<f64> = (0..=n).map(|i| -s_diag[i] / mass[i]).collect();
    let e: Vec<f64> = (0..n).map(|i| -s_off[i] / (mass[i] * mass[i + 1]).sqrt()).collect();
    SymTridiag::new(d, e)?.largest(count)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeSpectrum {
    pub mode: u32,
    /// Richardson-extrapolated eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Difference between the extrapolations from grids `(n, 2n)` and `(2n, 4n)`.
    pub drift: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobinSpectralReport {
    pub modes: Vec<ModeSpectrum>,
    pub nondegenerate: bool,
    /// Number of listed eigenvalues above the zero tolerance.
    pub morse_index: usize,
    /// The same count with modes `m ≥ 1` weighted by their two-dimensional
    /// (cos, sin) eigenspaces.
    pub morse_index_with_multiplicity: usize,
    pub min_abs_eigenvalue: f64,
    pub tolerance: f64,
}

/// Base grid of the spectral solve; the extrapolation uses `n`, `2n`, `4n`.
pub const SPECTRUM_GRID: usize = 800;

pub fn spectrum(y1: f64, y2: f64, kappa1: f64, kappa2: f64, modes: &[u32], count: usize) -> Result<RobinSpectralReport> {
    spectrum_with_grid(y1, y2, kappa1, kappa2, modes, count, SPECTRUM_GRID)
}

/// Richardson-extrapolated `count` largest eigenvalues of mode `m`, plus drift.
pub fn mode_spectrum(y1: f64, y2: f64, m: u32, kappa1: f64, kappa2: f64, count: usize, n: usize) -> Result<ModeSpectrum> {
    let l1 = mode_eigenvalues(y1, y2, m, kappa1, kappa2, n, count)?;
    let l2 = mode_eigenvalues(y1, y2, m, kappa1, kappa2, 2 * n, count)?;
    let l4 = mode_eigenvalues(y1, y2, m, kappa1, kappa2, 4 * n, count)?;
    let r12: Vec<f64> = l1.iter().zip(&l2).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
    let r24: Vec<f64> = l2.iter().zip(&l4).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
    let drift = r12.iter().zip(&r24).map(|(a, b)| (a - b).abs()).collect();
    if r24.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen(format!("non-finite eigenvalue in mode {m}")));
    }
    Ok(ModeSpectrum {
        mode: m,
        eigenvalues: r24,
        drift,
    })
}

pub fn spectrum_with_grid(
    y1: f64,
    y2: f64,
    kappa1: f64,
    kappa2: f64,
    modes: &[u32],
    count: usize,
    n: usize,
) -> Result<RobinSpectralReport> {
    if count == 0 {
        return Err(Error::Precondition("eigenvalue count must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(modes.len());
    for &m in modes {
        out.push(mode_spectrum(y1, y2, m, kappa1, kappa2, count, n)?);
    }
    let all = || out.iter().flat_map(|s| s.eigenvalues.iter().map(move |&l| (s.mode, l)));
    let min_abs = all().fold(f64::INFINITY, |a, (_, l)| a.min(l.abs()));
    let morse_index = all().filter(|&(_, l)| l > ZERO_TOLERANCE).count();
    let morse_mult = all()
        .filter(|&(_, l)| l > ZERO_TOLERANCE)
        .map(|(m, _)| if m == 0 { 1 } else { 2 })
        .sum();
    Ok(RobinSpectralReport {
        modes: out,
        nondegenerate: min_abs > ZERO_TOLERANCE,
        morse_index,
        morse_index_with_multiplicity: morse_mult,
        min_abs_eigenvalue: min_abs,
        tolerance: ZERO_TOLERANCE,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityCertificate {
    pub certified: bool,
    /// `min_i (∂_τ log z - κᵢ)` over the two boundary curves.
    pub margin: f64,
    /// Smallest sampled `Q(φ, φ) / ∫ φ² ρ` over random test functions.
    pub sampled_min_ratio: f64,
    pub samples: usize,
}

/// Number of random test functions drawn by [`stability_certificate`].
pub const CERTIFICATE_SAMPLES: usize = 100;

/// Sufficient condition for stability of the mode-0 form: a positive Jacobi
/// field `z` with `κᵢ < ∂_τ log z` on both boundary curves.
///
/// `z` returns `(z, z', z'')`. The verdict is cross-checked by sampling `Q`
/// on random test functions.
pub fn stability_certificate<Z>(y1: f64, y2: f64, kappa1: f64, kappa2: f64, z: Z, seed: u64) -> Result<StabilityCertificate>
where
    Z: Fn(f64) -> (f64, f64, f64),
{
    if !(y1 < y2) {
        return Err(Error::Domain(format!("need y1 < y2, got [{y1}, {y2}]")));
    }
    let probe = 1000;
    let mut zmax = 0.0f64;
    for k in 0..=probe {
        let y = y1 + (y2 - y1) * k as f64 / probe as f64;
        let (v, dv, d2v) = z(y);
        if !(v > 0.0) {
            return Err(Error::Precondition(format!("z is not positive at y = {y}")));
        }
        zmax = zmax.max(v.abs());
        let res = apply_mode_operator(0, y, v, dv, d2v);
        if res.abs() > 1e-8 * (v.abs() + dv.abs() + d2v.abs()) {
            return Err(Error::Precondition(format!("z is not a Jacobi field (L₀z = {res:e} at y = {y})")));
        }
    }
    let (z1, dz1, _) = z(y1);
    let (z2, dz2, _) = z(y2);
    // outward conormal derivative: -∂_y at y₁, +∂_y at y₂
    let margin = (-dz1 / z1 - kappa1).min(dz2 / z2 - kappa2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = f64::INFINITY;
    let mid = 0.5 * (y1 + y2);
    let half = 0.5 * (y2 - y1);
    for _ in 0..CERTIFICATE_SAMPLES {
        // random polynomial of degree ≤ 5 in the scaled variable
        let coef: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let phi = |y: f64| {
            let s = (y - mid) / half;
            let mut v = 0.0;
            let mut dv = 0.0;
            for k in (0..coef.len()).rev() {
                dv = dv * s + v;
                v = v * s + coef[k];
            }
            (v, dv / half)
        };
        let q = quadratic_form(y1, y2, 0, kappa1, kappa2, phi)?;
        let norm = integrate(
            |y| phi(y).0.powi(2) * (1.0 + y * y).sqrt(),
            y1,
            y2,
            QuadSettings::rel(1e-12),
        )?
        .value;
        min_ratio = min_ratio.min(q / norm);
    }
    Ok(StabilityCertificate {
        certified: margin > 0.0,
        margin,
        sampled_min_ratio: min_ratio,
        samples: CERTIFICATE_SAMPLES,
    })
}

/// Main-order interface displacement: the mode-0 Robin solve with zero
/// interior data and boundary data `±(α/c) c₁ κᵢ (m₁c)`, in layer units
/// (the physical normal shift is `α h`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReducedH {
    pub alpha: f64,
    pub y_bar: f64,
    /// `h = a z₁ + b z₂` on `[-ȳ, ȳ]`.
    pub a: f64,
    pub b: f64,
    pub star_norm: f64,
    /// `‖h‖_* / α`.
    pub kappa_const: f64,
}

impl ReducedH {
    pub fn zero(y_bar: f64) -> Self {
        Self {
            alpha: 0.0,
            y_bar,
            a: 0.0,
            b: 0.0,
            star_norm: 0.0,
            kappa_const: 0.0,
        }
    }

    /// `(h, h')` on the chart interval; linear continuation outside.
    pub fn eval(&self, y: f64) -> (f64, f64) {
        let (h, dh, _) = self.eval2(y);
        (h, dh)
    }

    /// `(h, h', h'')`, with `h'' = 0` on the linear continuation.
    pub fn eval2(&self, y: f64) -> (f64, f64, f64) {
        let at = |s: f64| {
            let j = jacobi_fields(s);
            (
                self.a * j.z1 + self.b * j.z2,
                self.a * j.dz1 + self.b * j.dz2,
                self.a * j.d2z1 + self.b * j.d2z2,
            )
        };
        if y.abs() <= self.y_bar {
            at(y)
        } else {
            let e = self.y_bar.copysign(y);
            let (h, dh, _) = at(e);
            (h + dh * (y - e), dh, 0.0)
        }
    }

    pub fn sample(&self, n: usize) -> RobinSolution {
        let y = uniform(-self.y_bar, self.y_bar, n);
        let mut sol = RobinSolution {
            h: vec![0.0; n + 1],
            dh: vec![0.0; n + 1],
            d2h: vec![0.0; n + 1],
            y,
        };
        for i in 0..=n {
            let s = sol.y[i];
            let j = jacobi_fields(s);
            sol.h[i] = self.a * j.z1 + self.b * j.z2;
            sol.dh[i] = self.a * j.dz1 + self.b * j.dz2;
            sol.d2h[i] = self.a * j.d2z1 + self.b * j.d2z2;
        }
        sol
    }
}

/// Robin data of the reduced problem at the two boundary curves.
pub fn reduced_robin_problem(placement: &CriticalPlacement, alpha: f64, constants: &ProfileConstants) -> RobinProblem {
    let (k1, k2) = placement.kappa();
    let m1c = placement.m1 * placement.c;
    let s = alpha / placement.c * constants.c1 * m1c;
    RobinProblem {
        y1: -placement.y_bar,
        y2: placement.y_bar,
        mode: 0,
        kappa1: k1,
        kappa2: k2,
        g1: s * k1,
        g2: -s * k2,
    }
}

pub fn solve_reduced_h(placement: &CriticalPlacement, alpha: f64, constants: &ProfileConstants) -> Result<ReducedH> {
    if !(alpha >= 0.0) {
        return Err(Error::Precondition(format!("α must be non-negative, got {alpha}")));
    }
    let p = reduced_robin_problem(placement, alpha, constants);
    let m = boundary_matrix(p.y1, p.y2, p.kappa1, p.kappa2);
    let det = m[0] * m[3] - m[1] * m[2];
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs())).powi(2);
    if det.abs() <= 1e-12 * scale {
        return Err(Error::Degenerate { det });
    }
    let a = (p.g1 * m[3] - p.g2 * m[1]) / det;
    let b = (m[0] * p.g2 - m[2] * p.g1) / det;
    let mut out = ReducedH {
        alpha,
        y_bar: placement.y_bar,
        a,
        b,
        star_norm: 0.0,
        kappa_const: 0.0,
    };
    out.star_norm = star_norm(&out.sample(2000), STAR_NORM_P);
    out.kappa_const = if alpha > 0.0 { out.star_norm / alpha } else { 0.0 };
    Ok(out)
}
