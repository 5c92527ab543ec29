//! Symmetric and general tridiagonal kernels: Thomas elimination and
//! Sturm-sequence bisection for eigenvalues.

use crate::error::{Error, Result};

/// Solves `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored. Fails on a pivot that is zero
/// relative to the row scale.
pub fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n || n == 0 {
        return Err(Error::LinearSolve("tridiagonal bands have inconsistent lengths".into()));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut min_ratio = f64::INFINITY;
    for i in 0..n {
        let l = if i > 0 { lower[i] } else { 0.0 };
        let piv = diag[i] - if i > 0 { l * c[i - 1] } else { 0.0 };
        let scale = diag[i].abs() + l.abs() + upper[i].abs();
        min_ratio = min_ratio.min(piv.abs() / scale.max(f64::MIN_POSITIVE));
        if piv == 0.0 || !piv.is_finite() {
            return Err(Error::LinearSolve(format!("zero pivot in row {i}")));
        }
        c[i] = if i + 1 < n { upper[i] / piv } else { 0.0 };
        d[i] = (rhs[i] - if i > 0 { l * d[i - 1] } else { 0.0 }) / piv;
    }
    if min_ratio < 1e-13 {
        return Err(Error::LinearSolve(format!("numerically singular system (pivot ratio {min_ratio:e})")));
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e.len() == d.len() - 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiag {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Result<Self> {
        if d.is_empty() || e.len() + 1 != d.len() {
            return Err(Error::Eigen("off-diagonal length must be one less than the diagonal".into()));
        }
        if d.iter().chain(&e).any(|x| !x.is_finite()) {
            return Err(Error::Eigen("matrix has non-finite entries".into()));
        }
        Ok(Self { d, e })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.d.len() {
            let e2 = if i > 0 { self.e[i - 1] * self.e[i - 1] } else { 0.0 };
            q = self.d[i] - x - if i > 0 { e2 / q } else { 0.0 };
            if q == 0.0 {
                q = -f64::EPSILON * (self.d[i].abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.d.len() {
            return Err(Error::Eigen(format!("index {k} out of range for size {}", self.d.len())));
        }
        let (mut lo, mut hi) = self.bounds();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        lo -= 1e-12 * scale;
        hi += 1e-12 * scale;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * scale {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `count` largest eigenvalues, in descending order.
    pub fn largest(&self, count: usize) -> Result<Vec<f64>> {
        let n = self.d.len();
        let count = count.min(n);
        (0..count).map(|j| self.eigenvalue(n - 1 - j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves() {
        let n = 6;
        let lower = vec![-1.0; n];
        let diag = vec![2.5; n];
        let upper = vec![-1.0; n];
        let x0: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let rhs: Vec<f64> = (0..n)
            .map(|i| {
                let mut s = 2.5 * x0[i];
                if i > 0 {
                    s -= x0[i - 1];
                }
                if i + 1 < n {
                    s -= x0[i + 1];
                }
                s
            })
            .collect();
        let x = thomas(&lower, &diag, &upper, &rhs).unwrap();
        for i in 0..n {
            assert!((x[i] - x0[i]).abs() < 1e-14);
        }
        assert!(thomas(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        for k in 0..n {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k).unwrap() - exact).abs() < 1e-13);
        }
        let top = t.largest(3).unwrap();
        assert!(top[0] > top[1] && top[1] > top[2]);
    }
}
