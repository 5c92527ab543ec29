use std::fmt;
use std::path::{Path, PathBuf};

use phase_catenoid::catenoid::z2_root;
use phase_catenoid::domain::{make_ellipsoid, AxisymDomain};
use phase_catenoid::solver::Seed;
use serde::{Deserialize, Serialize};

/// Invalid or unreadable configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Ball,
    Ellipsoid,
}

/// `{"shape": "ball", "a": R}` or `{"shape": "ellipsoid", "a": …, "b": …}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub shape: Shape,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl Default for DomainSpec {
    /// The ball in which the unit-neck catenoid is critical.
    fn default() -> Self {
        let y = z2_root();
        DomainSpec {
            shape: Shape::Ball,
            a: (1.0 + y * y) / y,
            b: None,
        }
    }
}

impl DomainSpec {
    pub fn build(&self) -> Result<AxisymDomain, ConfigError> {
        let b = match (self.shape, self.b) {
            (Shape::Ball, None) => self.a,
            (Shape::Ball, Some(b)) if b == self.a => b,
            (Shape::Ball, Some(b)) => {
                return Err(ConfigError(format!("ball with a = {} and b = {b}; use shape \"ellipsoid\"", self.a)))
            }
            (Shape::Ellipsoid, Some(b)) => b,
            (Shape::Ellipsoid, None) => return Err(ConfigError("ellipsoid needs both \"a\" and \"b\"".into())),
        };
        make_ellipsoid(self.a, b).map_err(|e| ConfigError(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Absolute tolerance of the profile-constant quadratures.
    pub quadrature: f64,
    /// Newton stopping tolerance on the max-norm residual.
    pub newton: f64,
    pub max_iter: usize,
    pub min_damping: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quadrature: 1e-13,
            newton: 1e-9,
            max_iter: 15,
            min_damping: 1.0 / 1024.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub domain: DomainSpec,
    /// Defaults to `[0.16, 0.08, 0.04]` for `residual` and `[0.2, 0.1, 0.05]` for `solve`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    /// Grid cells per layer width `α√2`.
    pub points_per_width: f64,
    pub tolerances: Tolerances,
    pub with_psi1: bool,
    pub with_reduced_h: bool,
    /// Fourier modes of the reported Jacobi–Robin spectrum.
    pub modes: Vec<u32>,
    /// Eigenvalues reported per mode.
    pub eigenvalues: usize,
    /// Half-width of the profile table.
    pub t_max: f64,
    pub seed: Seed,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            domain: DomainSpec::default(),
            alphas: None,
            points_per_width: 8.0,
            tolerances: Tolerances::default(),
            with_psi1: true,
            with_reduced_h: true,
            modes: vec![0],
            eigenvalues: 4,
            t_max: 12.0,
            seed: Seed::Approximation,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = &self.tolerances;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("tolerances.quadrature", t.quadrature)?;
        positive("tolerances.newton", t.newton)?;
        if t.max_iter == 0 {
            return Err(ConfigError("tolerances.max_iter must be at least 1".into()));
        }
        if !(t.min_damping > 0.0 && t.min_damping <= 1.0) {
            return Err(ConfigError(format!("tolerances.min_damping must lie in (0, 1], got {}", t.min_damping)));
        }
        if !(self.points_per_width >= 8.0) || !self.points_per_width.is_finite() {
            return Err(ConfigError(format!("points_per_width must be at least 8, got {}", self.points_per_width)));
        }
        if let Some(alphas) = &self.alphas {
            if alphas.is_empty() {
                return Err(ConfigError("alphas must not be empty".into()));
            }
            if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
                return Err(ConfigError(format!("alphas must be positive, got {a}")));
            }
        }
        if self.modes.is_empty() {
            return Err(ConfigError("modes must not be empty".into()));
        }
        if self.eigenvalues == 0 {
            return Err(ConfigError("eigenvalues must be at least 1".into()));
        }
        if !(self.t_max >= 8.0 && self.t_max <= 20.0) {
            return Err(ConfigError(format!("t_max must lie in [8, 20], got {}", self.t_max)));
        }
        self.domain.build()?;
        Ok(())
    }
}

/// Parses `0..3` (inclusive), `2` or `0,1,3`.
pub fn parse_modes(s: &str) -> Result<Vec<u32>, ConfigError> {
    let bad = || ConfigError(format!("cannot parse modes {s:?}; expected e.g. 0..3 or 0,2"));
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}
