//! Scalar fields sampled at points of the meridian half-plane `{r ≥ 0}`.

use serde::Serialize;
use std::io::{self, Write};

/// How the sample points were generated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Layout {
    /// Uniform box lattice with `spacing`, clipped to the container.
    Lattice { spacing: f64 },
    /// Cell centres of the `(ξ, φ)` solver grid, `φ` fastest.
    Polar { n_xi: usize, n_phi: usize },
    Scattered,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeridianField {
    pub r: Vec<f64>,
    pub x3: Vec<f64>,
    pub values: Vec<f64>,
    pub layout: Layout,
}

impl MeridianField {
    pub fn new(r: Vec<f64>, x3: Vec<f64>, values: Vec<f64>, layout: Layout) -> Self {
        assert!(r.len() == x3.len() && r.len() == values.len());
        Self { r, x3, values, layout }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
    }

    /// `sup |values|` over entries with `mask[i]`.
    pub fn masked_sup(&self, mask: &[bool]) -> f64 {
        self.values
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .fold(0.0f64, |m, (x, _)| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
    }

    /// CSV with header `r,x3,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "r,x3,value")?;
        for i in 0..self.len() {
            writeln!(out, "{:.12e},{:.12e},{:.12e}", self.r[i], self.x3[i], self.values[i])?;
        }
        Ok(())
    }
}
