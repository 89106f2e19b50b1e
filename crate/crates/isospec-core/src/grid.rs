//! Uniform grids, sampled functions and finite-difference differentiation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::smooth::SmoothFn;

/// Boundary treatment attached to a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Function vanishes at both endpoints (hard walls).
    Dirichlet,
    /// No boundary condition imposed.
    Natural,
}

/// A uniform one-dimensional grid with exact endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lower: f64,
    upper: f64,
    count: usize,
    spacing: f64,
    boundary: BoundaryKind,
}

impl Grid {
    /// Uniform grid on `[lower, upper]` with `count >= 2` points.
    pub fn uniform(lower: f64, upper: f64, count: usize) -> Result<Grid> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::InvalidArgument(format!(
                "degenerate grid bounds [{lower}, {upper}]"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidArgument(format!("grid needs >= 2 points, got {count}")));
        }
        let spacing = (upper - lower) / (count - 1) as f64;
        Ok(Grid { lower, upper, count, spacing, boundary: BoundaryKind::Natural })
    }

    pub fn with_boundary(mut self, boundary: BoundaryKind) -> Grid {
        self.boundary = boundary;
        self
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }
    pub fn upper(&self) -> f64 {
        self.upper
    }
    pub fn len(&self) -> usize {
        self.count
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    /// i-th point; endpoints are reproduced exactly.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        if i == 0 {
            self.lower
        } else if i == self.count - 1 {
            self.upper
        } else {
            self.lower + self.spacing * i as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.point(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    /// Index range with `margin` points dropped at each boundary (clamped so
    /// the range never becomes empty).
    pub fn interior(&self, margin: usize) -> core::ops::Range<usize> {
        let m = margin.min((self.count.saturating_sub(1)) / 2);
        m..self.count - m
    }
}

/// Function values sampled on a grid, with optional derivative samples.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub derivative: Option<Vec<f64>>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "value array length {} does not match grid point count {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledFunction { grid, values, derivative: None })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        SampledFunction { grid, values, derivative: None }
    }

    /// Samples a [`SmoothFn`]; derivative samples are attached when available.
    pub fn from_smooth(grid: Grid, f: &SmoothFn) -> Self {
        let values: Vec<f64> = grid.points().map(|x| f.eval(x)).collect();
        let derivative = if f.has_deriv(1) {
            Some(grid.points().map(|x| f.d1(x).expect("checked")).collect())
        } else {
            None
        };
        SampledFunction { grid, values, derivative }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_interior(&self, margin: usize) -> f64 {
        let range = self.grid.interior(margin);
        self.values[range].iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Second-order finite differences: central stencil in the interior,
/// one-sided three-point stencils at the edges.  Exact for quadratics.
pub fn differentiate(f: &SampledFunction) -> Result<SampledFunction> {
    let n = f.grid.len();
    if n < 3 {
        return Err(Error::InvalidArgument("differentiate needs at least 3 grid points".into()));
    }
    let h = f.grid.spacing();
    let v = &f.values;
    let mut out = Vec::with_capacity(n);
    out.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h));
    for i in 1..n - 1 {
        out.push((v[i + 1] - v[i - 1]) / (2.0 * h));
    }
    out.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h));
    Ok(SampledFunction { grid: f.grid, values: out, derivative: None })
}
