//! Single source for the numerical tolerances used across the crate.

/// Tolerances and budgets.  All modules take these by value; defaults are
/// sensible for double precision and are what the verification suite runs at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute quadrature tolerance.
    pub quad_abs: f64,
    /// Relative quadrature target used when integrands are very large or very
    /// small in magnitude (the absolute tolerance is rescaled by a first-pass
    /// estimate of the integral).
    pub quad_rel: f64,
    /// Evaluation budget for one adaptive integral.
    pub quad_budget: usize,
    /// Bisection width for root finding (singularity scans).
    pub root: f64,
    /// Sample count for sign-change bracketing in singularity scans.
    pub scan_resolution: usize,
    /// Grid points dropped at each boundary when measuring interior norms.
    pub interior_margin: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad_abs: 1e-10,
            quad_rel: 1e-13,
            quad_budget: 1_000_000,
            root: 1e-12,
            scan_resolution: 2048,
            interior_margin: 10,
        }
    }
}
