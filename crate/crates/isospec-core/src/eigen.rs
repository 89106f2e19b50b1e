//! Independent spectral oracle: finite-difference discretization of a
//! Sturm–Liouville operator and extraction of the lowest eigenvalues by
//! Sturm-sequence bisection with inverse-iteration eigenvectors.
//!
//! This deliberately avoids the ladder construction so isospectrality claims
//! can be confirmed from the potential alone.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, Grid};
use crate::math;
use crate::operator::SecondOrderOperator;
use crate::smooth::SmoothFn;

/// Symmetric tridiagonal discretization of `-c u'' + V u` with Dirichlet rows
/// dropped.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub grid: Grid,
    /// Main diagonal over the interior points.
    pub diagonal: Vec<f64>,
    /// Sub/super-diagonal (length `diagonal.len() - 1`).
    pub off_diagonal: Vec<f64>,
    pub boundary: BoundaryKind,
    pub symmetric: bool,
}

/// Eigenvalues (and optional eigenvectors) with method metadata.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors over the interior points, L²-normalized with the grid
    /// weight, when requested.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub grid: Grid,
    pub tolerance: f64,
}

/// Central second-order stencil for an operator in the form `-c d²/dx² + V`
/// (`Q ≡ 0`), or one convertible to it by the standard substitution
/// `psi = w u`, `w = exp(-∫ Q/(2P))`, which leaves the spectrum unchanged.
/// `P` must be a negative constant.
pub fn discretize(op: &SecondOrderOperator, grid: &Grid) -> Result<DiscretizedOperator> {
    let n = grid.len();
    if n < 3 {
        return Err(Error::InvalidArgument("discretization needs at least 3 points".into()));
    }
    // P must be constant and negative (so -P d²/dx² has positive stiffness).
    let p0 = op.p.eval(grid.point(0));
    for i in (0..n).step_by((n / 16).max(1)) {
        let p = op.p.eval(grid.point(i));
        if !p.is_finite() || math::abs(p - p0) > 1e-12 * math::abs(p0).max(1.0) {
            return Err(Error::UnsupportedOperator(format!(
                "P must be constant for discretization (P({}) = {p}, P(x0) = {p0})",
                grid.point(i)
            )));
        }
    }
    if p0 >= 0.0 {
        return Err(Error::UnsupportedOperator(
            "P must be negative: expected the form -c d²/dx² + V".into(),
        ));
    }
    let c = -p0;

    // Effective potential after eliminating the first-derivative term:
    // R_eff = R - P (Q/(2P))' - Q²/(4P).
    let mut q_zero = true;
    for i in (0..n).step_by((n / 32).max(1)) {
        if math::abs(op.q.eval(grid.point(i))) > 1e-13 {
            q_zero = false;
            break;
        }
    }
    let potential: Vec<f64> = if q_zero {
        grid.points().map(|x| op.r.eval(x)).collect()
    } else {
        op.q.require(1)?;
        let mut v = Vec::with_capacity(n);
        for x in grid.points() {
            let q = op.q.eval(x);
            let dq = op.q.d1(x)?;
            v.push(op.r.eval(x) - 0.5 * dq - q * q / (4.0 * p0));
        }
        v
    };

    let h = grid.spacing();
    let stiff = c / (h * h);
    let interior = n - 2;
    let diagonal: Vec<f64> =
        potential[1..n - 1].iter().map(|v| 2.0 * stiff + v).collect();
    let off_diagonal = alloc::vec![-stiff; interior.saturating_sub(1)];

    Ok(DiscretizedOperator {
        grid: *grid,
        diagonal,
        off_diagonal,
        boundary: BoundaryKind::Dirichlet,
        symmetric: true,
    })
}

/// Number of eigenvalues strictly below `mu` (Sturm sequence via the LDLᵀ
/// pivot signs).
pub fn sturm_count(diagonal: &[f64], off_diagonal: &[f64], mu: f64) -> usize {
    let n = diagonal.len();
    if n == 0 {
        return 0;
    }
    let guard = 1e-300;
    let mut count = 0usize;
    let mut q = diagonal[0] - mu;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let safe = if math::abs(q) < guard { if q >= 0.0 { guard } else { -guard } } else { q };
        q = (diagonal[i] - mu) - off_diagonal[i - 1] * off_diagonal[i - 1] / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(T - mu I) x = b` for a tridiagonal `T` by LU with partial
/// pivoting (two-band elimination).
fn shifted_solve(d: &[f64], e: &[f64], mu: f64, b: &mut [f64]) {
    let n = d.len();
    if n == 1 {
        b[0] /= d[0] - mu;
        return;
    }
    // Bands of T - mu I: lower l (copy of e), diagonal a, upper u1, u2.
    let mut a: Vec<f64> = d.iter().map(|&v| v - mu).collect();
    let mut u1: Vec<f64> = e.to_vec();
    let mut u2 = alloc::vec![0.0_f64; n];
    let mut l = e.to_vec();
    let tiny = 1e-300;

    for i in 0..n - 1 {
        if math::abs(a[i]) >= math::abs(l[i]) {
            let piv = if math::abs(a[i]) < tiny { tiny } else { a[i] };
            let m = l[i] / piv;
            a[i + 1] -= m * u1[i];
            if i + 1 < n - 1 {
                u1[i + 1] -= m * u2[i];
            }
            b[i + 1] -= m * b[i];
        } else {
            // swap rows i and i+1
            core::mem::swap(&mut a[i], &mut l[i]);
            let old_u1 = u1[i];
            u1[i] = a[i + 1];
            a[i + 1] = old_u1;
            if i + 1 < n - 1 {
                u2[i] = u1[i + 1];
                u1[i + 1] = 0.0;
            }
            b.swap(i, i + 1);
            let piv = if math::abs(a[i]) < tiny { tiny } else { a[i] };
            let m = l[i] / piv;
            a[i + 1] -= m * u1[i];
            if i + 1 < n - 1 {
                u1[i + 1] -= m * u2[i];
            }
            b[i + 1] -= m * b[i];
        }
    }
    // back substitution
    let piv = if math::abs(a[n - 1]) < tiny { tiny } else { a[n - 1] };
    b[n - 1] /= piv;
    if n >= 2 {
        let piv = if math::abs(a[n - 2]) < tiny { tiny } else { a[n - 2] };
        b[n - 2] = (b[n - 2] - u1[n - 2] * b[n - 1]) / piv;
    }
    for i in (0..n.saturating_sub(2)).rev() {
        let mut v = b[i] - u1[i] * b[i + 1];
        if i + 2 < n {
            v -= u2[i] * b[i + 2];
        }
        let piv = if math::abs(a[i]) < tiny { tiny } else { a[i] };
        b[i] = v / piv;
    }
}

/// The `m` lowest eigenvalues by Sturm bisection to absolute accuracy 1e-10,
/// with inverse-iteration eigenvectors normalized by the grid weight.
pub fn eigen_lowest(disc: &DiscretizedOperator, m: usize) -> Result<Spectrum> {
    eigen_lowest_impl(disc, m, true)
}

/// As [`eigen_lowest`] without eigenvectors (cheaper).
pub fn eigen_values(disc: &DiscretizedOperator, m: usize) -> Result<Spectrum> {
    eigen_lowest_impl(disc, m, false)
}

fn eigen_lowest_impl(disc: &DiscretizedOperator, m: usize, vectors: bool) -> Result<Spectrum> {
    let d = &disc.diagonal;
    let e = &disc.off_diagonal;
    let n = d.len();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "requested {m} eigenvalues from a {n}-point interior"
        )));
    }
    let tol = 1e-10;

    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let w = if i > 0 { math::abs(e[i - 1]) } else { 0.0 }
            + if i < n - 1 { math::abs(e[i]) } else { 0.0 };
        lo = lo.min(d[i] - w);
        hi = hi.max(d[i] + w);
    }
    lo -= 1.0;
    hi += 1.0;

    let mut eigenvalues = Vec::with_capacity(m);
    for k in 0..m {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let mid = 0.5 * (a + b);
            if sturm_count(d, e, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        eigenvalues.push(0.5 * (a + b));
    }

    let eigenvectors = if vectors {
        let h = disc.grid.spacing();
        let mut vecs = Vec::with_capacity(m);
        for (k, &ev) in eigenvalues.iter().enumerate() {
            // small detuning keeps the shifted matrix nonsingular
            let mu = ev + 1e-9 * (math::abs(ev) + 1.0);
            let mut v = alloc::vec![1.0_f64; n];
            for (i, vi) in v.iter_mut().enumerate() {
                *vi += math::sin(i as f64 * 0.37) * 0.01;
            }
            for _ in 0..3 {
                shifted_solve(d, e, mu, &mut v);
                // re-orthogonalize against previous vectors (degenerate guards)
                for prev in vecs.iter().take(k) {
                    let prev: &Vec<f64> = prev;
                    let dot: f64 = v.iter().zip(prev).map(|(x, y)| x * y).sum::<f64>() * h;
                    for (x, y) in v.iter_mut().zip(prev) {
                        *x -= dot * y;
                    }
                }
                let norm = math::sqrt(v.iter().map(|x| x * x).sum::<f64>() * h);
                if norm > 0.0 {
                    for x in v.iter_mut() {
                        *x /= norm;
                    }
                }
            }
            // sign convention: first significant component positive
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
                if *first < 0.0 {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                }
            }
            vecs.push(v);
        }
        Some(vecs)
    } else {
        None
    };

    Ok(Spectrum { eigenvalues, eigenvectors, grid: disc.grid, tolerance: tol })
}

/// Convenience: discretize a Schrödinger-form operator built from a closed
/// potential and return its lowest eigenvalues.
pub fn lowest_eigenvalues_of(
    c: f64,
    potential: &SmoothFn,
    grid: &Grid,
    m: usize,
) -> Result<Vec<f64>> {
    let op = SecondOrderOperator::schroedinger(c, potential.clone());
    let disc = discretize(&op, grid)?;
    Ok(eigen_values(&disc, m)?.eigenvalues)
}
