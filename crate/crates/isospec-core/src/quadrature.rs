//! Adaptive quadrature: proper, semi-infinite and cumulative integrals.
//!
//! The kernel is the 15-point Kronrod rule with embedded 7-point Gauss rule;
//! adaptivity is recursive bisection with the tolerance split between halves
//! and a global evaluation budget.  Semi-infinite integrals are compactified
//! by `x = a + t/(1-t)` and integrated octave-by-octave towards `t = 1`, which
//! also yields a cheap divergence check on the tail.

use alloc::vec::Vec;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};
use crate::math;

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (non-negative half;
/// odd entries are the embedded 7-point Gauss nodes).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Kronrod panel: returns (estimate, error estimate, ∫|f| estimate).
/// 15 evaluations.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = math::abs(kronrod);

    let mut fv = [0.0_f64; 15];
    fv[7] = fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (math::abs(f1) + math::abs(f2));
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * math::abs(fc - mean);
    for (j, &v) in fv.iter().enumerate().take(7) {
        res_asc += WGK[j] * (math::abs(v - mean) + math::abs(fv[14 - j] - mean));
    }

    let result = kronrod * half;
    let mut err = math::abs((kronrod - gauss) * half);
    res_asc *= math::abs(half);
    res_abs *= math::abs(half);
    if res_asc != 0.0 && err != 0.0 {
        let scale = math::powf(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let round = 50.0 * f64::EPSILON * res_abs;
    if round > err {
        err = round;
    }
    (result, err, res_abs)
}

struct Budget {
    left: usize,
}

/// Depth-first adaptive bisection.  `tol` is split between halves.
fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    budget: &mut Budget,
    depth: usize,
) -> core::result::Result<f64, (f64, f64)> {
    let (value, err, res_abs) = gk15(f, a, b);
    // Accept on tolerance or at the panel's round-off floor; splitting
    // further cannot improve a result dominated by rounding.
    if err <= tol || err <= 60.0 * f64::EPSILON * res_abs {
        return Ok(value);
    }
    if depth >= 60 || budget.left < 30 {
        return Err((value, err));
    }
    budget.left -= 30;
    let mid = 0.5 * (a + b);
    let half_tol = 0.5 * tol;
    match (
        adapt(f, a, mid, half_tol, budget, depth + 1),
        adapt(f, mid, b, half_tol, budget, depth + 1),
    ) {
        (Ok(l), Ok(r)) => Ok(l + r),
        (Ok(l), Err((r, er))) => Err((l + r, er)),
        (Err((l, el)), Ok(r)) => Err((l + r, el)),
        (Err((l, el)), Err((r, er))) => Err((l + r, el + er)),
    }
}

/// Adaptive integral of `f` over `[a, b]` with absolute tolerance `tol`.
/// Antisymmetric under swapping the bounds.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with(&f, a, b, tol, &Tolerances::default())
}

/// As [`integrate`] but with an explicit budget configuration.
pub fn integrate_with(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    tols: &Tolerances,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("quadrature tolerance must be > 0".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_with(f, b, a, tol, tols).map(|v| -v);
    }
    let mut budget = Budget { left: tols.quad_budget };
    adapt(f, a, b, tol, &mut budget, 0)
        .map_err(|(estimate, error)| Error::Accuracy { estimate, error })
}

/// Integral with the absolute tolerance relaxed relative to the magnitude of
/// a first-pass estimate.  Used for integrands whose scale is far from unity
/// (e.g. `x^{2l} e^{x^2}` denominators) where a fixed absolute tolerance is
/// meaningless.
pub fn integrate_rel(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tols: &Tolerances,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // Scale the tolerance by a one-panel magnitude estimate; panels below
    // their round-off floor are accepted by the kernel regardless, so a
    // small scale does not stall refinement.
    let (_, _, rough_abs) = gk15(f, a.min(b), a.max(b));
    let tol = if rough_abs > 1.0 {
        tols.quad_rel * rough_abs
    } else {
        (tols.quad_rel * rough_abs).max(tols.quad_abs.min(1e-14))
    };
    integrate_with(f, a, b, tol.max(1e-300), tols)
}

/// Integral over `[a, b]` with `0 < a << b`, decomposed into dyadic octaves
/// `[a 2^j, a 2^{j+1}]` so that power-law layers at the left endpoint are
/// actually sampled (a single adaptive pass cannot see integrand mass several
/// decades below its node spacing).  Each octave is integrated with a
/// magnitude-scaled tolerance.
pub fn integrate_graded(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tols: &Tolerances) -> Result<f64> {
    if !(a > 0.0) || b <= a * 4.0 {
        return integrate_rel(f, a, b, tols);
    }
    let mut total = 0.0;
    let mut lo = a;
    loop {
        let hi = (lo * 2.0).min(b);
        total += integrate_rel(f, lo, hi, tols)?;
        if hi >= b {
            return Ok(total);
        }
        lo = hi;
    }
}

/// Integral of `f` over `[a, ∞)`.
///
/// The substitution `x = a + t/(1-t)` maps the ray onto `[0, 1)`; the image is
/// integrated over `[0, 1/2]` and then octaves `[1-2^{-k}, 1-2^{-k-1}]`.
/// Octave contributions of a convergent integral decay; if they fail to fall
/// below the tolerance after 48 octaves the tail is declared divergent.
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> Result<f64> {
    integrate_semi_infinite_with(&f, a, tol, &Tolerances::default())
}

pub fn integrate_semi_infinite_with(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    tol: f64,
    tols: &Tolerances,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("quadrature tolerance must be > 0".into()));
    }
    let g = move |t: f64| {
        let om = 1.0 - t;
        f(a + t / om) / (om * om)
    };
    let mut total = integrate_with(&g, 0.0, 0.5, 0.5 * tol, tols)?;
    let piece_tol = (0.0625 * tol).max(1e-15);
    let mut quiet = 0usize;
    let mut t_lo = 0.5;
    for k in 1..=48 {
        let t_hi = 1.0 - math::powi(0.5, k + 1);
        // A piece that only reaches its round-off floor is still usable for
        // the decay test, which is what decides divergence.
        let piece = match integrate_with(&g, t_lo, t_hi, piece_tol, tols) {
            Ok(v) => v,
            Err(Error::Accuracy { estimate, .. }) => estimate,
            Err(e) => return Err(e),
        };
        total += piece;
        t_lo = t_hi;
        if math::abs(piece) < 0.25 * tol {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Divergence(
        "tail contributions do not decay on [a, \u{221e})".into(),
    ))
}

/// Running integral `F(x) = ∫_origin^x f` evaluated at the grid nodes.
///
/// Each subinterval is integrated adaptively with a proportional share of the
/// tolerance, so `F` is consistent with [`integrate`] on every subinterval.
/// The returned samples carry `f` itself as the derivative track.
pub fn cumulative_integral(
    f: impl Fn(f64) -> f64,
    origin: f64,
    grid: &Grid,
    tol: f64,
) -> Result<SampledFunction> {
    let tols = Tolerances::default();
    if !grid.contains(origin) {
        return Err(Error::InvalidArgument(alloc::format!(
            "origin {origin} outside grid domain [{}, {}]",
            grid.lower(),
            grid.upper()
        )));
    }
    let n = grid.len();
    let sub_tol = (tol * grid.spacing() / (grid.upper() - grid.lower())).max(1e-16);

    // Nearest node at or below the origin.
    let j = math::floor((origin - grid.lower()) / grid.spacing()) as usize;
    let j = j.min(n - 1);

    let mut values = alloc::vec![0.0_f64; n];
    // Integrate from the origin out to the bracketing nodes, then sweep.
    values[j] = integrate_with(&f, origin, grid.point(j), sub_tol, &tols)?;
    let mut acc = values[j];
    for i in (0..j).rev() {
        acc += integrate_with(&f, grid.point(i + 1), grid.point(i), sub_tol, &tols)?;
        values[i] = acc;
    }
    let mut acc = values[j];
    for i in j + 1..n {
        acc += integrate_with(&f, grid.point(i - 1), grid.point(i), sub_tol, &tols)?;
        values[i] = acc;
    }
    let derivative: Vec<f64> = grid.points().map(&f).collect();
    Ok(SampledFunction { grid: *grid, values, derivative: Some(derivative) })
}
