//! The deformation engine.
//!
//! Given an ordered factorization `H = L·R + k`, the multiplicative
//! coefficients of the factors admit a one-parameter family of deformations
//! preserving the product.  Writing the left factor as `alpha + beta d/dx`
//! and the right as `gamma - delta d/dx`:
//!
//! * Case I (`H = A⁺ A⁻ + k¹`): the minus factor picks up `nu` solving
//!   `beta nu' + (beta/delta) nu² + [alpha + gamma (beta/delta)] nu = 0`
//!   with general solution
//!   `nu = e^{-I} [lambda + ∫ e^{-I}/delta]^{-1}`, `I = ∫ (alpha/beta + gamma/delta)`,
//!   and the plus factor picks up `eta = (beta/delta) nu`.  The re-multiplied
//!   pair produces the deformed operator `H - {delta eta' + beta nu'}`.
//!
//! * Case II (`H = A⁻ A⁺ + k²`): the plus factor picks up `eta` solving the
//!   mirrored Riccati equation with solution
//!   `eta = e^{J} [lambda - ∫ e^{J}/beta]^{-1}`, `J = ∫ (alpha/beta + gamma/delta)`,
//!   `nu = (delta/beta) eta`, and the re-multiplied pair produces
//!   `H + {beta nu' + delta eta'}`.
//!
//! In both cases the *right* factor's deformation function is the primary
//! solution and the left factor's is tied to it pointwise, which keeps the
//! deformed pair mutually adjoint whenever the undeformed pair was.

use alloc::vec::Vec;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::math;
use crate::operator::{FactorizationScheme, FirstOrderOperator, SchemeKind, SecondOrderOperator};
use crate::quadrature::{integrate_graded, integrate_rel, integrate_semi_infinite_with};
use crate::smooth::SmoothFn;

/// Validity of a deformation parameter on a domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Validity {
    Valid,
    /// Zeros of the deformation denominator inside the domain.
    Singular(Vec<f64>),
}

/// A deformation parameter with its validity verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationParameter {
    pub lambda: f64,
    pub kind: SchemeKind,
    pub validity: Validity,
}

/// Output of one deformation solve.
#[derive(Debug, Clone)]
pub struct DeformationResult {
    pub kind: SchemeKind,
    pub lambda: f64,
    /// Deformation of the minus-form factor.
    pub nu: SmoothFn,
    /// Deformation of the plus-form factor.
    pub eta: SmoothFn,
    /// The bracketed deformation shift; the deformed operator is
    /// `H - shift` for Case I and `H + shift` for Case II.
    pub shift: SmoothFn,
    /// Integrating-factor exponent (`I` for Case I, `J` for Case II).
    pub exponent: SmoothFn,
    /// `lambda ± ∫ …`, whose zeros are the induced singularities.
    pub denominator: SmoothFn,
    pub deformed_left: FirstOrderOperator,
    pub deformed_right: FirstOrderOperator,
}

/// Antiderivative `F(x) = ∫_origin^x f` as a function, with `F' = f`.
/// Values are computed by adaptive quadrature on demand; for a positive
/// origin the integration is graded dyadically away from it so coordinate
/// singularities of radial coefficients are resolved.
pub fn antiderivative(f: &SmoothFn, origin: f64, tols: Tolerances) -> SmoothFn {
    let orders = f.orders();
    let val = {
        let f = f.clone();
        move |x: f64| {
            if origin > 0.0 && x > origin {
                integrate_graded(&|t| f.eval(t), origin, x, &tols).unwrap_or(f64::NAN)
            } else {
                integrate_rel(&|t| f.eval(t), origin, x, &tols).unwrap_or(f64::NAN)
            }
        }
    };
    let d1 = f.clone();
    match orders {
        0 => SmoothFn::with_d1(val, move |x| d1.eval(x)),
        1 => {
            let d2 = f.clone();
            SmoothFn::with_d2(val, move |x| d1.eval(x), move |x| d2.d1(x).unwrap_or(f64::NAN))
        }
        _ => {
            let d2 = f.clone();
            let d3 = f.clone();
            SmoothFn::with_d3(
                val,
                move |x| d1.eval(x),
                move |x| d2.d1(x).unwrap_or(f64::NAN),
                move |x| d3.d2(x).unwrap_or(f64::NAN),
            )
        }
    }
}

/// Tail integral `T(x) = ∫_x^∞ f` as a function, with `T' = -f`.
pub fn tail_integral(f: &SmoothFn, tols: Tolerances) -> SmoothFn {
    let val = {
        let f = f.clone();
        move |x: f64| {
            integrate_semi_infinite_with(&|t| f.eval(t), x, tols.quad_abs, &tols)
                .unwrap_or(f64::NAN)
        }
    };
    let d1 = f.clone();
    let d2 = f.clone();
    let d3 = f.clone();
    match f.orders() {
        0 => SmoothFn::with_d1(val, move |x| -d1.eval(x)),
        1 => SmoothFn::with_d2(val, move |x| -d1.eval(x), move |x| -d2.d1(x).unwrap_or(f64::NAN)),
        _ => SmoothFn::with_d3(
            val,
            move |x| -d1.eval(x),
            move |x| -d2.d1(x).unwrap_or(f64::NAN),
            move |x| -d3.d2(x).unwrap_or(f64::NAN),
        ),
    }
}

fn assemble(
    scheme: &FactorizationScheme,
    lambda: f64,
    primary: SmoothFn,
    exponent: SmoothFn,
    denominator: SmoothFn,
    domain: (f64, f64),
    tols: Tolerances,
) -> Result<DeformationResult> {
    // The right factor carries the primary deformation; the left factor's is
    // tied by the pointwise relation with ratio -left.deriv/right.deriv.
    let ratio = scheme.left.deriv.neg().div(&scheme.right.deriv);
    let secondary = primary.mul(&ratio);

    let zeros = singularity_scan(
        |x| denominator.eval(x),
        domain.0,
        domain.1,
        tols.scan_resolution,
        tols.root,
    );
    if !zeros.is_empty() {
        return Err(Error::SingularLambda { lambda, zeros });
    }

    let (nu, eta) = match scheme.kind {
        SchemeKind::CaseII => (secondary.clone(), primary.clone()),
        _ => (primary.clone(), secondary.clone()),
    };

    let prim_d = primary.derivative()?;
    let sec_d = secondary.derivative()?;
    let shift = match scheme.kind {
        // delta eta' + beta nu'  with  eta = secondary, nu = primary
        SchemeKind::CaseI | SchemeKind::Generic => scheme
            .right
            .deriv
            .neg()
            .mul(&sec_d)
            .add(&scheme.left.deriv.mul(&prim_d)),
        // beta nu' + delta eta'  with  nu = secondary, eta = primary
        SchemeKind::CaseII => scheme
            .right
            .deriv
            .mul(&sec_d)
            .add(&scheme.left.deriv.neg().mul(&prim_d)),
    };

    let deformed_left = FirstOrderOperator {
        mult: scheme.left.mult.add(&secondary),
        deriv: scheme.left.deriv.clone(),
        index: scheme.left.index,
        step_constant: None,
    };
    let deformed_right = FirstOrderOperator {
        mult: scheme.right.mult.add(&primary),
        deriv: scheme.right.deriv.clone(),
        index: scheme.right.index,
        step_constant: None,
    };

    Ok(DeformationResult {
        kind: scheme.kind,
        lambda,
        nu,
        eta,
        shift,
        exponent,
        denominator,
        deformed_left,
        deformed_right,
    })
}

/// Solves the Case I deformation of `scheme` by quadrature.
///
/// `origin` fixes the lower limit of both integrals (0 for whole-line models,
/// a small offset for radial ones; a different origin only rescales `lambda`).
/// Fails with a singularity listing if the denominator vanishes inside
/// `domain`.
pub fn nu_general(
    scheme: &FactorizationScheme,
    lambda: f64,
    origin: f64,
    domain: (f64, f64),
    tols: Tolerances,
) -> Result<DeformationResult> {
    if scheme.kind == SchemeKind::CaseII {
        return Err(Error::InvalidArgument(
            "nu_general expects a Case I (or generic) scheme; use eta_case2".into(),
        ));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument("lambda must be finite".into()));
    }
    let (alpha, beta) = scheme.plus_coeffs();
    let (gamma, delta) = scheme.minus_coeffs();
    alpha.require(1)?;
    gamma.require(1)?;

    let g = alpha.div(&beta).add(&gamma.div(&delta));
    let exponent = antiderivative(&g, origin, tols);
    let weight = exponent.neg().exp();
    let inner = antiderivative(&weight.div(&delta), origin, tols);
    let denominator = inner.add_const(lambda);
    let primary = weight.div(&denominator);
    assemble(scheme, lambda, primary, exponent, denominator, domain, tols)
}

/// Solves the Case II deformation of `scheme` by quadrature.
pub fn eta_case2(
    scheme: &FactorizationScheme,
    lambda: f64,
    origin: f64,
    domain: (f64, f64),
    tols: Tolerances,
) -> Result<DeformationResult> {
    if scheme.kind != SchemeKind::CaseII {
        return Err(Error::InvalidArgument("eta_case2 expects a Case II scheme".into()));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument("lambda must be finite".into()));
    }
    let (alpha, beta) = scheme.plus_coeffs();
    let (gamma, delta) = scheme.minus_coeffs();
    alpha.require(1)?;
    gamma.require(1)?;

    let g = alpha.div(&beta).add(&gamma.div(&delta));
    let exponent = antiderivative(&g, origin, tols);
    let weight = exponent.exp();
    let inner = antiderivative(&weight.div(&beta), origin, tols);
    let denominator = inner.neg().add_const(lambda);
    let primary = weight.div(&denominator);
    assemble(scheme, lambda, primary, exponent, denominator, domain, tols)
}

/// Wraps textbook closed forms in a [`DeformationResult`].
///
/// `primary` is the deformation of the scheme's right factor (`nu` for
/// Case I, `eta` for Case II); `denominator` is the function whose zeros are
/// the induced singularities.
pub fn from_closed_form(
    scheme: &FactorizationScheme,
    lambda: f64,
    primary: SmoothFn,
    exponent: SmoothFn,
    denominator: SmoothFn,
    domain: (f64, f64),
    tols: Tolerances,
) -> Result<DeformationResult> {
    assemble(scheme, lambda, primary, exponent, denominator, domain, tols)
}

/// Max-norm residual of the deformation Riccati equation over the interior of
/// `grid`; a self-consistency oracle for any [`DeformationResult`].
pub fn riccati_residual(
    result: &DeformationResult,
    scheme: &FactorizationScheme,
    grid: &Grid,
) -> Result<f64> {
    let (alpha, beta) = scheme.plus_coeffs();
    let (gamma, delta) = scheme.minus_coeffs();
    let margin = Tolerances::default().interior_margin;
    let mut max = 0.0_f64;
    for i in grid.interior(margin) {
        let x = grid.point(i);
        let res = match result.kind {
            SchemeKind::CaseI | SchemeKind::Generic => {
                let nu = result.nu.eval(x);
                let dnu = result.nu.d1(x)?;
                let (a, b) = (alpha.eval(x), beta.eval(x));
                let (g, d) = (gamma.eval(x), delta.eval(x));
                b * dnu + (b / d) * nu * nu + (a + g * (b / d)) * nu
            }
            SchemeKind::CaseII => {
                let eta = result.eta.eval(x);
                let deta = result.eta.d1(x)?;
                let (a, b) = (alpha.eval(x), beta.eval(x));
                let (g, d) = (gamma.eval(x), delta.eval(x));
                (g + (d / b) * a) * eta + (d / b) * eta * eta - d * deta
            }
        };
        max = max.max(math::abs(res));
    }
    Ok(max)
}

/// The deformed family member: `base` with `R - shift` (Case I) or
/// `R + shift` (Case II); `P`, `Q` unchanged.
pub fn deformed_operator(
    base: &SecondOrderOperator,
    result: &DeformationResult,
) -> SecondOrderOperator {
    let r = match result.kind {
        SchemeKind::CaseI | SchemeKind::Generic => base.r.sub(&result.shift),
        SchemeKind::CaseII => base.r.add(&result.shift),
    };
    SecondOrderOperator { p: base.p.clone(), q: base.q.clone(), r, index: base.index }
}

/// Sign-change bracketing at `resolution` samples followed by bisection to
/// width `root_tol`.  An empty list means no roots detected.
pub fn singularity_scan(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    resolution: usize,
    root_tol: f64,
) -> Vec<f64> {
    let n = resolution.max(2);
    let h = (b - a) / n as f64;
    let mut roots = Vec::new();
    let mut x0 = a;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { b } else { a + h * i as f64 };
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() {
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut lo, mut hi, mut flo) = (x0, x1, f0);
                while hi - lo > root_tol {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if flo * fm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    roots
}

/// Classifies `lambda` by scanning the denominator of a solved deformation.
pub fn classify_lambda(
    denominator: &SmoothFn,
    lambda: f64,
    kind: SchemeKind,
    domain: (f64, f64),
    tols: Tolerances,
) -> DeformationParameter {
    let zeros = singularity_scan(
        |x| denominator.eval(x),
        domain.0,
        domain.1,
        tols.scan_resolution,
        tols.root,
    );
    DeformationParameter {
        lambda,
        kind,
        validity: if zeros.is_empty() { Validity::Valid } else { Validity::Singular(zeros) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::compose;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Oscillator scheme in algebraic form: target H2 = -d²/dx² + x²,
    /// factored as (x + d/dx)(x - d/dx) - 1.
    fn oscillator_scheme() -> FactorizationScheme {
        let x = SmoothFn::coordinate();
        let left = FirstOrderOperator::new(x.clone(), SmoothFn::constant(1.0));
        let right = FirstOrderOperator::new(x.clone(), SmoothFn::constant(-1.0));
        let target = SecondOrderOperator::schroedinger(
            1.0,
            SmoothFn::with_d3(|t| t * t, |t| 2.0 * t, |_| 2.0, |_| 0.0),
        );
        FactorizationScheme::new(left, right, -1.0, SchemeKind::CaseI, target)
    }

    /// Free-particle scheme: H = -d²/dx², factored as (d/dx)(-d/dx) + 0.
    fn free_scheme() -> FactorizationScheme {
        let left = FirstOrderOperator::ddx();
        let right = FirstOrderOperator::new(SmoothFn::zero(), SmoothFn::constant(-1.0));
        let target = SecondOrderOperator::schroedinger(1.0, SmoothFn::zero());
        FactorizationScheme::new(left, right, 0.0, SchemeKind::CaseI, target)
    }

    fn erf_denominator(lambda: f64) -> impl Fn(f64) -> f64 {
        move |x: f64| lambda + 0.886_226_925_452_758 * crate::math::erf(x)
    }

    #[test]
    fn oscillator_nu_matches_closed_form() {
        // nu = e^{-x²} / (lambda + int_0^x e^{-y²} dy) at lambda = 2.
        let scheme = oscillator_scheme();
        let tols = Tolerances::default();
        let res = nu_general(&scheme, 2.0, 0.0, (-6.0, 6.0), tols).unwrap();
        let den = erf_denominator(2.0);
        let mut worst = 0.0_f64;
        for i in 0..=240 {
            let x = -6.0 + 0.05 * i as f64;
            let expect = (-x * x).exp() / den(x);
            worst = worst.max((res.nu.eval(x) - expect).abs());
        }
        assert!(worst < 1e-9, "max deviation {worst}");
    }

    #[test]
    fn free_particle_nu_is_reciprocal() {
        let scheme = free_scheme();
        let res = nu_general(&scheme, 1.0, 0.0, (-0.5, 10.0), Tolerances::default()).unwrap();
        for &x in &[-0.4, 0.0, 1.3, 7.9] {
            assert_relative_eq!(res.nu.eval(x), 1.0 / (1.0 + x), max_relative = 1e-11);
            assert_relative_eq!(res.eta.eval(x), 1.0 / (1.0 + x), max_relative = 1e-11);
        }
    }

    #[test]
    fn huge_lambda_degenerates_to_identity() {
        let scheme = oscillator_scheme();
        let res = nu_general(&scheme, 1e12, 0.0, (-6.0, 6.0), Tolerances::default()).unwrap();
        let mut nu_max = 0.0_f64;
        let mut shift_max = 0.0_f64;
        for i in 0..=120 {
            let x = -6.0 + 0.1 * i as f64;
            nu_max = nu_max.max(res.nu.eval(x).abs());
            shift_max = shift_max.max(res.shift.eval(x).abs());
        }
        assert!(nu_max < 2e-12, "nu sup {nu_max}");
        assert!(shift_max < 4e-12, "shift sup {shift_max}");
        // deformed operator equals base pointwise
        let base = scheme.target.clone();
        let deformed = deformed_operator(&base, &res);
        for &x in &[-5.0, 0.0, 3.3] {
            assert_abs_diff_eq!(deformed.r.eval(x), base.r.eval(x), epsilon = 1e-11);
        }
    }

    #[test]
    fn riccati_residual_small_for_solutions() {
        let scheme = oscillator_scheme();
        let grid = Grid::uniform(-6.0, 6.0, 241).unwrap();
        let res = nu_general(&scheme, 2.0, 0.0, (-6.0, 6.0), Tolerances::default()).unwrap();
        let r = riccati_residual(&res, &scheme, &grid).unwrap();
        assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn riccati_residual_detects_perturbation() {
        let scheme = oscillator_scheme();
        let grid = Grid::uniform(-6.0, 6.0, 241).unwrap();
        let mut res = nu_general(&scheme, 2.0, 0.0, (-6.0, 6.0), Tolerances::default()).unwrap();
        // zero is a trivial solution
        res.nu = SmoothFn::zero();
        let r0 = riccati_residual(&res, &scheme, &grid).unwrap();
        assert_abs_diff_eq!(r0, 0.0);
        // a constant offset must be flagged
        res.nu = SmoothFn::constant(1e-3);
        let r1 = riccati_residual(&res, &scheme, &grid).unwrap();
        assert!(r1 >= 1e-4, "perturbed residual {r1}");
    }

    #[test]
    fn deformation_preserves_the_factorization() {
        // compose(deformed left, deformed right) + k reproduces the target,
        // and the inverted product + k_inv reproduces the deformed operator.
        let scheme = oscillator_scheme();
        let res = nu_general(&scheme, 2.0, 0.0, (-6.0, 6.0), Tolerances::default()).unwrap();
        let product = compose(&res.deformed_left, &res.deformed_right).unwrap();
        for &x in &[-3.0, -0.5, 0.0, 1.2, 4.0] {
            assert_abs_diff_eq!(
                product.r.eval(x) + scheme.k,
                scheme.target.r.eval(x),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(product.q.eval(x), 0.0, epsilon = 1e-9);
        }
        // inverted product: k_inv = +1 for the oscillator orderings.
        let inverted = compose(&res.deformed_right, &res.deformed_left).unwrap();
        let member = deformed_operator(&scheme.target, &res);
        for &x in &[-3.0, 0.0, 1.2, 4.0] {
            assert_abs_diff_eq!(
                inverted.r.eval(x) + 1.0,
                member.r.eval(x),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn eq_310_relation_holds_pointwise() {
        // eta * delta = beta * nu for Case I results.
        let scheme = oscillator_scheme();
        let res = nu_general(&scheme, 3.0, 0.0, (-6.0, 6.0), Tolerances::default()).unwrap();
        let (_, beta) = scheme.plus_coeffs();
        let (_, delta) = scheme.minus_coeffs();
        for &x in &[-2.0, 0.4, 3.1] {
            assert_abs_diff_eq!(
                res.eta.eval(x) * delta.eval(x),
                beta.eval(x) * res.nu.eval(x),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn singular_lambda_is_refused_with_locations() {
        let scheme = free_scheme();
        // nu = 1/(3 + x) has a pole at x = -3 inside [-10, 10].
        match nu_general(&scheme, 3.0, 0.0, (-10.0, 10.0), Tolerances::default()) {
            Err(Error::SingularLambda { zeros, .. }) => {
                assert_eq!(zeros.len(), 1);
                assert_abs_diff_eq!(zeros[0], -3.0, epsilon = 1e-9);
            }
            other => panic!("expected singular lambda, got {other:?}"),
        }
    }

    #[test]
    fn oscillator_denominator_has_no_roots_at_lambda_two() {
        let den = erf_denominator(2.0);
        let roots = singularity_scan(den, -10.0, 10.0, 2048, 1e-12);
        assert!(roots.is_empty());
    }

    #[test]
    fn scan_finds_simple_root() {
        let roots = singularity_scan(|x| x - 0.3, 0.0, 1.0, 64, 1e-12);
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], 0.3, epsilon = 1e-11);
    }
}
