//! First- and second-order differential operators, composition, application,
//! factorization schemes and ladder checks.
//!
//! A first-order operator is stored in plain form `m(x) + d(x) d/dx`.  The
//! bookkeeping convention for factorizations is: the *left* factor of a
//! product is read as `alpha + beta d/dx` and the *right* factor as
//! `gamma - delta d/dx`, i.e. `beta = left.deriv` and `delta = -right.deriv`.
//! Signs of `beta`, `delta` are free, so raising and lowering operators of
//! either structural form fit.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};
use crate::smooth::SmoothFn;
use crate::verify::VerificationReport;

/// `m(x) + d(x) d/dx` with analytic coefficient derivatives.
#[derive(Debug, Clone)]
pub struct FirstOrderOperator {
    /// Multiplicative coefficient `m`.
    pub mult: SmoothFn,
    /// Coefficient of `d/dx`.
    pub deriv: SmoothFn,
    /// Optional ladder index.
    pub index: Option<i64>,
    /// Optional known step constant `c` with `A phi_n = c phi_{n±1}`.
    pub step_constant: Option<f64>,
}

impl FirstOrderOperator {
    pub fn new(mult: SmoothFn, deriv: SmoothFn) -> Self {
        FirstOrderOperator { mult, deriv, index: None, step_constant: None }
    }

    pub fn with_index(mut self, n: i64) -> Self {
        self.index = Some(n);
        self
    }

    /// Pure derivative `d/dx`.
    pub fn ddx() -> Self {
        FirstOrderOperator::new(SmoothFn::zero(), SmoothFn::constant(1.0))
    }

    /// Applies the operator to `f`, producing `m f + d f'` with as many
    /// derivative orders as the inputs support.
    pub fn apply(&self, f: &SmoothFn) -> Result<SmoothFn> {
        f.require(1)?;
        Ok(self.mult.mul(f).add(&self.deriv.mul(&f.derivative()?)))
    }

    /// Evaluates `(m f + d f')` on a grid, reporting the first grid point at
    /// which a coefficient or the image fails to be finite.
    pub fn sample(&self, f: &SmoothFn, grid: &Grid) -> Result<SampledFunction> {
        let img = self.apply(f)?;
        sample_checked(&img, grid)
    }
}

/// `P(x) d²/dx² + Q(x) d/dx + R(x)`.
#[derive(Debug, Clone)]
pub struct SecondOrderOperator {
    pub p: SmoothFn,
    pub q: SmoothFn,
    pub r: SmoothFn,
    pub index: Option<i64>,
}

impl SecondOrderOperator {
    pub fn new(p: SmoothFn, q: SmoothFn, r: SmoothFn) -> Self {
        SecondOrderOperator { p, q, r, index: None }
    }

    pub fn with_index(mut self, n: i64) -> Self {
        self.index = Some(n);
        self
    }

    /// Schrödinger form `-c d²/dx² + V(x)`.
    pub fn schroedinger(c: f64, potential: SmoothFn) -> Self {
        SecondOrderOperator::new(SmoothFn::constant(-c), SmoothFn::zero(), potential)
    }

    /// `P f'' + Q f' + R f`.
    pub fn apply(&self, f: &SmoothFn) -> Result<SmoothFn> {
        f.require(2)?;
        let term2 = self.p.mul(&f.derivative()?.derivative()?);
        let term1 = self.q.mul(&f.derivative()?);
        let term0 = self.r.mul(f);
        Ok(term2.add(&term1).add(&term0))
    }

    pub fn sample(&self, f: &SmoothFn, grid: &Grid) -> Result<SampledFunction> {
        let img = self.apply(f)?;
        sample_checked(&img, grid)
    }

    /// Shifted operator `self - c` (identity coefficient shift on R).
    pub fn shift(&self, c: f64) -> SecondOrderOperator {
        SecondOrderOperator {
            p: self.p.clone(),
            q: self.q.clone(),
            r: self.r.add_const(-c),
            index: self.index,
        }
    }

    /// Rescales all coefficients: `s·self`.
    pub fn scale(&self, s: f64) -> SecondOrderOperator {
        SecondOrderOperator {
            p: self.p.scale(s),
            q: self.q.scale(s),
            r: self.r.scale(s),
            index: self.index,
        }
    }
}

fn sample_checked(img: &SmoothFn, grid: &Grid) -> Result<SampledFunction> {
    let mut values = Vec::with_capacity(grid.len());
    for x in grid.points() {
        let v = img.eval(x);
        if !v.is_finite() {
            return Err(Error::Singularity {
                location: x,
                context: "operator image not finite at grid point".into(),
            });
        }
        values.push(v);
    }
    SampledFunction::new(*grid, values)
}

/// Composition `left · right` of two first-order operators.
///
/// With `left = m1 + d1 ∂` and `right = m2 + d2 ∂`:
/// `P = d1 d2`, `Q = m1 d2 + d1 m2 + d1 d2'`, `R = m1 m2 + d1 m2'`.
/// Requires analytic first derivatives on the right factor's coefficients.
pub fn compose(left: &FirstOrderOperator, right: &FirstOrderOperator) -> Result<SecondOrderOperator> {
    right.mult.require(1)?;
    right.deriv.require(1)?;
    let p = left.deriv.mul(&right.deriv);
    let q = left
        .mult
        .mul(&right.deriv)
        .add(&left.deriv.mul(&right.mult))
        .add(&left.deriv.mul(&right.deriv.derivative()?));
    let r = left.mult.mul(&right.mult).add(&left.deriv.mul(&right.mult.derivative()?));
    Ok(SecondOrderOperator::new(p, q, r))
}

/// Which deformation route a factorization participates in.
///
/// `CaseI`: the scheme is `H = A⁺_{n} A⁻_{n+1} + k` (left factor steps up,
/// right factor steps down); the deformed family re-multiplies as
/// `a⁻ a⁺ + k_inv`.  `CaseII` is the mirror ordering `H = A⁻_{n} A⁺_{n-1} + k`.
/// `Generic` marks a plain `B·C + k` factorization without ladder roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    CaseI,
    CaseII,
    Generic,
}

/// An ordered factorization `target = left · right + k`.
#[derive(Debug, Clone)]
pub struct FactorizationScheme {
    pub left: FirstOrderOperator,
    pub right: FirstOrderOperator,
    pub k: f64,
    pub kind: SchemeKind,
    pub target: SecondOrderOperator,
}

impl FactorizationScheme {
    pub fn new(
        left: FirstOrderOperator,
        right: FirstOrderOperator,
        k: f64,
        kind: SchemeKind,
        target: SecondOrderOperator,
    ) -> Self {
        FactorizationScheme { left, right, k, kind, target }
    }

    /// Coefficient views in the `alpha + beta ∂` / `gamma - delta ∂`
    /// convention for the factor that plays the plus/minus role.
    ///
    /// CaseI: left is the plus-form (`alpha`, `beta`), right the minus-form
    /// (`gamma`, `delta`).  CaseII: the roles are swapped.
    pub fn plus_coeffs(&self) -> (SmoothFn, SmoothFn) {
        match self.kind {
            SchemeKind::CaseII => (self.right.mult.clone(), self.right.deriv.clone()),
            _ => (self.left.mult.clone(), self.left.deriv.clone()),
        }
    }

    pub fn minus_coeffs(&self) -> (SmoothFn, SmoothFn) {
        match self.kind {
            SchemeKind::CaseII => (self.left.mult.clone(), self.left.deriv.neg()),
            _ => (self.right.mult.clone(), self.right.deriv.neg()),
        }
    }
}

/// Checks `compose(left, right) + k == target` at coefficient level and on
/// probe functions; the report passes iff all deviations are within `tol`.
pub fn check_factorization(
    target: &SecondOrderOperator,
    scheme: &FactorizationScheme,
    grid: &Grid,
    tol: f64,
) -> Result<VerificationReport> {
    let product = compose(&scheme.left, &scheme.right)?;
    let dev = |a: &SmoothFn, b: &SmoothFn, shift: f64| -> f64 {
        grid.points()
            .map(|x| (a.eval(x) + shift - b.eval(x)).abs())
            .fold(0.0_f64, f64::max)
    };
    let dp = dev(&product.p, &target.p, 0.0);
    let dq = dev(&product.q, &target.q, 0.0);
    let dr = dev(&product.r, &target.r, scheme.k);

    // Probe function: a generic smooth bump with all jets.
    let probe = SmoothFn::with_d3(
        |x| crate::math::sin(0.3 * x) * crate::math::exp(-0.05 * x * x),
        |x| {
            let e = crate::math::exp(-0.05 * x * x);
            0.3 * crate::math::cos(0.3 * x) * e - 0.1 * x * crate::math::sin(0.3 * x) * e
        },
        |x| {
            let e = crate::math::exp(-0.05 * x * x);
            let s = crate::math::sin(0.3 * x);
            let c = crate::math::cos(0.3 * x);
            (-0.09 * s - 0.06 * x * c + (0.01 * x * x - 0.1) * s) * e
        },
        |x| {
            let e = crate::math::exp(-0.05 * x * x);
            let s = crate::math::sin(0.3 * x);
            let c = crate::math::cos(0.3 * x);
            (-0.027 * c + 0.027 * x * s + (0.003 * x * x - 0.03 - 0.06) * c
                + (0.03 * x - 0.001 * x * x * x + 0.03 * x) * s)
                * e
        },
    );
    let lhs = product.apply(&probe)?;
    let rhs = target.apply(&probe)?;
    let dprobe = grid
        .points()
        .map(|x| (lhs.eval(x) + scheme.k * probe.eval(x) - rhs.eval(x)).abs())
        .fold(0.0_f64, f64::max);

    Ok(VerificationReport::new("factorization", "target = left*right + k", tol)
        .bounded("max |P_prod - P|", dp)
        .bounded("max |Q_prod - Q|", dq)
        .bounded("max |R_prod + k - R|", dr)
        .bounded("max probe deviation", dprobe)
        .finish())
}

/// Fits `c` in `A phi_n ≈ c phi_{n+step}` by least squares over interior grid
/// points and reports the fitted constant and the max-norm residual relative
/// to the peak of `A phi_n`.
///
/// If `n` is the lowest index of the family and the step leads below it, the
/// check degenerates to the annihilation test `A phi_n ≈ 0` with `c = 0`.
pub fn ladder_step_check(
    op: &FirstOrderOperator,
    family: &crate::special::EigenfunctionFamily,
    n: i64,
    step: i64,
    grid: &Grid,
    tol: f64,
) -> Result<VerificationReport> {
    if !family.contains(n) {
        return Err(Error::InvalidArgument(format!(
            "index {n} outside family '{}'",
            family.id
        )));
    }
    let target = n + step;
    let margin = 10usize;
    let image = op.apply(&family.state(n)?)?;
    let interior = grid.interior(margin);

    let annihilation = target < family.min_index;
    if annihilation && n != family.min_index {
        return Err(Error::InvalidArgument(format!(
            "target index {target} outside family '{}'",
            family.id
        )));
    }
    if !annihilation && !family.contains(target) {
        return Err(Error::InvalidArgument(format!(
            "target index {target} outside family '{}'",
            family.id
        )));
    }

    let xs: Vec<f64> = interior.clone().map(|i| grid.point(i)).collect();
    let img: Vec<f64> = xs.iter().map(|&x| image.eval(x)).collect();
    let scale = img.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);

    let (c, residual) = if annihilation {
        let phi_scale = xs
            .iter()
            .map(|&x| family.eval(n, x).unwrap_or(0.0).abs())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        (0.0, img.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / phi_scale)
    } else {
        let tgt: Vec<f64> = xs
            .iter()
            .map(|&x| family.eval(target, x))
            .collect::<Result<_>>()?;
        let num: f64 = img.iter().zip(&tgt).map(|(a, b)| a * b).sum();
        let den: f64 = tgt.iter().map(|b| b * b).sum();
        let c = if den > 0.0 { num / den } else { 0.0 };
        let res = img
            .iter()
            .zip(&tgt)
            .map(|(a, b)| (a - c * b).abs())
            .fold(0.0_f64, f64::max);
        (c, res / scale)
    };

    Ok(VerificationReport::new(
        format!("ladder[{} -> {}]", n, target),
        "A phi_n = c phi_{n+step}",
        tol,
    )
    .info("fitted c", c)
    .bounded("relative residual", residual)
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{BesselKind, EigenfunctionFamily};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn coordinate_scaled(c: f64) -> SmoothFn {
        SmoothFn::coordinate().scale(c)
    }

    /// Normalized oscillator factors b = (d/dx + x)/sqrt(2), b† = (-d/dx + x)/sqrt(2).
    fn osc_pair() -> (FirstOrderOperator, FirstOrderOperator) {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let b = FirstOrderOperator::new(coordinate_scaled(s), SmoothFn::constant(s));
        let bdag = FirstOrderOperator::new(coordinate_scaled(s), SmoothFn::constant(-s));
        (b, bdag)
    }

    #[test]
    fn oscillator_composition_gives_shifted_hamiltonian() {
        // b† b = H - 1/2: P = -1/2, Q = 0, R = x²/2 - 1/2.
        let (b, bdag) = osc_pair();
        let h = compose(&bdag, &b).unwrap();
        for &x in &[-1.5, 0.0, 0.3, 2.0] {
            assert_relative_eq!(h.p.eval(x), -0.5, max_relative = 1e-15);
            assert_abs_diff_eq!(h.q.eval(x), 0.0, epsilon = 1e-15);
            assert_relative_eq!(h.r.eval(x), 0.5 * x * x - 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn free_particle_factorization() {
        // (d/dx)(d/dx): P = 1, Q = 0, R = 0, so -(A A) is the free Hamiltonian.
        let a = FirstOrderOperator::ddx();
        let h = compose(&a, &a).unwrap();
        for &x in &[-2.0, 0.1, 5.0] {
            assert_relative_eq!(h.p.eval(x), 1.0, max_relative = 1e-15);
            assert_abs_diff_eq!(h.q.eval(x), 0.0);
            assert_abs_diff_eq!(h.r.eval(x), 0.0);
        }
    }

    #[test]
    fn derivative_annihilates_constants() {
        let a = FirstOrderOperator::ddx();
        let one = SmoothFn::constant(1.0);
        let img = a.apply(&one).unwrap();
        for &x in &[-3.0, 0.0, 7.0] {
            assert_abs_diff_eq!(img.eval(x), 0.0);
        }
    }

    #[test]
    fn compose_requires_right_derivatives() {
        let bare = FirstOrderOperator::new(SmoothFn::new(|x| x), SmoothFn::constant(1.0));
        let ok = FirstOrderOperator::ddx();
        // bare has no analytic derivative on its multiplicative coefficient.
        assert!(matches!(
            compose(&ok, &bare),
            Err(Error::MissingDerivative { .. })
        ));
        // as a left factor it is fine.
        assert!(compose(&bare, &ok).is_ok());
    }

    #[test]
    fn minus_ddrho_maps_j0_to_j1() {
        // A⁺_0 = -d/drho applied to j_0 equals j_1; at rho = 1 this is sin1 - cos1.
        let op = FirstOrderOperator::new(SmoothFn::zero(), SmoothFn::constant(-1.0));
        let j0 = EigenfunctionFamily::spherical(BesselKind::J).state(0).unwrap();
        let img = op.apply(&j0).unwrap();
        assert_relative_eq!(img.eval(1.0), 0.301_168_678_939_757, max_relative = 1e-12);
    }

    #[test]
    fn annihilation_of_ground_state() {
        // b with beta(x) = x (lambda -> infinity limit) kills phi_0.
        let (b, _) = osc_pair();
        let phi0 = EigenfunctionFamily::hermite().state(0).unwrap();
        let img = b.apply(&phi0).unwrap();
        for &x in &[-2.0, 0.0, 1.0, 3.0] {
            assert_abs_diff_eq!(img.eval(x), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn radial_hamiltonian_eigenvalue_on_u00() {
        // [-d²/dr² + r² ] u_00 = 3 u_00 (l = 0).
        let h = SecondOrderOperator::schroedinger(
            1.0,
            SmoothFn::with_d2(|r| r * r, |r| 2.0 * r, |_| 2.0),
        );
        let u00 = EigenfunctionFamily::radial_in_n(0).state(0).unwrap();
        let img = h.apply(&u00).unwrap();
        for &r in &[0.5, 1.0, 2.0] {
            assert_relative_eq!(img.eval(r), 3.0 * u00.eval(r), max_relative = 1e-11);
        }
    }

    fn bessel_ladder_plus(l: i64) -> FirstOrderOperator {
        // A⁺_l = l/rho - d/drho
        let lf = l as f64;
        FirstOrderOperator::new(
            SmoothFn::with_d2(move |r| lf / r, move |r| -lf / (r * r), move |r| 2.0 * lf / (r * r * r)),
            SmoothFn::constant(-1.0),
        )
        .with_index(l)
    }

    fn bessel_ladder_minus(l: i64) -> FirstOrderOperator {
        // A⁻_l = (l+1)/rho + d/drho
        let lf = (l + 1) as f64;
        FirstOrderOperator::new(
            SmoothFn::with_d2(move |r| lf / r, move |r| -lf / (r * r), move |r| 2.0 * lf / (r * r * r)),
            SmoothFn::constant(1.0),
        )
        .with_index(l)
    }

    fn bessel_hamiltonian(l: i64) -> SecondOrderOperator {
        let c = (l * (l + 1)) as f64;
        SecondOrderOperator::new(
            SmoothFn::constant(-1.0),
            SmoothFn::with_d2(|r| -2.0 / r, |r| 2.0 / (r * r), |r| -4.0 / (r * r * r)),
            SmoothFn::with_d2(move |r| c / (r * r), move |r| -2.0 * c / (r * r * r), move |r| {
                6.0 * c / (r * r * r * r)
            }),
        )
    }

    #[test]
    fn spherical_factorization_checks_out() {
        // H_2 = A⁺_1 A⁻_2 with zero constant; deviation < 1e-12.
        let grid = Grid::uniform(0.3, 12.0, 401).unwrap();
        let target = bessel_hamiltonian(2);
        let scheme = FactorizationScheme::new(
            bessel_ladder_plus(1),
            bessel_ladder_minus(2),
            0.0,
            SchemeKind::CaseI,
            target.clone(),
        );
        let report = check_factorization(&target, &scheme, &grid, 1e-12).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn wrong_constant_is_detected() {
        let grid = Grid::uniform(0.3, 12.0, 101).unwrap();
        let target = bessel_hamiltonian(2);
        let scheme = FactorizationScheme::new(
            bessel_ladder_plus(1),
            bessel_ladder_minus(2),
            1.0, // deliberately off by one
            SchemeKind::CaseI,
            target.clone(),
        );
        let report = check_factorization(&target, &scheme, &grid, 1e-12).unwrap();
        assert!(!report.passed());
        let dr = report.measure("max |R_prod + k - R|").unwrap();
        assert_relative_eq!(dr, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn bessel_ladders_step_with_unit_constant() {
        let grid = Grid::uniform(0.5, 20.0, 801).unwrap();
        for kind in [BesselKind::J, BesselKind::N] {
            let fam = EigenfunctionFamily::spherical(kind);
            for l in 0..=8i64 {
                let up = ladder_step_check(&bessel_ladder_plus(l), &fam, l, 1, &grid, 1e-10).unwrap();
                assert!(up.passed(), "raise {kind:?} l={l}: {up:?}");
                assert_relative_eq!(up.measure("fitted c").unwrap(), 1.0, max_relative = 1e-9);
                if l >= 1 {
                    let down =
                        ladder_step_check(&bessel_ladder_minus(l), &fam, l, -1, &grid, 1e-10)
                            .unwrap();
                    assert!(down.passed(), "lower {kind:?} l={l}: {down:?}");
                    assert_relative_eq!(down.measure("fitted c").unwrap(), 1.0, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn oscillator_lowering_annihilates() {
        // a⁻ on phi_0: fitted c = 0, annihilation residual.
        let (b, _) = osc_pair();
        let fam = EigenfunctionFamily::hermite();
        let grid = Grid::uniform(-8.0, 8.0, 401).unwrap();
        let report = ladder_step_check(&b, &fam, 0, -1, &grid, 1e-10).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_abs_diff_eq!(report.measure("fitted c").unwrap(), 0.0);
    }

    #[test]
    fn radial_n_ladder_constant_is_n_plus_one() {
        // a⁺_n = (n+1-r²/2) + (r/2) d/dr maps u_{n,0} to (n+1) u_{n+1,0}.
        let grid = Grid::uniform(0.05, 9.0, 801).unwrap();
        let fam = EigenfunctionFamily::radial_in_n(0);
        for n in 0..=4i64 {
            let nf = n as f64;
            let op = FirstOrderOperator::new(
                SmoothFn::with_d2(move |r| nf + 1.0 - 0.5 * r * r, |r| -r, |_| -1.0),
                SmoothFn::with_d2(|r| 0.5 * r, |_| 0.5, |_| 0.0),
            );
            let report = ladder_step_check(&op, &fam, n, 1, &grid, 1e-8).unwrap();
            assert!(report.passed(), "n={n}: {report:?}");
            assert_relative_eq!(
                report.measure("fitted c").unwrap(),
                nf + 1.0,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn sampling_names_the_singular_point() {
        // 1/x coefficient blows up at the x = 0 grid node.
        let op = FirstOrderOperator::new(
            SmoothFn::with_d1(|x| 1.0 / x, |x| -1.0 / (x * x)),
            SmoothFn::constant(1.0),
        );
        let f = SmoothFn::with_d1(|_| 1.0, |_| 0.0);
        let grid = Grid::uniform(-1.0, 1.0, 21).unwrap();
        match op.sample(&f, &grid) {
            Err(Error::Singularity { location, .. }) => {
                assert_abs_diff_eq!(location, 0.0, epsilon = 1e-12)
            }
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_target_rejected() {
        let fam = EigenfunctionFamily::hermite();
        let grid = Grid::uniform(-8.0, 8.0, 101).unwrap();
        let (b, _) = osc_pair();
        assert!(ladder_step_check(&b, &fam, 3, -5, &grid, 1e-10).is_err());
    }

    #[test]
    fn composition_bilinear_in_multiplicative_coefficients() {
        // compose(aL + bL', R) = a compose(L, R) + b compose(L', R) at coefficient level.
        let grid = Grid::uniform(0.4, 5.0, 101).unwrap();
        let l1 = bessel_ladder_plus(1);
        let l2 = bessel_ladder_plus(3);
        let r = bessel_ladder_minus(2);
        let (a, b) = (1.7, -0.6);
        let mixed = FirstOrderOperator::new(
            l1.mult.scale(a).add(&l2.mult.scale(b)),
            l1.deriv.scale(a).add(&l2.deriv.scale(b)),
        );
        let lhs = compose(&mixed, &r).unwrap();
        let c1 = compose(&l1, &r).unwrap();
        let c2 = compose(&l2, &r).unwrap();
        for x in grid.points() {
            assert_relative_eq!(
                lhs.r.eval(x),
                a * c1.r.eval(x) + b * c2.r.eval(x),
                epsilon = 1e-11
            );
            assert_relative_eq!(
                lhs.q.eval(x),
                a * c1.q.eval(x) + b * c2.q.eval(x),
                epsilon = 1e-11
            );
        }
    }

    #[test]
    fn apply_compose_associativity() {
        // apply(compose(A,B), f) == apply(A, apply(B, f)) to round-off with
        // analytic derivatives.
        let a = bessel_ladder_plus(1);
        let b = bessel_ladder_minus(2);
        let f = EigenfunctionFamily::spherical(BesselKind::J).state(2).unwrap();
        let once = compose(&a, &b).unwrap().apply(&f).unwrap();
        let twice = a.apply(&b.apply(&f).unwrap()).unwrap();
        for &x in &[0.7, 1.9, 4.2] {
            assert_relative_eq!(once.eval(x), twice.eval(x), epsilon = 1e-11);
        }
    }
}
