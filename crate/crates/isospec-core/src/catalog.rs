//! The bundled model families.
//!
//! Five models are wired to the deformation engine:
//!
//! * `oscillator1d` — `-1/2 d²/dx² + 1/2 x²`; deforming the `x ± d/dx`
//!   factor pair of the doubled operator `-d²/dx² + x²` produces the family
//!   with potential `x²/2 - phi'`, `phi = e^{-x²}/(lambda + ∫_0^x e^{-y²})`.
//! * `free1d` — `-d²/dx²` factored by `d/dx`; the family has potential
//!   `-2 nu' = 2/(lambda+x)²` with continuum states `chi_k = (nu - d/dx) sin(kx)`.
//! * `free3d` — the spherical Bessel operator in `rho`, laddered in `l`
//!   (two isospectral classes, Case I and Case II).
//! * `isotropic-l` — the radial isotropic-oscillator equation laddered in
//!   `l` at fixed radial index (Cases I and II).
//! * `isotropic-n` — the `l = 0` radial ladder in the radial index: the
//!   products `E_n = a⁻_{n+1} a⁺_n` and `D_n = a⁺_{n-1} a⁻_n` are deformed,
//!   giving `E^λ_n = D_{n+1} + r (nu^λ_n)'` and the semi-isospectral member
//!   `H_0 + (4/r²) V^λ_n`.
//!
//! Member bookkeeping: building a family at member index `m` solves the
//! adjacent-level scheme, the member eigenfunction is the deformed right
//! factor applied to the adjacent seed, and its eigenvalue carries the
//! member's own labels.  A verification pass at build time checks the
//! eigen-relation residual so the pairing is enforced rather than assumed.

use alloc::format;
use alloc::vec::Vec;

use crate::config::Tolerances;
use crate::deform::{
    self, antiderivative, classify_lambda, deformed_operator, from_closed_form, tail_integral,
    DeformationResult, Validity,
};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::math;
use crate::operator::{compose, FactorizationScheme, FirstOrderOperator, SchemeKind, SecondOrderOperator};
use crate::smooth::SmoothFn;
use crate::special::{radial_eigenvalue, BesselKind, EigenfunctionFamily};

const SQRT_PI_2: f64 = 0.886_226_925_452_758;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelId {
    Oscillator1d,
    Free1d,
    Free3d,
    IsotropicL,
    IsotropicN,
}

impl ModelId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelId::Oscillator1d => "oscillator1d",
            ModelId::Free1d => "free1d",
            ModelId::Free3d => "free3d",
            ModelId::IsotropicL => "isotropic-l",
            ModelId::IsotropicN => "isotropic-n",
        }
    }

    pub fn parse(s: &str) -> Result<ModelId> {
        match s {
            "oscillator1d" => Ok(ModelId::Oscillator1d),
            "free1d" => Ok(ModelId::Free1d),
            "free3d" => Ok(ModelId::Free3d),
            "isotropic-l" => Ok(ModelId::IsotropicL),
            "isotropic-n" => Ok(ModelId::IsotropicN),
            other => Err(Error::InvalidArgument(format!("unknown model id '{other}'"))),
        }
    }

    /// Domain on which the model is usually examined.
    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            ModelId::Oscillator1d => (-10.0, 10.0),
            ModelId::Free1d => (-2.0, 10.0),
            ModelId::Free3d => (0.05, 20.0),
            ModelId::IsotropicL | ModelId::IsotropicN => (0.01, 10.0),
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, ModelId::Free3d | ModelId::IsotropicL | ModelId::IsotropicN)
    }
}

impl core::fmt::Display for ModelId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which isospectral class of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyCase {
    I,
    II,
    /// The model has a single deformation class.
    Unique,
}

impl FamilyCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyCase::I => "I",
            FamilyCase::II => "II",
            FamilyCase::Unique => "unique",
        }
    }

    pub fn parse(s: &str) -> Result<FamilyCase> {
        match s {
            "I" | "i" | "1" => Ok(FamilyCase::I),
            "II" | "ii" | "2" => Ok(FamilyCase::II),
            "unique" | "u" => Ok(FamilyCase::Unique),
            other => Err(Error::InvalidArgument(format!("unknown case tag '{other}'"))),
        }
    }
}

impl core::fmt::Display for FamilyCase {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Seed choice for the free 3-D model (regular or irregular solution).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedKind {
    #[default]
    J,
    N,
}

impl SeedKind {
    pub fn parse(s: &str) -> Result<SeedKind> {
        match s {
            "j" | "J" => Ok(SeedKind::J),
            "n" | "N" => Ok(SeedKind::N),
            other => Err(Error::InvalidArgument(format!("unknown seed kind '{other}'"))),
        }
    }
    fn bessel(&self) -> BesselKind {
        match self {
            SeedKind::J => BesselKind::J,
            SeedKind::N => BesselKind::N,
        }
    }
}

/// State label inside a family: a discrete level or a continuum wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateIx {
    Level(u32),
    Wavenumber(f64),
}

/// Everything needed to build one family member.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub model: ModelId,
    pub case: FamilyCase,
    pub lambda: f64,
    pub domain: (f64, f64),
    /// Member index for laddered models (`l` for free3d/isotropic-l, the
    /// radial index for isotropic-n); ignored by the 1-D models.
    pub level: u32,
    pub seed_kind: SeedKind,
    pub tols: Tolerances,
}

impl FamilySpec {
    pub fn new(model: ModelId, case: FamilyCase, lambda: f64, domain: (f64, f64)) -> Self {
        let level = if case == FamilyCase::II { 1 } else { 0 };
        FamilySpec {
            model,
            case,
            lambda,
            domain,
            level,
            seed_kind: SeedKind::default(),
            tols: Tolerances::default(),
        }
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn with_seed(mut self, seed: SeedKind) -> Self {
        self.seed_kind = seed;
        self
    }
}

/// One member of a deformed family, fully wired.
#[derive(Clone)]
pub struct DeformedFamily {
    pub model: ModelId,
    pub case: FamilyCase,
    pub lambda: f64,
    pub level: u32,
    pub domain: (f64, f64),
    pub seed_kind: SeedKind,
    /// Member-level base operator (physical normalization).
    pub base: SecondOrderOperator,
    /// Deformed member operator (physical normalization).
    pub deformed: SecondOrderOperator,
    /// Engine output at the algebraic normalization of the scheme.
    pub result: DeformationResult,
    /// The solved adjacent-level scheme.
    pub scheme: FactorizationScheme,
    /// Constant completing the inverted product to the deformed member
    /// (algebraic normalization).
    pub k_inverted: f64,
    /// `(k¹, k²)` at the member level (algebraic normalization).
    pub k_constants: (f64, f64),
    /// Energy scale from the algebraic scheme to the physical operators.
    pub scale: f64,
    seed_family: Option<EigenfunctionFamily>,
}

impl core::fmt::Debug for DeformedFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("DeformedFamily")
            .field("model", &self.model)
            .field("case", &self.case)
            .field("lambda", &self.lambda)
            .field("level", &self.level)
            .finish()
    }
}

fn inv_x(c: f64) -> SmoothFn {
    SmoothFn::with_d3(
        move |x| c / x,
        move |x| -c / (x * x),
        move |x| 2.0 * c / (x * x * x),
        move |x| -6.0 * c / (x * x * x * x),
    )
}

/// `c/x + x` (the isotropic l-ladder multiplicative coefficient).
fn radial_coeff(c: f64) -> SmoothFn {
    inv_x(c).add(&SmoothFn::coordinate())
}

fn sine(k: f64) -> SmoothFn {
    SmoothFn::with_d3(
        move |x| math::sin(k * x),
        move |x| k * math::cos(k * x),
        move |x| -k * k * math::sin(k * x),
        move |x| -k * k * k * math::cos(k * x),
    )
}

/// `e^{s x²}` with jets.
fn gaussian(s: f64) -> SmoothFn {
    SmoothFn::power(2).scale(s).exp()
}

fn check_radial_domain(model: ModelId, domain: (f64, f64)) -> Result<()> {
    if model.is_radial() && domain.0 <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "radial model {model} needs a domain with lower bound > 0, got {}",
            domain.0
        )));
    }
    if domain.0 >= domain.1 {
        return Err(Error::InvalidArgument("empty domain".into()));
    }
    Ok(())
}

/// Builds one family member from its spec.  Fails with the singular-point
/// listing when `lambda` is invalid on the domain, and runs an eigen-relation
/// residual check on a probe grid before returning.
pub fn build_family(spec: &FamilySpec) -> Result<DeformedFamily> {
    check_radial_domain(spec.model, spec.domain)?;
    let family = match spec.model {
        ModelId::Oscillator1d => build_oscillator(spec)?,
        ModelId::Free1d => build_free1d(spec)?,
        ModelId::Free3d => build_free3d(spec)?,
        ModelId::IsotropicL => build_isotropic_l(spec)?,
        ModelId::IsotropicN => build_isotropic_n(spec)?,
    };
    family.verify_wiring()?;
    Ok(family)
}

fn require_case(spec: &FamilySpec, allowed: &[FamilyCase]) -> Result<()> {
    if allowed.contains(&spec.case) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "model {} does not provide case {}",
            spec.model, spec.case
        )))
    }
}

fn build_oscillator(spec: &FamilySpec) -> Result<DeformedFamily> {
    require_case(spec, &[FamilyCase::Unique])?;
    let lambda = spec.lambda;

    // Doubled algebraic operator H2 = -d²/dx² + x² = (x + d/dx)(x - d/dx) - 1.
    let x = SmoothFn::coordinate();
    let left = FirstOrderOperator::new(x.clone(), SmoothFn::constant(1.0));
    let right = FirstOrderOperator::new(x.clone(), SmoothFn::constant(-1.0));
    let h2 = SecondOrderOperator::schroedinger(1.0, SmoothFn::power(2));
    let scheme = FactorizationScheme::new(left, right, -1.0, SchemeKind::CaseI, h2.clone());

    // Closed form: nu = e^{-x²} / (lambda + (sqrt(pi)/2) erf x).
    let numerator = gaussian(-1.0);
    let denominator = SmoothFn::with_d3(
        move |t| lambda + SQRT_PI_2 * math::erf(t),
        |t| math::exp(-t * t),
        |t| -2.0 * t * math::exp(-t * t),
        |t| (4.0 * t * t - 2.0) * math::exp(-t * t),
    );
    let primary = numerator.div(&denominator);
    let exponent = SmoothFn::power(2);
    let result =
        from_closed_form(&scheme, lambda, primary, exponent, denominator, spec.domain, spec.tols)?;

    let deformed_algebraic = deformed_operator(&h2, &result);
    Ok(DeformedFamily {
        model: spec.model,
        case: spec.case,
        lambda,
        level: 0,
        domain: spec.domain,
        seed_kind: spec.seed_kind,
        base: h2.scale(0.5),
        deformed: deformed_algebraic.scale(0.5),
        result,
        scheme,
        k_inverted: 1.0,
        k_constants: (1.0, -1.0),
        scale: 0.5,
        seed_family: Some(EigenfunctionFamily::hermite()),
    })
}

fn build_free1d(spec: &FamilySpec) -> Result<DeformedFamily> {
    require_case(spec, &[FamilyCase::Unique])?;
    let lambda = spec.lambda;

    let left = FirstOrderOperator::ddx();
    let right = FirstOrderOperator::new(SmoothFn::zero(), SmoothFn::constant(-1.0));
    let h = SecondOrderOperator::schroedinger(1.0, SmoothFn::zero());
    let scheme = FactorizationScheme::new(left, right, 0.0, SchemeKind::CaseI, h.clone());

    let primary = SmoothFn::with_d3(
        move |t| 1.0 / (lambda + t),
        move |t| -1.0 / ((lambda + t) * (lambda + t)),
        move |t| 2.0 / math::powi(lambda + t, 3),
        move |t| -6.0 / math::powi(lambda + t, 4),
    );
    let denominator = SmoothFn::with_d3(move |t| lambda + t, |_| 1.0, |_| 0.0, |_| 0.0);
    let result = from_closed_form(
        &scheme,
        lambda,
        primary,
        SmoothFn::zero(),
        denominator,
        spec.domain,
        spec.tols,
    )?;

    let deformed = deformed_operator(&h, &result);
    Ok(DeformedFamily {
        model: spec.model,
        case: spec.case,
        lambda,
        level: 0,
        domain: spec.domain,
        seed_kind: spec.seed_kind,
        base: h,
        deformed,
        result,
        scheme,
        k_inverted: 0.0,
        k_constants: (0.0, 0.0),
        scale: 1.0,
        seed_family: None,
    })
}

/// Spherical Bessel operator `H_l = -d²/drho² - (2/rho) d/drho + l(l+1)/rho²`.
pub fn spherical_operator(l: u32) -> SecondOrderOperator {
    let c = (l * (l + 1)) as f64;
    SecondOrderOperator::new(SmoothFn::constant(-1.0), inv_x(-2.0), inv_x(c).div(&SmoothFn::coordinate()))
        .with_index(l as i64)
}

/// Ladder pair for the spherical Bessel operator:
/// `A⁺_l = l/rho - d/drho` (raises), `A⁻_l = (l+1)/rho + d/drho` (lowers).
pub fn spherical_ladder(l: i64) -> (FirstOrderOperator, FirstOrderOperator) {
    let plus = FirstOrderOperator::new(inv_x(l as f64), SmoothFn::constant(-1.0)).with_index(l);
    let minus =
        FirstOrderOperator::new(inv_x((l + 1) as f64), SmoothFn::constant(1.0)).with_index(l);
    (plus, minus)
}

fn build_free3d(spec: &FamilySpec) -> Result<DeformedFamily> {
    require_case(spec, &[FamilyCase::I, FamilyCase::II])?;
    let lambda = spec.lambda;
    let m = spec.level;

    match spec.case {
        FamilyCase::I => {
            // Scheme at level m+1: H_{m+1} = A⁺_m A⁻_{m+1} + 0.
            let (plus, _) = spherical_ladder(m as i64);
            let (_, minus) = spherical_ladder(m as i64 + 1);
            let target = spherical_operator(m + 1);
            let scheme = FactorizationScheme::new(plus, minus, 0.0, SchemeKind::CaseI, target);

            // nu_{m+1} = rho^{2m+2} [lambda - rho^{2m+3}/(2m+3)]^{-1}.
            let p = 2 * m as i32 + 2;
            let numerator = SmoothFn::power(p);
            let denominator =
                SmoothFn::power(p + 1).scale(-1.0 / (p + 1) as f64).add_const(lambda);
            let primary = numerator.div(&denominator);
            let exponent = log_power(-(p as f64));
            let result = from_closed_form(
                &scheme,
                lambda,
                primary,
                exponent,
                denominator,
                spec.domain,
                spec.tols,
            )?;
            let base = spherical_operator(m);
            let deformed = deformed_operator(&base, &result);
            Ok(DeformedFamily {
                model: spec.model,
                case: spec.case,
                lambda,
                level: m,
                domain: spec.domain,
                seed_kind: spec.seed_kind,
                base,
                deformed,
                result,
                scheme,
                k_inverted: 0.0,
                k_constants: (0.0, 0.0),
                scale: 1.0,
                seed_family: Some(EigenfunctionFamily::spherical(spec.seed_kind.bessel())),
            })
        }
        _ => {
            if m == 0 {
                return Err(Error::InvalidArgument(
                    "case II families start at member 1 (the ground index is excluded)".into(),
                ));
            }
            // Scheme at level m-1: H_{m-1} = A⁻_m A⁺_{m-1} + 0.
            let (_, minus) = spherical_ladder(m as i64);
            let (plus, _) = spherical_ladder(m as i64 - 1);
            let target = spherical_operator(m - 1);
            let scheme = FactorizationScheme::new(minus, plus, 0.0, SchemeKind::CaseII, target);

            // eta_{m-1} = nu^{λ2}_m = rho^{-2m} [lambda + rho^{-2m+1}/(-2m+1)]^{-1}.
            let p = -2 * (m as i32);
            let numerator = SmoothFn::power(p);
            let denominator =
                SmoothFn::power(p + 1).scale(1.0 / (p + 1) as f64).add_const(lambda);
            let primary = numerator.div(&denominator);
            let exponent = log_power(p as f64);
            let result = from_closed_form(
                &scheme,
                lambda,
                primary,
                exponent,
                denominator,
                spec.domain,
                spec.tols,
            )?;
            let base = spherical_operator(m);
            let deformed = deformed_operator(&base, &result);
            Ok(DeformedFamily {
                model: spec.model,
                case: spec.case,
                lambda,
                level: m,
                domain: spec.domain,
                seed_kind: spec.seed_kind,
                base,
                deformed,
                result,
                scheme,
                k_inverted: 0.0,
                k_constants: (0.0, 0.0),
                scale: 1.0,
                seed_family: Some(EigenfunctionFamily::spherical(spec.seed_kind.bessel())),
            })
        }
    }
}

/// `c · ln x` with jets (the integrating-factor exponent of power-law models).
fn log_power(c: f64) -> SmoothFn {
    SmoothFn::with_d3(
        move |x| c * math::ln(x),
        move |x| c / x,
        move |x| -c / (x * x),
        move |x| 2.0 * c / (x * x * x),
    )
}

/// Radial isotropic-oscillator operator
/// `H_l = -d²/dr² + r² + l(l+1)/r²` with eigenvalues `4n + 2l + 3`.
pub fn isotropic_operator(l: u32) -> SecondOrderOperator {
    let c = (l * (l + 1)) as f64;
    let potential = SmoothFn::power(2).add(&SmoothFn::power(-2).scale(c));
    SecondOrderOperator::schroedinger(1.0, potential).with_index(l as i64)
}

/// l-ladder pair for the isotropic oscillator:
/// `a⁺_l = (l+1)/r + r - d/dr` (raises), `a⁻_l = l/r + r + d/dr` (lowers).
pub fn isotropic_ladder(l: i64) -> (FirstOrderOperator, FirstOrderOperator) {
    let plus =
        FirstOrderOperator::new(radial_coeff((l + 1) as f64), SmoothFn::constant(-1.0)).with_index(l);
    let minus =
        FirstOrderOperator::new(radial_coeff(l as f64), SmoothFn::constant(1.0)).with_index(l);
    (plus, minus)
}

/// `k¹_l = -(2l-1)` in `H_l = a⁺_{l-1} a⁻_l + k¹_l`.
pub fn isotropic_k1(l: i64) -> f64 {
    -((2 * l - 1) as f64)
}

/// `k²_l = -(2l+3)` in `H_l = a⁻_{l+1} a⁺_l + k²_l`.
pub fn isotropic_k2(l: i64) -> f64 {
    -((2 * l + 3) as f64)
}

fn build_isotropic_l(spec: &FamilySpec) -> Result<DeformedFamily> {
    require_case(spec, &[FamilyCase::I, FamilyCase::II])?;
    let lambda = spec.lambda;
    let m = spec.level;

    match spec.case {
        FamilyCase::I => {
            // Scheme at level m+1: H_{m+1} = a⁺_m a⁻_{m+1} + k¹_{m+1}.
            let (plus, _) = isotropic_ladder(m as i64);
            let (_, minus) = isotropic_ladder(m as i64 + 1);
            let target = isotropic_operator(m + 1);
            let k1 = isotropic_k1(m as i64 + 1);
            let scheme = FactorizationScheme::new(plus, minus, k1, SchemeKind::CaseI, target);

            // nu^{λ1}_{m+1} = e^{r²} r^{2m+2} [lambda - ∫_0^r x^{2m+2} e^{x²} dx]^{-1}.
            let p = 2 * m as i32 + 2;
            let numerator = SmoothFn::power(p).mul(&gaussian(1.0));
            let integrand = numerator.clone();
            let denominator =
                antiderivative(&integrand, 0.0, spec.tols).neg().add_const(lambda);
            let primary = numerator.div(&denominator);
            let exponent = log_power(-(p as f64)).sub(&SmoothFn::power(2));
            let result = from_closed_form(
                &scheme,
                lambda,
                primary,
                exponent,
                denominator,
                spec.domain,
                spec.tols,
            )?;
            let base = isotropic_operator(m);
            let deformed = deformed_operator(&base, &result);
            Ok(DeformedFamily {
                model: spec.model,
                case: spec.case,
                lambda,
                level: m,
                domain: spec.domain,
                seed_kind: spec.seed_kind,
                base,
                deformed,
                result,
                scheme,
                k_inverted: isotropic_k2(m as i64),
                k_constants: (isotropic_k1(m as i64), isotropic_k2(m as i64)),
                scale: 1.0,
                seed_family: Some(EigenfunctionFamily::radial_in_n(m as usize + 1)),
            })
        }
        _ => {
            if m == 0 {
                return Err(Error::InvalidArgument(
                    "case II families start at member 1 (the ground index is excluded)".into(),
                ));
            }
            // Scheme at level m-1: H_{m-1} = a⁻_m a⁺_{m-1} + k²_{m-1}.
            let (_, minus) = isotropic_ladder(m as i64);
            let (plus, _) = isotropic_ladder(m as i64 - 1);
            let target = isotropic_operator(m - 1);
            let k2 = isotropic_k2(m as i64 - 1);
            let scheme = FactorizationScheme::new(minus, plus, k2, SchemeKind::CaseII, target);

            // nu^{λ2}_m = e^{-r²} r^{-2m} [lambda - ∫_r^∞ x^{-2m} e^{-x²} dx]^{-1}.
            let p = -2 * (m as i32);
            let numerator = SmoothFn::power(p).mul(&gaussian(-1.0));
            let integrand = numerator.clone();
            let denominator = tail_integral(&integrand, spec.tols).neg().add_const(lambda);
            let primary = numerator.div(&denominator);
            let exponent = log_power(p as f64).sub(&SmoothFn::power(2));
            let result = from_closed_form(
                &scheme,
                lambda,
                primary,
                exponent,
                denominator,
                spec.domain,
                spec.tols,
            )?;
            let base = isotropic_operator(m);
            let deformed = deformed_operator(&base, &result);
            Ok(DeformedFamily {
                model: spec.model,
                case: spec.case,
                lambda,
                level: m,
                domain: spec.domain,
                seed_kind: spec.seed_kind,
                base,
                deformed,
                result,
                scheme,
                k_inverted: isotropic_k1(m as i64),
                k_constants: (isotropic_k1(m as i64), isotropic_k2(m as i64)),
                scale: 1.0,
                seed_family: Some(EigenfunctionFamily::radial_in_n(m as usize - 1)),
            })
        }
    }
}

/// n-ladder pair at `l = 0`:
/// `a⁺_n = (n+1-r²/2) + (r/2) d/dr`, `a⁻_n = (n+1/2-r²/2) - (r/2) d/dr`.
pub fn radial_n_ladder(n: i64) -> (FirstOrderOperator, FirstOrderOperator) {
    let nf = n as f64;
    let half_r = SmoothFn::with_d3(|r| 0.5 * r, |_| 0.5, |_| 0.0, |_| 0.0);
    let plus = FirstOrderOperator::new(
        SmoothFn::power(2).scale(-0.5).add_const(nf + 1.0),
        half_r.clone(),
    )
    .with_index(n);
    let minus = FirstOrderOperator::new(
        SmoothFn::power(2).scale(-0.5).add_const(nf + 0.5),
        half_r.neg(),
    )
    .with_index(n);
    (plus, minus)
}

/// Closed form of `E_n = a⁻_{n+1} a⁺_n = (r²/4)[H_0 - eps_{n0}] + (n+1)(n+3/2)`.
pub fn e_operator_closed(n: u32) -> SecondOrderOperator {
    bracket_operator(radial_eigenvalue(n as usize, 0), e_constant(n))
}

/// Closed form of `D_n = a⁺_{n-1} a⁻_n = (r²/4)[H_0 - eps_{n0}] + n(n+1/2)`.
pub fn d_operator_closed(n: u32) -> SecondOrderOperator {
    bracket_operator(radial_eigenvalue(n as usize, 0), d_constant(n))
}

pub fn e_constant(n: u32) -> f64 {
    (n as f64 + 1.0) * (n as f64 + 1.5)
}

pub fn d_constant(n: u32) -> f64 {
    n as f64 * (n as f64 + 0.5)
}

/// `(r²/4)[-d²/dr² + r² - eps] + c`.
fn bracket_operator(eps: f64, c: f64) -> SecondOrderOperator {
    let p = SmoothFn::power(2).scale(-0.25);
    let r = SmoothFn::power(4)
        .scale(0.25)
        .add(&SmoothFn::power(2).scale(-0.25 * eps))
        .add_const(c);
    SecondOrderOperator::new(p, SmoothFn::zero(), r)
}

/// Both representations of the conjugate pair `(E_n, D_n)` plus constants.
pub struct ConjugatePair {
    pub e_composed: SecondOrderOperator,
    pub d_composed: SecondOrderOperator,
    pub e_closed: SecondOrderOperator,
    pub d_closed: SecondOrderOperator,
    pub e_constant: f64,
    pub d_constant: f64,
}

/// The two ladder products that bracket `H_0` without factoring it.
pub fn conjugate_pair(n: u32) -> Result<ConjugatePair> {
    let (_, minus_up) = radial_n_ladder(n as i64 + 1);
    let (plus, _) = radial_n_ladder(n as i64);
    let e_composed = compose(&minus_up, &plus)?;
    let (plus_down, _) = radial_n_ladder(n as i64 - 1);
    let (_, minus) = radial_n_ladder(n as i64);
    let d_composed = compose(&plus_down, &minus)?;
    Ok(ConjugatePair {
        e_composed,
        d_composed,
        e_closed: e_operator_closed(n),
        d_closed: d_operator_closed(n),
        e_constant: e_constant(n),
        d_constant: d_constant(n),
    })
}

fn build_isotropic_n(spec: &FamilySpec) -> Result<DeformedFamily> {
    require_case(spec, &[FamilyCase::Unique])?;
    let lambda = spec.lambda;
    let n = spec.level;

    // Scheme: E_n = a⁻_{n+1} a⁺_n + 0, deformed in the Case II sense.
    let (_, minus_up) = radial_n_ladder(n as i64 + 1);
    let (plus, _) = radial_n_ladder(n as i64);
    let target = e_operator_closed(n);
    let scheme = FactorizationScheme::new(minus_up, plus, 0.0, SchemeKind::CaseII, target);

    // nu^λ_n = e^{-r²} r^{4n+5} [lambda - 2 ∫_0^r e^{-x²} x^{4n+4} dx]^{-1}.
    let p = 4 * n as i32 + 5;
    let numerator = SmoothFn::power(p).mul(&gaussian(-1.0));
    let integrand = SmoothFn::power(p - 1).mul(&gaussian(-1.0));
    let denominator = antiderivative(&integrand, 0.0, spec.tols).scale(-2.0).add_const(lambda);
    let primary = numerator.div(&denominator);
    let exponent = log_power(p as f64).sub(&SmoothFn::power(2));
    let result =
        from_closed_form(&scheme, lambda, primary, exponent, denominator, spec.domain, spec.tols)?;

    // Member operator: E^λ_n = D_{n+1} + r (nu^λ_n)'.
    let base = d_operator_closed(n + 1);
    let deformed = deformed_operator(&base, &result);
    Ok(DeformedFamily {
        model: spec.model,
        case: spec.case,
        lambda,
        level: n,
        domain: spec.domain,
        seed_kind: spec.seed_kind,
        base: e_operator_closed(n),
        deformed,
        result,
        scheme,
        k_inverted: 0.0,
        k_constants: (0.0, 0.0),
        scale: 1.0,
        seed_family: Some(EigenfunctionFamily::radial_in_n(0)),
    })
}

impl DeformedFamily {
    fn bad_state(&self, state: StateIx) -> Error {
        Error::InvalidArgument(format!(
            "state {state:?} not available in family {} case {} member {}",
            self.model, self.case, self.level
        ))
    }

    /// Physical eigenvalue of the member state.
    pub fn eigenvalue(&self, state: StateIx) -> Result<f64> {
        match (self.model, state) {
            (ModelId::Oscillator1d, StateIx::Level(n)) => Ok(n as f64 + 0.5),
            (ModelId::Free1d, StateIx::Wavenumber(k)) => Ok(k * k),
            (ModelId::Free3d, StateIx::Level(_)) => Ok(1.0),
            (ModelId::IsotropicL, StateIx::Level(n)) => {
                Ok(radial_eigenvalue(n as usize, self.level as usize))
            }
            (ModelId::IsotropicN, StateIx::Level(n)) if n == self.level => {
                Ok(e_constant(self.level))
            }
            _ => Err(self.bad_state(state)),
        }
    }

    /// First `count` eigenvalues of the deformed member (discrete models),
    /// including the annihilation state where it is normalizable.
    pub fn spectrum(&self, count: usize) -> Result<Vec<f64>> {
        match self.model {
            ModelId::Oscillator1d => {
                Ok((0..count).map(|n| n as f64 + 0.5).collect())
            }
            ModelId::IsotropicL => {
                let mut out = Vec::with_capacity(count);
                if self.case == FamilyCase::I && self.lambda < 0.0 {
                    out.push(self.k_inverted);
                }
                let mut n = 0usize;
                while out.len() < count {
                    out.push(radial_eigenvalue(n, self.level as usize));
                    n += 1;
                }
                Ok(out)
            }
            ModelId::Free3d => Ok(alloc::vec![1.0; count.min(1)]),
            ModelId::IsotropicN => Ok(alloc::vec![e_constant(self.level); count.min(1)]),
            ModelId::Free1d => Err(Error::Unsupported(
                "free1d has a continuum; sample it at chosen wavenumbers".into(),
            )),
        }
    }

    /// Eigenvalues of the product-built (ladder) states only — for the
    /// oscillator this excludes the restored ground state.
    pub fn ladder_spectrum(&self, count: usize) -> Result<Vec<f64>> {
        match self.model {
            ModelId::Oscillator1d => Ok((1..=count).map(|n| n as f64 + 0.5).collect()),
            _ => self.spectrum(count),
        }
    }

    /// Seed function whose image under the deformed right factor is the
    /// member state.
    pub fn seed_state(&self, state: StateIx) -> Result<SmoothFn> {
        match (self.model, state) {
            (ModelId::Oscillator1d, StateIx::Level(n)) => {
                if n == 0 {
                    return Err(Error::Unsupported(
                        "the restored ground state has no ladder seed".into(),
                    ));
                }
                self.seed_family.as_ref().unwrap().state(n as i64 - 1)
            }
            (ModelId::Free1d, StateIx::Wavenumber(k)) => {
                if k <= 0.0 {
                    return Err(self.bad_state(state));
                }
                Ok(sine(k))
            }
            (ModelId::Free3d, StateIx::Level(_)) => {
                let seed_l = match self.case {
                    FamilyCase::I => self.level as i64 + 1,
                    _ => self.level as i64 - 1,
                };
                self.seed_family.as_ref().unwrap().state(seed_l)
            }
            (ModelId::IsotropicL, StateIx::Level(n)) => {
                self.seed_family.as_ref().unwrap().state(n as i64)
            }
            (ModelId::IsotropicN, StateIx::Level(n)) if n == self.level => {
                self.seed_family.as_ref().unwrap().state(n as i64)
            }
            _ => Err(self.bad_state(state)),
        }
    }

    /// Eigenfunction of the *base* member operator at the member labels.
    pub fn base_state(&self, state: StateIx) -> Result<SmoothFn> {
        match (self.model, state) {
            (ModelId::Oscillator1d, StateIx::Level(n)) => {
                EigenfunctionFamily::hermite().state(n as i64)
            }
            (ModelId::Free1d, StateIx::Wavenumber(k)) => Ok(sine(k)),
            (ModelId::Free3d, StateIx::Level(_)) => EigenfunctionFamily::spherical(
                self.seed_kind.bessel(),
            )
            .state(self.level as i64),
            (ModelId::IsotropicL, StateIx::Level(n)) => {
                EigenfunctionFamily::radial_in_n(self.level as usize).state(n as i64)
            }
            (ModelId::IsotropicN, StateIx::Level(n)) if n == self.level => {
                EigenfunctionFamily::radial_in_n(0).state(n as i64)
            }
            _ => Err(self.bad_state(state)),
        }
    }

    /// Member eigenfunction: the deformed right factor applied to the seed.
    /// The oscillator's level 0 resolves to the restored (annihilation)
    /// ground state.
    pub fn deformed_state(&self, state: StateIx) -> Result<SmoothFn> {
        if self.model == ModelId::Oscillator1d && state == StateIx::Level(0) {
            return self.special_state();
        }
        let seed = self.seed_state(state)?;
        self.result.deformed_right.apply(&seed)
    }

    /// The state annihilated by the deformed left factor, built by quadrature
    /// of the coefficient ratio.  Exists for Case-I-deformed schemes (the
    /// mirrored Case II solve removes a state instead of adding one).
    ///
    /// Normalizability is model-dependent: the oscillator and free1d states
    /// and the isotropic Case I state at negative lambda are normalizable and
    /// extend the spectrum by [`Self::added_state_eigenvalue`]; the free3d
    /// solution decays at infinity but is singular at the origin.
    pub fn special_state(&self) -> Result<SmoothFn> {
        if self.result.kind != crate::operator::SchemeKind::CaseI {
            return Err(Error::Unsupported(format!(
                "family {} case {} has no annihilation state (mirrored deformation)",
                self.model, self.case
            )));
        }
        let origin = if self.model.is_radial() { self.domain.0 } else { 0.0 };
        annihilation_state(&self.result.deformed_left, origin, Tolerances::default())
    }

    /// Physical eigenvalue of the annihilation state when it is normalizable:
    /// the scaled constant completing the inverted product.
    pub fn added_state_eigenvalue(&self) -> Option<f64> {
        match self.model {
            ModelId::Oscillator1d => Some(self.scale * self.k_inverted),
            ModelId::Free1d => Some(0.0),
            ModelId::IsotropicL if self.case == FamilyCase::I && self.lambda < 0.0 => {
                Some(self.k_inverted)
            }
            _ => None,
        }
    }

    /// Expected `(psi, psi)/(phi_seed, phi_seed)` for adjoint-paired families:
    /// the seed eigenvalue of the scheme target minus the scheme constant,
    /// in the algebraic normalization of the scheme.
    pub fn norm_ratio(&self, state: StateIx) -> Result<f64> {
        match (self.model, state) {
            (ModelId::Oscillator1d, StateIx::Level(n)) => {
                if n == 0 {
                    return Err(Error::Unsupported("ground state is not ladder-built".into()));
                }
                // algebraic seed eigenvalue 2(n-1)+1, scheme constant -1
                Ok(2.0 * n as f64)
            }
            (ModelId::Free1d, StateIx::Wavenumber(k)) => Ok(k * k),
            (ModelId::IsotropicL, StateIx::Level(n)) => {
                let nf = n as f64;
                let mf = self.level as f64;
                match self.case {
                    // eps_{n, m+1} - k¹_{m+1} = 4n + 4m + 6
                    FamilyCase::I => Ok(4.0 * nf + 4.0 * mf + 6.0),
                    // eps_{n, m-1} - k²_{m-1} = 4n + 4m + 2
                    FamilyCase::II => Ok(4.0 * nf + 4.0 * mf + 2.0),
                    FamilyCase::Unique => unreachable!(),
                }
            }
            (ModelId::Free3d, _) => Err(Error::Unsupported(
                "free3d ladder factors are not mutual adjoints in the flat measure".into(),
            )),
            (ModelId::IsotropicN, _) => Err(Error::Unsupported(
                "isotropic-n ladder factors are not mutual adjoints".into(),
            )),
            _ => Err(self.bad_state(state)),
        }
    }

    /// Integration window for inner products: the full domain for bound
    /// states (down to the coordinate origin for radial models, where the
    /// Case II states stay finite), an integer number of half-periods from
    /// the origin for the free-particle continuum.
    pub fn norm_window(&self, state: StateIx) -> (f64, f64) {
        match (self.model, state) {
            (ModelId::Free1d, StateIx::Wavenumber(k)) => {
                let half_period = core::f64::consts::PI / k;
                let target = self.domain.1.min(7.0);
                let n = math::floor(target / half_period).max(1.0);
                (0.0, n * half_period)
            }
            (ModelId::IsotropicL | ModelId::IsotropicN, _) => (0.0, self.domain.1),
            _ => self.domain,
        }
    }

    /// The deformation summary for this lambda.
    pub fn parameter(&self) -> deform::DeformationParameter {
        classify_lambda(
            &self.result.denominator,
            self.lambda,
            self.result.kind,
            self.domain,
            Tolerances::default(),
        )
    }

    /// `nu` evaluated for tables.
    pub fn nu(&self) -> &SmoothFn {
        &self.result.nu
    }

    /// The lambda-induced potential (physical).  For the members built on a
    /// single base operator this is `deformed R - base R`; for the n-ladder,
    /// whose deformed member lives over the conjugate bracket, it is the
    /// deformation shift `V = r nu'` itself.
    pub fn induced_potential(&self) -> SmoothFn {
        match self.model {
            ModelId::IsotropicN => self.result.shift.clone(),
            _ => self.deformed.r.sub(&self.base.r),
        }
    }

    /// Semi-isospectral view of the isotropic-n family:
    /// `(H_0 + (4/r²) V^λ_n) psi_n = eps_{n+1,0} psi_n`.
    pub fn semi_isospectral(&self) -> Result<(SecondOrderOperator, f64)> {
        if self.model != ModelId::IsotropicN {
            return Err(Error::Unsupported(
                "semi-isospectral assembly exists only for isotropic-n".into(),
            ));
        }
        // V^λ_n = r nu', so (4/r²) V = (4/r) nu'.
        let nu_d = self.result.nu.derivative()?;
        let extra = SmoothFn::power(-1).scale(4.0).mul(&nu_d);
        let h0 = isotropic_operator(0);
        let op = SecondOrderOperator::new(h0.p.clone(), h0.q.clone(), h0.r.add(&extra));
        Ok((op, radial_eigenvalue(self.level as usize + 1, 0)))
    }

    /// Validity of an arbitrary lambda for this model/case/level on a domain
    /// (the family itself was already validated at build time).
    pub fn lambda_validity(spec: &FamilySpec) -> Validity {
        match build_family_unchecked(spec) {
            Ok(f) => f.parameter().validity,
            Err(Error::SingularLambda { zeros, .. }) => Validity::Singular(zeros),
            Err(_) => Validity::Singular(Vec::new()),
        }
    }

    /// Eigen-relation residual check on a probe grid; run at build time.
    fn verify_wiring(&self) -> Result<()> {
        let representative = match self.model {
            ModelId::Free1d => StateIx::Wavenumber(1.0),
            ModelId::IsotropicN => StateIx::Level(self.level),
            ModelId::Oscillator1d => StateIx::Level(1),
            _ => StateIx::Level(0),
        };
        let grid = Grid::uniform(self.domain.0, self.domain.1, 501)?;
        let psi = self.deformed_state(representative)?;
        let ev = self.eigenvalue(representative)?;
        let res = crate::verify::residual_with_margin(&self.deformed, &psi, ev, &grid, 10)?;
        if !(res < 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "family wiring check failed: eigen-relation residual {res} for {} case {} member {} at lambda {}",
                self.model, self.case, self.level, self.lambda
            )));
        }
        Ok(())
    }
}

/// Build without the wiring check (used by validity probing, where an invalid
/// lambda is expected and reported rather than an error).
fn build_family_unchecked(spec: &FamilySpec) -> Result<DeformedFamily> {
    check_radial_domain(spec.model, spec.domain)?;
    match spec.model {
        ModelId::Oscillator1d => build_oscillator(spec),
        ModelId::Free1d => build_free1d(spec),
        ModelId::Free3d => build_free3d(spec),
        ModelId::IsotropicL => build_isotropic_l(spec),
        ModelId::IsotropicN => build_isotropic_n(spec),
    }
}

/// Solves `(A chi)(x) = 0` for a first-order operator `A = m + d d/dx`:
/// `chi = exp(-∫_origin^x m/d)`, evaluated by quadrature with analytic
/// derivatives from the ratio itself.
pub fn annihilation_state(
    op: &FirstOrderOperator,
    origin: f64,
    tols: Tolerances,
) -> Result<SmoothFn> {
    op.mult.require(1)?;
    let ratio = op.mult.div(&op.deriv);
    let accumulated = antiderivative(&ratio, origin, tols);
    Ok(accumulated.neg().exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::check_factorization;
    use crate::verify::residual;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn oscillator_family_matches_closed_potential() {
        let spec = FamilySpec::new(ModelId::Oscillator1d, FamilyCase::Unique, 2.0, (-10.0, 10.0));
        let fam = build_family(&spec).unwrap();
        // potential x²/2 - phi' with phi' = -2x phi - phi².
        for &x in &[-3.0_f64, -0.4, 0.0, 1.2, 4.5] {
            let phi = (-x * x).exp() / (2.0 + SQRT_PI_2 * math::erf(x));
            let dphi = -2.0 * x * phi - phi * phi;
            assert_relative_eq!(
                fam.deformed.r.eval(x),
                0.5 * x * x - dphi,
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(fam.eigenvalue(StateIx::Level(3)).unwrap(), 3.5);
    }

    #[test]
    fn oscillator_first_excited_state_residual() {
        let spec = FamilySpec::new(ModelId::Oscillator1d, FamilyCase::Unique, 2.0, (-10.0, 10.0));
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(-10.0, 10.0, 1201).unwrap();
        let psi1 = fam.deformed_state(StateIx::Level(1)).unwrap();
        let r = residual(&fam.deformed, &psi1, 1.5, &grid).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn oscillator_rejects_small_lambda() {
        // |lambda| < sqrt(pi)/2 puts a zero of the denominator on the line.
        let spec = FamilySpec::new(ModelId::Oscillator1d, FamilyCase::Unique, 0.5, (-10.0, 10.0));
        match build_family(&spec) {
            Err(Error::SingularLambda { zeros, .. }) => assert!(!zeros.is_empty()),
            other => panic!("expected singular lambda, got {other:?}"),
        }
    }

    #[test]
    fn oscillator_special_state_matches_closed_form() {
        let spec = FamilySpec::new(ModelId::Oscillator1d, FamilyCase::Unique, 2.0, (-10.0, 10.0));
        let fam = build_family(&spec).unwrap();
        let chi = fam.special_state().unwrap();
        // chi ∝ e^{-x²/2} / (lambda + ∫_0^x e^{-y²}); proportionality constant
        // fixed by chi(0) = 1/..: compare ratios.
        let closed = |x: f64| (-0.5 * x * x).exp() / (2.0 + SQRT_PI_2 * math::erf(x));
        let c = chi.eval(0.0) / closed(0.0);
        for &x in &[-4.0, -1.0, 0.7, 3.3] {
            assert_relative_eq!(chi.eval(x), c * closed(x), max_relative = 1e-9);
        }
        // annihilation: (deformed left) chi = 0.
        let img = fam.result.deformed_left.apply(&chi).unwrap();
        for &x in &[-4.0, 0.0, 2.2] {
            assert_abs_diff_eq!(img.eval(x), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn free1d_closed_forms() {
        let spec = FamilySpec::new(ModelId::Free1d, FamilyCase::Unique, 1.0, (-0.5, 10.0));
        let fam = build_family(&spec).unwrap();
        // V_lambda = -2 nu' = 2/(lambda+x)², vanishing at infinity.
        for &x in &[0.0, 1.0, 6.0] {
            assert_relative_eq!(
                fam.induced_potential().eval(x),
                2.0 / ((1.0 + x) * (1.0 + x)),
                max_relative = 1e-12
            );
        }
        assert!(fam.induced_potential().eval(9.9).abs() < 0.02);
        // special state is nu itself (up to normalization).
        let chi = fam.special_state().unwrap();
        let c = chi.eval(0.0) * (1.0 + 0.0_f64);
        for &x in &[0.5, 3.0, 8.0] {
            assert_relative_eq!(chi.eval(x), c / (1.0 + x), max_relative = 1e-10);
        }
    }

    #[test]
    fn free1d_invalid_domain_lists_singularity() {
        let spec = FamilySpec::new(ModelId::Free1d, FamilyCase::Unique, 3.0, (-10.0, 10.0));
        match build_family(&spec) {
            Err(Error::SingularLambda { zeros, .. }) => {
                assert_eq!(zeros.len(), 1);
                assert_abs_diff_eq!(zeros[0], -3.0, epsilon = 1e-9);
            }
            other => panic!("expected singular lambda, got {other:?}"),
        }
    }

    #[test]
    fn free1d_continuum_residual() {
        let spec = FamilySpec::new(ModelId::Free1d, FamilyCase::Unique, 3.0, (-2.0, 10.0));
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(-2.0, 10.0, 1201).unwrap();
        for &k in &[0.5, 1.0, 2.0] {
            let chi = fam.deformed_state(StateIx::Wavenumber(k)).unwrap();
            let r = residual(&fam.deformed, &chi, k * k, &grid).unwrap();
            assert!(r < 1e-8, "k={k}: residual {r}");
        }
    }

    #[test]
    fn free3d_member_pairing_case_i() {
        // member 0 built from seed j_1 has eigenvalue 1 under the deformed
        // l = 0 operator; the intertwining chain fixes this pairing.
        let spec = FamilySpec::new(ModelId::Free3d, FamilyCase::I, -1.0, (0.05, 20.0));
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(0.05, 20.0, 1201).unwrap();
        let psi = fam.deformed_state(StateIx::Level(0)).unwrap();
        let r = residual(&fam.deformed, &psi, 1.0, &grid).unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn free3d_intertwining_chain_on_probe() {
        // a⁻ H_{l+1} = H^λ_l a⁻ (no spectral offset: k¹ = k² = 0 here),
        // applied to a generic smooth probe.
        let spec = FamilySpec::new(ModelId::Free3d, FamilyCase::I, -1.0, (0.05, 20.0));
        let fam = build_family(&spec).unwrap();
        let probe = SmoothFn::from_jet(|r: f64| {
            let e = (-0.5 * (r - 3.0) * (r - 3.0)).exp();
            let g = -(r - 3.0);
            [
                e,
                g * e,
                (g * g - 1.0) * e,
                (g * g * g - 3.0 * g) * e,
            ]
        });
        let lhs = fam
            .result
            .deformed_right
            .apply(&spherical_operator(1).apply(&probe).unwrap())
            .unwrap();
        let rhs = fam.deformed.apply(&fam.result.deformed_right.apply(&probe).unwrap()).unwrap();
        for &rho in &[1.0, 2.5, 4.0, 6.0] {
            assert_relative_eq!(lhs.eval(rho), rhs.eval(rho), epsilon = 1e-8);
        }
    }

    #[test]
    fn free3d_case_ii_member_state() {
        let spec =
            FamilySpec::new(ModelId::Free3d, FamilyCase::II, -1.0, (0.05, 20.0)).with_level(1);
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(0.05, 20.0, 1201).unwrap();
        let psi = fam.deformed_state(StateIx::Level(0)).unwrap();
        let r = residual(&fam.deformed, &psi, 1.0, &grid).unwrap();
        assert!(r < 1e-8, "residual {r}");
        // member 0 does not exist for case II
        let bad = FamilySpec::new(ModelId::Free3d, FamilyCase::II, -1.0, (0.05, 20.0)).with_level(0);
        assert!(build_family(&bad).is_err());
    }

    #[test]
    fn isotropic_l_factorizations() {
        // H_l = a⁺_{l-1} a⁻_l - (2l-1) and H_l = a⁻_{l+1} a⁺_l - (2l+3).
        let grid = Grid::uniform(0.2, 8.0, 401).unwrap();
        for l in 1..=4i64 {
            let target = isotropic_operator(l as u32);
            let (plus_down, _) = isotropic_ladder(l - 1);
            let (_, minus) = isotropic_ladder(l);
            let s1 = FactorizationScheme::new(
                plus_down,
                minus,
                isotropic_k1(l),
                SchemeKind::CaseI,
                target.clone(),
            );
            let r1 = check_factorization(&target, &s1, &grid, 1e-10).unwrap();
            assert!(r1.passed(), "k1 ordering l={l}: {r1:?}");

            let (_, minus_up) = isotropic_ladder(l + 1);
            let (plus, _) = isotropic_ladder(l);
            let s2 = FactorizationScheme::new(
                minus_up,
                plus,
                isotropic_k2(l),
                SchemeKind::CaseII,
                target.clone(),
            );
            let r2 = check_factorization(&target, &s2, &grid, 1e-10).unwrap();
            assert!(r2.passed(), "k2 ordering l={l}: {r2:?}");
        }
    }

    #[test]
    fn isotropic_spectrum_gaps_match_k_differences() {
        // Delta lambda_l = k¹_{l+1} - k²_l = 2 at fixed radial index.
        for l in 0..6i64 {
            let gap = radial_eigenvalue(0, l as usize + 1) - radial_eigenvalue(0, l as usize);
            assert_relative_eq!(gap, isotropic_k1(l + 1) - isotropic_k2(l));
        }
    }

    #[test]
    fn isotropic_l_case_i_member_eigenvalue_has_member_labels() {
        // Member 0 from seed u_{0,1}: eigenvalue eps_{0,0} = 3, not eps_{0,1}.
        let spec = FamilySpec::new(ModelId::IsotropicL, FamilyCase::I, -1.0, (0.01, 10.0));
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(0.01, 10.0, 1201).unwrap();
        let psi = fam.deformed_state(StateIx::Level(0)).unwrap();
        let good = residual(&fam.deformed, &psi, 3.0, &grid).unwrap();
        assert!(good < 1e-7, "residual at member eigenvalue: {good}");
        let bad = residual(&fam.deformed, &psi, 5.0, &grid).unwrap();
        assert!(bad > 1e-2, "residual at seed-label eigenvalue should be large: {bad}");
    }

    #[test]
    fn isotropic_l_case_ii_member_state() {
        let spec =
            FamilySpec::new(ModelId::IsotropicL, FamilyCase::II, -1.0, (0.01, 10.0)).with_level(1);
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(0.01, 10.0, 1201).unwrap();
        for n in 0..=2u32 {
            let psi = fam.deformed_state(StateIx::Level(n)).unwrap();
            let ev = radial_eigenvalue(n as usize, 1);
            let r = residual(&fam.deformed, &psi, ev, &grid).unwrap();
            assert!(r < 1e-7, "n={n}: residual {r}");
        }
    }

    #[test]
    fn isotropic_case_ii_small_r_limit() {
        // nu^{λ2}_l ~ -(2l-1)/r as r -> 0, within 1% at r = 1e-3 for l >= 1.
        for m in 1..=3u32 {
            let spec = FamilySpec::new(ModelId::IsotropicL, FamilyCase::II, -1.0, (1e-4, 10.0))
                .with_level(m);
            let fam = build_family(&spec).unwrap();
            let r = 1e-3;
            let limit = -((2 * m - 1) as f64) / r;
            let v = fam.nu().eval(r);
            assert!(
                ((v - limit) / limit).abs() < 0.01,
                "m={m}: nu {v} vs limit {limit}"
            );
        }
    }

    #[test]
    fn isotropic_case_i_regularity_for_negative_lambda() {
        // lambda <= 0: nu, V and psi finite on the domain, psi -> 0 at the far end.
        let spec = FamilySpec::new(ModelId::IsotropicL, FamilyCase::I, -1.0, (0.01, 10.0));
        let fam = build_family(&spec).unwrap();
        let psi = fam.deformed_state(StateIx::Level(0)).unwrap();
        let grid = Grid::uniform(0.01, 10.0, 801).unwrap();
        let mut sup: f64 = 0.0;
        for x in grid.points() {
            let v = psi.eval(x);
            assert!(v.is_finite());
            sup = sup.max(v.abs());
            assert!(fam.nu().eval(x).is_finite());
            assert!(fam.induced_potential().eval(x).is_finite());
        }
        assert!(psi.eval(10.0).abs() < 1e-8 * sup, "psi does not vanish at infinity");
    }

    #[test]
    fn conjugate_pair_constants_and_composition() {
        let pair = conjugate_pair(0).unwrap();
        assert_relative_eq!(pair.e_constant, 1.5);
        assert_abs_diff_eq!(pair.d_constant, 0.0);
        // composed and closed forms agree pointwise for n <= 4.
        for n in 0..=4u32 {
            let p = conjugate_pair(n).unwrap();
            for &r in &[0.3, 1.0, 2.2, 3.7] {
                assert_abs_diff_eq!(
                    p.e_composed.r.eval(r),
                    p.e_closed.r.eval(r),
                    epsilon = 1e-9
                );
                assert_abs_diff_eq!(
                    p.d_composed.r.eval(r),
                    p.d_closed.r.eval(r),
                    epsilon = 1e-9
                );
                assert_abs_diff_eq!(
                    p.e_composed.p.eval(r),
                    -0.25 * r * r,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn e_operator_fixes_u_n0() {
        // E_0 u_00 = 3/2 u_00 (the bracket annihilates the eigenfunction).
        let pair = conjugate_pair(0).unwrap();
        let u00 = EigenfunctionFamily::radial_in_n(0).state(0).unwrap();
        let img = pair.e_composed.apply(&u00).unwrap();
        for &r in &[0.4, 1.1, 2.0] {
            assert_relative_eq!(img.eval(r), 1.5 * u00.eval(r), max_relative = 1e-10);
        }
    }

    #[test]
    fn isotropic_n_family_and_semi_isospectral() {
        let spec = FamilySpec::new(ModelId::IsotropicN, FamilyCase::Unique, -1.0, (0.01, 10.0));
        let fam = build_family(&spec).unwrap();
        let grid = Grid::uniform(0.01, 10.0, 1201).unwrap();
        let psi = fam.deformed_state(StateIx::Level(0)).unwrap();
        let r = residual(&fam.deformed, &psi, 1.5, &grid).unwrap();
        assert!(r < 1e-7, "E^λ_0 residual {r}");
        // semi-isospectral: (H_0 + (4/r²) V) psi = eps_{1,0} psi = 7 psi.
        let (h_semi, ev) = fam.semi_isospectral().unwrap();
        assert_relative_eq!(ev, 7.0);
        let rs = residual(&h_semi, &psi, ev, &grid).unwrap();
        assert!(rs < 1e-7, "semi-isospectral residual {rs}");
    }

    #[test]
    fn plain_derivative_annihilator_gives_constant() {
        let chi = annihilation_state(&FirstOrderOperator::ddx(), 0.0, tols()).unwrap();
        for &x in &[-2.0, 0.0, 5.0] {
            assert_relative_eq!(chi.eval(x), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn inverted_product_reproduces_member_operator() {
        // compose(deformed right, deformed left) + k_inv = deformed member,
        // checked for a laddered model with nonzero constants.
        let spec = FamilySpec::new(ModelId::IsotropicL, FamilyCase::I, -1.0, (0.01, 10.0));
        let fam = build_family(&spec).unwrap();
        let inverted = compose(&fam.result.deformed_right, &fam.result.deformed_left).unwrap();
        for &r in &[0.5, 1.5, 3.0, 6.0] {
            assert_abs_diff_eq!(
                inverted.r.eval(r) + fam.k_inverted,
                fam.deformed.r.eval(r),
                epsilon = 1e-8
            );
            assert_abs_diff_eq!(inverted.q.eval(r), fam.deformed.q.eval(r), epsilon = 1e-8);
        }
    }

    #[test]
    fn model_and_case_parsing() {
        assert_eq!(ModelId::parse("isotropic-l").unwrap(), ModelId::IsotropicL);
        assert!(ModelId::parse("nope").is_err());
        assert_eq!(FamilyCase::parse("II").unwrap(), FamilyCase::II);
        assert_eq!(FamilyCase::parse("unique").unwrap(), FamilyCase::Unique);
    }
}
