//! Machine-checkable reports: eigen-relation residuals, Gram matrices, the
//! norm relation and spectrum comparison with missing/added-state bookkeeping.
//!
//! Continuum (free-particle) inner products are windowed: the caller supplies
//! integration bounds spanning an integer number of periods so boundary terms
//! of the formal-adjoint identities vanish.  Completeness of deformed
//! continuum families is not checked numerically anywhere in this crate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalog::{DeformedFamily, StateIx};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quadrature::integrate_with;
use crate::smooth::SmoothFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// One measured quantity; `bound = None` marks it informational (it does not
/// influence the verdict).
#[derive(Debug, Clone)]
pub struct Measure {
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
}

/// Outcome of one check: named measured values against a tolerance.
/// The verdict is pass iff every bounded measure is within its bound.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub id: String,
    /// The claim being certified, in words.
    pub claim: String,
    pub tolerance: f64,
    pub measures: Vec<Measure>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(id: impl Into<String>, claim: impl Into<String>, tolerance: f64) -> Self {
        VerificationReport {
            id: id.into(),
            claim: claim.into(),
            tolerance,
            measures: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    /// Adds a measure checked against the report tolerance.
    pub fn bounded(self, name: impl Into<String>, value: f64) -> Self {
        let bound = self.tolerance;
        self.bounded_at(name, value, bound)
    }

    /// Adds a measure checked against an explicit bound.
    pub fn bounded_at(mut self, name: impl Into<String>, value: f64, bound: f64) -> Self {
        self.measures.push(Measure { name: name.into(), value, bound: Some(bound) });
        self
    }

    /// Adds an informational measure.
    pub fn info(mut self, name: impl Into<String>, value: f64) -> Self {
        self.measures.push(Measure { name: name.into(), value, bound: None });
        self
    }

    /// Computes the verdict from the bounded measures.
    pub fn finish(mut self) -> Self {
        let ok = self.measures.iter().all(|m| match m.bound {
            Some(b) => m.value.is_finite() && m.value.abs() <= b,
            None => true,
        });
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn measure(&self, name: &str) -> Option<f64> {
        self.measures.iter().find(|m| m.name == name).map(|m| m.value)
    }
}

/// Relative eigen-relation residual `||(op - lambda) psi||_2 / ||psi||_2`
/// over the interior of the grid (10 points dropped at each edge).
pub fn residual(
    op: &crate::operator::SecondOrderOperator,
    psi: &SmoothFn,
    lambda: f64,
    grid: &Grid,
) -> Result<f64> {
    residual_with_margin(op, psi, lambda, grid, Tolerances::default().interior_margin)
}

pub fn residual_with_margin(
    op: &crate::operator::SecondOrderOperator,
    psi: &SmoothFn,
    lambda: f64,
    grid: &Grid,
    margin: usize,
) -> Result<f64> {
    let image = op.apply(psi)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in grid.interior(margin) {
        let x = grid.point(i);
        let p = psi.eval(x);
        let r = image.eval(x) - lambda * p;
        num += r * r;
        den += p * p;
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("zero-norm function in residual".into()));
    }
    Ok(crate::math::sqrt(num / den))
}

/// Pairwise inner products `(f_i, f_j)` by adaptive quadrature over the grid
/// domain.  Symmetric by construction.
pub fn gram(functions: &[SmoothFn], grid: &Grid, tol: f64) -> Result<Vec<Vec<f64>>> {
    gram_windowed(functions, grid.lower(), grid.upper(), tol)
}

/// As [`gram`] over an explicit window `[a, b]`.
pub fn gram_windowed(functions: &[SmoothFn], a: f64, b: f64, tol: f64) -> Result<Vec<Vec<f64>>> {
    let tols = Tolerances::default();
    let n = functions.len();
    let mut out = alloc::vec![alloc::vec![0.0_f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let (fi, fj) = (&functions[i], &functions[j]);
            let v = integrate_with(&|x| fi.eval(x) * fj.eval(x), a, b, tol, &tols)?;
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(out)
}

/// Checks the normalization relation `(psi, psi) = ratio · (phi_seed, phi_seed)`
/// for families whose deformed factor pair are mutual formal adjoints.
/// Both sides are computed by quadrature; pass iff the measured ratio matches
/// the cataloged one to 1e-6 relative.
pub fn norm_relation(family: &DeformedFamily, state: StateIx) -> Result<VerificationReport> {
    let expected = family.norm_ratio(state)?;
    let psi = family.deformed_state(state)?;
    let phi = family.seed_state(state)?;
    let (a, b) = family.norm_window(state);
    let tols = Tolerances::default();
    let tol = tols.quad_abs;
    let nn = integrate_with(&|x| psi.eval(x) * psi.eval(x), a, b, tol, &tols)?;
    let dd = integrate_with(&|x| phi.eval(x) * phi.eval(x), a, b, tol, &tols)?;
    if dd == 0.0 {
        return Err(Error::InvalidArgument("zero-norm seed state".into()));
    }
    let ratio = nn / dd;
    let rel_dev = if expected != 0.0 {
        ((ratio - expected) / expected).abs()
    } else {
        ratio.abs()
    };
    Ok(VerificationReport::new(
        format!("norm-relation[{state:?}]"),
        "(psi, psi) = (lambda_seed - k) (phi_seed, phi_seed)",
        1e-6,
    )
    .info("measured ratio", ratio)
    .info("expected ratio", expected)
    .bounded("relative deviation", rel_dev)
    .finish())
}

/// Verdict of a spectrum comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumVerdict {
    /// Every entry matched within tolerance.
    Identical,
    /// All matched except one unmatched ground entry on the named side.
    GroundStateMissingInB,
    GroundStateMissingInA,
    /// Anything else.
    Mismatch,
}

#[derive(Debug, Clone)]
pub struct SpectrumComparison {
    pub matched: Vec<(f64, f64)>,
    pub missing_in_a: Vec<f64>,
    pub missing_in_b: Vec<f64>,
    pub max_matched_deviation: f64,
    pub verdict: SpectrumVerdict,
}

/// Greedy matching of two nondecreasing eigenvalue lists within `tol`.
/// Entries of `a` absent from `b` are reported as `missing_in_b` and vice
/// versa; the verdict distinguishes exact isospectrality from a single
/// missing ground entry.
pub fn spectrum_compare(a: &[f64], b: &[f64], tol: f64) -> SpectrumComparison {
    let mut matched = Vec::new();
    let mut missing_in_b = Vec::new();
    let mut missing_in_a = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    let mut max_dev = 0.0_f64;
    while i < a.len() && j < b.len() {
        let d = a[i] - b[j];
        if d.abs() <= tol {
            matched.push((a[i], b[j]));
            max_dev = max_dev.max(d.abs());
            i += 1;
            j += 1;
        } else if d < 0.0 {
            missing_in_b.push(a[i]);
            i += 1;
        } else {
            missing_in_a.push(b[j]);
            j += 1;
        }
    }
    missing_in_b.extend_from_slice(&a[i..]);
    missing_in_a.extend_from_slice(&b[j..]);

    let verdict = if missing_in_a.is_empty() && missing_in_b.is_empty() {
        SpectrumVerdict::Identical
    } else if missing_in_a.is_empty()
        && missing_in_b.len() == 1
        && (a.is_empty() || missing_in_b[0] <= a[0] + tol)
    {
        SpectrumVerdict::GroundStateMissingInB
    } else if missing_in_b.is_empty()
        && missing_in_a.len() == 1
        && (b.is_empty() || missing_in_a[0] <= b[0] + tol)
    {
        SpectrumVerdict::GroundStateMissingInA
    } else {
        SpectrumVerdict::Mismatch
    };

    SpectrumComparison { matched, missing_in_a, missing_in_b, max_matched_deviation: max_dev, verdict }
}

impl SpectrumComparison {
    pub fn report(&self, id: impl Into<String>, tol: f64) -> VerificationReport {
        VerificationReport::new(id, "spectra match within tolerance", tol)
            .info("matched pairs", self.matched.len() as f64)
            .info("missing in a", self.missing_in_a.len() as f64)
            .info("missing in b", self.missing_in_b.len() as f64)
            .bounded("max matched deviation", self.max_matched_deviation)
            .finish()
    }
}
