//! The five subcommands.


use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use isospec_core::catalog::{
    build_family, DeformedFamily, FamilyCase, FamilySpec, ModelId, SeedKind, StateIx,
};
use isospec_core::deform::{riccati_residual, Validity};
use isospec_core::eigen::lowest_eigenvalues_of;
use isospec_core::operator::check_factorization;
use isospec_core::quadrature::integrate;
use isospec_core::verify::{
    gram_windowed, norm_relation, residual, spectrum_compare, SpectrumVerdict, VerificationReport,
};
use isospec_core::{Error as CoreError, Grid, SmoothFn};

use crate::emit::{emit_table, to_json_bytes, write_output, Cell, OutputFormat, Table};
use crate::error::CliError;
use crate::CommonArgs;

pub struct Resolved {
    pub spec: FamilySpec,
    pub points: usize,
    pub format: OutputFormat,
}

fn parse_domain(s: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("domain must be lower:upper, got '{s}'")))?;
    let lo: f64 =
        a.trim().parse().map_err(|_| CliError::usage(format!("bad domain bound '{a}'")))?;
    let hi: f64 =
        b.trim().parse().map_err(|_| CliError::usage(format!("bad domain bound '{b}'")))?;
    Ok((lo, hi))
}

fn default_case(model: ModelId) -> FamilyCase {
    match model {
        ModelId::Free3d | ModelId::IsotropicL => FamilyCase::I,
        _ => FamilyCase::Unique,
    }
}

pub fn resolve(common: &CommonArgs, default_format: OutputFormat) -> Result<Resolved, CliError> {
    let model = match &common.model {
        Some(m) => ModelId::parse(m)?,
        None => return Err(CliError::usage("--model is required")),
    };
    let case = match &common.case {
        Some(c) => FamilyCase::parse(c)?,
        None => default_case(model),
    };
    let lambda = common
        .lambda
        .ok_or_else(|| CliError::usage("--lambda is required"))?;
    let domain = match &common.domain {
        Some(d) => parse_domain(d)?,
        None => model.default_domain(),
    };
    let mut spec = FamilySpec::new(model, case, lambda, domain);
    if let Some(level) = common.level {
        spec = spec.with_level(level);
    }
    if let Some(seed) = &common.seed_kind {
        spec = spec.with_seed(SeedKind::parse(seed)?);
    }
    let format = match &common.format {
        Some(f) => OutputFormat::parse(f)?,
        None => default_format,
    };
    Ok(Resolved { spec, points: common.points.unwrap_or(1201), format })
}

fn print_schema(lines: &[&str]) {
    for line in lines {
        println!("{line}");
    }
}

// ---------------------------------------------------------------- deform

pub fn deform(common: &CommonArgs) -> Result<(), CliError> {
    if common.schema {
        print_schema(&[
            "deform columns:",
            "  x         grid point",
            "  nu        deformation function at x",
            "  V_lambda  induced potential (deformed R - base R) at x",
        ]);
        return Ok(());
    }
    let r = resolve(common, OutputFormat::Csv)?;
    let family = build_family(&r.spec)?;
    let grid = Grid::uniform(r.spec.domain.0, r.spec.domain.1, r.points)?;
    let potential = family.induced_potential();
    let mut table = Table::new(&["x", "nu", "V_lambda"]);
    for x in grid.points() {
        table.push_reals(&[x, family.nu().eval(x), potential.eval(x)]);
    }
    emit_table(&table, r.format, common.output.as_deref())
}

// ---------------------------------------------------------------- spectrum

pub fn spectrum(common: &CommonArgs, levels: usize) -> Result<(), CliError> {
    if common.schema {
        print_schema(&[
            "spectrum columns:",
            "  index                eigenvalue number (ascending)",
            "  base_eigenvalue      finite-difference eigenvalue of the base operator",
            "  deformed_eigenvalue  finite-difference eigenvalue of the deformed operator",
            "  difference           deformed - base",
        ]);
        return Ok(());
    }
    let r = resolve(common, OutputFormat::Csv)?;
    let family = build_family(&r.spec)?;
    let points = r.points.max(1201);
    let grid = Grid::uniform(r.spec.domain.0, r.spec.domain.1, points)?;

    let (base_op, deformed_op, note) = match r.spec.model {
        ModelId::IsotropicN => {
            let (semi, ev) = family.semi_isospectral()?;
            (
                isospec_core::catalog::isotropic_operator(0),
                semi,
                Some(format!(
                    "semi-isospectral pair: only the level at {ev} is shared with the base"
                )),
            )
        }
        _ => (family.base.clone(), family.deformed.clone(), None),
    };

    let base = eigensolve(&base_op, &grid, levels)?;
    let deformed = eigensolve(&deformed_op, &grid, levels)?;

    let mut table = Table::new(&["index", "base_eigenvalue", "deformed_eigenvalue", "difference"]);
    if let Some(n) = note {
        table.note(n);
    }
    for (i, (b, d)) in base.iter().zip(&deformed).enumerate() {
        table.push(vec![
            Cell::Int(i as i64),
            Cell::Real(*b),
            Cell::Real(*d),
            Cell::Real(d - b),
        ]);
    }
    emit_table(&table, r.format, common.output.as_deref())
}

fn eigensolve(
    op: &isospec_core::operator::SecondOrderOperator,
    grid: &Grid,
    m: usize,
) -> Result<Vec<f64>, CliError> {
    let disc = isospec_core::eigen::discretize(op, grid)?;
    Ok(isospec_core::eigen::eigen_values(&disc, m)?.eigenvalues)
}

// ---------------------------------------------------------------- scan-lambda

pub fn scan_lambda(
    common: &CommonArgs,
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
) -> Result<(), CliError> {
    if common.schema {
        print_schema(&[
            "scan-lambda columns:",
            "  lambda         sweep value",
            "  valid          1 if no denominator zero lies inside the domain",
            "  singularities  number of zeros found",
            "  locations      semicolon-separated zero locations",
        ]);
        return Ok(());
    }
    let model = match &common.model {
        Some(m) => ModelId::parse(m)?,
        None => return Err(CliError::usage("--model is required")),
    };
    let case = match &common.case {
        Some(c) => FamilyCase::parse(c)?,
        None => default_case(model),
    };
    let domain = match &common.domain {
        Some(d) => parse_domain(d)?,
        None => model.default_domain(),
    };
    let start = start.ok_or_else(|| CliError::usage("--lambda-start is required"))?;
    let stop = stop.ok_or_else(|| CliError::usage("--lambda-stop is required"))?;
    let count = count.unwrap_or(21).max(1);
    let format = match &common.format {
        Some(f) => OutputFormat::parse(f)?,
        None => OutputFormat::Csv,
    };

    let lambdas: Vec<f64> = (0..count)
        .map(|i| {
            if count == 1 {
                start
            } else {
                start + (stop - start) * i as f64 / (count - 1) as f64
            }
        })
        .collect();

    // Data-parallel sweep; results are collected in lambda order, so the
    // output is deterministic regardless of scheduling.
    let verdicts: Vec<Validity> = lambdas
        .par_iter()
        .map(|&lambda| {
            let mut spec = FamilySpec::new(model, case, lambda, domain);
            if let Some(level) = common.level {
                spec = spec.with_level(level);
            }
            DeformedFamily::lambda_validity(&spec)
        })
        .collect();

    let mut table = Table::new(&["lambda", "valid", "singularities", "locations"]);
    for (lambda, verdict) in lambdas.iter().zip(&verdicts) {
        let (valid, zeros) = match verdict {
            Validity::Valid => (1, Vec::new()),
            Validity::Singular(zs) => (0, zs.clone()),
        };
        let locations =
            zeros.iter().map(|z| crate::emit::fmt_real(*z)).collect::<Vec<_>>().join(";");
        table.push(vec![
            Cell::Real(*lambda),
            Cell::Int(valid),
            Cell::Int(zeros.len() as i64),
            Cell::Text(locations),
        ]);
    }
    emit_table(&table, format, common.output.as_deref())
}

// ---------------------------------------------------------------- tabulate

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            tok.trim().parse::<T>().map_err(|_| CliError::usage(format!("bad {what}: '{tok}'")))
        })
        .collect()
}

pub fn tabulate(
    common: &CommonArgs,
    indices: Option<&str>,
    k_values: Option<&str>,
) -> Result<(), CliError> {
    if common.schema {
        print_schema(&[
            "tabulate columns:",
            "  x            grid point",
            "  base_<s>     base eigenfunction of state s",
            "  deformed_<s> deformed eigenfunction of state s",
        ]);
        return Ok(());
    }
    let r = resolve(common, OutputFormat::Csv)?;
    let family = build_family(&r.spec)?;
    let grid = Grid::uniform(r.spec.domain.0, r.spec.domain.1, r.points)?;

    let states: Vec<(String, StateIx)> = match r.spec.model {
        ModelId::Free1d => {
            let ks: Vec<f64> = match k_values {
                Some(s) => parse_list(s, "wavenumber")?,
                None => vec![0.5, 1.0, 2.0],
            };
            ks.iter().map(|&k| (format!("k{k}"), StateIx::Wavenumber(k))).collect()
        }
        ModelId::IsotropicN => {
            let level = family.level;
            match indices {
                Some(s) => parse_list::<u32>(s, "index")?
                    .into_iter()
                    .map(|n| (format!("n{n}"), StateIx::Level(n)))
                    .collect(),
                None => vec![(format!("n{level}"), StateIx::Level(level))],
            }
        }
        ModelId::Free3d => vec![("seed".to_string(), StateIx::Level(0))],
        _ => {
            let ns: Vec<u32> = match indices {
                Some(s) => parse_list(s, "index")?,
                None => vec![0, 1, 2, 3],
            };
            ns.into_iter().map(|n| (format!("n{n}"), StateIx::Level(n))).collect()
        }
    };

    let mut columns: Vec<String> = vec!["x".to_string()];
    for (name, _) in &states {
        columns.push(format!("base_{name}"));
        columns.push(format!("deformed_{name}"));
    }
    let mut table = Table {
        columns,
        rows: Vec::new(),
        notes: Vec::new(),
    };
    if !states.is_empty() {
        let pairs: Vec<(SmoothFn, SmoothFn)> = states
            .iter()
            .map(|(_, s)| Ok((family.base_state(*s)?, family.deformed_state(*s)?)))
            .collect::<Result<_, CoreError>>()?;
        for x in grid.points() {
            let mut row = vec![Cell::Real(x)];
            for (b, d) in &pairs {
                row.push(Cell::Real(b.eval(x)));
                row.push(Cell::Real(d.eval(x)));
            }
            table.push(row);
        }
    }
    emit_table(&table, r.format, common.output.as_deref())
}

// ---------------------------------------------------------------- verify

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct MeasureDto {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ReportDto {
    pub id: String,
    pub claim: String,
    pub tolerance: f64,
    pub verdict: String,
    pub measures: Vec<MeasureDto>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct VerifyDto {
    pub model: String,
    pub case: String,
    pub lambda: f64,
    pub level: u32,
    pub passed: bool,
    pub reports: Vec<ReportDto>,
}

impl From<&VerificationReport> for ReportDto {
    fn from(r: &VerificationReport) -> Self {
        ReportDto {
            id: r.id.clone(),
            claim: r.claim.clone(),
            tolerance: r.tolerance,
            verdict: if r.passed() { "pass".into() } else { "fail".into() },
            measures: r
                .measures
                .iter()
                .map(|m| MeasureDto { name: m.name.clone(), value: m.value, bound: m.bound })
                .collect(),
        }
    }
}

pub fn verify(common: &CommonArgs, levels: usize) -> Result<(), CliError> {
    if common.schema {
        print_schema(&[
            "verify output: JSON object {model, case, lambda, level, passed, reports[]}",
            "each report: {id, claim, tolerance, verdict, measures[{name, value, bound?}]}",
            "csv columns: id, claim, measure, value, bound, verdict",
        ]);
        return Ok(());
    }
    let r = resolve(common, OutputFormat::Json)?;
    let family = build_family(&r.spec)?;
    let reports = verification_suite(&family, &r.spec, r.points, levels)?;
    let passed = reports.iter().all(VerificationReport::passed);

    let dto = VerifyDto {
        model: r.spec.model.to_string(),
        case: r.spec.case.to_string(),
        lambda: r.spec.lambda,
        level: family.level,
        passed,
        reports: reports.iter().map(ReportDto::from).collect(),
    };

    match r.format {
        OutputFormat::Json => {
            let bytes = to_json_bytes(&dto)?;
            write_output(common.output.as_deref(), &bytes)?;
        }
        OutputFormat::Csv => {
            let mut table = Table::new(&["id", "claim", "measure", "value", "bound", "verdict"]);
            for rep in &dto.reports {
                for m in &rep.measures {
                    table.push(vec![
                        Cell::Text(rep.id.clone()),
                        Cell::Text(rep.claim.clone()),
                        Cell::Text(m.name.clone()),
                        Cell::Real(m.value),
                        m.bound.map(Cell::Real).unwrap_or(Cell::Text(String::new())),
                        Cell::Text(rep.verdict.clone()),
                    ]);
                }
            }
            emit_table(&table, OutputFormat::Csv, common.output.as_deref())?;
        }
    }

    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports
            .iter()
            .filter(|rep| !rep.passed())
            .map(|rep| rep.id.as_str())
            .collect();
        Err(CliError::numerical(format!("verification failed: {}", failed.join(", "))))
    }
}

/// Assembles the model's verification reports.
pub fn verification_suite(
    family: &DeformedFamily,
    spec: &FamilySpec,
    points: usize,
    levels: usize,
) -> Result<Vec<VerificationReport>, CliError> {
    let grid = Grid::uniform(spec.domain.0, spec.domain.1, points.max(801))?;
    let mut reports = Vec::new();

    // Factorization of the solved scheme, undeformed and deformed.
    reports.push(check_factorization(&family.scheme.target, &family.scheme, &grid, 1e-9)?);
    reports.push(deformed_factorization_report(family, &grid)?);

    // Riccati self-consistency and the eta/nu coupling.
    let ric = riccati_residual(&family.result, &family.scheme, &grid)?;
    reports.push(
        VerificationReport::new("riccati", "deformation function solves its Riccati equation", 1e-8)
            .bounded("max residual", ric)
            .finish(),
    );
    reports.push(coupling_report(family, &grid));

    // Eigen-relations of the deformed member states.
    for state in states_for(family, levels) {
        let psi = family.deformed_state(state)?;
        let ev = family.eigenvalue(state)?;
        let res = residual(&family.deformed, &psi, ev, &grid)?;
        reports.push(
            VerificationReport::new(
                format!("eigen-relation[{state:?}]"),
                format!("deformed member maps the state to {ev} times itself"),
                1e-7,
            )
            .info("eigenvalue", ev)
            .bounded("relative residual", res)
            .finish(),
        );
    }

    // Norm relation where the factor pair is mutually adjoint.
    for state in states_for(family, levels) {
        match norm_relation(family, state) {
            Ok(rep) => reports.push(rep),
            Err(CoreError::Unsupported(_)) => break,
            Err(e) => return Err(e.into()),
        }
    }

    // Model-specific spectral checks.
    match spec.model {
        ModelId::Oscillator1d => {
            reports.push(oscillator_spectrum_report(family, levels)?);
            reports.push(oscillator_special_state_report(family, levels)?);
        }
        ModelId::Free1d => {
            reports.push(box_caveat_report(family)?);
            reports.push(continuum_identity_report(family)?);
        }
        ModelId::IsotropicL => {
            reports.push(isotropic_spectrum_report(family, spec, levels)?);
            if spec.case == FamilyCase::I {
                reports.push(added_state_report(family, &grid)?);
            }
        }
        ModelId::IsotropicN => {
            reports.push(semi_isospectral_report(family, &grid)?);
        }
        ModelId::Free3d => {}
    }

    // Lambda validity restated as a report.
    let param = family.parameter();
    let zeros = match &param.validity {
        Validity::Valid => 0.0,
        Validity::Singular(zs) => zs.len() as f64,
    };
    reports.push(
        VerificationReport::new("validity", "no induced singularities inside the domain", 0.0)
            .bounded_at("denominator zeros", zeros, 0.0)
            .finish(),
    );

    Ok(reports)
}

fn states_for(family: &DeformedFamily, levels: usize) -> Vec<StateIx> {
    match family.model {
        ModelId::Free1d => [0.5, 1.0, 2.0]
            .iter()
            .take(levels.clamp(1, 3))
            .map(|&k| StateIx::Wavenumber(k))
            .collect(),
        ModelId::Free3d => vec![StateIx::Level(0)],
        ModelId::IsotropicN => vec![StateIx::Level(family.level)],
        ModelId::Oscillator1d => (1..=levels.max(1) as u32).map(StateIx::Level).collect(),
        ModelId::IsotropicL => (0..levels.max(1) as u32).map(StateIx::Level).collect(),
    }
}

fn deformed_factorization_report(
    family: &DeformedFamily,
    grid: &Grid,
) -> Result<VerificationReport, CliError> {
    use isospec_core::operator::compose;
    let preserved = compose(&family.result.deformed_left, &family.result.deformed_right)?;
    let inverted = compose(&family.result.deformed_right, &family.result.deformed_left)?;
    let margin = grid.interior(10);
    let mut dev_preserved = 0.0_f64;
    let mut dev_inverted = 0.0_f64;
    // The deformed member operator is stored at physical normalization;
    // rescale the algebraic products accordingly.
    let s = family.scale;
    for i in margin {
        let x = grid.point(i);
        dev_preserved = dev_preserved.max(
            (preserved.r.eval(x) + family.scheme.k - family.scheme.target.r.eval(x)).abs(),
        );
        dev_inverted = dev_inverted.max(
            (s * (inverted.r.eval(x) + family.k_inverted) - family.deformed.r.eval(x)).abs(),
        );
    }
    Ok(VerificationReport::new(
        "deformed-factorization",
        "deformed factors preserve the product and invert to the member",
        1e-7,
    )
    .bounded("max |L~R~ + k - target|", dev_preserved)
    .bounded("max |R~L~ + k_inv - member|", dev_inverted)
    .finish())
}

fn coupling_report(family: &DeformedFamily, grid: &Grid) -> VerificationReport {
    let (_, beta) = family.scheme.plus_coeffs();
    let (_, delta) = family.scheme.minus_coeffs();
    let mut worst = 0.0_f64;
    for i in grid.interior(10) {
        let x = grid.point(i);
        let lhs = family.result.eta.eval(x) * delta.eval(x);
        let rhs = beta.eval(x) * family.result.nu.eval(x);
        worst = worst.max((lhs - rhs).abs());
    }
    VerificationReport::new("eta-nu-coupling", "eta * delta = beta * nu pointwise", 1e-9)
        .bounded("max deviation", worst)
        .finish()
}

fn oscillator_spectrum_report(
    family: &DeformedFamily,
    levels: usize,
) -> Result<VerificationReport, CliError> {
    let m = levels.clamp(1, 8);
    let grid = Grid::uniform(family.domain.0, family.domain.1, 2001)?;
    let computed = lowest_eigenvalues_of(0.5, &family.deformed.r, &grid, m)?;
    let expected = family.spectrum(m)?;
    let cmp = spectrum_compare(&computed, &expected, 1e-3);
    let identical = cmp.verdict == SpectrumVerdict::Identical;
    Ok(VerificationReport::new(
        "isospectrality",
        "finite-difference spectrum of the deformed operator matches n + 1/2",
        1e-3,
    )
    .bounded("max matched deviation", cmp.max_matched_deviation)
    .bounded_at("unmatched levels", if identical { 0.0 } else { 1.0 }, 0.0)
    .finish())
}

fn oscillator_special_state_report(
    family: &DeformedFamily,
    levels: usize,
) -> Result<VerificationReport, CliError> {
    let chi = family.special_state()?;
    let grid = Grid::uniform(family.domain.0, family.domain.1, 801)?;
    let img = family.result.deformed_left.apply(&chi)?;
    let peak = grid.points().map(|x| chi.eval(x).abs()).fold(0.0_f64, f64::max);
    let annihilation =
        grid.points().map(|x| img.eval(x).abs()).fold(0.0_f64, f64::max) / peak;

    let chi_norm = gram_windowed(
        std::slice::from_ref(&chi),
        family.domain.0,
        family.domain.1,
        1e-12,
    )?[0][0];
    let mut overlap = 0.0_f64;
    for n in 1..=levels.clamp(1, 5) as u32 {
        let psi = family.deformed_state(StateIx::Level(n))?;
        let g = gram_windowed(&[chi.clone(), psi], family.domain.0, family.domain.1, 1e-12)?;
        overlap = overlap.max((g[0][1] / (chi_norm * g[1][1]).sqrt()).abs());
    }
    Ok(VerificationReport::new(
        "special-state",
        "the restored ground state is annihilated and orthogonal to the ladder states",
        1e-8,
    )
    .bounded_at("annihilation residual", annihilation, 1e-10)
    .bounded("max normalized overlap", overlap)
    .finish())
}

fn box_caveat_report(family: &DeformedFamily) -> Result<VerificationReport, CliError> {
    // On a finite box the deformed potential does NOT reproduce the empty-box
    // levels: the lowest level must differ from (pi/L)^2 by far more than the
    // discretization error of the empty box itself.
    let length = 6.0_f64;
    let grid = Grid::uniform(0.0, length, 1201)?;
    let exact = (core::f64::consts::PI / length).powi(2);
    let empty = lowest_eigenvalues_of(1.0, &SmoothFn::zero(), &grid, 1)?[0];
    let disc_err = (empty - exact).abs().max(1e-12);
    let deformed = lowest_eigenvalues_of(1.0, &family.deformed.r, &grid, 1)?[0];
    let shift = (deformed - exact).abs();
    Ok(VerificationReport::new(
        "box-caveat",
        "walls do not carry over: the boxed deformed spectrum is not (n pi/L)^2",
        1.0,
    )
    .info("lowest empty-box error", disc_err)
    .info("lowest deformed shift", shift)
    .bounded_at("10 * disc_err / shift", 10.0 * disc_err / shift, 1.0)
    .finish())
}

fn continuum_identity_report(family: &DeformedFamily) -> Result<VerificationReport, CliError> {
    // (chi_k, chi_k') = k^2 (phi_k, phi_k') over a common-period window.
    let window = (0.0, 2.0 * core::f64::consts::PI);
    let ks = [0.5_f64, 1.0, 2.0];
    let mut worst = 0.0_f64;
    for &k in &ks {
        for &kp in &ks {
            let chi_k = family.deformed_state(StateIx::Wavenumber(k))?;
            let chi_kp = family.deformed_state(StateIx::Wavenumber(kp))?;
            let phi_k = family.seed_state(StateIx::Wavenumber(k))?;
            let phi_kp = family.seed_state(StateIx::Wavenumber(kp))?;
            let lhs = integrate(|x| chi_k.eval(x) * chi_kp.eval(x), window.0, window.1, 1e-11)
                .map_err(CliError::from)?;
            let rhs = k
                * k
                * integrate(|x| phi_k.eval(x) * phi_kp.eval(x), window.0, window.1, 1e-11)
                    .map_err(CliError::from)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(VerificationReport::new(
        "continuum-identity",
        "(chi_k, chi_k') = k^2 (phi_k, phi_k') on a whole-period window",
        1e-8,
    )
    .bounded("max deviation", worst)
    .finish())
}

fn isotropic_spectrum_report(
    family: &DeformedFamily,
    spec: &FamilySpec,
    levels: usize,
) -> Result<VerificationReport, CliError> {
    // Finite-difference spectrum of the base member against 4n + 2l + 3.
    // (The deformed Case II members lose the centrifugal barrier at the
    // origin, so a Dirichlet eigensolve would probe a different boundary
    // condition; their eigen-relations are certified by residuals instead.)
    let m = levels.clamp(1, 4);
    let grid = Grid::uniform(0.0, spec.domain.1.max(10.0), 2001)?;
    let computed = lowest_eigenvalues_of(1.0, &family.base.r, &grid, m)?;
    let expected: Vec<f64> = (0..m)
        .map(|n| isospec_core::special::radial_eigenvalue(n, family.level as usize))
        .collect();
    let cmp = spectrum_compare(&computed, &expected, 2e-3);
    Ok(VerificationReport::new(
        "base-spectrum",
        "finite-difference spectrum of the base member matches 4n + 2l + 3",
        2e-3,
    )
    .bounded("max matched deviation", cmp.max_matched_deviation)
    .bounded_at(
        "unmatched levels",
        (cmp.missing_in_a.len() + cmp.missing_in_b.len()) as f64,
        0.0,
    )
    .finish())
}

fn added_state_report(family: &DeformedFamily, grid: &Grid) -> Result<VerificationReport, CliError> {
    // The deformed-left annihilation state extends the member spectrum by
    // the inverted-product constant; certify it by residual.
    let ev = match family.added_state_eigenvalue() {
        Some(ev) => ev,
        None => {
            return Ok(VerificationReport::new(
                "added-state",
                "no normalizable annihilation state for this family",
                0.0,
            )
            .finish())
        }
    };
    let chi = family.special_state()?;
    let res = residual(&family.deformed, &chi, ev, grid)?;
    Ok(VerificationReport::new(
        "added-state",
        "the annihilation state extends the spectrum at the inverted-product constant",
        1e-7,
    )
    .info("added eigenvalue", ev)
    .bounded("relative residual", res)
    .finish())
}

fn semi_isospectral_report(
    family: &DeformedFamily,
    grid: &Grid,
) -> Result<VerificationReport, CliError> {
    let (op, ev) = family.semi_isospectral()?;
    let psi = family.deformed_state(StateIx::Level(family.level))?;
    let res = residual(&op, &psi, ev, grid)?;
    Ok(VerificationReport::new(
        "semi-isospectral",
        "the assembled operator shares exactly the shifted level with the base",
        1e-7,
    )
    .info("shared eigenvalue", ev)
    .bounded("relative residual", res)
    .finish())
}
