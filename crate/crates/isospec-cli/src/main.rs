//! `isospec` — build one-parameter isospectral deformations of the bundled
//! models, sweep the deformation parameter, verify the spectral claims and
//! tabulate potentials and eigenfunctions.

mod commands;
mod emit;
mod error;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "isospec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit nu and the induced potential of a deformed family on a grid.
    Deform(DeformArgs),
    /// Finite-difference spectra of the base and deformed operators.
    Spectrum(SpectrumArgs),
    /// Run the verification suite for a model and emit the reports.
    Verify(VerifyArgs),
    /// Classify lambda validity over a sweep (singularity map).
    ScanLambda(ScanArgs),
    /// Sample base and deformed eigenfunctions on a grid.
    Tabulate(TabulateArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Model id: oscillator1d | free1d | free3d | isotropic-l | isotropic-n.
    #[arg(long)]
    model: Option<String>,
    /// Case tag: I | II | unique (defaults to the model's natural case).
    #[arg(long)]
    case: Option<String>,
    /// Deformation parameter.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Domain as lower:upper (defaults per model).
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    /// Grid point count.
    #[arg(long)]
    points: Option<usize>,
    /// Member index: l for the laddered models, n for isotropic-n.
    #[arg(long)]
    level: Option<u32>,
    /// Seed for free3d: j | n.
    #[arg(long = "seed-kind")]
    seed_kind: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// key=value file (one per line) supplying defaults for any option.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the output schema of this subcommand and exit.
    #[arg(long)]
    schema: bool,
}

#[derive(Args, Debug)]
struct DeformArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of eigenvalues to extract.
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of states checked per family.
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "lambda-start", allow_negative_numbers = true)]
    lambda_start: Option<f64>,
    #[arg(long = "lambda-stop", allow_negative_numbers = true)]
    lambda_stop: Option<f64>,
    #[arg(long = "lambda-count")]
    lambda_count: Option<usize>,
}

#[derive(Args, Debug)]
struct TabulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated state indices (discrete models).
    #[arg(long)]
    indices: Option<String>,
    /// Comma-separated wavenumbers (free1d).
    #[arg(long = "k-values")]
    k_values: Option<String>,
}

/// Parses a `key=value` config file into a map; blank lines and lines
/// starting with '#' are skipped.
fn read_config(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => {
                return Err(CliError::usage(format!(
                    "config line {} is not key=value: '{line}'",
                    lineno + 1
                )))
            }
        }
    }
    Ok(map)
}

impl CommonArgs {
    /// Fills unset options from the config file (explicit flags win).
    fn apply_config(&mut self) -> Result<BTreeMap<String, String>, CliError> {
        let map = match &self.config {
            Some(path) => read_config(path)?,
            None => return Ok(BTreeMap::new()),
        };
        let parse_f64 = |k: &str, v: &String| -> Result<f64, CliError> {
            v.parse::<f64>().map_err(|_| CliError::usage(format!("config {k}: bad number '{v}'")))
        };
        if self.model.is_none() {
            self.model = map.get("model").cloned();
        }
        if self.case.is_none() {
            self.case = map.get("case").cloned();
        }
        if self.lambda.is_none() {
            if let Some(v) = map.get("lambda") {
                self.lambda = Some(parse_f64("lambda", v)?);
            }
        }
        if self.domain.is_none() {
            self.domain = map.get("domain").cloned();
        }
        if self.points.is_none() {
            if let Some(v) = map.get("points") {
                self.points = Some(
                    v.parse().map_err(|_| CliError::usage(format!("config points: '{v}'")))?,
                );
            }
        }
        if self.level.is_none() {
            if let Some(v) = map.get("level") {
                self.level =
                    Some(v.parse().map_err(|_| CliError::usage(format!("config level: '{v}'")))?);
            }
        }
        if self.seed_kind.is_none() {
            self.seed_kind = map.get("seed-kind").cloned();
        }
        if self.output.is_none() {
            self.output = map.get("output").map(PathBuf::from);
        }
        if self.format.is_none() {
            self.format = map.get("format").cloned();
        }
        Ok(map)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Deform(mut args) => {
            args.common.apply_config()?;
            commands::deform(&args.common)
        }
        Command::Spectrum(mut args) => {
            let map = args.common.apply_config()?;
            if args.levels.is_none() {
                args.levels = map.get("levels").and_then(|v| v.parse().ok());
            }
            commands::spectrum(&args.common, args.levels.unwrap_or(6))
        }
        Command::Verify(mut args) => {
            let map = args.common.apply_config()?;
            if args.levels.is_none() {
                args.levels = map.get("levels").and_then(|v| v.parse().ok());
            }
            commands::verify(&args.common, args.levels.unwrap_or(6))
        }
        Command::ScanLambda(mut args) => {
            let map = args.common.apply_config()?;
            let get = |field: &Option<f64>, key: &str| -> Option<f64> {
                field.or_else(|| map.get(key).and_then(|v| v.parse().ok()))
            };
            let start = get(&args.lambda_start, "lambda-start");
            let stop = get(&args.lambda_stop, "lambda-stop");
            let count = args
                .lambda_count
                .or_else(|| map.get("lambda-count").and_then(|v| v.parse().ok()));
            commands::scan_lambda(&args.common, start, stop, count)
        }
        Command::Tabulate(mut args) => {
            let map = args.common.apply_config()?;
            if args.indices.is_none() {
                args.indices = map.get("indices").cloned();
            }
            if args.k_values.is_none() {
                args.k_values = map.get("k-values").cloned();
            }
            commands::tabulate(&args.common, args.indices.as_deref(), args.k_values.as_deref())
        }
    }
}
