//! The `isoq` command-line front end.
//!
//! Exit codes: 0 success, 2 bad input, 3 failed precondition,
//! 4 optimizer non-convergence, 5 `--strict` threshold failure.

mod output;

pub use output::{read_manifest, write_atomic, RunManifest, MANIFEST_NAME};

use crate::error::Error;
use crate::experiments::{self, FugledeTrial};
use crate::metrics::{self, AsymmetrySearchConfig, MetricsReport};
use crate::quadrature::{check_grid_size, DEFAULT_QUADRATURE_N};
use crate::selection::{self, curvature_oscillation_bound, Extrapolation, SelectionConfig, SELECTION_QUADRATURE_N};
use crate::shapes::ShapeFile;
use crate::table::{csv_row, fmt9};
use crate::{ELLIPSE_CONSTANT, HALL_CONSTANT};
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::OutputDir;
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_STRICT: i32 = 5;

/// Overrides the default quadrature node count.
pub const QUADRATURE_ENV: &str = "ISOQ_QUADRATURE_N";

/// Relative tolerance on the recovered constant in strict mode.
const STRICT_HALL_TOL: f64 = 0.03;

/// Absolute tolerance on the ellipse constant in strict mode.
const STRICT_ELLIPSE_TOL: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "isoq", version, about = "Deficit, asymmetry and the sharp isoperimetric quotient in the plane")]
pub struct Cli {
    /// Fail with exit code 5 when a run misses its acceptance threshold.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the metrics of a shape file as one CSV row.
    Metrics(MetricsArgs),
    /// Minimize the penalized quotient for one target asymmetry.
    Select(SelectArgs),
    /// Run a recovery sequence and extrapolate the asymptotic constant.
    Hall(HallArgs),
    /// Sweep a shape family and estimate its limiting quotient.
    Sweep(SweepArgs),
    /// Seeded trials of the nearly-circular deficit estimate.
    Fuglede(FugledeArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// JSON shape file (`star`, `polygon` or `fourier`).
    pub shape: PathBuf,
    /// Quadrature node count; overrides ISOQ_QUADRATURE_N.
    #[arg(long)]
    pub quadrature_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Target asymmetry, in (0, 0.5].
    #[arg(long, value_parser = parse_alpha_target)]
    pub alpha_target: f64,
    /// Highest Fourier mode of the profile.
    #[arg(long, default_value_t = 8, value_parser = parse_modes)]
    pub modes: usize,
    /// Seed for restarts and random trials.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturbed restarts after the first descent.
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Objective evaluations per descent.
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
    /// Quadrature node count; overrides ISOQ_QUADRATURE_N.
    #[arg(long)]
    pub quadrature_n: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Fit {
    Quadratic,
    Linear,
}

impl From<Fit> for Extrapolation {
    fn from(f: Fit) -> Self {
        match f {
            Fit::Quadratic => Extrapolation::Quadratic,
            Fit::Linear => Extrapolation::Linear,
        }
    }
}

impl Fit {
    fn name(self) -> &'static str {
        match self {
            Fit::Quadratic => "quadratic",
            Fit::Linear => "linear",
        }
    }
}

#[derive(Debug, Args)]
pub struct HallArgs {
    /// Comma-separated target asymmetries, in (0, 0.5].
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_alpha_target)]
    pub targets: Vec<f64>,
    /// Highest Fourier mode of the profile.
    #[arg(long, default_value_t = 8, value_parser = parse_modes)]
    pub modes: usize,
    /// Seed for restarts and random trials.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturbed restarts after the first descent.
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Objective evaluations per descent.
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
    /// Model used to extrapolate to zero asymmetry.
    #[arg(long, value_enum, default_value_t = Fit::Quadratic)]
    pub fit: Fit,
    /// Quadrature node count; overrides ISOQ_QUADRATURE_N.
    #[arg(long)]
    pub quadrature_n: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Ellipse,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Shape family to sweep.
    #[arg(long, value_enum)]
    pub family: Family,
    /// Comma-separated, strictly monotone family parameters.
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    /// Model used to extrapolate to zero asymmetry.
    #[arg(long, value_enum, default_value_t = Fit::Quadratic)]
    pub fit: Fit,
    /// Quadrature node count; overrides ISOQ_QUADRATURE_N.
    #[arg(long)]
    pub quadrature_n: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FugledeArgs {
    /// Number of random shapes.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Size of the perturbation of the unit disk.
    #[arg(long, default_value_t = 0.05)]
    pub amp: f64,
    /// Seed for restarts and random trials.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Quadrature node count; overrides ISOQ_QUADRATURE_N.
    #[arg(long)]
    pub quadrature_n: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Path to a manifest.json written by an earlier run.
    pub manifest: PathBuf,
    /// Write into this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_alpha_target(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v <= selection::MAX_ALPHA_TARGET {
        Ok(v)
    } else {
        Err(format!("must lie in (0, {}]", selection::MAX_ALPHA_TARGET))
    }
}

fn parse_modes(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 2 {
        Ok(v)
    } else {
        Err("must be at least 2".into())
    }
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::Config(_) | Error::Domain(_) | Error::Io(_) => EXIT_INPUT,
            _ => EXIT_PRECONDITION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

/// Node count from the flag, else the environment, else `default`.
fn resolve_quadrature(flag: Option<usize>, default: usize) -> Result<usize, Failure> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(QUADRATURE_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| input_error(format!("{QUADRATURE_ENV}={v} is not an integer")))?,
            Err(_) => default,
        },
    };
    check_grid_size(n).map_err(|e| input_error(e.to_string()))?;
    Ok(n)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let strict = cli.strict;
    match cli.command {
        Command::Metrics(a) => cmd_metrics(&a, stdout),
        Command::Select(a) => cmd_select(&a, strict, stdout),
        Command::Hall(a) => cmd_hall(&a, strict, stdout),
        Command::Sweep(a) => cmd_sweep(&a, strict, stdout),
        Command::Fuglede(a) => cmd_fuglede(&a, strict, stdout),
        Command::Replay(a) => cmd_replay(&a, stdout),
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout.write_all(text.as_bytes()).map_err(|e| Failure::from(Error::Io(e)))
}

fn manifest(command: &str, config: serde_json::Value, seed: Option<u64>, args: Vec<String>) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        config,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: Vec::new(),
        args,
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn path_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn strict_flag(strict: bool) -> Vec<String> {
    if strict {
        vec!["--strict".into()]
    } else {
        vec![]
    }
}

fn cmd_metrics(a: &MetricsArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let n = resolve_quadrature(a.quadrature_n, DEFAULT_QUADRATURE_N)?;
    let text = std::fs::read_to_string(&a.shape).map_err(|e| input_error(format!("{}: {e}", a.shape.display())))?;
    let shape = ShapeFile::parse(&text)?.into_shape(n)?;
    let report = metrics::evaluate(&shape, &AsymmetrySearchConfig::default())?;
    emit(stdout, &format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.to_csv_row()))?;
    Ok(EXIT_OK)
}

fn cmd_select(a: &SelectArgs, strict: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let n = resolve_quadrature(a.quadrature_n, SELECTION_QUADRATURE_N)?;
    let cfg = SelectionConfig {
        alpha_target: a.alpha_target,
        modes: a.modes,
        restarts: a.restarts,
        max_evals: a.max_evals,
        seed: a.seed,
        quadrature_n: n,
        ..SelectionConfig::new(a.alpha_target, a.modes)
    };
    let result = selection::minimize_penalized(&cfg)?;

    let mut out = OutputDir::create(&a.out)?;
    out.write("result.json", &(serde_json::to_string_pretty(&result).map_err(Error::from)? + "\n"))?;
    let mut traj = String::from("iteration,best_value\n");
    for (it, v) in &result.trajectory {
        traj.push_str(&format!("{it},{}\n", fmt9(*v)));
    }
    out.write("trajectory.csv", &traj)?;
    let mut args = strict_flag(strict);
    args.extend([
        "select".into(),
        "--alpha-target".into(),
        a.alpha_target.to_string(),
        "--modes".into(),
        a.modes.to_string(),
        "--seed".into(),
        a.seed.to_string(),
        "--restarts".into(),
        a.restarts.to_string(),
        "--max-evals".into(),
        a.max_evals.to_string(),
        "--quadrature-n".into(),
        n.to_string(),
        "--out".into(),
        path_arg(&a.out),
    ]);
    out.finish(manifest("select", serde_json::to_value(&cfg).map_err(Error::from)?, Some(a.seed), args))?;

    let summary = json!({
        "alpha_target": result.alpha_target,
        "q_value": result.q_value,
        "alpha": result.alpha,
        "deficit": result.deficit,
        "penalty": result.penalty,
        "converged": result.converged,
    });
    emit(stdout, &(serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n"))?;
    let in_band = result.q_value >= 0.45 && result.q_value <= ELLIPSE_CONSTANT + 0.01;
    if strict && !in_band {
        return Ok(EXIT_STRICT);
    }
    Ok(if result.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_hall(a: &HallArgs, strict: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let n = resolve_quadrature(a.quadrature_n, SELECTION_QUADRATURE_N)?;
    let base = SelectionConfig {
        restarts: a.restarts,
        max_evals: a.max_evals,
        seed: a.seed,
        quadrature_n: n,
        ..SelectionConfig::new(a.targets[0], a.modes)
    };
    let run = selection::recovery_sequence(&a.targets, &base, a.fit.into())?;

    let mut out = OutputDir::create(&a.out)?;
    let mut csv = String::from("alpha_target,alpha,deficit,Q,penalty,kappa_dev,kappa_osc\n");
    for r in &run.results {
        csv.push_str(&csv_row(&[r.alpha_target, r.alpha, r.deficit, r.q_value, r.penalty, r.curvature_max_dev, r.curvature_osc]));
        csv.push('\n');
    }
    out.write("recovery.csv", &csv)?;
    let relative_error = (run.extrapolated_qb - HALL_CONSTANT).abs() / HALL_CONSTANT;
    let converged = run.results.iter().all(|r| r.converged);
    let curvature: Vec<_> = run
        .results
        .iter()
        .map(|r| {
            let (observed, bound) = curvature_oscillation_bound(r, r.alpha_target);
            json!({ "alpha_target": r.alpha_target, "observed": observed, "bound": bound })
        })
        .collect();
    let summary = json!({
        "extrapolated_constant": run.extrapolated_qb,
        "two_point_constant": run.two_point_qb,
        "fit": a.fit.name(),
        "inconsistent_fits": run.inconsistent,
        "hall_constant": HALL_CONSTANT,
        "relative_error": relative_error,
        "pass": relative_error <= STRICT_HALL_TOL && !run.inconsistent,
        "converged": converged,
        "curvature_oscillation": curvature,
    });
    let text = serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n";
    out.write("summary.json", &text)?;
    let mut args = strict_flag(strict);
    args.extend([
        "hall".into(),
        "--targets".into(),
        join(&a.targets),
        "--modes".into(),
        a.modes.to_string(),
        "--seed".into(),
        a.seed.to_string(),
        "--restarts".into(),
        a.restarts.to_string(),
        "--max-evals".into(),
        a.max_evals.to_string(),
        "--fit".into(),
        a.fit.name().into(),
        "--quadrature-n".into(),
        n.to_string(),
        "--out".into(),
        path_arg(&a.out),
    ]);
    let config = json!({ "targets": a.targets, "selection": base, "fit": a.fit.name() });
    out.finish(manifest("hall", config, Some(a.seed), args))?;
    emit(stdout, &text)?;
    if strict && !(relative_error <= STRICT_HALL_TOL && !run.inconsistent) {
        return Ok(EXIT_STRICT);
    }
    Ok(if converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_sweep(a: &SweepArgs, strict: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let n = resolve_quadrature(a.quadrature_n, DEFAULT_QUADRATURE_N)?;
    let table = match a.family {
        Family::Ellipse => experiments::ellipse_sweep(&a.eps, n)?,
    };
    let estimate = if table.rows.len() >= 2 { Some(experiments::estimate_constant(&table, a.fit.into())?) } else { None };
    let mut sorted = table.rows.clone();
    sorted.sort_by(|x, y| x.parameter.total_cmp(&y.parameter));
    let monotone = sorted.windows(2).all(|w| w[1].quotient > w[0].quotient);
    let pass = monotone && estimate.is_some_and(|e| (e - ELLIPSE_CONSTANT).abs() <= STRICT_ELLIPSE_TOL);

    let mut out = OutputDir::create(&a.out)?;
    out.write("sweep.csv", &table.to_csv())?;
    let summary = json!({
        "family": "ellipse",
        "estimated_constant": estimate,
        "fit": a.fit.name(),
        "ellipse_constant": ELLIPSE_CONSTANT,
        "monotone_quotient": monotone,
        "pass": pass,
    });
    let text = serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n";
    out.write("summary.json", &text)?;
    let mut args = strict_flag(strict);
    args.extend([
        "sweep".into(),
        "--family".into(),
        "ellipse".into(),
        "--eps".into(),
        join(&a.eps),
        "--fit".into(),
        a.fit.name().into(),
        "--quadrature-n".into(),
        n.to_string(),
        "--out".into(),
        path_arg(&a.out),
    ]);
    let config = json!({ "family": "ellipse", "eps": a.eps, "fit": a.fit.name(), "quadrature_n": n });
    out.finish(manifest("sweep", config, None, args))?;
    emit(stdout, &text)?;
    Ok(if strict && !pass { EXIT_STRICT } else { EXIT_OK })
}

fn cmd_fuglede(a: &FugledeArgs, strict: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let n = resolve_quadrature(a.quadrature_n, DEFAULT_QUADRATURE_N)?;
    let trials = experiments::fuglede_trials(a.trials, a.amp, a.seed, n)?;
    let passed = trials.iter().filter(|t| t.pass).count();
    let min_margin = trials.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);

    let mut out = OutputDir::create(&a.out)?;
    let mut csv = format!("{}\n", FugledeTrial::CSV_HEADER);
    for t in &trials {
        csv.push_str(&t.to_csv_row());
        csv.push('\n');
    }
    out.write("fuglede.csv", &csv)?;
    let summary = json!({
        "trials": a.trials,
        "passed": passed,
        "min_margin": if min_margin.is_finite() { Some(min_margin) } else { None },
        "eta": experiments::FUGLEDE_ETA,
        "amp": a.amp,
        "pass": passed == a.trials,
    });
    let text = serde_json::to_string_pretty(&summary).map_err(Error::from)? + "\n";
    out.write("summary.json", &text)?;
    let mut args = strict_flag(strict);
    args.extend([
        "fuglede".into(),
        "--trials".into(),
        a.trials.to_string(),
        "--amp".into(),
        a.amp.to_string(),
        "--seed".into(),
        a.seed.to_string(),
        "--quadrature-n".into(),
        n.to_string(),
        "--out".into(),
        path_arg(&a.out),
    ]);
    let config = json!({ "trials": a.trials, "amp": a.amp, "eta": experiments::FUGLEDE_ETA, "quadrature_n": n });
    out.finish(manifest("fuglede", config, Some(a.seed), args))?;
    emit(stdout, &text)?;
    Ok(if strict && passed != a.trials { EXIT_STRICT } else { EXIT_OK })
}

fn cmd_replay(a: &ReplayArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let m = read_manifest(&a.manifest)?;
    if m.version != env!("CARGO_PKG_VERSION") {
        return Err(input_error(format!("manifest written by version {}, this is {}", m.version, env!("CARGO_PKG_VERSION"))));
    }
    if m.args.iter().any(|s| s == "replay") {
        return Err(input_error("a manifest cannot replay another replay"));
    }
    let mut args = m.args.clone();
    if let Some(dir) = &a.out {
        let i = args.iter().position(|s| s == "--out").ok_or_else(|| input_error("manifest has no --out"))?;
        args[i + 1] = path_arg(dir);
    }
    let cli = Cli::try_parse_from(std::iter::once("isoq".to_string()).chain(args)).map_err(|e| input_error(e.to_string()))?;
    execute(cli, stdout)
}
