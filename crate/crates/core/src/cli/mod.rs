//! The `abelforge` command line.
//!
//! Every command is described by a [`JobConfig`], read from `--config` and
//! overridden by flags. Exit codes: 0 success/PASS, 1 verification FAIL,
//! 2 usage or runtime error, 3 NotIntegrable, 4 Indeterminate.

mod commands;
mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{CommandKind, JobConfig, OutputFormat, PlusMinus};

use crate::abel::AbelError;
use crate::catalog::CatalogError;
use crate::expr::ExprError;
use crate::quadinvert::InvertError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NOT_INTEGRABLE: i32 = 3;
pub const EXIT_INDETERMINATE: i32 = 4;

/// Overrides where `solve` writes its curve when no output path is given.
pub const OUT_ENV: &str = "ABELFORGE_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {which}: {source}")]
    Expr { which: &'static str, source: ExprError },
    #[error(transparent)]
    Abel(#[from] AbelError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Invert(#[from] InvertError),
    #[error("{0}")]
    Precondition(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Parser, Debug)]
#[command(
    name = "abelforge",
    version,
    about = "Classify, construct and solve u'' + g(u)u' + h(u) = 0 through its Abel equation"
)]
struct Cli {
    /// JSON job file; flags given on the command line override its fields
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test the Chiellini condition (h/g)' = k g on an interval
    Check(CheckArgs),
    /// Build eta and the missing coefficient from g or from h
    Construct(ConstructArgs),
    /// Integrate u' = eta(u) by quadrature inversion and write the curve
    Solve(SolveArgs),
    /// Compare the inversion with RK4 and check residuals
    Verify(VerifyArgs),
    /// List the built-in families
    Catalog(CatalogArgs),
}

#[derive(Args, Debug, Default)]
struct Coefficients {
    /// Dissipation g(u)
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    g: Option<String>,
    /// Restoring term h(u)
    #[arg(long, allow_hyphen_values = true, value_name = "EXPR")]
    h: Option<String>,
}

#[derive(Args, Debug, Default)]
struct Grid {
    /// u-interval for classification (and quadrature bases)
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    interval: Option<Vec<f64>>,
    /// Number of Chebyshev nodes for the classification
    #[arg(long = "grid-n", value_name = "N")]
    grid_n: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct Inversion {
    #[arg(long, allow_negative_numbers = true)]
    zeta0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u0: Option<f64>,
    /// zeta-range of the output lattice zeta0 + j*step
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    span: Option<Vec<f64>>,
    #[arg(long)]
    step: Option<f64>,
    /// Stop after this many turning points
    #[arg(long = "max-turning-points", value_name = "N")]
    max_turning_points: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct Selection {
    /// Use a built-in family instead of --g/--h
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
    /// Catalog parameter, repeatable
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// c_k root used with --g/--h
    #[arg(long = "ck-branch", value_enum)]
    ck_branch: Option<PlusMinus>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    coefficients: Coefficients,
    #[command(flatten)]
    grid: Grid,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    coefficients: Coefficients,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Constant of the construction from g
    #[arg(long, allow_negative_numbers = true)]
    c0: Option<f64>,
    /// Constant of the construction from h
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long = "ck-branch", value_enum)]
    ck_branch: Option<PlusMinus>,
    /// Sign of the square root in the construction from h
    #[arg(long, value_enum)]
    sign: Option<PlusMinus>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    interval: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    selection: Selection,
    #[command(flatten)]
    coefficients: Coefficients,
    #[command(flatten)]
    grid: Grid,
    #[command(flatten)]
    inversion: Inversion,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output file (default: $ABELFORGE_OUT, else stdout)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    selection: Selection,
    #[command(flatten)]
    coefficients: Coefficients,
    #[command(flatten)]
    grid: Grid,
    #[command(flatten)]
    inversion: Inversion,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Show one entry in detail
    #[arg(long)]
    entry: Option<String>,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn pair(v: Option<Vec<f64>>) -> Option<[f64; 2]> {
    v.map(|v| [v[0], v[1]])
}

fn params(p: Vec<(String, f64)>) -> Option<BTreeMap<String, f64>> {
    (!p.is_empty()).then(|| p.into_iter().collect())
}

impl Command {
    fn into_config(self) -> JobConfig {
        let mut cfg = JobConfig::default();
        let coeffs = |c: Coefficients, cfg: &mut JobConfig| {
            cfg.g = c.g;
            cfg.h = c.h;
        };
        let grid = |g: Grid, cfg: &mut JobConfig| {
            cfg.interval = pair(g.interval);
            cfg.grid_n = g.grid_n;
        };
        let inversion = |i: Inversion, cfg: &mut JobConfig| {
            cfg.zeta0 = i.zeta0;
            cfg.u0 = i.u0;
            cfg.span = pair(i.span);
            cfg.step = i.step;
            cfg.max_turning_points = i.max_turning_points;
        };
        let selection = |s: Selection, cfg: &mut JobConfig| {
            cfg.catalog = s.catalog;
            cfg.params = params(s.params);
            cfg.ck_branch = s.ck_branch;
        };
        match self {
            Command::Check(a) => {
                cfg.command = Some(CommandKind::Check);
                coeffs(a.coefficients, &mut cfg);
                grid(a.grid, &mut cfg);
            }
            Command::Construct(a) => {
                cfg.command = Some(CommandKind::Construct);
                coeffs(a.coefficients, &mut cfg);
                cfg.k = a.k;
                cfg.c0 = a.c0;
                cfg.c1 = a.c1;
                cfg.ck_branch = a.ck_branch;
                cfg.sign = a.sign;
                cfg.interval = pair(a.interval);
            }
            Command::Solve(a) => {
                cfg.command = Some(CommandKind::Solve);
                selection(a.selection, &mut cfg);
                coeffs(a.coefficients, &mut cfg);
                grid(a.grid, &mut cfg);
                inversion(a.inversion, &mut cfg);
                cfg.output_format = a.format;
                cfg.output_path = a.output;
            }
            Command::Verify(a) => {
                cfg.command = Some(CommandKind::Verify);
                selection(a.selection, &mut cfg);
                coeffs(a.coefficients, &mut cfg);
                grid(a.grid, &mut cfg);
                inversion(a.inversion, &mut cfg);
            }
            Command::Catalog(a) => {
                cfg.command = Some(CommandKind::Catalog);
                cfg.entry = a.entry;
                cfg.output_format = a.json.then_some(OutputFormat::Json);
            }
        }
        cfg
    }
}

/// What a command produced: the report for stdout, an optional curve for a
/// file, and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub file: Option<(PathBuf, Vec<u8>)>,
    pub code: i32,
}

/// Assemble the job from an optional config file and the parsed flags.
fn job(cli: Cli) -> Result<JobConfig, CliError> {
    let base = match &cli.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    let flags = cli.command.map(Command::into_config).unwrap_or_default();
    if let (Some(a), Some(b)) = (base.command, flags.command) {
        if a != b {
            return Err(CliError::Usage(format!(
                "config is for `{}` but the command line asks for `{}`",
                a.name(),
                b.name()
            )));
        }
    }
    Ok(base.overlay(flags))
}

/// Run one job and return its outcome without touching stdout or files.
pub fn execute(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let cmd = cfg.validate()?;
    commands::dispatch(cmd, cfg)
}

/// Entry point for the binary: parse `args`, run, write output, return the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let result = job(cli).and_then(|cfg| execute(&cfg));
    match result.and_then(emit) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit(out: Outcome) -> Result<i32, CliError> {
    if let Some((path, bytes)) = &out.file {
        write_atomic(path, bytes)?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(out.stdout.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?;
    Ok(out.code)
}

// write next to the target and rename, so a failed run leaves nothing behind
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("output path {} has no file name", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    let result = std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}
