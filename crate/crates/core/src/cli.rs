//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 output I/O error. Numbers are printed in the shortest decimal form that
//! round-trips to the same `f64`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::calibration::{fit_factor, Bounds};
use crate::caputo::{abm_max_rel_error, verify_eigenproperty, TimeGrid, Trajectory};
use crate::growth::{level_at, FactorParams, GrowthFactor};
use crate::mittag_leffler::{ml_eval, FracOrder};
use crate::surface::{limit_convergence_probe, surface_residual, surface_sample, EconomySpec};

/// ABM threshold used by `verify-oracle`.
pub const ABM_ERROR_THRESHOLD: f64 = 1e-3;
/// Eigen-defect threshold used by `verify-oracle` for α < 1.
pub const EIGEN_DEFECT_THRESHOLD: f64 = 1e-2;
/// Eigen-defect threshold used by `verify-oracle` for α = 1.
pub const EIGEN_DEFECT_THRESHOLD_EXP: f64 = 1e-4;
/// Final-entry threshold used by `limit-check`.
pub const LIMIT_FINAL_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "caputo-cd",
    version,
    about = "Mittag-Leffler growth and fractional Cobb-Douglas invariants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Mittag-Leffler function E_alpha(x)
    MlEval {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Closed-form trajectories as CSV `t,L,K,Y`
    Simulate(GridArgs),
    /// Check the closed form against the L1 and ABM schemes
    VerifyOracle {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
    },
    /// Points on the invariant surface as CSV `L,K,Y[,residual]`
    Surface {
        #[command(flatten)]
        grid: GridArgs,
        /// Append |y_composite(L, K) - Y| / Y
        #[arg(long)]
        residual: bool,
    },
    /// Fit (alpha, b) to a `t,<column>` CSV series
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Column holding the levels
        #[arg(long, default_value = "value")]
        column: String,
        #[arg(long, default_value_t = 0.1)]
        alpha_lo: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha_hi: f64,
        #[arg(long, default_value_t = 1e-4)]
        b_lo: f64,
        #[arg(long, default_value_t = 5.0)]
        b_hi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance of the composite function from its Cobb-Douglas limit
    LimitCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "l")]
        labor: f64,
        #[arg(long = "k")]
        capital: f64,
        /// Strictly decreasing epsilons in [0, 0.5)
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001,0")]
        eps: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Economy config (JSON)
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long)]
    pub steps: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// JSON economy description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomyConfig {
    pub labor: FactorParams,
    pub capital: FactorParams,
    pub output: FactorParams,
    pub theta: f64,
}

impl EconomyConfig {
    pub fn to_spec(&self) -> Result<EconomySpec, String> {
        let factor = |name: &str, p: &FactorParams| -> Result<GrowthFactor, String> {
            if !(p.x0 > 0.0) || !p.x0.is_finite() {
                return Err(format!("{name}.x0: must be positive, got {}", p.x0));
            }
            if !(p.b > 0.0) || !p.b.is_finite() {
                return Err(format!("{name}.b: must be positive, got {}", p.b));
            }
            let alpha = FracOrder::new(p.alpha)
                .map_err(|_| format!("{name}.alpha: must lie in (0, 1], got {}", p.alpha))?;
            GrowthFactor::new(p.x0, p.b, alpha).map_err(|e| format!("{name}: {e}"))
        };
        let labor = factor("labor", &self.labor)?;
        let capital = factor("capital", &self.capital)?;
        let output = factor("output", &self.output)?;
        EconomySpec::new(labor, capital, output, self.theta)
            .map_err(|_| format!("theta: must lie in (0, 1), got {}", self.theta))
    }
}

impl From<&EconomySpec> for EconomyConfig {
    fn from(e: &EconomySpec) -> Self {
        EconomyConfig {
            labor: e.labor.into(),
            capital: e.capital.into(),
            output: e.output.into(),
            theta: e.theta(),
        }
    }
}

pub fn parse_economy_config(text: &str) -> Result<EconomySpec, String> {
    let cfg: EconomyConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
    cfg.to_spec()
}

/// Output of `fit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub alpha: f64,
    pub b: f64,
    pub x0: f64,
    pub sse: f64,
    pub converged: bool,
}

#[derive(Debug)]
pub enum CliError {
    Verification(String),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Verification(m) | CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn num(v: f64) -> String {
    format!("{v}")
}

fn read_economy(path: &Path) -> CliResult<EconomySpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_economy_config(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, body)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn csv_body(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.into_iter().map(num)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

fn uniform_grid(t_end: f64, steps: usize) -> CliResult<TimeGrid> {
    Ok(TimeGrid::uniform(0.0, t_end, steps)?)
}

fn cmd_ml_eval(alpha: f64, x: f64, stdout: &mut dyn Write) -> CliResult<()> {
    let v = ml_eval(FracOrder::new(alpha)?, x)?;
    emit(None, &format!("{}\n", num(v)), stdout)
}

fn cmd_simulate(args: &GridArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let econ = read_economy(&args.config)?;
    let grid = uniform_grid(args.t_end, args.steps)?;
    let rows = grid
        .points()
        .into_iter()
        .map(|t| {
            Ok(vec![
                t,
                level_at(&econ.labor, t)?,
                level_at(&econ.capital, t)?,
                level_at(&econ.output, t)?,
            ])
        })
        .collect::<crate::Result<Vec<_>>>()?;
    emit(
        args.out.as_deref(),
        &csv_body(&["t", "L", "K", "Y"], rows)?,
        stdout,
    )
}

/// Observed convergence order of the ABM error between `steps` and `2·steps`.
fn abm_observed_order(b: f64, alpha: FracOrder, grid: &TimeGrid, coarse: f64) -> CliResult<f64> {
    let fine = abm_max_rel_error(b, alpha, 1.0, &grid.refined()?)?;
    Ok((coarse / fine).log2())
}

fn cmd_verify_oracle(
    alpha: f64,
    b: f64,
    steps: usize,
    t_end: f64,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let alpha = FracOrder::new(alpha)?;
    let grid = uniform_grid(t_end, steps)?;
    let defect = verify_eigenproperty(b, alpha, &grid)?;
    let abm = abm_max_rel_error(b, alpha, 1.0, &grid)?;
    let order = abm_observed_order(b, alpha, &grid, abm)?;
    let defect_limit = if alpha.is_one() {
        EIGEN_DEFECT_THRESHOLD_EXP
    } else {
        EIGEN_DEFECT_THRESHOLD
    };
    let report = format!(
        "eigen_defect,{}\nabm_max_rel_error,{}\nabm_observed_order,{}\n",
        num(defect),
        num(abm),
        num(order)
    );
    emit(None, &report, stdout)?;
    let mut breaches = Vec::new();
    if !(defect <= defect_limit) {
        breaches.push(format!("eigen defect {defect:e} exceeds {defect_limit:e}"));
    }
    if !(abm <= ABM_ERROR_THRESHOLD) {
        breaches.push(format!("ABM error {abm:e} exceeds {ABM_ERROR_THRESHOLD:e}"));
    }
    if breaches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(breaches.join("; ")))
    }
}

fn cmd_surface(args: &GridArgs, residual: bool, stdout: &mut dyn Write) -> CliResult<()> {
    let econ = read_economy(&args.config)?;
    let grid = uniform_grid(args.t_end, args.steps)?;
    let points = surface_sample(&econ, &grid)?;
    let header: &[&str] = if residual {
        &["L", "K", "Y", "residual"]
    } else {
        &["L", "K", "Y"]
    };
    let rows = points
        .iter()
        .map(|p| {
            let mut row = vec![p.l, p.k, p.y];
            if residual {
                row.push(surface_residual(&econ, p)?);
            }
            Ok(row)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    emit(args.out.as_deref(), &csv_body(header, rows)?, stdout)
}

/// Reads a `t,<column>` series. Errors carry the 1-based file line.
pub fn read_series(path: &Path, column: &str) -> Result<Trajectory, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let headers = rdr.headers().map_err(|e| format!("line 1: {e}"))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("line 1: header has no `{name}` column"))
    };
    let (ti, vi) = (find("t")?, find(column)?);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            format!("line {line}: {e}")
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize, name: &str| -> Result<f64, String> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    format!("line {line}: `{name}` value {raw:?} is not a finite number")
                })
        };
        times.push(field(ti, "t")?);
        values.push(field(vi, column)?);
    }
    let grid = TimeGrid::explicit(times).map_err(|e| e.to_string())?;
    Trajectory::new(grid, values).map_err(|e| e.to_string())
}

fn cmd_fit(
    input: &Path,
    column: &str,
    alpha: Bounds,
    b: Bounds,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let series = read_series(input, column).map_err(CliError::Usage)?;
    let fit = fit_factor(&series, alpha, b)?;
    let report = FitReport {
        alpha: fit.factor.alpha().value(),
        b: fit.factor.b(),
        x0: fit.factor.x0(),
        sse: fit.sse,
        converged: fit.converged,
    };
    let mut body =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    body.push('\n');
    emit(out, &body, stdout)
}

fn cmd_limit_check(
    config: &Path,
    l: f64,
    k: f64,
    eps: &[f64],
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let econ = read_economy(config)?;
    let errors = limit_convergence_probe(&econ, l, k, eps)?;
    let body = csv_body(
        &["eps", "rel_error"],
        eps.iter().zip(&errors).map(|(&e, &r)| vec![e, r]),
    )?;
    emit(None, &body, stdout)?;
    let monotone = errors.windows(2).all(|w| w[1] <= w[0]);
    let last = errors[errors.len() - 1];
    if !monotone {
        return Err(CliError::Verification(
            "error column is not non-increasing".into(),
        ));
    }
    if !(last <= LIMIT_FINAL_THRESHOLD) {
        return Err(CliError::Verification(format!(
            "final error {last:e} exceeds {LIMIT_FINAL_THRESHOLD:e}"
        )));
    }
    Ok(())
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::MlEval { alpha, x } => cmd_ml_eval(*alpha, *x, stdout),
        Command::Simulate(args) => cmd_simulate(args, stdout),
        Command::VerifyOracle {
            alpha,
            b,
            steps,
            t_end,
        } => cmd_verify_oracle(*alpha, *b, *steps, *t_end, stdout),
        Command::Surface { grid, residual } => cmd_surface(grid, *residual, stdout),
        Command::Fit {
            input,
            column,
            alpha_lo,
            alpha_hi,
            b_lo,
            b_hi,
            out,
        } => cmd_fit(
            input,
            column,
            Bounds::new(*alpha_lo, *alpha_hi),
            Bounds::new(*b_lo, *b_hi),
            out.as_deref(),
            stdout,
        ),
        Command::LimitCheck {
            config,
            labor,
            capital,
            eps,
        } => cmd_limit_check(config, *labor, *capital, eps, stdout),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
