//! `cddbound`: sharp Poincare / p-Poincare / log-Sobolev lower bounds for
//! curvature-dimension-diameter conditions, monotonicity sweeps, CD-condition
//! checks on sampled densities, and profile data export.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 admissibility/proviso
//! error, 3 partial sweep (out-of-domain rows skipped), 4 CD violations.

mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use cdd_spectral::{
    bobkov_gotze_estimate, build_distribution, cd_differential_check, cd_midpoint_check,
    diameter_sweep, isoperimetric_profile_flat, l_delta, monotonicity_sweep, sample_density,
    sl_first_eigenvalue, BoundRequest, CurvatureDimension, Error as CoreError, GridDensity,
    Inequality, ModelMeasure, SweepTable, SweepVerdict,
};
use config::RunConfig;

const EXIT_USAGE: i32 = 1;
const EXIT_ADMISSIBILITY: i32 = 2;
const EXIT_PARTIAL_SWEEP: i32 = 3;
const EXIT_CD_VIOLATIONS: i32 = 4;

#[derive(Parser)]
#[command(
    name = "cddbound",
    version,
    about = "Sharp functional-inequality lower bounds for CDD(K, N, D) conditions",
    after_help = "Defaults: solver_tol=1e-8, limit_tol=1e-5, checker_tol=1e-6, grid_points=20001, \
                  profile_points=1001, midpoint_triples=2000, gaussian_truncation_sigmas=8, \
                  bg_bracket=16, seed=12345. Override any of them with --config <file> \
                  (key = value lines)."
)]
struct Cli {
    /// Optional key=value config file overriding the documented defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the sharp lower bound for one inequality.
    Bound(BoundArgs),
    /// Sweep the eigenvalue along h or d and check the monotonicity verdict.
    Sweep(SweepArgs),
    /// Check a sampled density (CSV) against a curvature-dimension condition.
    CheckCd(CheckCdArgs),
    /// Export density / eigenfunction / isoperimetric / estimator curves.
    Profile(ProfileArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum IneqArg {
    Poincare,
    #[value(name = "p-poincare")]
    PPoincare,
    #[value(name = "log-sobolev")]
    LogSobolev,
}

fn parse_extended(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse::<f64>().map_err(|e| e.to_string()),
    }
}

#[derive(Args)]
struct BoundArgs {
    /// Inequality to bound.
    #[arg(long)]
    inequality: IneqArg,
    /// Curvature lower bound.
    #[arg(long = "K", allow_hyphen_values = true, value_parser = parse_extended)]
    k: f64,
    /// Effective dimension (real or `inf`).
    #[arg(long = "N", allow_hyphen_values = true, value_parser = parse_extended)]
    n: f64,
    /// Diameter bound (positive real or `inf`).
    #[arg(long = "D", allow_hyphen_values = true, value_parser = parse_extended)]
    d: f64,
    /// Exponent for the p-Poincare inequality.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Swept parameter.
    #[arg(long, value_parser = ["h", "d"])]
    param: String,
    /// Range `start:stop:count` (inclusive endpoints).
    #[arg(long, allow_hyphen_values = true)]
    range: String,
    #[arg(long = "K", allow_hyphen_values = true, value_parser = parse_extended)]
    k: f64,
    #[arg(long = "N", allow_hyphen_values = true, value_parser = parse_extended)]
    n: f64,
    /// Fixed diameter (when sweeping h).
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    /// Fixed derivative parameter (when sweeping d).
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    h: f64,
    /// Output table file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckCdArgs {
    /// Two-column CSV file `x,value`.
    #[arg(long)]
    density: PathBuf,
    #[arg(long = "K", allow_hyphen_values = true, value_parser = parse_extended)]
    k: f64,
    #[arg(long = "N", allow_hyphen_values = true, value_parser = parse_extended)]
    n: f64,
    /// Checker to run.
    #[arg(long, value_parser = ["diff", "midpoint"], default_value = "diff")]
    mode: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Emit {
    Density,
    Eigenfunction,
    Isoperimetric,
    #[value(name = "bg-supremand")]
    BgSupremand,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long = "K", allow_hyphen_values = true, value_parser = parse_extended)]
    k: f64,
    #[arg(long = "N", allow_hyphen_values = true, value_parser = parse_extended)]
    n: f64,
    #[arg(long = "D", allow_hyphen_values = true, value_parser = parse_extended)]
    d: f64,
    /// Derivative parameter of the model density.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    h: f64,
    /// Curve to emit.
    #[arg(long, value_enum)]
    emit: Emit,
    /// Output CSV file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    // die quietly on closed pipes (e.g. `cddbound ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

/// Map core errors onto the documented exit codes, naming the condition.
fn core_error(err: &CoreError) -> i32 {
    eprintln!("error: {err}");
    match err {
        CoreError::Domain(_) | CoreError::Proviso { .. } | CoreError::UnsupportedRange(_) => {
            EXIT_ADMISSIBILITY
        }
        CoreError::InvalidInput(_) | CoreError::GridMismatch(_) => EXIT_USAGE,
        CoreError::Solver(_) => EXIT_ADMISSIBILITY,
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        if let Err(msg) = cfg.apply_file(path) {
            return usage_error(&msg);
        }
    }
    match cli.command {
        Command::Bound(args) => cmd_bound(&args, &cfg, cli.format),
        Command::Sweep(args) => cmd_sweep(&args, &cfg, cli.format),
        Command::CheckCd(args) => cmd_check_cd(&args, &cfg, cli.format),
        Command::Profile(args) => cmd_profile(&args, &cfg),
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {path:?}: {e}")),
        None => {
            print!("{text}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
    }
}

fn cmd_bound(args: &BoundArgs, cfg: &RunConfig, format: Format) -> i32 {
    let inequality = match args.inequality {
        IneqArg::Poincare => Inequality::Poincare,
        IneqArg::PPoincare => Inequality::PPoincare,
        IneqArg::LogSobolev => Inequality::LogSobolev,
    };
    let req = BoundRequest { inequality, k: args.k, n: args.n, d: args.d, p: args.p };
    let result = match inequality {
        Inequality::Poincare => {
            cdd_spectral::bounds::poincare_bound_with(&req, cfg.solver_tol, cfg.limit_tol)
        }
        Inequality::PPoincare => {
            cdd_spectral::bounds::p_poincare_bound_with(&req, cfg.solver_tol, cfg.limit_tol)
        }
        Inequality::LogSobolev => {
            cdd_spectral::bounds::log_sobolev_bound_with(&req, cfg.grid_points)
        }
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return core_error(&e),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&result).unwrap()),
        Format::Csv => {
            println!("# value,case,method,exactness");
            println!(
                "{:.12e},{},{},{}",
                result.value,
                result.case_label,
                serde_json::to_value(result.method).unwrap().as_str().unwrap(),
                serde_json::to_value(result.exactness).unwrap().as_str().unwrap(),
            );
        }
        Format::Text => {
            println!("value     = {:.9}", result.value);
            println!("case      = {}", result.case_label);
            println!("method    = {}", serde_json::to_value(result.method).unwrap().as_str().unwrap());
            println!(
                "exactness = {}",
                serde_json::to_value(result.exactness).unwrap().as_str().unwrap()
            );
            for note in &result.diagnostics.notes {
                println!("note      = {note}");
            }
        }
    }
    0
}

fn parse_range(range: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range `{range}` must be start:stop:count"));
    }
    let start: f64 = parts[0].parse().map_err(|e| format!("range start: {e}"))?;
    let stop: f64 = parts[1].parse().map_err(|e| format!("range stop: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("range count: {e}"))?;
    if count < 2 {
        return Err("range count must be at least 2".into());
    }
    Ok((0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect())
}

fn sweep_csv(table: &SweepTable, param: &str) -> String {
    let mut text = format!("# {param},lambda,residual,verdict_flag\n");
    for row in &table.rows {
        text.push_str(&format!("{:.12e},{:.12e},{:.3e},{}\n", row.param, row.lambda, row.residual, row.flag));
    }
    text
}

fn cmd_sweep(args: &SweepArgs, cfg: &RunConfig, format: Format) -> i32 {
    let values = match parse_range(&args.range) {
        Ok(v) => v,
        Err(msg) => return usage_error(&msg),
    };
    let table = match args.param.as_str() {
        "h" => {
            let Some(d) = args.d else {
                return usage_error("sweeping h needs a fixed --d");
            };
            monotonicity_sweep(args.k, args.n, d, &values, cfg.solver_tol)
        }
        _ => diameter_sweep(args.k, args.n, args.h, &values, cfg.solver_tol),
    };
    let table = match table {
        Ok(t) => t,
        Err(e) => return core_error(&e),
    };
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&table).unwrap() + "\n",
        _ => sweep_csv(&table, &args.param),
    };
    if let Err(msg) = write_output(args.out.as_ref(), &body) {
        return usage_error(&msg);
    }
    match &table.verdict {
        SweepVerdict::Pass => eprintln!("verdict: PASS ({})", table.regime),
        SweepVerdict::Fail(why) => eprintln!("verdict: FAIL ({why})"),
    }
    if table.skipped > 0 {
        eprintln!("{} out-of-domain rows skipped", table.skipped);
        EXIT_PARTIAL_SWEEP
    } else {
        0
    }
}

fn cmd_check_cd(args: &CheckCdArgs, cfg: &RunConfig, format: Format) -> i32 {
    let text = match std::fs::read_to_string(&args.density) {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("reading {:?}: {e}", args.density)),
    };
    let grid = match GridDensity::from_csv(&text) {
        Ok(g) => g,
        Err(e) => return usage_error(&e.to_string()),
    };
    // grid-order tolerance for the differential checker
    let tol = (cfg.checker_tol).max(500.0 * grid.dx * grid.dx * (1.0 + args.k.abs()));
    let (clean, report_json, summary) = match args.mode.as_str() {
        "midpoint" => match cd_midpoint_check(&grid, args.k, args.n, cfg.midpoint_triples, cfg.seed, 1e-8) {
            Ok(rep) => (
                rep.passed(),
                serde_json::to_value(&rep).unwrap(),
                format!(
                    "midpoint check: {} violations over {} triples, max violation {:.3e}",
                    rep.violation_locations.len(),
                    rep.checked_triples,
                    rep.max_violation
                ),
            ),
            Err(e) => return core_error(&e),
        },
        _ => match cd_differential_check(&grid, args.k, args.n, tol) {
            Ok(rep) => (
                rep.passed(),
                serde_json::to_value(&rep).unwrap(),
                format!(
                    "differential check: {} violations over {} interior points, max violation {:.6e} (tol {:.3e})",
                    rep.violation_locations.len(),
                    rep.checked_points,
                    rep.max_violation,
                    tol
                ),
            ),
            Err(e) => return core_error(&e),
        },
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report_json).unwrap()),
        _ => println!("{summary}"),
    }
    if clean {
        0
    } else {
        EXIT_CD_VIOLATIONS
    }
}

fn cmd_profile(args: &ProfileArgs, cfg: &RunConfig) -> i32 {
    let cd = match CurvatureDimension::new(args.k, args.n) {
        Ok(cd) => cd,
        Err(e) => return core_error(&e),
    };
    let d = if args.d.is_finite() {
        args.d
    } else if args.k > 0.0 && args.n.is_infinite() {
        2.0 * cfg.gaussian_truncation_sigmas / args.k.sqrt()
    } else {
        return core_error(&CoreError::Domain(
            "profile emission needs a finite interval; pass a finite --D".into(),
        ));
    };
    if args.k < 0.0 && args.n <= 0.0 && d >= l_delta(args.k, args.n) {
        return core_error(&CoreError::Proviso { d, l_delta: l_delta(args.k, args.n) });
    }
    let measure = match ModelMeasure::new(cd, args.h, -d / 2.0, d / 2.0) {
        Ok(m) => m,
        Err(e) => return core_error(&e),
    };
    let body = match args.emit {
        Emit::Density => match sample_density(&measure, cfg.profile_points) {
            Ok(g) => {
                let mut text = format!("# model density J for K={}, N={}, h={}\n", args.k, args.n, args.h);
                text.push_str(&g.to_csv());
                text
            }
            Err(e) => return core_error(&e),
        },
        Emit::Eigenfunction => match sl_first_eigenvalue(&measure, cfg.solver_tol) {
            Ok(res) => {
                let mut text = format!(
                    "# first Neumann eigenfunction, lambda = {:.12e}, residual = {:.3e}\n# x,value\n",
                    res.lambda, res.phase_residual
                );
                for (i, v) in res.eigenfunction.values.iter().enumerate() {
                    text.push_str(&format!("{:.17e},{:.17e}\n", res.eigenfunction.x(i), v));
                }
                text
            }
            Err(e) => return core_error(&e),
        },
        Emit::Isoperimetric => {
            let grid = match sample_density(&measure, cfg.grid_points) {
                Ok(g) => g,
                Err(e) => return core_error(&e),
            };
            let dist = match build_distribution(&grid) {
                Ok(d) => d,
                Err(e) => return core_error(&e),
            };
            let mut text = String::from("# ray isoperimetric profile\n# t,i_flat\n");
            for i in 1..cfg.profile_points {
                let t = i as f64 / cfg.profile_points as f64;
                match isoperimetric_profile_flat(&dist, t) {
                    Ok(v) => text.push_str(&format!("{t:.8},{v:.17e}\n")),
                    Err(e) => return core_error(&e),
                }
            }
            text
        }
        Emit::BgSupremand => {
            let grid = match sample_density(&measure, cfg.grid_points) {
                Ok(g) => g,
                Err(e) => return core_error(&e),
            };
            let dist = match build_distribution(&grid) {
                Ok(d) => d,
                Err(e) => return core_error(&e),
            };
            let est = bobkov_gotze_estimate(&dist, cfg.bg_bracket);
            let median = dist.median();
            let mut text = format!(
                "# Bobkov-Goetze supremand; b_minus = {:.12e}, b_plus = {:.12e}\n# x,supremand\n",
                est.b_minus, est.b_plus
            );
            let inv_at = |x: f64| -> f64 {
                // cumulative of 1/p_bar between median and x via the cache
                dist.inv_cum_between(median, x)
            };
            for i in 0..cfg.profile_points {
                let x = grid.x0 + (grid.x_last() - grid.x0) * i as f64 / (cfg.profile_points - 1) as f64;
                let tail = if x >= median { dist.tail_at(x) } else { dist.cdf_at(x) };
                let v = if tail <= 0.0 { 0.0 } else { tail * (1.0 / tail).ln() * inv_at(x) };
                text.push_str(&format!("{x:.12e},{v:.17e}\n"));
            }
            text
        }
    };
    if let Err(msg) = write_output(args.out.as_ref(), &body) {
        return usage_error(&msg);
    }
    0
}
