//! Batch front-end: configuration, preset/CSV ingestion, and the solve /
//! verify / weight / basis / yh runs with their on-disk artifacts.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::basis;
use crate::presets;
use crate::quad::{Grid2D, Interval, ScalarFunction1D, Smoothness};
use crate::report;
use crate::solver::{self, BoundaryDatum, SolverError};
use crate::spline::{CubicSpline, SplineError};
use crate::verify;
use crate::weights::{self, Weight, WeightError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRACT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed CSV {path}: {reason}")]
    MalformedCsv { path: String, reason: String },
    #[error("sample abscissae must be strictly increasing in {0}")]
    NonMonotoneAbscissae(String),
    #[error("unknown boundary datum '{0}' (preset name or .csv path)")]
    UnknownDatum(String),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Verify,
    Weight,
    Basis,
    Yh,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaMode {
    PaperHalf,
    Calibrated,
    Explicit(f64),
}

impl LambdaMode {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "paper_half" => Ok(Self::PaperHalf),
            "calibrated" => Ok(Self::Calibrated),
            other => other
                .parse::<f64>()
                .map(Self::Explicit)
                .map_err(|_| CliError::BadConfig(format!("bad lambda mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub f_spec: String,
    pub weight_spec: String,
    pub p: f64,
    pub n_modes: usize,
    pub lambda_mode: LambdaMode,
    /// `(n_x, n_y, ξ)`
    pub grid: (usize, usize, f64),
    pub tol: f64,
    pub out_dir: PathBuf,
    /// interval-family fineness for weight analysis
    pub resolution: usize,
}

/// Parse `NxMxXI`, e.g. `65x65x4`.
pub fn parse_grid(s: &str) -> Result<(usize, usize, f64), CliError> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.len() != 3 {
        return Err(CliError::BadConfig(format!("bad grid '{s}' (want NxMxXI)")));
    }
    let n_x = parts[0]
        .parse()
        .map_err(|_| CliError::BadConfig(format!("bad grid '{s}'")))?;
    let n_y = parts[1]
        .parse()
        .map_err(|_| CliError::BadConfig(format!("bad grid '{s}'")))?;
    let xi = parts[2]
        .parse()
        .map_err(|_| CliError::BadConfig(format!("bad grid '{s}'")))?;
    Ok((n_x, n_y, xi))
}

fn read_two_column_csv(path: &Path, want_header: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let text = std::fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::MalformedCsv {
            path: display.clone(),
            reason: "empty file".into(),
        })?
        .trim();
    if header != want_header {
        return Err(CliError::MalformedCsv {
            path: display,
            reason: format!("header '{header}', want '{want_header}'"),
        });
    }
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let parse = |field: Option<&str>| -> Result<f64, CliError> {
            field
                .and_then(|c| c.trim().parse().ok())
                .ok_or_else(|| CliError::MalformedCsv {
                    path: display.clone(),
                    reason: format!("row {}", i + 2),
                })
        };
        let x = parse(cols.next())?;
        let v = parse(cols.next())?;
        xs.push(x);
        vs.push(v);
    }
    if xs.len() < 4 {
        return Err(CliError::MalformedCsv {
            path: display,
            reason: format!("need at least 4 samples, got {}", xs.len()),
        });
    }
    for i in 1..xs.len() {
        if xs[i] <= xs[i - 1] {
            return Err(CliError::NonMonotoneAbscissae(display));
        }
    }
    Ok((xs, vs))
}

fn spline_function(name: String, xs: Vec<f64>, vs: Vec<f64>) -> Result<ScalarFunction1D, CliError> {
    let spline = CubicSpline::clamped(xs, vs).map_err(|e| match e {
        SplineError::NonMonotoneAbscissae(_) => CliError::NonMonotoneAbscissae(name.clone()),
        SplineError::TooFewPoints(n) => CliError::MalformedCsv {
            path: name.clone(),
            reason: format!("need at least 4 samples, got {n}"),
        },
    })?;
    let s = Arc::new(spline);
    let (s1, s2, s3) = (s.clone(), s.clone(), s);
    Ok(
        ScalarFunction1D::new(name, Interval::period(), Smoothness::C2, move |x| s1.eval(x))
            .with_derivative(move |x| s2.deriv(x))
            .with_second_derivative(move |x| s3.second_deriv(x)),
    )
}

/// Sampled boundary datum: CSV with header `x,value`, strictly increasing
/// abscissae, interpolated by a clamped cubic spline.
pub fn load_sampled_function(path: &Path) -> Result<ScalarFunction1D, CliError> {
    let (xs, vs) = read_two_column_csv(path, "x,value")?;
    spline_function(path.display().to_string(), xs, vs)
}

/// Sampled weight: CSV with header `x,nu`.
pub fn load_weight_csv(path: &Path) -> Result<Weight, CliError> {
    let (xs, vs) = read_two_column_csv(path, "x,nu")?;
    let f = spline_function(path.display().to_string(), xs, vs)?;
    Ok(Weight::new(f, vec![], path.display().to_string()))
}

fn resolve_datum(spec: &str) -> Result<ScalarFunction1D, CliError> {
    if let Some(f) = presets::boundary_preset(spec) {
        return Ok(f);
    }
    if spec.ends_with(".csv") {
        return load_sampled_function(Path::new(spec));
    }
    Err(CliError::UnknownDatum(spec.to_string()))
}

fn resolve_weight(spec: &str) -> Result<Weight, CliError> {
    if spec.ends_with(".csv") {
        return load_weight_csv(Path::new(spec));
    }
    Ok(Weight::from_spec(spec)?)
}

fn exit_code_for_solver(e: &SolverError) -> i32 {
    match e {
        SolverError::BadBoundary { .. } | SolverError::NonzeroH(_) => EXIT_CONFIG,
        SolverError::Inconclusive(_, _) => EXIT_NUMERICAL,
        SolverError::Basis(_) => EXIT_NUMERICAL,
    }
}

fn exit_code_for_weight(e: &WeightError) -> i32 {
    match e {
        WeightError::BadSpec(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    if !(cfg.p > 1.0 && cfg.p.is_finite()) {
        return Err(CliError::BadConfig(format!("p = {} outside (1, inf)", cfg.p)));
    }
    if cfg.n_modes < 1 {
        return Err(CliError::BadConfig("N must be at least 1".into()));
    }
    let (nx, ny, xi) = cfg.grid;
    if nx < 3 || ny < 3 || !(xi > 0.0) {
        return Err(CliError::BadConfig(format!("bad grid {nx}x{ny}x{xi}")));
    }
    if !(cfg.tol > 0.0) {
        return Err(CliError::BadConfig("tol must be positive".into()));
    }
    if cfg.resolution < 8 {
        return Err(CliError::BadConfig("resolution must be at least 8".into()));
    }
    Ok(())
}

fn resolve_lambda(cfg: &RunConfig, datum: &BoundaryDatum) -> Result<(f64, Option<solver::LambdaCalibration>), SolverError> {
    match cfg.lambda_mode {
        LambdaMode::PaperHalf => Ok((0.5, None)),
        LambdaMode::Explicit(v) => Ok((v, None)),
        LambdaMode::Calibrated => {
            let cal = solver::calibrate_lambda(datum, &solver::calibration_grid())?;
            Ok((cal.lambda, Some(cal)))
        }
    }
}

/// Execute a run; returns the process exit code and writes artifacts under
/// the configured output directory.
pub fn run(cfg: &RunConfig) -> i32 {
    if let Err(e) = validate(cfg) {
        eprintln!("config error: {e}");
        return EXIT_CONFIG;
    }
    match dispatch(cfg) {
        Ok(code) => code,
        Err(RunFailure::Config(msg)) => {
            eprintln!("config error: {msg}");
            EXIT_CONFIG
        }
        Err(RunFailure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERICAL
        }
        Err(RunFailure::Io(msg)) => {
            eprintln!("io error: {msg}");
            EXIT_NUMERICAL
        }
    }
}

enum RunFailure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl From<CliError> for RunFailure {
    fn from(e: CliError) -> Self {
        match &e {
            CliError::Weight(w) => match exit_code_for_weight(w) {
                EXIT_CONFIG => RunFailure::Config(e.to_string()),
                _ => RunFailure::Numerical(e.to_string()),
            },
            CliError::Io(_) => RunFailure::Io(e.to_string()),
            _ => RunFailure::Config(e.to_string()),
        }
    }
}

impl From<report::ReportError> for RunFailure {
    fn from(e: report::ReportError) -> Self {
        RunFailure::Io(e.to_string())
    }
}

impl From<SolverError> for RunFailure {
    fn from(e: SolverError) -> Self {
        match exit_code_for_solver(&e) {
            EXIT_CONFIG => RunFailure::Config(e.to_string()),
            _ => RunFailure::Numerical(e.to_string()),
        }
    }
}

impl From<WeightError> for RunFailure {
    fn from(e: WeightError) -> Self {
        match exit_code_for_weight(&e) {
            EXIT_CONFIG => RunFailure::Config(e.to_string()),
            _ => RunFailure::Numerical(e.to_string()),
        }
    }
}

impl From<basis::BasisError> for RunFailure {
    fn from(e: basis::BasisError) -> Self {
        RunFailure::Numerical(e.to_string())
    }
}

impl From<verify::VerifyError> for RunFailure {
    fn from(e: verify::VerifyError) -> Self {
        RunFailure::Numerical(e.to_string())
    }
}

fn dispatch(cfg: &RunConfig) -> Result<i32, RunFailure> {
    match cfg.command {
        CommandKind::Solve => run_solve(cfg),
        CommandKind::Verify => run_verify(cfg),
        CommandKind::Weight => run_weight(cfg),
        CommandKind::Basis => run_basis(cfg),
        CommandKind::Yh => run_yh(cfg),
    }
}

fn run_solve(cfg: &RunConfig) -> Result<i32, RunFailure> {
    let f = resolve_datum(&cfg.f_spec)?;
    let datum = BoundaryDatum::new(f);
    let (lambda, cal) = resolve_lambda(cfg, &datum)?;
    if let Some(cal) = &cal {
        for (lam, res) in &cal.residuals {
            println!("calibration: lambda={lam} fd_residual={res:.3e}");
        }
    }
    let sol = solver::solve(&datum, cfg.n_modes, lambda, cfg.tol)?;
    let (nx, ny, xi) = cfg.grid;
    let grid = make_grid(nx, ny, xi)?;
    report::atomic_write(&cfg.out_dir.join("solution.json"), &report::solution_to_json(&sol))?;
    report::atomic_write(&cfg.out_dir.join("field.csv"), &report::field_csv(&sol, &grid))?;
    println!(
        "solve: f={} N={} lambda={} tail_estimate(0)={:.3e} -> solution.json, field.csv",
        cfg.f_spec,
        cfg.n_modes,
        lambda,
        sol.tail_estimate(0.0)
    );
    Ok(EXIT_OK)
}

fn make_grid(nx: usize, ny: usize, xi: f64) -> Result<Grid2D, RunFailure> {
    crate::quad::make_uniform_grid2d(nx, ny, xi).map_err(|e| RunFailure::Config(e.to_string()))
}

fn run_verify(cfg: &RunConfig) -> Result<i32, RunFailure> {
    let f = resolve_datum(&cfg.f_spec)?;
    let w = resolve_weight(&cfg.weight_spec)?;
    let datum = BoundaryDatum::new(f.clone());
    let (lambda, cal) = resolve_lambda(cfg, &datum)?;
    if let Some(cal) = &cal {
        for (lam, res) in &cal.residuals {
            println!("calibration: lambda={lam} fd_residual={res:.3e}");
        }
    }
    let sol = solver::solve(&datum, cfg.n_modes, lambda, cfg.tol)?;
    let (nx, ny, xi) = cfg.grid;
    if nx < 3 || ny < 3 {
        return Err(RunFailure::Config("verification grid too small".into()));
    }
    let grid = verify::verification_grid(nx, ny, 1e-3, xi);
    let mut rep = verify::strong_solution_check(&sol, &f, &w, cfg.p, xi, &grid, cfg.tol.max(1e-10))?;
    let battery = verify::standard_battery(2.0_f64.min(xi));
    rep.weak_residuals = verify::weak_form_residual(&sol, datum.h.as_ref(), &battery, 1e-8)?;
    report::atomic_write(&cfg.out_dir.join("report.json"), &report::residual_report_to_json(&rep))?;

    let weak_worst = rep.weak_residuals.iter().cloned().fold(0.0f64, f64::max);
    let lap_gate = 1e-8 + rep.tail_estimate;
    let mut ok = true;
    let mut check = |label: &str, pass: bool, value: String| {
        println!("verify: {label} = {value} [{}]", if pass { "ok" } else { "VIOLATION" });
        ok &= pass;
    };
    check("periodicity_max", rep.periodicity_max <= 1e-12, format!("{:.3e}", rep.periodicity_max));
    check("ux_at_0_max", rep.ux_at_0_max <= 1e-12, format!("{:.3e}", rep.ux_at_0_max));
    check(
        "laplacian_max",
        rep.laplacian_max <= lap_gate,
        format!("{:.3e} (gate {:.3e})", rep.laplacian_max, lap_gate),
    );
    check("laplacian_order", rep.laplacian_order >= 1.9, format!("{:.3}", rep.laplacian_order));
    check("weak_residual_max", weak_worst <= 1e-7, format!("{weak_worst:.3e}"));
    println!("verify: report.json written");
    Ok(if ok { EXIT_OK } else { EXIT_CONTRACT })
}

fn run_weight(cfg: &RunConfig) -> Result<i32, RunFailure> {
    let w = resolve_weight(&cfg.weight_spec)?;
    let rep = weights::full_report(&w, cfg.p, cfg.resolution)?;
    report::atomic_write(
        &cfg.out_dir.join("weight.json"),
        &report::weight_report_to_json(&rep, w.descriptor()),
    )?;
    println!(
        "weight: {} p={} ap={:.6} in_ap={} rh_delta={:?} -> weight.json",
        w.descriptor(),
        cfg.p,
        rep.ap_constant,
        rep.in_ap,
        rep.rh_delta
    );
    Ok(EXIT_OK)
}

fn run_basis(cfg: &RunConfig) -> Result<i32, RunFailure> {
    let gram = basis::biortho_gram(cfg.n_modes, cfg.tol)?;
    let dev = gram.max_identity_deviation();
    report::atomic_write(&cfg.out_dir.join("gram.csv"), &report::gram_csv(&gram))?;
    println!("basis: N={} max identity deviation {dev:.3e} -> gram.csv", cfg.n_modes);
    Ok(if dev <= 1e-8 { EXIT_OK } else { EXIT_CONTRACT })
}

fn run_yh(cfg: &RunConfig) -> Result<i32, RunFailure> {
    let corpus = presets::smooth_corpus();
    let mut rows = Vec::new();
    let mut all_finite = true;
    for f in &corpus {
        for &p in &[1.25, 1.5, 2.0] {
            let r = basis::young_hausdorff_ratio(f, p, cfg.n_modes.max(32), cfg.tol)?;
            let ratio = r.ratio();
            if let Some(v) = ratio {
                all_finite &= v.is_finite();
            }
            rows.push((f.name().to_string(), p, r.lhs, r.rhs_norm, ratio));
        }
    }
    report::atomic_write(&cfg.out_dir.join("yh.csv"), &report::yh_table_csv(&rows))?;
    println!("yh: {} rows -> yh.csv", rows.len());
    Ok(if all_finite { EXIT_OK } else { EXIT_CONTRACT })
}
