//! Command-line front end. One run per invocation; artifacts land in the
//! output directory; worker parallelism is capped by STRIPH_THREADS.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use striph::cli::{self, CommandKind, LambdaMode, RunConfig};

#[derive(Parser)]
#[command(
    name = "striph",
    about = "Series solver and verification toolkit for a non-local Laplace problem on a half-strip",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for a boundary datum and export the sampled field
    Solve(CommonArgs),
    /// Solve, then measure every residual and write a report
    Verify(CommonArgs),
    /// Muckenhoupt analysis and reverse-Hölder probe of a weight
    Weight(CommonArgs),
    /// Pairing matrix of the two function systems
    Basis(CommonArgs),
    /// Coefficient-norm ratio table over the smooth corpus
    Yh(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Boundary datum: preset (xsinx | sinx | poly) or a .csv path with header x,value
    #[arg(long = "f", default_value = "xsinx")]
    f: String,
    /// Weight: one | power:alpha=<a> | shifted:c=<c> | .csv path with header x,nu
    #[arg(long, default_value = "one")]
    weight: String,
    /// Lebesgue exponent in (1, inf)
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Truncation order (modes 1..=N)
    #[arg(long = "N", default_value_t = 128)]
    n: usize,
    /// Growth multiplier: paper_half | calibrated | explicit value
    #[arg(long, default_value = "calibrated")]
    lambda: String,
    /// Evaluation grid as NxMxXI, e.g. 65x65x4
    #[arg(long, default_value = "65x65x4")]
    grid: String,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Interval-family fineness for weight analysis
    #[arg(long, default_value_t = 128)]
    resolution: usize,
    /// Output directory for artifacts
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn build_config(kind: CommandKind, args: &CommonArgs) -> Result<RunConfig, String> {
    let lambda_mode = LambdaMode::parse(&args.lambda).map_err(|e| e.to_string())?;
    let grid = cli::parse_grid(&args.grid).map_err(|e| e.to_string())?;
    Ok(RunConfig {
        command: kind,
        f_spec: args.f.clone(),
        weight_spec: args.weight.clone(),
        p: args.p,
        n_modes: args.n,
        lambda_mode,
        grid,
        tol: args.tol,
        out_dir: args.out.clone(),
        resolution: args.resolution,
    })
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("STRIPH_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let (kind, args) = match &cli.cmd {
        Cmd::Solve(a) => (CommandKind::Solve, a),
        Cmd::Verify(a) => (CommandKind::Verify, a),
        Cmd::Weight(a) => (CommandKind::Weight, a),
        Cmd::Basis(a) => (CommandKind::Basis, a),
        Cmd::Yh(a) => (CommandKind::Yh, a),
    };
    let cfg = match build_config(kind, args) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(cli::EXIT_CONFIG as u8);
        }
    };
    ExitCode::from(cli::run(&cfg) as u8)
}
