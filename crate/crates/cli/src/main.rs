use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sonic_cli::{init_threads, run, CliError, Overrides, RunConfig};

/// Solve sonic-curve Goursat problems for the steady 2-D Euler equations and
/// the Tricomi model problem.
#[derive(Debug, Parser)]
#[command(name = "sonic", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH", required_unless_present = "case")]
    config: Option<PathBuf>,
    /// Built-in case: exact1, exact2, zero, smoke, pressure or polynomial.
    #[arg(long, value_name = "NAME", conflicts_with = "config")]
    case: Option<String>,
    #[arg(long, value_name = "PATH")]
    out_dir: Option<PathBuf>,
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    #[arg(long, value_name = "N")]
    max_iter: Option<usize>,
    /// Number of t-steps and nodes per level.
    #[arg(long, value_name = "Nt,Nr", value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    #[arg(long, value_name = "X")]
    delta: Option<f64>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected Nt,Nr")?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn main_inner(args: Args) -> Result<(), CliError> {
    init_threads()?;
    let mut cfg = match (&args.config, &args.case) {
        (Some(path), _) => RunConfig::from_file(path)?,
        (None, Some(name)) => RunConfig::for_case(name)?,
        (None, None) => unreachable!("clap requires one of --config and --case"),
    };
    cfg.apply(&Overrides {
        out_dir: args.out_dir,
        tol: args.tol,
        max_iter: args.max_iter,
        grid: args.grid,
        delta: args.delta,
    })?;
    let outcome = run(&cfg)?;
    // A closed stdout must not turn a finished run into a failure.
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", outcome.summary);
    for f in &outcome.files {
        let _ = writeln!(out, "  wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
