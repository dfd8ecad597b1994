use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fairpart::curves::perimeter_graph;
use fairpart::ensemble::{run_ensemble, RunConfig};
use fairpart::{fair_partition, io, svg, Error, SolverConfig};

/// Fair partitions of convex polygons: N convex pieces of equal area and
/// equal perimeter, for N a power of two.
#[derive(Parser)]
#[command(name = "fairpart", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partition a polygon into N fair pieces and write the result JSON.
    Partition(PartitionArgs),
    /// Dump the area-imbalance profile and fair ranges of a polygon.
    Alpha(AlphaArgs),
    /// Dump the rotating-bisector perimeter graph for external plotting.
    Curve(CurveArgs),
    /// Run the solvers over a seeded batch of random polygons.
    Ensemble(EnsembleArgs),
}

#[derive(Args)]
struct PartitionArgs {
    /// Piece count; a power of two >= 2.
    #[arg(long)]
    n: u64,
    /// Input polygon JSON: {"vertices": [[x, y], ...]}.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path for the result JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG rendering of the partition.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Rotation grid size (>= 64).
    #[arg(long, default_value_t = SolverConfig::default().theta_samples)]
    theta_samples: usize,
    /// Verification tolerance override for both relative spreads.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct AlphaArgs {
    /// Input polygon JSON: {"vertices": [[x, y], ...]}.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path for the profile JSON.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG of the polygon with one chord per fair range.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    /// Input polygon JSON: {"vertices": [[x, y], ...]}.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output path for the graph JSON.
    #[arg(long)]
    out: PathBuf,
    /// Rotation grid size (>= 64).
    #[arg(long, default_value_t = SolverConfig::default().theta_samples)]
    theta_samples: usize,
}

#[derive(Args)]
struct EnsembleArgs {
    /// Number of polygons to generate and solve.
    #[arg(long)]
    count: usize,
    /// Inclusive vertex-count range, e.g. 3..12.
    #[arg(long, value_parser = parse_vertex_range)]
    vertices: (usize, usize),
    /// Piece count; a power of two >= 2.
    #[arg(long)]
    n: u64,
    /// Base seed for the polygon generator.
    #[arg(long)]
    seed: u64,
    /// Output path for the batch report JSON.
    #[arg(long)]
    out: PathBuf,
    /// Rotation grid size (>= 64).
    #[arg(long, default_value_t = SolverConfig::default().theta_samples)]
    theta_samples: usize,
    /// Verification tolerance override for both relative spreads.
    #[arg(long)]
    tol: Option<f64>,
}

fn parse_vertex_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {text:?}"))?;
    let lo = lo.trim().parse::<usize>().map_err(|e| format!("bad LO: {e}"))?;
    let hi = hi.trim().parse::<usize>().map_err(|e| format!("bad HI: {e}"))?;
    Ok((lo, hi))
}

/// 1 is an input problem, 2 a solver giving up on valid input.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::DegeneratePolygon(_)
        | Error::NotConvex { .. }
        | Error::SelfWinding
        | Error::UnsupportedPieceCount { .. }
        | Error::InvalidInput(_) => 1,
        Error::DegenerateChord { .. }
        | Error::AmbiguousContinuation { .. }
        | Error::NoSpanningComponent { .. }
        | Error::NoIntersection
        | Error::BudgetExhausted { .. }
        | Error::VerificationFailed(_) => 2,
    }
}

fn solver_config(theta_samples: usize, tol: Option<f64>) -> Result<SolverConfig, Error> {
    if theta_samples < 64 {
        return Err(Error::InvalidInput(format!(
            "theta samples must be at least 64, got {theta_samples}"
        )));
    }
    let mut cfg = SolverConfig { theta_samples, ..SolverConfig::default() };
    if let Some(tol) = tol {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        cfg.area_tol = tol;
        cfg.perim_tol = tol;
    }
    Ok(cfg)
}

fn cmd_partition(args: &PartitionArgs) -> Result<u8, Error> {
    let cfg = solver_config(args.theta_samples, args.tol)?;
    let poly = io::read_polygon(&args.input)?;
    let result = fair_partition(&poly, args.n, &cfg)?;
    io::write_json(&args.out, &result)?;
    if let Some(path) = &args.svg {
        io::write_text(path, &svg::partition_svg(&poly, &result))?;
    }
    let (da, dp) = result.residuals();
    println!(
        "{} pieces, area spread {da:.3e}, perimeter spread {dp:.3e} -> {}",
        result.pieces.len(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_alpha(args: &AlphaArgs) -> Result<u8, Error> {
    let poly = io::read_polygon(&args.input)?;
    let dump = io::alpha_dump(&poly);
    io::write_json(&args.out, &dump)?;
    if let Some(path) = &args.svg {
        io::write_text(path, &svg::alpha_svg(&poly))?;
    }
    println!(
        "{} profile windows, {} fair ranges -> {}",
        dump.profile.len(),
        dump.ranges.len(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_curve(args: &CurveArgs) -> Result<u8, Error> {
    if args.theta_samples < 64 {
        return Err(Error::InvalidInput(format!(
            "theta samples must be at least 64, got {}",
            args.theta_samples
        )));
    }
    let poly = io::read_polygon(&args.input)?;
    let graph = perimeter_graph(&poly, args.theta_samples)?;
    let dump = io::curve_dump(&graph);
    io::write_json(&args.out, &dump)?;
    println!(
        "{} branches, {} betas -> {}",
        dump.branches.len(),
        dump.betas.len(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_ensemble(args: &EnsembleArgs) -> Result<u8, Error> {
    let solver = solver_config(args.theta_samples, args.tol)?;
    let cfg = RunConfig {
        n: args.n,
        count: args.count,
        vertices: args.vertices,
        seed: args.seed,
        theta_samples: solver.theta_samples,
        area_tol: solver.area_tol,
        perim_tol: solver.perim_tol,
    };
    let report = run_ensemble(&cfg)?;
    io::write_json(&args.out, &report)?;
    println!(
        "success rate {:.3}, parity violations {} -> {}",
        report.success_rate,
        report.parity_violations,
        args.out.display()
    );
    Ok(if report.all_good() { 0 } else { 2 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here with non-error kinds.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FAIRPART_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let run = match &cli.cmd {
        Cmd::Partition(args) => cmd_partition(args),
        Cmd::Alpha(args) => cmd_alpha(args),
        Cmd::Curve(args) => cmd_curve(args),
        Cmd::Ensemble(args) => cmd_ensemble(args),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
