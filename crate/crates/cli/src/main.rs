//! `cpop`: sample confined equilateral polygons and reproduce their
//! statistics from the command line.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "cpop", version, about = "Random equilateral polygons in rooted spherical confinement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample confined polygons and write their vertices.
    Sample(SampleArgs),
    /// Sample diagonal vectors (points of the confined polytope).
    SampleDiagonals(SampleDiagonalsArgs),
    /// Convert between vertex files and action-angle CSV.
    Coords(CoordsArgs),
    /// Entringer numbers or linear-extension counts e(Z_{n,i}).
    Tables(TablesArgs),
    /// Empirical chord-length means against the exact values.
    Chords(ChordsArgs),
    /// Mean turning angle and total curvature for a list of n.
    CurvatureScan(CurvatureScanArgs),
    /// Rejection rate and mean attempts of the diagonal sampler.
    RejectionStats(RejectionStatsArgs),
    /// The asymptotic expected turning angle.
    IntegratePhi(IntegratePhiArgs),
    /// Least-squares fit of mean turning angle to a + b/n.
    Fit(FitArgs),
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Output file; a manifest is written next to it as <out>.manifest.json.
    /// Defaults to standard output (no manifest).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Sampling {
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results depend on (seed, threads).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    /// Number of edges (at least 4).
    #[arg(long)]
    n: usize,
    /// Number of polygons.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[command(flatten)]
    #[serde(flatten)]
    sampling: Sampling,
    /// Vertex file format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct SampleDiagonalsArgs {
    /// Number of polygon edges; vectors have n - 3 coordinates.
    #[arg(long)]
    n: usize,
    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[command(flatten)]
    #[serde(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CoordsTarget {
    ActionAngle,
    Vertices,
}

#[derive(Args, Debug, Serialize)]
struct CoordsArgs {
    /// Conversion target.
    #[arg(long, value_enum)]
    to: CoordsTarget,
    /// Input file: vertices (for --to action-angle) or action-angle CSV.
    #[arg(long)]
    input: PathBuf,
    /// Format of the vertex file, read or written.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TableKind {
    Entringer,
    Extensions,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Route {
    /// Compute both ways and fail unless they agree.
    Both,
    /// Closed form (Entringer) or splitting formula (extensions).
    Formula,
    /// Triangle recurrence (Entringer) or principal-number recurrence.
    Recurrence,
}

#[derive(Args, Debug, Serialize)]
struct TablesArgs {
    /// Largest n in the table.
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    /// Which table.
    #[arg(long, value_enum, default_value_t = TableKind::Extensions)]
    kind: TableKind,
    /// Computation route.
    #[arg(long, value_enum, default_value_t = Route::Both)]
    route: Route,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct ChordsArgs {
    /// Number of edges.
    #[arg(long)]
    n: usize,
    /// Number of samples.
    #[arg(long, default_value_t = 100_000)]
    count: u64,
    #[command(flatten)]
    #[serde(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct CurvatureScanArgs {
    /// Comma-separated edge counts, e.g. 10,50,100.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Polygons per n.
    #[arg(long, default_value_t = 100_000)]
    count: u64,
    #[command(flatten)]
    #[serde(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct RejectionStatsArgs {
    /// Smallest n.
    #[arg(long, default_value_t = 4)]
    n_min: usize,
    /// Largest n.
    #[arg(long, default_value_t = 50)]
    n_max: usize,
    /// Samples per n.
    #[arg(long, default_value_t = 1_000_000)]
    count: u64,
    #[command(flatten)]
    #[serde(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    /// Tensor Gauss-Legendre, refined until successive levels agree.
    Gl,
    /// Randomly shifted Kronecker quasi-Monte Carlo.
    Qmc,
    /// Both; fails unless they agree within --agree.
    Both,
}

#[derive(Args, Debug, Serialize)]
struct IntegratePhiArgs {
    /// Gauss-Legendre stopping tolerance between successive levels.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    /// Quadrature method.
    #[arg(long, value_enum, default_value_t = Method::Gl)]
    method: Method,
    /// Quasi-Monte Carlo points per shift.
    #[arg(long, default_value_t = 100_000_000)]
    qmc_points: u64,
    /// Number of random shifts.
    #[arg(long, default_value_t = 3)]
    qmc_shifts: usize,
    /// Seed for the random shifts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum allowed difference between the methods with --method both.
    #[arg(long, default_value_t = 1e-4)]
    agree: f64,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct FitArgs {
    /// CSV with columns n and mean_turning_angle.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
