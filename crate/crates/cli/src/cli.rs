//! Command-line definitions.

use std::path::PathBuf;

use acpose::solvers::SolverKind;
use acpose::synth::RobustMode;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "acpose",
    version,
    about = "Planar camera motion from affine correspondences",
    long_about = "Estimates planar relative camera motion (yaw and translation direction, \
                  optionally a common focal length) from affine correspondences, generates \
                  synthetic correspondence files and runs noise-sweep benchmarks."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic correspondence file plus its ground truth.
    Generate(GenerateArgs),
    /// Estimate motion from a correspondence file.
    Estimate(EstimateArgs),
    /// Run the synthetic noise-sweep benchmark and emit an aggregate table.
    Benchmark(BenchmarkArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Gaussian pixel noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Number of plane points (at least 4).
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ground-truth motion as "alpha,beta" in radians.
    #[arg(long, value_parser = parse_motion, allow_hyphen_values = true)]
    pub motion: (f64, f64),
    /// Common focal length in pixels.
    #[arg(long, default_value_t = 600.0)]
    pub focal: f64,
    /// Output correspondence file (pixel frame with intrinsics header).
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth output path (default: "<out>.gt").
    #[arg(long)]
    pub gt: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Input correspondence file.
    #[arg(long)]
    pub input: PathBuf,
    /// Solver: 1ac, 1acf, 3pc or 2pc.
    #[arg(long, value_parser = parse_solver)]
    pub solver: SolverKind,
    /// Robust layer: none, hist or ransac.
    #[arg(long, value_parser = parse_robust, default_value = "none")]
    pub robust: RobustMode,
    /// Inlier threshold in pixels.
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    /// RANSAC confidence.
    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,
    /// RANSAC iteration cap.
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Histogram bin width in degrees.
    #[arg(long, default_value_t = 0.5)]
    pub bin_width_deg: f64,
    /// Residual scale of the histogram vote weight.
    #[arg(long, default_value_t = 1e-3)]
    pub residual_scale: f64,
    /// RNG seed (RANSAC sampling).
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Write results here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchmarkArgs {
    /// Comma-separated noise levels in pixels, e.g. "0,0.25,0.5".
    #[arg(long, value_parser = parse_f64_list)]
    pub sigmas: std::vec::Vec<f64>,
    /// Trials per noise level.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Comma-separated solvers, e.g. "1ac,3pc".
    #[arg(long, value_parser = parse_solver_list)]
    pub solvers: std::vec::Vec<SolverKind>,
    /// Master RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Points per scene.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Common focal length in pixels.
    #[arg(long, default_value_t = 600.0)]
    pub focal: f64,
    /// Planarity corruption sigma in degrees (0 = exactly planar).
    #[arg(long, default_value_t = 0.0)]
    pub corrupt_deg: f64,
    /// Robust layer applied per trial: none, hist or ransac.
    #[arg(long, value_parser = parse_robust, default_value = "none")]
    pub robust: RobustMode,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_motion(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected 'alpha,beta' in radians".into());
    }
    let alpha = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("invalid alpha '{}'", parts[0]))?;
    let beta = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("invalid beta '{}'", parts[1]))?;
    Ok((alpha, beta))
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse()
}

fn parse_robust(s: &str) -> Result<RobustMode, String> {
    s.parse()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number '{v}'"))
        })
        .collect()
}

fn parse_solver_list(s: &str) -> Result<Vec<SolverKind>, String> {
    s.split(',').map(|v| v.trim().parse::<SolverKind>()).collect()
}
