//! Subcommand implementations and the process exit-code contract:
//! 2 = invalid flags or request, 3 = scene geometry rejection,
//! 4 = input file missing or unparsable, 5 = no model / no votes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use acpose::geometry::{AffineCorrespondence, CameraIntrinsics, PlanarMotion};
use acpose::robust::{
    candidate_residual_px, count_inliers, histogram_vote, ransac_estimate, select_best_supported,
    RansacConfig, RobustError, VoteConfig,
};
use acpose::solvers::SolverKind;
use acpose::synth::{generate_scene, RobustMode, SceneConfig, SynthError};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::cli::{BenchmarkArgs, Cli, Command, EstimateArgs, GenerateArgs};
use crate::format::{
    write_benchmark, write_results, CorrespondenceFile, FormatError, Frame, GroundTruth,
    ResultRecord,
};

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or an invalid request for the given input (exit 2).
    Usage(String),
    /// Scene generation could not find valid geometry (exit 3).
    Geometry(String),
    /// Input file missing or unparsable (exit 4).
    Input(String),
    /// Estimation produced no model or no votes (exit 5).
    NoSolution(String),
    /// Output I/O failure (exit 1).
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Geometry(m)
            | CliError::Input(m)
            | CliError::NoSolution(m)
            | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Input(_) => 4,
            CliError::NoSolution(_) => 5,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(err: FormatError) -> Self {
        CliError::Input(err.to_string())
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Estimate(args) => estimate(args),
        Command::Benchmark(args) => benchmark(args),
    }
}

fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let config = SceneConfig {
        focal: args.focal,
        points: args.points,
        noise_sigma_px: args.sigma,
        seed: args.seed,
        ..SceneConfig::default()
    };
    let motion = PlanarMotion::new(args.motion.0, args.motion.1);
    let scene = generate_scene(&config, &motion).map_err(|e| match e {
        SynthError::InvalidConfig(msg) => CliError::Usage(msg),
        SynthError::GeometryRejection => CliError::Geometry(e.to_string()),
    })?;

    let file = CorrespondenceFile {
        frame: Frame::Pixel,
        intrinsics: Some(scene.intrinsics),
        correspondences: scene.pixel.clone(),
    };
    file.save(&args.out)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", args.out.display())))?;

    let gt_path = args.gt.unwrap_or_else(|| default_gt_path(&args.out));
    GroundTruth {
        alpha: motion.alpha(),
        beta: motion.beta(),
        focal: args.focal,
    }
    .save(&gt_path)
    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", gt_path.display())))?;
    Ok(())
}

pub fn default_gt_path(out: &std::path::Path) -> PathBuf {
    let mut os = out.as_os_str().to_os_string();
    os.push(".gt");
    PathBuf::from(os)
}

/// Correspondences converted to the frame `solver` consumes.
fn solver_input(
    file: &CorrespondenceFile,
    solver: SolverKind,
) -> Result<Vec<AffineCorrespondence>, CliError> {
    match (solver.semi_calibrated(), file.frame) {
        (false, Frame::Normalized) => Ok(file.correspondences.clone()),
        (false, Frame::Pixel) => {
            let intr = file.intrinsics.ok_or_else(|| {
                CliError::Usage(
                    "pixel-frame input needs an intrinsics header for calibrated solvers".into(),
                )
            })?;
            Ok(file.correspondences.iter().map(|ac| normalize(ac, &intr)).collect())
        }
        (true, Frame::Pixel) => {
            let intr = file.intrinsics.ok_or_else(|| {
                CliError::Usage(
                    "pixel-frame input needs an intrinsics header to center the principal point"
                        .into(),
                )
            })?;
            Ok(file
                .correspondences
                .iter()
                .map(|ac| AffineCorrespondence::new(intr.center(ac.p1), intr.center(ac.p2), ac.a))
                .collect())
        }
        (true, Frame::Normalized) => Err(CliError::Usage(
            "the 1acf solver needs pixel-frame input (it estimates the focal length)".into(),
        )),
    }
}

fn normalize(ac: &AffineCorrespondence, intr: &CameraIntrinsics) -> AffineCorrespondence {
    // A_normalized = C^-1_2x2 A C_2x2 (both cameras share the intrinsics).
    let a = [
        ac.a[0],
        ac.a[1] * intr.fy / intr.fx,
        ac.a[2] * intr.fx / intr.fy,
        ac.a[3],
    ];
    AffineCorrespondence::new(intr.normalize(ac.p1), intr.normalize(ac.p2), a)
}

fn estimate(args: EstimateArgs) -> Result<(), CliError> {
    if args.threshold <= 0.0 {
        return Err(CliError::Usage("--threshold must be positive".into()));
    }
    if !(0.0 < args.confidence && args.confidence < 1.0) {
        return Err(CliError::Usage("--confidence must be in (0, 1)".into()));
    }
    let file = CorrespondenceFile::load(&args.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let acs = solver_input(&file, args.solver)?;

    let focal_px = file.intrinsics.map(|c| c.fx).unwrap_or(1.0);
    let ransac_config = RansacConfig {
        confidence: args.confidence,
        threshold_px: args.threshold,
        max_iterations: args.max_iters,
        focal_px,
    };
    let vote_config = VoteConfig {
        bin_width_rad: args.bin_width_deg.to_radians(),
        residual_scale: args.residual_scale,
        ..VoteConfig::default()
    };

    let records = match args.robust {
        RobustMode::None => {
            let m = args.solver.sample_size();
            let mut records = Vec::new();
            for chunk in acs.chunks_exact(m) {
                let start = Instant::now();
                let Ok(candidates) = args.solver.solve(chunk) else {
                    continue;
                };
                let (best, _, _) = select_best_supported(&candidates, chunk, &ransac_config);
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                records.push(result_record(
                    args.solver,
                    &best.motion,
                    &acs,
                    &ransac_config,
                    wall_ms,
                ));
            }
            if records.is_empty() {
                return Err(CliError::NoSolution(
                    "no minimal sample produced a model".into(),
                ));
            }
            records
        }
        RobustMode::Histogram => {
            let start = Instant::now();
            let (motion, _) =
                histogram_vote(&acs, args.solver, &vote_config).map_err(robust_error)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            vec![result_record(args.solver, &motion, &acs, &ransac_config, wall_ms)]
        }
        RobustMode::Ransac => {
            let mut rng = StdRng::seed_from_u64(args.seed);
            let start = Instant::now();
            let result =
                ransac_estimate(&acs, args.solver, &ransac_config, &mut rng).map_err(robust_error)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            vec![result_record(
                args.solver,
                &result.candidate.motion,
                &acs,
                &ransac_config,
                wall_ms,
            )]
        }
    };

    write_output(args.out.as_deref(), |out| write_results(out, &records))
}

fn robust_error(err: RobustError) -> CliError {
    match err {
        RobustError::NoModel | RobustError::NoVotes => CliError::NoSolution(err.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn result_record(
    solver: SolverKind,
    motion: &PlanarMotion,
    acs: &[AffineCorrespondence],
    config: &RansacConfig,
    wall_ms: f64,
) -> ResultRecord {
    let (inliers, mask) = count_inliers(motion, acs, config);
    let mut residual_sum = 0.0;
    let mut residual_count = 0usize;
    for (ac, &keep) in acs.iter().zip(&mask) {
        if !keep {
            continue;
        }
        if let Ok(r) = candidate_residual_px(motion, ac, config.focal_px) {
            residual_sum += r;
            residual_count += 1;
        }
    }
    ResultRecord {
        solver: solver.name().to_string(),
        alpha: motion.alpha(),
        beta: motion.beta(),
        focal: motion.focal(),
        inliers,
        mean_residual_px: if residual_count > 0 {
            residual_sum / residual_count as f64
        } else {
            0.0
        },
        wall_ms,
    }
}

fn benchmark(args: BenchmarkArgs) -> Result<(), CliError> {
    if args.sigmas.is_empty() || args.solvers.is_empty() {
        return Err(CliError::Usage(
            "--sigmas and --solvers must be non-empty".into(),
        ));
    }
    if args.robust == RobustMode::Histogram {
        if let Some(bad) = args.solvers.iter().find(|s| s.sample_size() != 1) {
            return Err(CliError::Usage(format!(
                "histogram voting needs a one-point solver, not {bad}"
            )));
        }
    }
    let config = SceneConfig {
        focal: args.focal,
        points: args.points,
        planarity_sigma_deg: args.corrupt_deg,
        trials: args.trials,
        seed: args.seed,
        ..SceneConfig::default()
    };
    let rows = acpose::synth::run_sweep(&config, &args.solvers, &args.sigmas, args.robust)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    write_output(args.out.as_deref(), |out| write_benchmark(out, &rows))
}

fn write_output<F>(path: Option<&std::path::Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), FormatError>,
{
    match path {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            write(&mut out).map_err(|e| CliError::Io(e.to_string()))?;
            out.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            write(&mut out).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
