//! End-to-end tests of the `acpose` binary: exit codes, file round trips
//! and the documented CSV schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

use acpose::geometry::{wrap_angle, EssentialMatrix};
use acpose::solvers::{affinity_rows, epipolar_row, trig_vector};
use acpose_cli::format::{
    read_results, CorrespondenceFile, Frame, GroundTruth, BENCHMARK_COLUMNS, RESULT_COLUMNS,
};

static COUNTER: AtomicU32 = AtomicU32::new(0);

fn temp_path(name: &str) -> PathBuf {
    let id = COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!(
        "acpose-cli-test-{}-{id}-{name}",
        std::process::id()
    ))
}

fn acpose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acpose"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn generate_scene_file(motion: &str, seed: u64, sigma: f64, points: usize) -> (PathBuf, PathBuf) {
    let out = temp_path("scene.csv");
    let gt = temp_path("scene.gt");
    let output = acpose(&[
        "generate",
        "--sigma",
        &sigma.to_string(),
        "--points",
        &points.to_string(),
        "--seed",
        &seed.to_string(),
        "--motion",
        motion,
        "--focal",
        "600",
        "--out",
        out.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "generate failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    (out, gt)
}

#[test]
fn generated_zero_noise_file_satisfies_all_constraints() {
    let (out, gt_path) = generate_scene_file("0.2,0.9", 11, 0.0, 50);
    let file = CorrespondenceFile::load(&out).unwrap();
    assert_eq!(file.frame, Frame::Pixel);
    assert_eq!(file.correspondences.len(), 50);
    let intr = file.intrinsics.unwrap();
    let gt = GroundTruth::load(&gt_path).unwrap();
    let motion = gt.motion();
    let e = EssentialMatrix::from_motion(&motion);
    let x = trig_vector(motion.alpha(), motion.beta());
    for ac in &file.correspondences {
        let q1 = intr.normalize(ac.p1);
        let q2 = intr.normalize(ac.p2);
        let normalized = acpose::AffineCorrespondence::new(q1, q2, ac.a);
        assert!(e.epipolar_residual(&q1, &q2).abs() < 1e-9);
        assert!((epipolar_row(&normalized) * x)[(0, 0)].abs() < 1e-9);
        for row in affinity_rows(&normalized) {
            assert!((row * x)[(0, 0)].abs() < 1e-9);
        }
    }
    std::fs::remove_file(out).ok();
    std::fs::remove_file(gt_path).ok();
}

#[test]
fn same_seed_gives_byte_identical_files() {
    let (a, a_gt) = generate_scene_file("0.1,-0.4", 99, 0.25, 20);
    let (b, b_gt) = generate_scene_file("0.1,-0.4", 99, 0.25, 20);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&a_gt).unwrap(), std::fs::read(&b_gt).unwrap());
    for p in [a, a_gt, b, b_gt] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn too_few_points_exits_2_naming_the_constraint() {
    let out = temp_path("few.csv");
    let output = acpose(&[
        "generate",
        "--points",
        "3",
        "--motion",
        "0,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains('4'), "stderr must name the >= 4 constraint: {stderr}");
}

#[test]
fn malformed_motion_flag_exits_2() {
    let out = temp_path("bad.csv");
    let output = acpose(&[
        "generate",
        "--motion",
        "0.2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn impossible_geometry_exits_3() {
    // A near-180-degree yaw leaves no plane visible to both cameras.
    let out = temp_path("impossible.csv");
    let output = acpose(&[
        "generate",
        "--motion",
        "3.1,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn estimate_zero_noise_records_match_ground_truth() {
    let (scene, gt_path) = generate_scene_file("0.2,0.9", 5, 0.0, 50);
    let gt = GroundTruth::load(&gt_path).unwrap();
    let output = acpose(&[
        "estimate",
        "--input",
        scene.to_str().unwrap(),
        "--solver",
        "1ac",
        "--robust",
        "none",
    ]);
    assert!(output.status.success());
    let records = read_results(output.stdout.as_slice()).unwrap();
    assert_eq!(records.len(), 50);
    for r in &records {
        assert_eq!(r.solver, "1ac");
        assert!(
            wrap_angle(r.alpha - gt.alpha).abs() < 1e-8,
            "alpha {} vs {}",
            r.alpha,
            gt.alpha
        );
        assert!(wrap_angle(r.beta - gt.beta).abs() < 1e-8);
        assert!(r.focal.is_none());
        assert_eq!(r.inliers, 50);
    }
    std::fs::remove_file(scene).ok();
    std::fs::remove_file(gt_path).ok();
}

#[test]
fn estimate_semi_calibrated_recovers_the_focal_length() {
    let (scene, gt_path) = generate_scene_file("0.15,1.1", 21, 0.0, 30);
    let output = acpose(&[
        "estimate",
        "--input",
        scene.to_str().unwrap(),
        "--solver",
        "1acf",
    ]);
    assert!(output.status.success());
    let records = read_results(output.stdout.as_slice()).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        let focal = r.focal.expect("semi-calibrated records carry a focal");
        assert!(
            (focal - 600.0).abs() / 600.0 < 1e-5,
            "focal {focal} too far from 600"
        );
    }
    std::fs::remove_file(scene).ok();
    std::fs::remove_file(gt_path).ok();
}

#[test]
fn estimate_mixed_population_with_histogram_voting() {
    // Two generated populations: the larger one is the inlier motion.
    let (inliers, inlier_gt) = generate_scene_file("0.2,0.9", 31, 0.5, 50);
    let (outliers, outlier_gt) = generate_scene_file("-0.25,-1.7", 32, 0.5, 20);
    let a = CorrespondenceFile::load(&inliers).unwrap();
    let b = CorrespondenceFile::load(&outliers).unwrap();
    let mixed_path = temp_path("mixed.csv");
    let mixed = CorrespondenceFile {
        frame: a.frame,
        intrinsics: a.intrinsics,
        correspondences: a
            .correspondences
            .iter()
            .chain(&b.correspondences)
            .copied()
            .collect(),
    };
    mixed.save(&mixed_path).unwrap();

    let gt = GroundTruth::load(&inlier_gt).unwrap();
    let output = acpose(&[
        "estimate",
        "--input",
        mixed_path.to_str().unwrap(),
        "--solver",
        "1ac",
        "--robust",
        "hist",
    ]);
    assert!(output.status.success());
    let records = read_results(output.stdout.as_slice()).unwrap();
    assert_eq!(records.len(), 1);
    let r = &records[0];
    assert!(
        wrap_angle(r.alpha - gt.alpha).abs().to_degrees() < 1.0,
        "alpha off by {} deg",
        wrap_angle(r.alpha - gt.alpha).abs().to_degrees()
    );
    assert!(wrap_angle(r.beta - gt.beta).abs().to_degrees() < 1.0);
    for p in [inliers, inlier_gt, outliers, outlier_gt, mixed_path] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn estimate_with_ransac_rejects_the_outlier_population() {
    let (inliers, inlier_gt) = generate_scene_file("0.1,0.4", 41, 0.5, 50);
    let (outliers, outlier_gt) = generate_scene_file("-0.2,2.0", 42, 0.5, 20);
    let a = CorrespondenceFile::load(&inliers).unwrap();
    let b = CorrespondenceFile::load(&outliers).unwrap();
    let mixed_path = temp_path("mixed-ransac.csv");
    CorrespondenceFile {
        frame: a.frame,
        intrinsics: a.intrinsics,
        correspondences: a
            .correspondences
            .iter()
            .chain(&b.correspondences)
            .copied()
            .collect(),
    }
    .save(&mixed_path)
    .unwrap();

    let gt = GroundTruth::load(&inlier_gt).unwrap();
    let output = acpose(&[
        "estimate",
        "--input",
        mixed_path.to_str().unwrap(),
        "--solver",
        "1ac",
        "--robust",
        "ransac",
        "--seed",
        "7",
    ]);
    assert!(output.status.success());
    let records = read_results(output.stdout.as_slice()).unwrap();
    assert_eq!(records.len(), 1);
    let r = &records[0];
    assert!(wrap_angle(r.alpha - gt.alpha).abs().to_degrees() < 1.0);
    assert!(wrap_angle(r.beta - gt.beta).abs().to_degrees() < 1.0);
    assert!(r.inliers >= 40, "expected the inlier population, got {}", r.inliers);
    for p in [inliers, inlier_gt, outliers, outlier_gt, mixed_path] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn nonexistent_input_exits_4() {
    let output = acpose(&[
        "estimate",
        "--input",
        "/nonexistent/acpose-missing.csv",
        "--solver",
        "1ac",
    ]);
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn unparsable_input_exits_4_with_line_number() {
    let path = temp_path("broken.csv");
    std::fs::write(
        &path,
        "# {\"format\":\"acpose-correspondences\",\"version\":1,\"frame\":\"normalized\"}\n\
         p1x,p1y,p2x,p2y,a1,a2,a3,a4\n\
         0.1,0.2,0.3,not-a-number,1,0,0,1\n",
    )
    .unwrap();
    let output = acpose(&["estimate", "--input", path.to_str().unwrap(), "--solver", "1ac"]);
    assert_eq!(output.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
    std::fs::remove_file(path).ok();
}

#[test]
fn semi_calibrated_solver_rejects_normalized_input() {
    let path = temp_path("normalized.csv");
    std::fs::write(
        &path,
        "# {\"format\":\"acpose-correspondences\",\"version\":1,\"frame\":\"normalized\"}\n\
         p1x,p1y,p2x,p2y,a1,a2,a3,a4\n\
         0.1,0.2,0.3,0.4,1,0,0,1\n",
    )
    .unwrap();
    let output = acpose(&["estimate", "--input", path.to_str().unwrap(), "--solver", "1acf"]);
    assert_eq!(output.status.code(), Some(2));
    std::fs::remove_file(path).ok();
}

#[test]
fn unknown_solver_exits_2() {
    let output = acpose(&["estimate", "--input", "x.csv", "--solver", "5pc"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn empty_file_exits_5() {
    let path = temp_path("empty.csv");
    std::fs::write(
        &path,
        "# {\"format\":\"acpose-correspondences\",\"version\":1,\"frame\":\"normalized\"}\n\
         p1x,p1y,p2x,p2y,a1,a2,a3,a4\n",
    )
    .unwrap();
    for robust in ["none", "hist", "ransac"] {
        let output = acpose(&[
            "estimate",
            "--input",
            path.to_str().unwrap(),
            "--solver",
            "1ac",
            "--robust",
            robust,
        ]);
        assert_eq!(output.status.code(), Some(5), "robust mode {robust}");
    }
    std::fs::remove_file(path).ok();
}

#[test]
fn benchmark_zero_noise_is_exact_and_schema_stable() {
    let out = temp_path("bench.csv");
    let output = acpose(&[
        "benchmark",
        "--sigmas",
        "0",
        "--trials",
        "100",
        "--solvers",
        "1ac",
        "--seed",
        "12",
        "--points",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# {"));
    assert!(header.contains("\"format\":\"acpose-benchmark\""));
    assert!(header.contains("\"version\":1"));
    assert_eq!(lines.next().unwrap(), BENCHMARK_COLUMNS);
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "1ac");
    assert_eq!(row[1], "0");
    let mean_rot: f64 = row[2].parse().unwrap();
    let mean_tr: f64 = row[4].parse().unwrap();
    assert!(mean_rot < 1e-7, "mean rotation error {mean_rot}");
    assert!(mean_tr < 1e-7, "mean translation error {mean_tr}");
    std::fs::remove_file(out).ok();
}

#[test]
fn benchmark_rejects_empty_lists() {
    let output = acpose(&["benchmark", "--sigmas", "0,x", "--trials", "5", "--solvers", "1ac"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn results_schema_is_stable() {
    let (scene, gt) = generate_scene_file("0.0,0.3", 77, 0.0, 8);
    let output = acpose(&[
        "estimate",
        "--input",
        scene.to_str().unwrap(),
        "--solver",
        "3pc",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("\"format\":\"acpose-results\""));
    assert_eq!(lines.next().unwrap(), RESULT_COLUMNS);
    // stderr carries no result data
    assert!(output.stderr.is_empty());
    std::fs::remove_file(scene).ok();
    std::fs::remove_file(gt).ok();
}

#[test]
fn generate_writes_default_gt_sidecar() {
    let out = temp_path("sidecar.csv");
    let output = acpose(&[
        "generate",
        "--points",
        "6",
        "--motion",
        "0.05,0.2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let sidecar = PathBuf::from(format!("{}.gt", out.display()));
    assert!(Path::new(&sidecar).exists());
    std::fs::remove_file(out).ok();
    std::fs::remove_file(sidecar).ok();
}
