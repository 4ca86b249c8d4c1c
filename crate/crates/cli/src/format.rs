//! On-disk formats: correspondence files, ground-truth records, estimation
//! results and benchmark tables.
//!
//! Every file is plain CSV (comma separator, `.` decimal, LF, UTF-8) with a
//! leading `# {...}` JSON header line carrying the format name, a schema
//! version and, for correspondence files, the coordinate frame plus optional
//! intrinsics. Floats are written with Rust's shortest round-trip notation,
//! so a parsed file reproduces the original values exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use acpose::geometry::{AffineCorrespondence, CameraIntrinsics, NormalizedPoint, PlanarMotion};
use acpose::synth::SweepRow;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CORRESPONDENCE_FORMAT: &str = "acpose-correspondences";
pub const GROUND_TRUTH_FORMAT: &str = "acpose-ground-truth";
pub const RESULTS_FORMAT: &str = "acpose-results";
pub const BENCHMARK_FORMAT: &str = "acpose-benchmark";
pub const FORMAT_VERSION: u32 = 1;

pub const CORRESPONDENCE_COLUMNS: &str = "p1x,p1y,p2x,p2y,a1,a2,a3,a4";
pub const GROUND_TRUTH_COLUMNS: &str = "alpha_rad,beta_rad,focal_px";
pub const RESULT_COLUMNS: &str = "solver,alpha_rad,beta_rad,focal_px,n_inliers,mean_residual_px,wall_ms";
pub const BENCHMARK_COLUMNS: &str =
    "solver,sigma,mean_rot_deg,std_rot_deg,mean_tr_deg,std_tr_deg,mean_focal_rel,std_focal_rel,fail_rate,mean_ms";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Coordinate frame of a correspondence file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Intrinsics already removed.
    Normalized,
    /// Raw pixel coordinates; the intrinsics block describes the cameras.
    Pixel,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct IntrinsicsHeader {
    fx: f64,
    fy: f64,
    cx: f64,
    cy: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct HeaderLine {
    format: String,
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    frame: Option<Frame>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    intrinsics: Option<IntrinsicsHeader>,
}

/// A parsed correspondence file.
#[derive(Debug, Clone)]
pub struct CorrespondenceFile {
    pub frame: Frame,
    pub intrinsics: Option<CameraIntrinsics>,
    pub correspondences: Vec<AffineCorrespondence>,
}

impl CorrespondenceFile {
    pub fn write_to<W: Write + ?Sized>(&self, out: &mut W) -> Result<(), FormatError> {
        let header = HeaderLine {
            format: CORRESPONDENCE_FORMAT.into(),
            version: FORMAT_VERSION,
            frame: Some(self.frame),
            intrinsics: self.intrinsics.map(|c| IntrinsicsHeader {
                fx: c.fx,
                fy: c.fy,
                cx: c.cx,
                cy: c.cy,
            }),
        };
        writeln!(out, "# {}", serde_json::to_string(&header).expect("serializable header"))?;
        writeln!(out, "{CORRESPONDENCE_COLUMNS}")?;
        for ac in &self.correspondences {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                ac.p1.x, ac.p1.y, ac.p2.x, ac.p2.y, ac.a[0], ac.a[1], ac.a[2], ac.a[3]
            )?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), FormatError> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_to(&mut out)
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self, FormatError> {
        let mut lines = input.lines().enumerate();
        let header: HeaderLine = parse_header(&mut lines, CORRESPONDENCE_FORMAT)?;
        let frame = header
            .frame
            .ok_or_else(|| FormatError::at(1, "missing coordinate frame tag"))?;
        let (n, columns) = lines
            .next()
            .ok_or_else(|| FormatError::at(2, "missing column header"))
            .and_then(|(n, l)| Ok((n, l?)))?;
        if columns.trim() != CORRESPONDENCE_COLUMNS {
            return Err(FormatError::at(
                n + 1,
                format!("expected column header '{CORRESPONDENCE_COLUMNS}'"),
            ));
        }
        let mut correspondences = Vec::new();
        for (n, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields = parse_floats(&line, 8, n + 1)?;
            let ac = AffineCorrespondence::new(
                NormalizedPoint::new(fields[0], fields[1]),
                NormalizedPoint::new(fields[2], fields[3]),
                [fields[4], fields[5], fields[6], fields[7]],
            );
            if !(ac.p1.is_valid() && ac.p2.is_valid() && ac.a.iter().all(|v| v.is_finite())) {
                return Err(FormatError::at(n + 1, "non-finite or out-of-range value"));
            }
            correspondences.push(ac);
        }
        let intrinsics = match header.intrinsics {
            Some(h) => Some(
                CameraIntrinsics::new(h.fx, h.fy, h.cx, h.cy)
                    .map_err(|e| FormatError::at(1, format!("invalid intrinsics: {e}")))?,
            ),
            None => None,
        };
        Ok(Self {
            frame,
            intrinsics,
            correspondences,
        })
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

/// Ground-truth motion record written next to generated files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    pub alpha: f64,
    pub beta: f64,
    pub focal: f64,
}

impl GroundTruth {
    pub fn motion(&self) -> PlanarMotion {
        PlanarMotion::new(self.alpha, self.beta)
    }

    pub fn write_to<W: Write + ?Sized>(&self, out: &mut W) -> Result<(), FormatError> {
        let header = HeaderLine {
            format: GROUND_TRUTH_FORMAT.into(),
            version: FORMAT_VERSION,
            frame: None,
            intrinsics: None,
        };
        writeln!(out, "# {}", serde_json::to_string(&header).expect("serializable header"))?;
        writeln!(out, "{GROUND_TRUTH_COLUMNS}")?;
        writeln!(out, "{},{},{}", self.alpha, self.beta, self.focal)?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), FormatError> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_to(&mut out)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let mut lines = BufReader::new(File::open(path)?).lines().enumerate();
        parse_header(&mut lines, GROUND_TRUTH_FORMAT)?;
        let (_, columns) = lines
            .next()
            .ok_or_else(|| FormatError::at(2, "missing column header"))
            .and_then(|(n, l)| Ok((n, l?)))?;
        if columns.trim() != GROUND_TRUTH_COLUMNS {
            return Err(FormatError::at(2, "unexpected ground-truth columns"));
        }
        let (n, line) = lines
            .next()
            .ok_or_else(|| FormatError::at(3, "missing ground-truth record"))
            .and_then(|(n, l)| Ok((n, l?)))?;
        let fields = parse_floats(&line, 3, n + 1)?;
        Ok(Self {
            alpha: fields[0],
            beta: fields[1],
            focal: fields[2],
        })
    }
}

/// One estimation result row.
#[derive(Debug, Clone)]
pub struct ResultRecord {
    pub solver: String,
    pub alpha: f64,
    pub beta: f64,
    pub focal: Option<f64>,
    pub inliers: usize,
    pub mean_residual_px: f64,
    pub wall_ms: f64,
}

pub fn write_results<W: Write + ?Sized>(out: &mut W, records: &[ResultRecord]) -> Result<(), FormatError> {
    let header = HeaderLine {
        format: RESULTS_FORMAT.into(),
        version: FORMAT_VERSION,
        frame: None,
        intrinsics: None,
    };
    writeln!(out, "# {}", serde_json::to_string(&header).expect("serializable header"))?;
    writeln!(out, "{RESULT_COLUMNS}")?;
    for r in records {
        let focal = r.focal.map(|f| f.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.solver, r.alpha, r.beta, focal, r.inliers, r.mean_residual_px, r.wall_ms
        )?;
    }
    Ok(())
}

/// Parses a results stream back into records (used by the tests).
pub fn read_results<R: BufRead>(input: R) -> Result<Vec<ResultRecord>, FormatError> {
    let mut lines = input.lines().enumerate();
    parse_header(&mut lines, RESULTS_FORMAT)?;
    let (_, columns) = lines
        .next()
        .ok_or_else(|| FormatError::at(2, "missing column header"))
        .and_then(|(n, l)| Ok((n, l?)))?;
    if columns.trim() != RESULT_COLUMNS {
        return Err(FormatError::at(2, "unexpected result columns"));
    }
    let mut records = Vec::new();
    for (n, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(FormatError::at(n + 1, "expected 7 fields"));
        }
        let num = |s: &str, what: &str| -> Result<f64, FormatError> {
            s.parse::<f64>()
                .map_err(|_| FormatError::at(n + 1, format!("bad {what} '{s}'")))
        };
        records.push(ResultRecord {
            solver: fields[0].to_string(),
            alpha: num(fields[1], "alpha")?,
            beta: num(fields[2], "beta")?,
            focal: if fields[3].is_empty() {
                None
            } else {
                Some(num(fields[3], "focal")?)
            },
            inliers: fields[4]
                .parse()
                .map_err(|_| FormatError::at(n + 1, "bad inlier count"))?,
            mean_residual_px: num(fields[5], "residual")?,
            wall_ms: num(fields[6], "wall time")?,
        });
    }
    Ok(records)
}

pub fn write_benchmark<W: Write + ?Sized>(out: &mut W, rows: &[SweepRow]) -> Result<(), FormatError> {
    let header = HeaderLine {
        format: BENCHMARK_FORMAT.into(),
        version: FORMAT_VERSION,
        frame: None,
        intrinsics: None,
    };
    writeln!(out, "# {}", serde_json::to_string(&header).expect("serializable header"))?;
    writeln!(out, "{BENCHMARK_COLUMNS}")?;
    for r in rows {
        let focal_mean = r.mean_focal_relative.map(|v| v.to_string()).unwrap_or_default();
        let focal_std = r.std_focal_relative.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.solver,
            r.sigma_px,
            r.mean_rotation_deg,
            r.std_rotation_deg,
            r.mean_translation_deg,
            r.std_translation_deg,
            focal_mean,
            focal_std,
            r.fail_rate,
            r.mean_wall_ms
        )?;
    }
    Ok(())
}

fn parse_header<I>(lines: &mut I, expected_format: &str) -> Result<HeaderLine, FormatError>
where
    I: Iterator<Item = (usize, std::io::Result<String>)>,
{
    let (_, line) = lines
        .next()
        .ok_or_else(|| FormatError::at(1, "empty file"))
        .and_then(|(n, l)| Ok((n, l?)))?;
    let json = line
        .strip_prefix("# ")
        .ok_or_else(|| FormatError::at(1, "missing '# {...}' header line"))?;
    let header: HeaderLine = serde_json::from_str(json)
        .map_err(|e| FormatError::at(1, format!("malformed header: {e}")))?;
    if header.format != expected_format {
        return Err(FormatError::at(
            1,
            format!("expected format '{expected_format}', found '{}'", header.format),
        ));
    }
    if header.version != FORMAT_VERSION {
        return Err(FormatError::at(
            1,
            format!("unsupported version {}", header.version),
        ));
    }
    Ok(header)
}

fn parse_floats(line: &str, count: usize, line_no: usize) -> Result<Vec<f64>, FormatError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != count {
        return Err(FormatError::at(
            line_no,
            format!("expected {count} fields, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| FormatError::at(line_no, format!("invalid number '{s}'")))
        })
        .collect()
}
