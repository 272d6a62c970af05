//! File plumbing: matrix CSV, dataset directories, and JSON reports.
//!
//! Values are printed with 17 significant decimal digits (`{:.16e}`), which
//! round-trips every finite `f64` bit-exactly, so CSV↔JSON conversions
//! preserve numeric payloads.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nmf_rlct_core::bayes::Dataset;
use nmf_rlct_core::divergence::Family;
use nmf_rlct_core::matrix::{Mat, NonnegMatrix};
use nmf_rlct_core::model::TrueStructure;
use serde::{Deserialize, Serialize};

/// One value under the 17-significant-digit convention.
pub fn format_cell(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses CSV text into a dense matrix. Ragged rows, non-numeric cells and
/// non-finite values each get a distinct diagnostic naming the location.
pub fn parse_matrix(text: &str, skip_header: bool) -> Result<Mat> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        if skip_header && idx == 0 {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let row_no = idx + 1;
        let mut row = Vec::new();
        for (col, cell) in line.split(',').enumerate() {
            let trimmed = cell.trim();
            let v: f64 = trimmed.parse().with_context(|| {
                format!("non-numeric cell '{trimmed}' at row {row_no}, column {}", col + 1)
            })?;
            if !v.is_finite() {
                bail!("non-finite value {v} at row {row_no}, column {}", col + 1);
            }
            row.push(v);
        }
        if let Some(w) = width {
            if row.len() != w {
                bail!("ragged CSV: row {row_no} has {} cells, expected {w}", row.len());
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("matrix CSV has no data rows");
    }
    Ok(Mat::from_rows(&rows)?)
}

pub fn load_mat_csv(path: &Path, skip_header: bool) -> Result<Mat> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_matrix(&text, skip_header).with_context(|| format!("parsing {}", path.display()))
}

/// Loads a matrix that must be nonnegative (parameters, factors, counts);
/// negative entries get their own diagnostic naming the location.
pub fn load_matrix_csv(path: &Path, skip_header: bool) -> Result<NonnegMatrix> {
    let mat = load_mat_csv(path, skip_header)?;
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            let v = mat.get(i, j);
            if v < 0.0 {
                bail!(
                    "negative entry {v} at row {}, column {} of {}; expected nonnegative values",
                    i + 1,
                    j + 1,
                    path.display()
                );
            }
        }
    }
    Ok(NonnegMatrix::new(mat)?)
}

pub fn matrix_to_csv(mat: &Mat) -> String {
    let mut out = String::new();
    for i in 0..mat.rows() {
        let cells: Vec<String> = (0..mat.cols()).map(|j| format_cell(mat.get(i, j))).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn save_mat_csv(path: &Path, mat: &Mat) -> Result<()> {
    fs::write(path, matrix_to_csv(mat)).with_context(|| format!("writing {}", path.display()))
}

// ---------------------------------------------------------------------------
// Dataset directories: manifest.json + one observation CSV per draw.
// ---------------------------------------------------------------------------

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub family: Family,
    pub rows: u32,
    pub cols: u32,
    pub n: usize,
    pub seed: Option<u64>,
    pub truth: Option<TrueStructure>,
}

fn observation_file(i: usize) -> String {
    format!("w_{i:06}.csv")
}

/// Writes `manifest.json` plus `w_000000.csv`, `w_000001.csv`, ... into
/// `dir` (created if missing).
pub fn save_dataset(dir: &Path, dataset: &Dataset) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let manifest = DatasetManifest {
        family: dataset.family,
        rows: dataset.rows,
        cols: dataset.cols,
        n: dataset.observations.len(),
        seed: dataset.seed,
        truth: dataset.truth.clone(),
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", manifest_path.display()))?;
    for (i, w) in dataset.observations.iter().enumerate() {
        save_mat_csv(&dir.join(observation_file(i)), w)?;
    }
    Ok(())
}

pub fn load_dataset(dir: &Path) -> Result<Dataset> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path)
        .with_context(|| format!("reading {}", manifest_path.display()))?;
    let manifest: DatasetManifest = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", manifest_path.display()))?;
    let mut observations = Vec::with_capacity(manifest.n);
    for i in 0..manifest.n {
        observations.push(load_mat_csv(&dir.join(observation_file(i)), false)?);
    }
    Ok(Dataset::new(
        manifest.family,
        manifest.rows,
        manifest.cols,
        observations,
        manifest.truth,
        manifest.seed,
    )?)
}

// ---------------------------------------------------------------------------
// JSON report envelope.
// ---------------------------------------------------------------------------

/// Envelope embedded in every JSON output: the resolved configuration, the
/// master seed, and the toolkit version, so a report is reproducible from
/// its own contents.
#[derive(Debug, Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub config: C,
    pub result: R,
}

pub fn toolkit_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Pretty JSON to a file, or to stdout when no path is given.
pub fn emit_json(out: Option<&PathBuf>, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    emit_text(out, &text)
}

pub fn emit_text(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
