//! File formats.
//!
//! A coefficient matrix is stored as the magic `PVLCOEF1`, the row and column
//! counts as little-endian `u64`, then the entries as little-endian `f64` in
//! row-major order. Every output file `X` gets a JSON sidecar `X.json`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use pvlab_core::CoefficientPath;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::harness::ConvergenceTable;

pub const MATRIX_MAGIC: &[u8; 8] = b"PVLCOEF1";

/// Build version: package version plus `git describe` when available.
pub fn version() -> &'static str {
    env!("PVLAB_VERSION")
}

pub fn write_matrix(path: &Path, rows: usize, cols: usize, data: &[f64]) -> Result<()> {
    if data.len() != rows * cols {
        return Err(HarnessError::Format(format!("{} entries for a {rows}×{cols} matrix", data.len())));
    }
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut write = |bytes: &[u8]| w.write_all(bytes).map_err(|e| HarnessError::io(path, e));
    write(MATRIX_MAGIC)?;
    write(&(rows as u64).to_le_bytes())?;
    write(&(cols as u64).to_le_bytes())?;
    for v in data {
        write(&v.to_le_bytes())?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Returns `(rows, cols, data)`.
pub fn read_matrix(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut head = [0u8; 24];
    r.read_exact(&mut head).map_err(|e| HarnessError::io(path, e))?;
    if &head[..8] != MATRIX_MAGIC {
        return Err(HarnessError::Format(format!("{} is not a coefficient matrix", path.display())));
    }
    let rows = u64::from_le_bytes(head[8..16].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(head[16..24].try_into().unwrap()) as usize;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| HarnessError::io(path, e))?;
    if bytes.len() != rows * cols * 8 {
        return Err(HarnessError::Format(format!(
            "{}: expected {} data bytes, found {}",
            path.display(),
            rows * cols * 8,
            bytes.len()
        )));
    }
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((rows, cols, data))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub file: String,
    pub spec_hash: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Sidecar {
    pub fn new(file: &Path, config: &ExperimentConfig, details: serde_json::Value) -> Self {
        Self {
            file: file.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
            spec_hash: config.spec_hash(),
            version: version().to_string(),
            seed: config.seed,
            config: config.clone(),
            details,
        }
    }
}

pub fn sidecar_path(file: &Path) -> PathBuf {
    let mut name = file.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Format(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

pub fn write_sidecar(file: &Path, config: &ExperimentConfig, details: serde_json::Value) -> Result<()> {
    write_json(&sidecar_path(file), &Sidecar::new(file, config, details))
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| HarnessError::Format(format!("{}: {e}", path.display())))?;
    let fail = |e: csv::Error| HarnessError::Format(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_path(path: &Path, coeffs: &CoefficientPath) -> Result<()> {
    write_matrix(path, coeffs.steps() + 1, coeffs.truncation(), &coeffs.coeffs)
}

pub fn write_norm_series(path: &Path, coeffs: &CoefficientPath, r: f64) -> Result<()> {
    let rows = (0..=coeffs.steps())
        .map(|i| Ok(vec![num(coeffs.times[i]), num(coeffs.hr_norm(i, r)?)]))
        .collect::<Result<Vec<_>>>()?;
    write_csv(path, &["t", "hr_norm"], rows)
}

pub fn write_series(path: &Path, series: &pvlab_core::VariationSeries) -> Result<()> {
    let rows = series.times.iter().zip(&series.values).map(|(t, v)| vec![num(*t), num(*v)]);
    write_csv(path, &["t", "value"], rows)
}

pub fn write_convergence_csv(path: &Path, table: &ConvergenceTable) -> Result<()> {
    let rows = table.rows.iter().map(|r| {
        vec![
            r.request.clone(),
            num(r.delta),
            num(r.mean_v_at_t),
            num(r.std_error),
            num(r.theoretical_limit),
            num(r.abs_error),
            num(r.sup_error_over_grid),
            r.replicates.to_string(),
            r.sample_free.to_string(),
        ]
    });
    write_csv(
        path,
        &[
            "request",
            "delta",
            "mean_V_at_T",
            "std_error",
            "theoretical_limit",
            "abs_error",
            "sup_error_over_grid",
            "replicates",
            "sample_free",
        ],
        rows,
    )
}
