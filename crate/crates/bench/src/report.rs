use std::path::{Path, PathBuf};

use pvn_core::{MethodTag, PotentialModel};
use serde::{Deserialize, Serialize};

use crate::config::{tolerance_for_digits, ExperimentConfig, ToleranceKind};
use crate::error::{BenchError, Result};

/// One computed level next to its analytic value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    /// Position of `computed` in the ascending eigenvalue list.
    pub index: usize,
    /// `n` of the analytic formula (from 0 for harmonic/Morse, from 1 for Coulomb).
    pub quantum_number: usize,
    pub oracle: f64,
    pub computed: f64,
    /// `computed - oracle`, divided by `|oracle|` for relative tolerances.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub digits: u32,
    pub kind: ToleranceKind,
    pub value: f64,
}

impl Tolerance {
    pub fn new(digits: u32, kind: ToleranceKind) -> Self {
        Self {
            digits,
            kind,
            value: tolerance_for_digits(digits),
        }
    }

    pub fn accepts(&self, row: &LevelRow) -> bool {
        row.error.abs() <= self.value
    }
}

/// Pairs computed eigenvalues with the analytic spectrum.
///
/// Harmonic and Morse levels are compared in order. The Coulomb |x| potential
/// has near-degenerate even/odd pairs, so each Bohr level `n = 1..` is matched
/// to the nearest computed eigenvalue instead. Returns `Ok(None)` for
/// potentials without an analytic spectrum.
pub fn compare_levels(
    model: &PotentialModel,
    hbar: f64,
    eigenvalues: &[f64],
    count: usize,
    kind: ToleranceKind,
) -> Result<Option<Vec<LevelRow>>> {
    let error = |computed: f64, oracle: f64| match kind {
        ToleranceKind::Absolute => computed - oracle,
        ToleranceKind::Relative => (computed - oracle) / oracle.abs(),
    };
    match model {
        PotentialModel::Free { .. } | PotentialModel::Tabulated { .. } => Ok(None),
        PotentialModel::Coulomb { .. } => {
            if eigenvalues.is_empty() {
                return Err(BenchError::Numerical(pvn_core::Error::NumericalFailure(
                    "no eigenvalues to match".into(),
                )));
            }
            let oracle = model.analytic_levels(hbar, count)?;
            let rows = oracle
                .iter()
                .enumerate()
                .map(|(k, &o)| {
                    let (index, &computed) = eigenvalues
                        .iter()
                        .enumerate()
                        .min_by(|a, b| (a.1 - o).abs().total_cmp(&(b.1 - o).abs()))
                        .expect("non-empty");
                    LevelRow {
                        index,
                        quantum_number: k + 1,
                        oracle: o,
                        computed,
                        error: error(computed, o),
                    }
                })
                .collect();
            Ok(Some(rows))
        }
        PotentialModel::Harmonic { .. } | PotentialModel::Morse { .. } => {
            if eigenvalues.len() < count {
                return Err(BenchError::Numerical(pvn_core::Error::TooManyLevels {
                    requested: count,
                    available: eigenvalues.len(),
                }));
            }
            let oracle = model.analytic_levels(hbar, count)?;
            Ok(Some(
                oracle
                    .iter()
                    .zip(eigenvalues)
                    .enumerate()
                    .map(|(n, (&o, &computed))| LevelRow {
                        index: n,
                        quantum_number: n,
                        oracle: o,
                        computed,
                        error: error(computed, o),
                    })
                    .collect(),
            ))
        }
    }
}

pub fn max_abs_error(rows: &[LevelRow]) -> Option<f64> {
    rows.iter().map(|r| r.error.abs()).reduce(f64::max)
}

/// Serde-friendly `f64`: non-finite values become `None`.
pub fn finite(value: f64) -> Option<f64> {
    value.is_finite().then_some(value)
}

/// Structured summary of one `solve` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub label: String,
    pub method: MethodTag,
    pub potential: String,
    pub grid_points: usize,
    pub basis_size: usize,
    pub residual_max: Option<f64>,
    pub overlap_condition: Option<f64>,
    pub fallback_used: bool,
    pub e_cut: Option<f64>,
    pub target_count: Option<usize>,
    pub achieved_count: Option<usize>,
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub levels: Vec<LevelRow>,
    pub tolerance_kind: ToleranceKind,
    pub tolerance: Option<Tolerance>,
    pub max_abs_error: Option<f64>,
    pub gate_passed: Option<bool>,
    pub elapsed_seconds: f64,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
    pub config: ExperimentConfig,
}

impl ResultDocument {
    /// Re-derives every stored level row and the gate verdict from the
    /// stored eigenvalues and config. Any mismatch is reported.
    pub fn recheck(&self) -> std::result::Result<(), String> {
        if !self.config.report.oracle {
            return if self.levels.is_empty() {
                Ok(())
            } else {
                Err("levels stored with the oracle switched off".into())
            };
        }
        let rows = compare_levels(
            &self.config.potential,
            self.config.grid.hbar,
            &self.eigenvalues,
            self.levels.len(),
            self.tolerance_kind,
        )
        .map_err(|e| e.to_string())?
        .unwrap_or_default();
        if rows != self.levels {
            return Err("stored level errors differ from a fresh comparison".into());
        }
        if max_abs_error(&rows) != self.max_abs_error {
            return Err("stored max_abs_error differs".into());
        }
        let gate = self.tolerance.map(|t| rows.iter().all(|r| t.accepts(r)));
        if gate != self.gate_passed {
            return Err("stored gate verdict differs".into());
        }
        Ok(())
    }

    /// `Err` with exit code 4 when a gate was set and failed.
    pub fn gate_result(&self) -> Result<()> {
        match (self.gate_passed, self.tolerance) {
            (Some(false), Some(t)) => {
                let failing: Vec<String> = self
                    .levels
                    .iter()
                    .filter(|r| !t.accepts(r))
                    .map(|r| format!("n={} ({:.3e})", r.quantum_number, r.error))
                    .collect();
                Err(BenchError::AccuracyGate(format!(
                    "{}: {} of {} levels outside {:e} ({:?}): {}",
                    self.label,
                    failing.len(),
                    self.levels.len(),
                    t.value,
                    t.kind,
                    failing.join(", ")
                )))
            }
            _ => Ok(()),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| BenchError::write(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| BenchError::write(path, e))
}

pub fn read_result(path: &Path) -> Result<ResultDocument> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| {
        BenchError::config(
            path.display().to_string(),
            format!("not a result file: {e}"),
        )
    })
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| BenchError::write(path, e))?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| BenchError::write(path, e))?;
    }
    writer.flush().map_err(|e| BenchError::write(path, e))
}

/// Creates `dir` if needed and returns `dir/name`.
pub fn output_path(dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| BenchError::write(dir, e))?;
    Ok(dir.join(name))
}

#[derive(Debug, Serialize)]
struct TableRow {
    level: usize,
    quantum_number: usize,
    oracle: f64,
    computed: f64,
    error: f64,
    within_tolerance: Option<bool>,
}

#[derive(Debug, Serialize)]
struct PlainRow {
    level: usize,
    computed: f64,
}

/// Per-level CSV: one row per oracle level, or per eigenvalue without an oracle.
pub fn write_level_table(path: &Path, doc: &ResultDocument) -> Result<()> {
    if doc.levels.is_empty() {
        let rows: Vec<PlainRow> = doc
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(level, &computed)| PlainRow { level, computed })
            .collect();
        return write_csv(path, &rows);
    }
    let rows: Vec<TableRow> = doc
        .levels
        .iter()
        .map(|r| TableRow {
            level: r.index,
            quantum_number: r.quantum_number,
            oracle: r.oracle,
            computed: r.computed,
            error: r.error,
            within_tolerance: doc.tolerance.map(|t| t.accepts(r)),
        })
        .collect();
    write_csv(path, &rows)
}
