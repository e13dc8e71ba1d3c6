//! Persist run records: `<prefix>.report.csv` (fixed columns, rows sorted
//! by scheme, metric, sweep index) and `<prefix>.report.json` (the full
//! record, nested). Existing outputs are only overwritten with `force`.

use std::fs;
use std::path::{Path, PathBuf};

use tklab_core::formulas::ConvergenceReport;

use crate::runner::RunRecord;
use crate::{HarnessError, HarnessResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// Render the CSV body (header + sorted rows) for a set of reports.
pub fn render_csv(reports: &[ConvergenceReport]) -> String {
    let mut rows: Vec<(String, String, u64, String)> = reports
        .iter()
        .flat_map(|r| {
            r.csv_rows()
                .into_iter()
                .zip(r.entries.iter())
                .map(move |(row, e)| {
                    (
                        r.scheme.clone(),
                        r.metric.label(),
                        e.index,
                        row,
                    )
                })
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = String::from(ConvergenceReport::csv_header());
    out.push('\n');
    for (_, _, _, row) in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Write the requested formats; returns the paths written.
pub fn emit(
    record: &RunRecord,
    prefix: &str,
    formats: &[EmitFormat],
    force: bool,
) -> HarnessResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for format in formats {
        let path = match format {
            EmitFormat::Csv => PathBuf::from(format!("{prefix}.report.csv")),
            EmitFormat::Json => PathBuf::from(format!("{prefix}.report.json")),
        };
        if path.exists() && !force {
            return Err(HarnessError::OutputExists { path });
        }
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let body = match format {
            EmitFormat::Csv => render_csv(&record.reports),
            EmitFormat::Json => {
                let mut text =
                    serde_json::to_string_pretty(record).map_err(|e| HarnessError::ConfigParse {
                        detail: e.to_string(),
                    })?;
                text.push('\n');
                text
            }
        };
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

/// Convenience wrapper writing both formats.
pub fn emit_all(record: &RunRecord, prefix: &str, force: bool) -> HarnessResult<Vec<PathBuf>> {
    emit(record, prefix, &[EmitFormat::Csv, EmitFormat::Json], force)
}

/// Load a previously written JSON record.
pub fn load_record(path: &Path) -> HarnessResult<RunRecord> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| HarnessError::ConfigParse {
        detail: format!("{}: {e}", path.display()),
    })
}
