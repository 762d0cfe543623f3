//! CSV and plain-text renderings of cross-validation results.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{CvReport, EvalError, Metric};
use crate::Scalar;

/// Identifies the run that produced a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
}

/// One row group of the results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary<T> {
    pub method: String,
    pub snr_db: Option<f64>,
    pub report: CvReport<T>,
}

fn fmt_snr(snr: Option<f64>) -> String {
    snr.map_or_else(|| "clean".to_string(), |s| format!("{s}"))
}

/// One row per method and metric; `folds` holds the per-fold values
/// separated by `;`.
pub fn write_report_csv<T: Scalar, W: Write>(w: W, rows: &[MethodSummary<T>], prov: &Provenance) -> Result<(), EvalError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["config_hash", "seed", "snr_db", "method", "metric", "mean", "std", "folds"])?;
    for row in rows {
        for m in Metric::ALL {
            let folds: Vec<String> = row.report.fold_values(m).iter().map(|v| format!("{:.6}", v.to_f64_lossy())).collect();
            out.write_record([
                prov.config_hash.clone(),
                prov.seed.to_string(),
                fmt_snr(row.snr_db),
                row.method.clone(),
                m.name().to_string(),
                format!("{:.6}", row.report.mean.get(m).to_f64_lossy()),
                format!("{:.6}", row.report.std.get(m).to_f64_lossy()),
                folds.join(";"),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Percentages as `mean ± std`, one line per method, grouped by SNR.
pub fn render_table<T: Scalar>(rows: &[MethodSummary<T>], prov: &Provenance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "config {}  seed {}", prov.config_hash, prov.seed);
    let width = rows.iter().map(|r| r.method.len()).max().unwrap_or(0).max("Methods".len());
    let mut current: Option<Option<f64>> = None;
    for row in rows {
        if current != Some(row.snr_db) {
            current = Some(row.snr_db);
            let _ = writeln!(s, "\nSNR {} dB, {}-fold", fmt_snr(row.snr_db), row.report.k);
            let _ = write!(s, "{:<width$}", "Methods");
            for m in Metric::ALL {
                let _ = write!(s, "  {:>14}", m.name());
            }
            s.push('\n');
        }
        let _ = write!(s, "{:<width$}", row.method);
        for m in Metric::ALL {
            let mean = 100.0 * row.report.mean.get(m).to_f64_lossy();
            let std = 100.0 * row.report.std.get(m).to_f64_lossy();
            let _ = write!(s, "  {:>14}", format!("{mean:.2} ± {std:.2}"));
        }
        if !row.report.mean.undefined.is_empty() {
            let names: Vec<&str> = row.report.mean.undefined.iter().map(|m| m.name()).collect();
            let _ = write!(s, "  (zero denominator: {})", names.join(","));
        }
        s.push('\n');
    }
    s
}
