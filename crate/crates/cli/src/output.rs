//! Artifact writers: records CSV, ensemble JSON and sweep tables.
//!
//! Every numeric value is written with 17 significant digits so re-running
//! with the same configuration reproduces artifacts byte for byte. Absent
//! observables appear as empty CSV fields, never as zeros.

use std::io::{self, Write};

use geqw::ObservableRecord;
use serde::Serialize;

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub const CSV_HEADER: &str =
    "t,var_x1,var_x2,var_R,trace_distance,entropy_c,entropy_c1,entropy_c2,negativity,coherence_x1";

/// Writes the config echo as `#`-prefixed comment lines followed by the
/// fixed-column record table. Records with no populated observable are
/// skipped.
pub fn write_records_csv<W: Write>(
    out: &mut W,
    config_echo: &str,
    records: &[ObservableRecord],
) -> io::Result<()> {
    for line in config_echo.lines() {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let fields = [
            r.var_x1,
            r.var_x2,
            r.var_r,
            r.trace_distance,
            r.entropy_c,
            r.entropy_c1,
            r.entropy_c2,
            r.negativity,
            r.coherence_x1,
        ];
        if fields.iter().all(Option::is_none) {
            continue;
        }
        let row: Vec<String> = fields.iter().map(|f| fmt_opt(*f)).collect();
        writeln!(out, "{},{}", r.t, row.join(","))?;
    }
    Ok(())
}

/// Per-realization fit results serialized into the ensemble JSON.
#[derive(Debug, Serialize)]
pub struct RealizationFits {
    pub realization: u64,
    pub alpha_full: Option<f64>,
    pub alpha_full_residual: Option<f64>,
    pub alpha_asymptotic: Option<f64>,
    pub alpha_asymptotic_residual: Option<f64>,
    pub beta_coherence: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SummaryStat {
    pub mean: f64,
    /// Sample standard deviation (n − 1); 0 for a single realization.
    pub std: f64,
    pub count: usize,
}

impl SummaryStat {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64)
                .sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            std,
            count: n,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct EnsembleSummary {
    pub alpha_full: Option<SummaryStat>,
    pub alpha_asymptotic: Option<SummaryStat>,
    pub beta_coherence: Option<SummaryStat>,
    pub final_var_r: Option<SummaryStat>,
    pub final_entropy_c: Option<SummaryStat>,
    pub final_negativity: Option<SummaryStat>,
}

#[derive(Debug, Serialize)]
pub struct EnsembleReport {
    /// The fully resolved configuration, echoed for provenance.
    pub config: toml::Value,
    /// Window conventions used by every fit in this report.
    pub fit_windows: FitWindows,
    pub realizations: Vec<RealizationFits>,
    pub summary: EnsembleSummary,
}

#[derive(Debug, Serialize)]
pub struct FitWindows {
    pub full: [u32; 2],
    pub asymptotic: [u32; 2],
}

/// One row of the q-sweep table.
#[derive(Debug)]
pub struct SweepRow {
    pub q1: String,
    pub q2: String,
    pub alpha_full: SummaryStat,
    pub alpha_asymptotic: SummaryStat,
}

pub fn write_sweep_csv<W: Write>(
    out: &mut W,
    config_echo: &str,
    rows: &[SweepRow],
) -> io::Result<()> {
    for line in config_echo.lines() {
        writeln!(out, "# {line}")?;
    }
    writeln!(
        out,
        "q1,q2,alpha_full,alpha_full_std,alpha_asymptotic,alpha_asymptotic_std,realizations"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.q1,
            r.q2,
            fmt_f64(r.alpha_full.mean),
            fmt_f64(r.alpha_full.std),
            fmt_f64(r.alpha_asymptotic.mean),
            fmt_f64(r.alpha_asymptotic.std),
            r.alpha_full.count,
        )?;
    }
    Ok(())
}
