use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use toda_core::resurgence::Matrix2;
use toda_core::verify::CheckRecord;

use crate::config::RunConfig;
use crate::error::CliResult;

pub const REPORT_SCHEMA: &str = "toda-stokes-report/1";

/// A numeric table attached to a report, later emitted as CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSeries {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// One off-diagonal entry of a Stokes kernel: `weight` couples `q` to `p` on the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelPair {
    pub kernel: &'static str,
    pub q_arg: f64,
    pub p_arg: f64,
    pub weight: f64,
}

/// Stokes data of a run, with complex entries written as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StokesSummary {
    #[serde(rename = "S_plus")]
    pub s_plus: [[[f64; 2]; 2]; 2],
    #[serde(rename = "S_minus")]
    pub s_minus: [[[f64; 2]; 2]; 2],
    pub max_entry_error: f64,
    pub kernel_pairs: Vec<KernelPair>,
}

pub fn matrix_entries(m: &Matrix2) -> [[[f64; 2]; 2]; 2] {
    m.map(|row| row.map(|z| [z.re, z.im]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub package: &'static str,
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub float: &'static str,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            float: "f64",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub environment: Environment,
    pub config: RunConfig,
    pub passed: bool,
    pub records: Vec<CheckRecord>,
    pub series: BTreeMap<String, DataSeries>,
    pub stokes: Option<StokesSummary>,
}

impl Report {
    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text table with one line per record.
    pub fn summary_table(&self) -> String {
        let width = self.records.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<width$} {:>12} {:>12}", "status", "name", "measured", "tolerance");
        for r in &self.records {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status:<6} {:<width$} {:>12.3e} {:>12.1e}", r.name, r.measured, r.tolerance);
            if let Some(e) = &r.error {
                let _ = writeln!(out, "       {e}");
            }
        }
        let failed = self.records.iter().filter(|r| !r.pass).count();
        let _ = writeln!(out, "{} records, {failed} failed", self.records.len());
        out
    }

    /// Writes `report.json` and `summary.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        std::fs::write(dir.join("summary.txt"), self.summary_table())?;
        Ok(())
    }
}
