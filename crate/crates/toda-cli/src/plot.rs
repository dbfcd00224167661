use std::fmt;
use std::str::FromStr;

use crate::error::{CliError, CliResult};
use crate::report::Report;

/// Series that can be exported as CSV.
///
/// * `asymptotic-slopes`: `log_abs_zeta, log_error_k2, log_error_k3`
/// * `sector-map`: `arg_zeta, dominant_index` (0 when `e^{zeta u_p}` dominates, 1 for `e^{zeta u_-p}`)
/// * `p-grid`: `arg_p` followed by `re_m, im_m` of `<ds_p, e_m>` for each `m` in the window
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    AsymptoticSlopes,
    SectorMap,
    PGrid,
}

impl PlotKind {
    pub const ALL: [PlotKind; 3] = [PlotKind::AsymptoticSlopes, PlotKind::SectorMap, PlotKind::PGrid];

    pub fn key(self) -> &'static str {
        match self {
            PlotKind::AsymptoticSlopes => "asymptotic-slopes",
            PlotKind::SectorMap => "sector-map",
            PlotKind::PGrid => "p-grid",
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for PlotKind {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| CliError::ConfigInvalid(format!("unknown plot series `{s}`")))
    }
}

/// The requested series of `report` as CSV text with a header row.
pub fn emit_plot_data(report: &Report, which: PlotKind) -> CliResult<String> {
    let series = report
        .series
        .get(which.key())
        .ok_or_else(|| CliError::MissingSeries(which.key().to_string()))?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&series.columns)?;
    for row in &series.rows {
        writer.write_record(row.iter().map(|x| format!("{x:e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}
