//! Configuration, orchestration and reporting for the verification suites.

pub mod config;
pub mod error;
pub mod plot;
pub mod report;
pub mod suites;

pub use config::{PointSpec, RunConfig, StokesOptions, Suite};
pub use error::{CliError, CliResult};
pub use plot::{emit_plot_data, PlotKind};
pub use report::{DataSeries, Report, StokesSummary, REPORT_SCHEMA};
pub use suites::run_suite;
