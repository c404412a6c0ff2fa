//! Verification suites over `podles-core`, with deterministic CSV/JSON
//! reports.

pub mod config;
mod random;
pub mod report;
pub mod suites;

use thiserror::Error;

pub use config::RunConfig;
pub use report::{fmt_g17, render_csv, render_json, render_table, Check, Format, SuiteReport, Table};
pub use suites::{run_suite, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}
