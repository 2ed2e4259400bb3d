//! Scenario ingestion, preset verification runs and report emission for the
//! `wcolab` operator laboratory.

pub mod checks;
pub mod presets;
pub mod report;
pub mod scenario;

use wcolab::diagnostics::DiagnosticsError;
use wcolab::WcoError;

pub use checks::{CheckRequest, CheckResult, Status, CHECK_NAMES};
pub use presets::{Preset, PRESETS};
pub use report::{full_report, run, strip_timestamp, sweep, verify, Envelope, Report, VerifyReport};
pub use scenario::{parse_scenario, resolve, Scenario, ScenarioDoc};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("phi is not a self-map of the disk: {0}")]
    NotSelfMap(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Wco(#[from] WcoError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error("json: {0}")]
    Json(#[source] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { path: path.into(), message: message.into() }
    }
}
