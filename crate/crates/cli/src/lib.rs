//! Suite orchestration and report emission for the `llab` binary.

use thiserror::Error;

pub mod config;
pub mod csv;
pub mod decompose;
pub mod report;
pub mod suites;

pub use config::{Format, SuiteConfig};
pub use report::{ReportBundle, Residual};
pub use suites::run_suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("bad sweep specification `{0}`")]
    BadSweep(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error("cannot read {path}: {source}")]
    Input { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Algebra(#[from] llab_core::AlgebraError),
    #[error(transparent)]
    Torus(#[from] llab_torus::TorusError),
    #[error(transparent)]
    Hyperbolic(#[from] llab_hyperbolic::HyperbolicError),
}

pub(crate) fn write_file(path: &std::path::Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.display().to_string(), source })?;
    }
    std::fs::write(path, contents).map_err(|source| CliError::Output { path: path.display().to_string(), source })
}
