//! File ingestion, pair manifests, lag alignment and report emission.

mod data;
mod lag;
mod manifest;
mod report;

pub use data::{load_columns, load_pair, write_pair, LoadedColumns, LoadedPair};
pub use lag::{align_lag, lagged_overlap, LagAlignment, LOW_CORRELATION};
pub use manifest::{evaluate_manifest, EntryReport, ManifestEntry, ManifestSummary, PairsManifest};
pub use report::{DecisionRecord, Emitter, OutputFormat};

use std::path::PathBuf;

use thiserror::Error;

/// Errors from reading data files and manifests.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: only {got} valid rows, need at least {need}")]
    TooFewRows {
        path: PathBuf,
        got: usize,
        need: usize,
    },

    #[error("manifest has no entries")]
    EmptyManifest,

    #[error("duplicate manifest id '{0}'")]
    DuplicateId(String),

    #[error("manifest entry '{id}' references missing file {path}")]
    MissingFile { id: String, path: PathBuf },

    #[error(transparent)]
    Data(#[from] crate::Error),
}
