//! Batch label generation over a geometry manifest and the analysis reports
//! built on its output.
//!
//! Records are JSON lines with energies in eV. A generation run keeps a
//! checkpoint next to its output listing every finished id, so an
//! interrupted run can be resumed without recomputing or duplicating work.

mod record;
mod report;
mod run;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::basis::BasisError;
use crate::molio::MolError;

pub use record::{clean, read_records, write_records, DatasetRecord};
pub use report::{
    compare, compare_basis, compare_precision, variance_stats, ComparisonReport, Histogram, RecordDelta,
    SmilesSpread, VarianceStats,
};
pub use run::{checkpoint_path, run, Checkpoint, Failure, GenerateOptions, RunSummary, CHECKPOINT_FORMAT_VERSION};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: corrupt checkpoint: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },
    #[error("{path}: checkpoint was written with different settings ({reason})")]
    CheckpointMismatch { path: PathBuf, reason: String },
    #[error("{path}:{line}: {reason}")]
    BadRecord { path: PathBuf, line: usize, reason: String },
    #[error("duplicate record id '{0}'")]
    DuplicateRecord(String),
    #[error("record id sets differ: {only_a} only in the first run, {only_b} only in the second (e.g. '{example}')")]
    IdMismatch { only_a: usize, only_b: usize, example: String },
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Manifest(#[from] MolError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

impl PipelineError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// True for failures caused by the file system or unreadable input files
    /// rather than by how the tool was invoked.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Self::Io { .. } | Self::CorruptCheckpoint { .. } | Self::BadRecord { .. } | Self::Manifest(_)
        )
    }
}
