//! On-disk formats: skeleton streams, segmentation masks and silhouettes,
//! mass profiles, session and subject tables, trained models, and error
//! reports.
//!
//! All formats are plain text. Floats are written with Rust's shortest
//! round-trip formatting, so `parse(emit(v))` reproduces `v` exactly. Lines
//! starting with `#` carry structured metadata (`# key: value`); parsers
//! ignore unrecognized comment lines.

mod energy;
mod mask;
mod model_file;
mod profile;
mod report;
mod sessions;
mod skeleton;

pub use energy::{emit_energy_tsv, parse_energy_tsv};
pub use mask::{
    emit_mask_text, parse_joints2d_tsv, parse_mask_bytes, parse_mask_pgm, parse_mask_text,
    parse_silhouette_text,
};
pub use model_file::{emit_model_tsv, parse_model_tsv};
pub use profile::{emit_profile_tsv, parse_profile_tsv};
pub use report::{emit_report_tsv, parse_report_tsv};
pub use sessions::{
    emit_sessions_csv, emit_subjects_csv, parse_sessions_csv, parse_subjects_csv, resolve_subjects,
    validate_session_subjects, SessionsFile, SubjectRow,
};
pub use skeleton::{emit_skeleton_csv, parse_skeleton_csv, skeleton_header};

use std::path::Path;

/// A parse failure located at a 1-based line number (0 when the problem is
/// with the file as a whole).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn at(line: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, kind }
    }
}

/// What went wrong at that location.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("file has no data rows")]
    Empty,
    #[error("expected {expected} columns, found {found}")]
    ColumnCount { expected: usize, found: usize },
    #[error("header column {column}: expected {expected:?}, found {found:?}")]
    HeaderMismatch {
        column: usize,
        expected: String,
        found: String,
    },
    #[error("column {column}: {value:?} is not a number")]
    Number { column: usize, value: String },
    #[error("column {column}: {value:?} is not an integer")]
    Integer { column: usize, value: String },
    #[error("column {column}: label {label} is outside 0..=20")]
    LabelRange { column: usize, label: i64 },
    #[error("column {column}: {value:?} is not a silhouette bit (0 or 1)")]
    SilhouetteBit { column: usize, value: String },
    #[error("mask has no foreground pixels")]
    EmptyForeground,
    #[error("unknown joint {name:?}")]
    UnknownJoint { name: String },
    #[error("duplicate joint {name}")]
    DuplicateJoint { name: String },
    #[error("missing joint {name}")]
    MissingJoint { name: String },
    #[error("missing bias row")]
    MissingBias,
    #[error("duplicate bias row")]
    DuplicateBias,
    #[error("missing avg row")]
    MissingAvg,
    #[error("avg row states {stated} but the entries average to {computed}")]
    AvgMismatch { stated: f64, computed: f64 },
    #[error("bad metadata: {detail}")]
    BadMetadata { detail: String },
    #[error("bad image header: {detail}")]
    BadImage { detail: String },
    #[error("duplicate subject {subject_id}")]
    DuplicateSubject { subject_id: String },
    #[error("session references unknown subject {subject_id}")]
    UnknownSubjectRef { subject_id: String },
    #[error("duplicate entry {key}")]
    DuplicateRow { key: String },
    #[error("{detail}")]
    Domain { detail: String },
}

impl ParseErrorKind {
    /// Wraps a domain-validation failure so it can be located in the file.
    pub(crate) fn domain(err: impl std::fmt::Display) -> ParseErrorKind {
        ParseErrorKind::Domain {
            detail: err.to_string(),
        }
    }
}

/// A file-level failure: reading the file or parsing its contents. The
/// message is self-contained (path, location, cause on one line).
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {error}")]
    Read { path: String, error: std::io::Error },
    #[error("{path}: {error}")]
    Write { path: String, error: std::io::Error },
    #[error("{path}: {error}")]
    Parse { path: String, error: ParseError },
}

pub(crate) fn read_file(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|error| FileError::Read {
        path: path.display().to_string(),
        error,
    })
}

pub(crate) fn read_file_bytes(path: &Path) -> Result<Vec<u8>, FileError> {
    std::fs::read(path).map_err(|error| FileError::Read {
        path: path.display().to_string(),
        error,
    })
}

pub(crate) fn located(path: &Path, error: ParseError) -> FileError {
    FileError::Parse {
        path: path.display().to_string(),
        error,
    }
}

/// Reads and parses a skeleton stream file.
pub fn load_skeleton_csv(path: &Path) -> Result<crate::model::SkeletonStream, FileError> {
    parse_skeleton_csv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses a mask file, text grid or PGM by content.
pub fn load_mask(path: &Path) -> Result<crate::mass::SegmentationMask, FileError> {
    parse_mask_bytes(&read_file_bytes(path)?).map_err(|e| located(path, e))
}

/// Reads and parses a mass profile file.
pub fn load_profile_tsv(path: &Path) -> Result<crate::model::MassProfile, FileError> {
    parse_profile_tsv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses a trained model file.
pub fn load_model_tsv(path: &Path) -> Result<crate::model::CalorieModel, FileError> {
    parse_model_tsv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses an error report file.
pub fn load_report_tsv(path: &Path) -> Result<crate::eval::ErrorReport, FileError> {
    parse_report_tsv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses a sessions table.
pub fn load_sessions_csv(path: &Path) -> Result<SessionsFile, FileError> {
    parse_sessions_csv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses an accumulated energy vector file.
pub fn load_energy_tsv(path: &Path) -> Result<crate::model::EnergyVector, FileError> {
    parse_energy_tsv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses a binary silhouette text grid.
pub fn load_silhouette_text(path: &Path) -> Result<crate::mass::Silhouette, FileError> {
    parse_silhouette_text(&read_file(path)?).map_err(|e| located(path, e))
}

/// Reads and parses a 2D joint coordinate table.
pub fn load_joints2d_tsv(path: &Path) -> Result<crate::joint::JointMap<[f64; 2]>, FileError> {
    parse_joints2d_tsv(&read_file(path)?).map_err(|e| located(path, e))
}

/// Writes `content` to `path` with a write-location error on failure.
pub fn save_text(path: &Path, content: &str) -> Result<(), FileError> {
    std::fs::write(path, content).map_err(|error| FileError::Write {
        path: path.display().to_string(),
        error,
    })
}
