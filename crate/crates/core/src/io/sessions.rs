//! Session and subject tables.
//!
//! `sessions.csv`: header `subject,exercise_index,rest_kcal,exercise_kcal,stream_ref`,
//! one session per row. Parsing also runs the protocol screen: any row whose
//! resting consumption exceeds its exercising consumption is reported as a
//! warning, not an error.
//!
//! `subjects.csv`: header `subject,weight_kg,mass_profile_ref`, where the
//! profile reference is either the literal `standard` or a profile file path
//! resolved relative to a caller-chosen directory.

use std::path::Path;

use super::{load_profile_tsv, FileError, ParseError, ParseErrorKind};
use crate::mass::standard_profile;
use crate::model::{SessionRecord, SubjectRecord};

const SESSIONS_HEADER: &str = "subject,exercise_index,rest_kcal,exercise_kcal,stream_ref";
const SUBJECTS_HEADER: &str = "subject,weight_kg,mass_profile_ref";

/// Parsed sessions plus any protocol warnings the rows triggered.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionsFile {
    pub records: Vec<SessionRecord>,
    pub warnings: Vec<String>,
}

/// One subjects.csv row before its profile reference is resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRow {
    pub subject_id: String,
    pub weight_kg: f64,
    pub mass_profile_ref: String,
}

/// Serializes sessions with the canonical header.
pub fn emit_sessions_csv(records: &[SessionRecord]) -> String {
    let mut out = format!("{SESSIONS_HEADER}\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.subject_id(),
            r.exercise_index(),
            r.rest_kcal(),
            r.exercise_kcal(),
            r.stream_ref()
        ));
    }
    out
}

/// Serializes subject rows with the canonical header.
pub fn emit_subjects_csv(rows: &[SubjectRow]) -> String {
    let mut out = format!("{SUBJECTS_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            r.subject_id, r.weight_kg, r.mass_profile_ref
        ));
    }
    out
}

fn check_header(line: &str, line_no: usize, expected: &str) -> Result<(), ParseError> {
    let found: Vec<&str> = line.split(',').map(str::trim).collect();
    let wanted: Vec<&str> = expected.split(',').collect();
    if found.len() != wanted.len() {
        return Err(ParseError::at(
            line_no,
            ParseErrorKind::ColumnCount {
                expected: wanted.len(),
                found: found.len(),
            },
        ));
    }
    for (c, (f, w)) in found.iter().zip(&wanted).enumerate() {
        if f != w {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::HeaderMismatch {
                    column: c + 1,
                    expected: w.to_string(),
                    found: f.to_string(),
                },
            ));
        }
    }
    Ok(())
}

fn parse_number(field: &str, line_no: usize, column: usize) -> Result<f64, ParseError> {
    field.trim().parse().map_err(|_| {
        ParseError::at(
            line_no,
            ParseErrorKind::Number {
                column,
                value: field.trim().to_string(),
            },
        )
    })
}

/// Parses sessions and collects protocol warnings.
pub fn parse_sessions_csv(text: &str) -> Result<SessionsFile, ParseError> {
    let mut header_seen = false;
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            check_header(line, line_no, SESSIONS_HEADER)?;
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: 5,
                    found: fields.len(),
                },
            ));
        }
        let exercise_index: u32 = fields[1].trim().parse().map_err(|_| {
            ParseError::at(
                line_no,
                ParseErrorKind::Integer {
                    column: 2,
                    value: fields[1].trim().to_string(),
                },
            )
        })?;
        let rest_kcal = parse_number(fields[2], line_no, 3)?;
        let exercise_kcal = parse_number(fields[3], line_no, 4)?;
        let record = SessionRecord::new(
            fields[0].trim(),
            exercise_index,
            rest_kcal,
            exercise_kcal,
            fields[4].trim(),
        )
        .map_err(|e| ParseError::at(line_no, ParseErrorKind::domain(e)))?;
        if record.violates_rest_check() {
            warnings.push(format!(
                "line {line_no}: session {}:{} rests at {} kcal but exercises at {} kcal",
                record.subject_id(),
                record.exercise_index(),
                record.rest_kcal(),
                record.exercise_kcal()
            ));
        }
        records.push(record);
    }
    if !header_seen {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    Ok(SessionsFile { records, warnings })
}

/// Parses subject rows; subject ids must be unique and weights positive.
pub fn parse_subjects_csv(text: &str) -> Result<Vec<SubjectRow>, ParseError> {
    let mut header_seen = false;
    let mut rows: Vec<SubjectRow> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            check_header(line, line_no, SUBJECTS_HEADER)?;
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: 3,
                    found: fields.len(),
                },
            ));
        }
        let subject_id = fields[0].trim().to_string();
        if rows.iter().any(|r| r.subject_id == subject_id) {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::DuplicateSubject {
                    subject_id: subject_id.clone(),
                },
            ));
        }
        let weight_kg = parse_number(fields[1], line_no, 2)?;
        if !weight_kg.is_finite() || weight_kg <= 0.0 {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::domain(format!(
                    "weight must be positive and finite, got {weight_kg} kg"
                )),
            ));
        }
        rows.push(SubjectRow {
            subject_id,
            weight_kg,
            mass_profile_ref: fields[2].trim().to_string(),
        });
    }
    if !header_seen {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    Ok(rows)
}

/// Turns subject rows into full records by resolving each profile reference:
/// the literal `standard` becomes the built-in scale, anything else is read
/// as a profile file relative to `base_dir`.
pub fn resolve_subjects(
    rows: &[SubjectRow],
    base_dir: &Path,
) -> Result<Vec<SubjectRecord>, FileError> {
    let mut subjects = Vec::with_capacity(rows.len());
    for row in rows {
        let profile = if row.mass_profile_ref == "standard" {
            standard_profile()
        } else {
            load_profile_tsv(&base_dir.join(&row.mass_profile_ref))?
        };
        let record = SubjectRecord::new(&row.subject_id, row.weight_kg, profile).map_err(|e| {
            FileError::Parse {
                path: base_dir.display().to_string(),
                error: ParseError::at(0, ParseErrorKind::domain(e)),
            }
        })?;
        subjects.push(record);
    }
    Ok(subjects)
}

/// Cross-file check: every session must reference a known subject.
pub fn validate_session_subjects(
    sessions: &[SessionRecord],
    subjects: &[SubjectRecord],
) -> Result<(), ParseError> {
    for s in sessions {
        if !subjects.iter().any(|r| r.subject_id() == s.subject_id()) {
            return Err(ParseError::at(
                0,
                ParseErrorKind::UnknownSubjectRef {
                    subject_id: s.subject_id().to_string(),
                },
            ));
        }
    }
    Ok(())
}
