//! Evaluation report serialization.
//!
//! `report.tsv`: tab-separated `subject`, `exercise`, `error_rate` rows
//! followed by a final `avg` row. Metadata comments carry the mass method
//! label, the fold count, and each fold's train/test keys so a report can be
//! compared or audited without rerunning the evaluation. The `avg` row is
//! redundant by construction and is checked against the entries on parse.

use std::collections::HashSet;

use super::{ParseError, ParseErrorKind};
use crate::eval::{ErrorEntry, ErrorReport, FoldManifest};

const REPORT_HEADER: &str = "subject\texercise\terror_rate";

/// Serializes a report; entry rows keep the report's sorted order.
pub fn emit_report_tsv(report: &ErrorReport) -> String {
    let mut out = format!("# method: {}\n", report.label());
    if !report.folds().is_empty() {
        out.push_str(&format!("# k: {}\n", report.folds().len()));
        for fold in report.folds() {
            out.push_str(&format!(
                "# fold {}: train={} test={}\n",
                fold.held_out_exercise,
                fold.train_keys.join(","),
                fold.test_keys.join(",")
            ));
        }
    }
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for e in report.entries() {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            e.subject_id, e.exercise_index, e.error_rate
        ));
    }
    out.push_str(&format!("avg\t\t{}\n", report.mean()));
    out
}

fn split_keys(csv: &str) -> Vec<String> {
    let csv = csv.trim();
    if csv.is_empty() {
        Vec::new()
    } else {
        csv.split(',').map(|k| k.trim().to_string()).collect()
    }
}

fn parse_fold_line(rest: &str, line_no: usize) -> Result<FoldManifest, ParseError> {
    let bad = |detail: String| ParseError::at(line_no, ParseErrorKind::BadMetadata { detail });
    let (index, spec) = rest.split_once(':').ok_or_else(|| {
        bad(format!(
            "fold line must look like `fold <n>: ...`: {rest:?}"
        ))
    })?;
    let held_out_exercise: u32 = index
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad fold index {:?}", index.trim())))?;
    let mut train_keys = None;
    let mut test_keys = None;
    for token in spec.split_whitespace() {
        if let Some(v) = token.strip_prefix("train=") {
            train_keys = Some(split_keys(v));
        } else if let Some(v) = token.strip_prefix("test=") {
            test_keys = Some(split_keys(v));
        } else {
            return Err(bad(format!("unexpected fold field {token:?}")));
        }
    }
    match (train_keys, test_keys) {
        (Some(train_keys), Some(test_keys)) => Ok(FoldManifest {
            held_out_exercise,
            train_keys,
            test_keys,
        }),
        _ => Err(bad("fold line needs both train= and test=".to_string())),
    }
}

/// Parses a report and re-derives the mean; a stated `avg` row that disagrees
/// with the entries (beyond 1e-9 relative) is rejected.
pub fn parse_report_tsv(text: &str) -> Result<ErrorReport, ParseError> {
    let mut label: Option<String> = None;
    let mut stated_k: Option<(usize, usize)> = None;
    let mut folds: Vec<FoldManifest> = Vec::new();
    let mut entries: Vec<ErrorEntry> = Vec::new();
    let mut seen_keys: HashSet<String> = HashSet::new();
    let mut stated_avg: Option<f64> = None;
    let mut header_seen = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim_start();
            if let Some(v) = comment.strip_prefix("method:") {
                label = Some(v.trim().to_string());
            } else if let Some(v) = comment.strip_prefix("k:") {
                let k: usize = v.trim().parse().map_err(|_| {
                    ParseError::at(
                        line_no,
                        ParseErrorKind::BadMetadata {
                            detail: format!("bad fold count {:?}", v.trim()),
                        },
                    )
                })?;
                stated_k = Some((k, line_no));
            } else if let Some(v) = comment.strip_prefix("fold ") {
                folds.push(parse_fold_line(v, line_no)?);
            }
            continue;
        }
        if !header_seen {
            if line != REPORT_HEADER {
                return Err(ParseError::at(
                    line_no,
                    ParseErrorKind::HeaderMismatch {
                        column: 1,
                        expected: REPORT_HEADER.to_string(),
                        found: line.to_string(),
                    },
                ));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: 3,
                    found: fields.len(),
                },
            ));
        }
        let rate: f64 = fields[2].trim().parse().map_err(|_| {
            ParseError::at(
                line_no,
                ParseErrorKind::Number {
                    column: 3,
                    value: fields[2].trim().to_string(),
                },
            )
        })?;
        if fields[0] == "avg" {
            if stated_avg.replace(rate).is_some() {
                return Err(ParseError::at(
                    line_no,
                    ParseErrorKind::DuplicateRow {
                        key: "avg".to_string(),
                    },
                ));
            }
            continue;
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
        let entry = ErrorEntry {
            subject_id: fields[0].trim().to_string(),
            exercise_index,
            error_rate: rate,
        };
        if !seen_keys.insert(entry.key()) {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::DuplicateRow { key: entry.key() },
            ));
        }
        entries.push(entry);
    }
    if !header_seen {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    if let Some((k, line_no)) = stated_k {
        if k != folds.len() {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::BadMetadata {
                    detail: format!("k is {k} but {} fold lines follow", folds.len()),
                },
            ));
        }
    }
    let stated = stated_avg.ok_or_else(|| ParseError::at(0, ParseErrorKind::MissingAvg))?;
    let report = ErrorReport::new(
        label.unwrap_or_else(|| "unknown".to_string()),
        entries,
        folds,
    )
    .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))?;
    let computed = report.mean();
    if (stated - computed).abs() > 1e-9 * computed.abs().max(1.0) {
        return Err(ParseError::at(
            0,
            ParseErrorKind::AvgMismatch { stated, computed },
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(subject: &str, exercise: u32, rate: f64) -> ErrorEntry {
        ErrorEntry {
            subject_id: subject.to_string(),
            exercise_index: exercise,
            error_rate: rate,
        }
    }

    fn sample_report() -> ErrorReport {
        let entries = vec![
            entry("s1", 1, 0.25),
            entry("s1", 2, 0.1),
            entry("s2", 1, 0.075),
            entry("s2", 2, 0.3),
        ];
        let folds = vec![
            FoldManifest {
                held_out_exercise: 1,
                train_keys: vec!["s1:2".to_string(), "s2:2".to_string()],
                test_keys: vec!["s1:1".to_string(), "s2:1".to_string()],
            },
            FoldManifest {
                held_out_exercise: 2,
                train_keys: vec!["s1:1".to_string(), "s2:1".to_string()],
                test_keys: vec!["s1:2".to_string(), "s2:2".to_string()],
            },
        ];
        ErrorReport::new("personalized", entries, folds).unwrap()
    }

    #[test]
    fn emits_metadata_entries_and_avg() {
        let text = emit_report_tsv(&sample_report());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# method: personalized");
        assert_eq!(lines[1], "# k: 2");
        assert_eq!(lines[2], "# fold 1: train=s1:2,s2:2 test=s1:1,s2:1");
        assert_eq!(lines[4], REPORT_HEADER);
        assert_eq!(lines[5], "s1\t1\t0.25");
        assert_eq!(lines[9], format!("avg\t\t{}", sample_report().mean()));
    }

    #[test]
    fn round_trip_preserves_label_entries_and_folds() {
        let report = sample_report();
        let parsed = parse_report_tsv(&emit_report_tsv(&report)).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn round_trip_without_folds() {
        let report = ErrorReport::new("standard", vec![entry("s1", 1, 0.5)], Vec::new()).unwrap();
        let parsed = parse_report_tsv(&emit_report_tsv(&report)).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn missing_method_line_gets_placeholder_label() {
        let text = "subject\texercise\terror_rate\ns1\t1\t0.5\navg\t\t0.5\n";
        assert_eq!(parse_report_tsv(text).unwrap().label(), "unknown");
    }

    #[test]
    fn avg_row_is_required_and_checked() {
        let no_avg = "subject\texercise\terror_rate\ns1\t1\t0.5\n";
        assert!(matches!(
            parse_report_tsv(no_avg).unwrap_err().kind,
            ParseErrorKind::MissingAvg
        ));

        let wrong = "subject\texercise\terror_rate\ns1\t1\t0.5\navg\t\t0.75\n";
        match parse_report_tsv(wrong).unwrap_err().kind {
            ParseErrorKind::AvgMismatch { stated, computed } => {
                assert_eq!(stated, 0.75);
                assert_eq!(computed, 0.5);
            }
            other => panic!("expected avg mismatch, got {other:?}"),
        }

        let double = "subject\texercise\terror_rate\ns1\t1\t0.5\navg\t\t0.5\navg\t\t0.5\n";
        assert!(matches!(
            parse_report_tsv(double).unwrap_err().kind,
            ParseErrorKind::DuplicateRow { .. }
        ));
    }

    #[test]
    fn rejects_shape_and_metadata_problems() {
        assert!(matches!(
            parse_report_tsv("").unwrap_err().kind,
            ParseErrorKind::Empty
        ));
        let bad_header = "subject\trate\n";
        assert!(matches!(
            parse_report_tsv(bad_header).unwrap_err().kind,
            ParseErrorKind::HeaderMismatch { .. }
        ));
        let bad_k = "# k: 2\nsubject\texercise\terror_rate\ns1\t1\t0.5\navg\t\t0.5\n";
        assert!(matches!(
            parse_report_tsv(bad_k).unwrap_err().kind,
            ParseErrorKind::BadMetadata { .. }
        ));
        let bad_fold = "# fold one: train=a test=b\nsubject\texercise\terror_rate\n";
        assert!(matches!(
            parse_report_tsv(bad_fold).unwrap_err().kind,
            ParseErrorKind::BadMetadata { .. }
        ));
        let dup = "subject\texercise\terror_rate\ns1\t1\t0.5\ns1\t1\t0.5\n";
        let err = parse_report_tsv(dup).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.kind, ParseErrorKind::DuplicateRow { .. }));
        let bad_rate = "subject\texercise\terror_rate\ns1\t1\tfast\n";
        let err = parse_report_tsv(bad_rate).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ParseErrorKind::Number { .. }));
    }

    #[test]
    fn fold_lines_allow_empty_key_lists() {
        let fold = parse_fold_line("3: train= test=s1:3", 1).unwrap();
        assert_eq!(fold.held_out_exercise, 3);
        assert!(fold.train_keys.is_empty());
        assert_eq!(fold.test_keys, vec!["s1:3".to_string()]);
    }
}
