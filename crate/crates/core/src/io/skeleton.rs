//! Skeleton stream CSV: header `t,head_x,head_y,head_z,...,right_foot_z`
//! (61 columns, joints in ordinal order), one frame per row, timestamps in
//! seconds. An optional `# fps: <rate>` comment carries the nominal capture
//! rate; without it the parser assumes 25.

use super::{ParseError, ParseErrorKind};
use crate::joint::{JointId, JointMap};
use crate::model::{JointFrame, SkeletonStream, Vec3, DEFAULT_NOMINAL_FPS};

/// The exact 61-column header line.
pub fn skeleton_header() -> String {
    let mut columns = vec!["t".to_string()];
    for joint in JointId::ALL {
        for axis in ["x", "y", "z"] {
            columns.push(format!("{}_{axis}", joint.name()));
        }
    }
    columns.join(",")
}

/// Serializes a stream; floats use shortest round-trip formatting.
pub fn emit_skeleton_csv(stream: &SkeletonStream) -> String {
    let mut out = String::new();
    out.push_str(&format!("# fps: {}\n", stream.nominal_fps()));
    out.push_str(&skeleton_header());
    out.push('\n');
    for frame in stream.frames() {
        out.push_str(&format!("{}", frame.t()));
        for joint in JointId::ALL {
            let p = frame.position(joint);
            out.push_str(&format!(",{},{},{}", p[0], p[1], p[2]));
        }
        out.push('\n');
    }
    out
}

/// Parses a skeleton stream, reporting the first problem with its line.
pub fn parse_skeleton_csv(text: &str) -> Result<SkeletonStream, ParseError> {
    let expected_header: Vec<String> = skeleton_header().split(',').map(str::to_string).collect();
    let mut nominal_fps = DEFAULT_NOMINAL_FPS;
    let mut header_seen = false;
    let mut frames: Vec<JointFrame> = Vec::new();
    let mut prev_t: Option<(f64, usize)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("fps:") {
                nominal_fps = value.trim().parse().map_err(|_| {
                    ParseError::at(
                        line_no,
                        ParseErrorKind::BadMetadata {
                            detail: format!("fps value {:?}", value.trim()),
                        },
                    )
                })?;
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if !header_seen {
            if fields.len() != expected_header.len() {
                return Err(ParseError::at(
                    line_no,
                    ParseErrorKind::ColumnCount {
                        expected: expected_header.len(),
                        found: fields.len(),
                    },
                ));
            }
            for (c, (found, expected)) in fields.iter().zip(&expected_header).enumerate() {
                if found.trim() != expected {
                    return Err(ParseError::at(
                        line_no,
                        ParseErrorKind::HeaderMismatch {
                            column: c + 1,
                            expected: expected.clone(),
                            found: found.trim().to_string(),
                        },
                    ));
                }
            }
            header_seen = true;
            continue;
        }
        if fields.len() != expected_header.len() {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: expected_header.len(),
                    found: fields.len(),
                },
            ));
        }
        let mut numbers = [0.0f64; 61];
        for (c, field) in fields.iter().enumerate() {
            numbers[c] = field.trim().parse().map_err(|_| {
                ParseError::at(
                    line_no,
                    ParseErrorKind::Number {
                        column: c + 1,
                        value: field.trim().to_string(),
                    },
                )
            })?;
        }
        let t = numbers[0];
        if let Some((prev, _)) = prev_t {
            if t <= prev {
                return Err(ParseError::at(
                    line_no,
                    ParseErrorKind::domain(format!(
                        "timestamp {t} does not increase over previous {prev}"
                    )),
                ));
            }
        }
        prev_t = Some((t, line_no));
        let positions: JointMap<Vec3> = JointMap::from_fn(|j| {
            let base = 1 + 3 * j.index();
            [numbers[base], numbers[base + 1], numbers[base + 2]]
        });
        let frame = JointFrame::new(t, positions)
            .map_err(|e| ParseError::at(line_no, ParseErrorKind::domain(e)))?;
        frames.push(frame);
    }

    if !header_seen {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    SkeletonStream::new(frames, nominal_fps)
        .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn origin_row(t: f64) -> String {
        let zeros = vec!["0"; 60].join(",");
        format!("{t},{zeros}")
    }

    #[test]
    fn header_has_61_columns_in_ordinal_order() {
        let header = skeleton_header();
        let names: Vec<&str> = header.split(',').collect();
        assert_eq!(names.len(), 61);
        assert_eq!(names[0], "t");
        assert_eq!(names[1], "head_x");
        assert_eq!(names[2], "head_y");
        assert_eq!(names[3], "head_z");
        assert_eq!(names[60], "right_foot_z");
        assert_eq!(names[4], "left_elbow_x");
    }

    #[test]
    fn parses_two_origin_frames() {
        let text = format!(
            "{}\n{}\n{}\n",
            skeleton_header(),
            origin_row(0.0),
            origin_row(0.04)
        );
        let stream = parse_skeleton_csv(&text).unwrap();
        assert_eq!(stream.frames().len(), 2);
        assert_eq!(stream.nominal_fps(), 25.0);
        for frame in stream.frames() {
            for j in JointId::ALL {
                assert_eq!(frame.position(j), [0.0, 0.0, 0.0]);
            }
        }
        assert_relative_eq!(stream.duration(), 0.04, max_relative = 1e-12);
    }

    #[test]
    fn decreasing_timestamp_is_located() {
        let text = format!(
            "{}\n{}\n{}\n{}\n",
            skeleton_header(),
            origin_row(0.0),
            origin_row(0.08),
            origin_row(0.04)
        );
        let err = parse_skeleton_csv(&text).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(matches!(err.kind, ParseErrorKind::Domain { .. }));
    }

    #[test]
    fn non_numeric_cell_is_located_with_column() {
        let mut bad = origin_row(0.04);
        bad = bad.replacen(",0", ",abc", 1);
        let text = format!("{}\n{}\n{}\n", skeleton_header(), origin_row(0.0), bad);
        let err = parse_skeleton_csv(&text).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(
            err.kind,
            ParseErrorKind::Number {
                column: 2,
                value: "abc".to_string()
            }
        );
    }

    #[test]
    fn wrong_header_and_column_counts_are_rejected() {
        let text = "t,head_x\n0,1\n";
        let err = parse_skeleton_csv(text).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ColumnCount { .. }));

        let mut header = skeleton_header();
        header = header.replacen("head_x", "skull_x", 1);
        let text = format!("{header}\n{}\n", origin_row(0.0));
        let err = parse_skeleton_csv(&text).unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::HeaderMismatch {
                column: 2,
                expected: "head_x".to_string(),
                found: "skull_x".to_string()
            }
        );

        assert_eq!(
            parse_skeleton_csv("").unwrap_err().kind,
            ParseErrorKind::Empty
        );
    }

    #[test]
    fn long_uniform_file_spans_expected_duration() {
        let mut text = format!("{}\n", skeleton_header());
        for k in 0..250 {
            text.push_str(&origin_row(k as f64 * 0.04));
            text.push('\n');
        }
        let stream = parse_skeleton_csv(&text).unwrap();
        assert_eq!(stream.frames().len(), 250);
        assert_eq!(stream.nominal_fps(), 25.0);
        assert_relative_eq!(stream.duration(), 9.96, max_relative = 1e-12);
    }

    #[test]
    fn fps_comment_overrides_default() {
        let text = format!(
            "# fps: 30\n{}\n{}\n{}\n",
            skeleton_header(),
            origin_row(0.0),
            origin_row(1.0 / 30.0)
        );
        let stream = parse_skeleton_csv(&text).unwrap();
        assert_eq!(stream.nominal_fps(), 30.0);

        let bad = format!("# fps: fast\n{}\n{}\n", skeleton_header(), origin_row(0.0));
        assert!(matches!(
            parse_skeleton_csv(&bad).unwrap_err().kind,
            ParseErrorKind::BadMetadata { .. }
        ));
    }

    #[test]
    fn round_trip_preserves_stream_exactly() {
        let frames: Vec<JointFrame> = (0..7)
            .map(|k| {
                let t = k as f64 / 30.0;
                JointFrame::new(
                    t,
                    JointMap::from_fn(|j| {
                        let o = j.ordinal() as f64;
                        [0.1 * o * (t + 1.0).sin(), -0.2 * o, 1.0 / (o + t + 0.3)]
                    }),
                )
                .unwrap()
            })
            .collect();
        let stream = SkeletonStream::new(frames, 30.0).unwrap();
        let text = emit_skeleton_csv(&stream);
        let parsed = parse_skeleton_csv(&text).unwrap();
        assert_eq!(parsed, stream);
    }
}
