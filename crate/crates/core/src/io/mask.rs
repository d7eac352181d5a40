//! Label masks and silhouettes: whitespace-separated integer grids or PGM
//! images (P2 ASCII, P5 binary), plus the 2D joint table used to segment a
//! raw silhouette.

use super::{ParseError, ParseErrorKind};
use crate::joint::{JointId, JointMap};
use crate::mass::{SegmentationMask, Silhouette};

/// Serializes a mask as a space-separated integer grid, one row per line.
pub fn emit_mask_text(mask: &SegmentationMask) -> String {
    let mut out = String::new();
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if x > 0 {
                out.push(' ');
            }
            out.push_str(&mask.label(x, y).to_string());
        }
        out.push('\n');
    }
    out
}

/// Parses one grid of integers; every row must be equally wide and every
/// value within `limit`.
fn parse_grid(text: &str, limit: i64) -> Result<(usize, usize, Vec<u8>), ParseError> {
    let mut width = 0usize;
    let mut height = 0usize;
    let mut cells: Vec<u8> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row_width = 0usize;
        for (c, field) in line.split_whitespace().enumerate() {
            let value: i64 = field.parse().map_err(|_| {
                ParseError::at(
                    line_no,
                    ParseErrorKind::Integer {
                        column: c + 1,
                        value: field.to_string(),
                    },
                )
            })?;
            if value < 0 || value > limit {
                return Err(ParseError::at(
                    line_no,
                    ParseErrorKind::LabelRange {
                        column: c + 1,
                        label: value,
                    },
                ));
            }
            cells.push(value as u8);
            row_width += 1;
        }
        if height == 0 {
            width = row_width;
        } else if row_width != width {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: width,
                    found: row_width,
                },
            ));
        }
        height += 1;
    }
    if width == 0 || height == 0 {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    Ok((width, height, cells))
}

/// Parses a text-grid label mask (values 0..=20, at least one nonzero).
pub fn parse_mask_text(text: &str) -> Result<SegmentationMask, ParseError> {
    let (width, height, labels) = parse_grid(text, 20)?;
    let mask = SegmentationMask::new(width, height, labels)
        .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))?;
    if mask.foreground_count() == 0 {
        return Err(ParseError::at(0, ParseErrorKind::EmptyForeground));
    }
    Ok(mask)
}

/// Parses a binary silhouette from a text grid of 0/1 bits.
pub fn parse_silhouette_text(text: &str) -> Result<Silhouette, ParseError> {
    let (width, height, bits) = parse_grid(text, 1).map_err(|e| match e.kind {
        ParseErrorKind::LabelRange { column, label } => ParseError::at(
            e.line,
            ParseErrorKind::SilhouetteBit {
                column,
                value: label.to_string(),
            },
        ),
        _ => e,
    })?;
    let foreground = bits.into_iter().map(|b| b == 1).collect();
    Silhouette::new(width, height, foreground)
        .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))
}

/// Parses a PGM image (P2 or P5) as a label mask.
pub fn parse_mask_pgm(bytes: &[u8]) -> Result<SegmentationMask, ParseError> {
    let (magic, rest) = split_token(bytes).ok_or_else(|| bad_image("missing magic number"))?;
    let binary = match magic.as_slice() {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(bad_image(&format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let (width, rest) = next_header_number(rest)?;
    let (height, rest) = next_header_number(rest)?;
    let (maxval, rest) = next_header_number(rest)?;
    if width == 0 || height == 0 {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    if !(1..=255).contains(&maxval) {
        return Err(bad_image(&format!("maxval {maxval}, expected 1..=255")));
    }
    let expected = width as usize * height as usize;
    let labels: Vec<u8> = if binary {
        // One whitespace byte separates the header from raster data.
        if rest.is_empty() {
            return Err(bad_image("missing raster data"));
        }
        let raster = &rest[1..];
        if raster.len() < expected {
            return Err(bad_image(&format!(
                "raster holds {} bytes, expected {expected}",
                raster.len()
            )));
        }
        raster[..expected].to_vec()
    } else {
        let text = std::str::from_utf8(rest).map_err(|_| bad_image("non-ASCII raster"))?;
        let mut values = Vec::with_capacity(expected);
        for (c, field) in text.split_whitespace().enumerate() {
            let value: i64 = field.parse().map_err(|_| {
                ParseError::at(
                    0,
                    ParseErrorKind::Integer {
                        column: c + 1,
                        value: field.to_string(),
                    },
                )
            })?;
            if !(0..=255).contains(&value) {
                return Err(bad_image(&format!("sample {value} exceeds 8 bits")));
            }
            values.push(value as u8);
        }
        if values.len() != expected {
            return Err(bad_image(&format!(
                "raster holds {} samples, expected {expected}",
                values.len()
            )));
        }
        values
    };
    for (i, &label) in labels.iter().enumerate() {
        if label > 20 {
            return Err(ParseError::at(
                0,
                ParseErrorKind::LabelRange {
                    column: i + 1,
                    label: label as i64,
                },
            ));
        }
    }
    let mask = SegmentationMask::new(width as usize, height as usize, labels)
        .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))?;
    if mask.foreground_count() == 0 {
        return Err(ParseError::at(0, ParseErrorKind::EmptyForeground));
    }
    Ok(mask)
}

/// Dispatches on content: PGM when the file starts with a P2/P5 magic,
/// text grid otherwise.
pub fn parse_mask_bytes(bytes: &[u8]) -> Result<SegmentationMask, ParseError> {
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        return parse_mask_pgm(bytes);
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|_| bad_image("not UTF-8 text and not a P2/P5 image"))?;
    parse_mask_text(text)
}

/// Parses a `joint\tu\tv` table of 2D pixel positions covering all 20 joints.
pub fn parse_joints2d_tsv(text: &str) -> Result<JointMap<[f64; 2]>, ParseError> {
    let mut seen: [Option<[f64; 2]>; JointId::COUNT] = [None; JointId::COUNT];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') || line == "joint\tu\tv" {
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
        let joint = JointId::from_name(fields[0].trim()).ok_or_else(|| {
            ParseError::at(
                line_no,
                ParseErrorKind::UnknownJoint {
                    name: fields[0].trim().to_string(),
                },
            )
        })?;
        let mut uv = [0.0f64; 2];
        for (k, field) in fields[1..].iter().enumerate() {
            uv[k] = field.trim().parse().map_err(|_| {
                ParseError::at(
                    line_no,
                    ParseErrorKind::Number {
                        column: k + 2,
                        value: field.trim().to_string(),
                    },
                )
            })?;
        }
        if seen[joint.index()].replace(uv).is_some() {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::DuplicateJoint {
                    name: joint.name().to_string(),
                },
            ));
        }
    }
    for joint in JointId::ALL {
        if seen[joint.index()].is_none() {
            return Err(ParseError::at(
                0,
                ParseErrorKind::MissingJoint {
                    name: joint.name().to_string(),
                },
            ));
        }
    }
    Ok(JointMap::from_fn(|j| seen[j.index()].unwrap()))
}

fn bad_image(detail: &str) -> ParseError {
    ParseError::at(
        0,
        ParseErrorKind::BadImage {
            detail: detail.to_string(),
        },
    )
}

/// Splits the next whitespace-delimited token, skipping leading whitespace
/// and `#` comments (PGM header syntax).
fn split_token(bytes: &[u8]) -> Option<(Vec<u8>, &[u8])> {
    let mut i = 0;
    loop {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        break;
    }
    if i >= bytes.len() {
        return None;
    }
    let start = i;
    while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
        i += 1;
    }
    Some((bytes[start..i].to_vec(), &bytes[i..]))
}

fn next_header_number(bytes: &[u8]) -> Result<(u32, &[u8]), ParseError> {
    let (token, rest) = split_token(bytes).ok_or_else(|| bad_image("truncated header"))?;
    let text = std::str::from_utf8(&token).map_err(|_| bad_image("non-ASCII header"))?;
    let value = text
        .parse()
        .map_err(|_| bad_image(&format!("{text:?} is not a header number")))?;
    Ok((value, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_uniform_head_grid() {
        let mask = parse_mask_text("1 1\n1 1\n").unwrap();
        assert_eq!((mask.width(), mask.height()), (2, 2));
        assert_eq!(mask.foreground_count(), 4);
        assert!(mask.labels().iter().all(|&l| l == 1));
    }

    #[test]
    fn rejects_empty_foreground_and_bad_labels() {
        assert_eq!(
            parse_mask_text("0 0\n0 0\n").unwrap_err().kind,
            ParseErrorKind::EmptyForeground
        );
        let err = parse_mask_text("0 21\n0 0\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(
            err.kind,
            ParseErrorKind::LabelRange {
                column: 2,
                label: 21
            }
        );
        let err = parse_mask_text("1 x\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Integer { .. }));
        assert!(matches!(
            parse_mask_text("").unwrap_err().kind,
            ParseErrorKind::Empty
        ));
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = parse_mask_text("1 1 1\n1 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(
            err.kind,
            ParseErrorKind::ColumnCount {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn counted_grid_feeds_expected_fractions() {
        // 10x10: 36 cells of label 15, 64 of label 1.
        let mut rows = String::new();
        for i in 0..100 {
            rows.push_str(if i < 36 { "15" } else { "1" });
            rows.push(if i % 10 == 9 { '\n' } else { ' ' });
        }
        let mask = parse_mask_text(&rows).unwrap();
        let profile = crate::mass::profile_from_mask(&mask).unwrap();
        assert_eq!(profile.fraction(JointId::LeftKnee), 0.36);
        assert_eq!(profile.fraction(JointId::Head), 0.64);
    }

    #[test]
    fn mask_text_round_trips() {
        let mask = parse_mask_text("0 1 2\n20 0 15\n").unwrap();
        let emitted = emit_mask_text(&mask);
        assert_eq!(parse_mask_text(&emitted).unwrap(), mask);
        assert_eq!(emitted, "0 1 2\n20 0 15\n");
    }

    #[test]
    fn parses_ascii_pgm_with_comment() {
        let pgm = "P2\n# silhouette labels\n3 2\n255\n0 1 2\n3 4 5\n";
        let mask = parse_mask_pgm(pgm.as_bytes()).unwrap();
        assert_eq!((mask.width(), mask.height()), (3, 2));
        assert_eq!(mask.label(2, 1), 5);
    }

    #[test]
    fn parses_binary_pgm() {
        let mut bytes = b"P5\n3 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 1, 2, 3, 4, 20]);
        let mask = parse_mask_pgm(&bytes).unwrap();
        assert_eq!(mask.label(2, 1), 20);
        assert_eq!(mask.foreground_count(), 5);
    }

    #[test]
    fn pgm_rejects_bad_headers_and_labels() {
        assert!(matches!(
            parse_mask_pgm(b"P3\n1 1\n255\n0\n").unwrap_err().kind,
            ParseErrorKind::BadImage { .. }
        ));
        assert!(matches!(
            parse_mask_pgm(b"P2\n2 2\n255\n0 0 0\n").unwrap_err().kind,
            ParseErrorKind::BadImage { .. }
        ));
        let mut truncated = b"P5\n2 2\n255\n".to_vec();
        truncated.extend_from_slice(&[1, 2]);
        assert!(matches!(
            parse_mask_pgm(&truncated).unwrap_err().kind,
            ParseErrorKind::BadImage { .. }
        ));
        let err = parse_mask_pgm(b"P2\n2 1\n255\n1 21\n").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::LabelRange {
                column: 2,
                label: 21
            }
        );
    }

    #[test]
    fn dispatch_reads_both_shapes() {
        assert_eq!(
            parse_mask_bytes(b"1 2\n0 1\n").unwrap().foreground_count(),
            3
        );
        assert_eq!(
            parse_mask_bytes(b"P2\n2 1\n255\n1 2\n")
                .unwrap()
                .foreground_count(),
            2
        );
    }

    #[test]
    fn silhouette_grid_parses_bits_only() {
        let s = parse_silhouette_text("0 1\n1 1\n").unwrap();
        assert_eq!((s.width(), s.height()), (2, 2));
        assert!(!s.is_foreground(0, 0));
        assert!(s.is_foreground(1, 0));
        assert!(matches!(
            parse_silhouette_text("0 2\n").unwrap_err().kind,
            ParseErrorKind::SilhouetteBit { .. }
        ));
        assert!(parse_silhouette_text("0 0\n").is_err());
    }

    #[test]
    fn joints2d_requires_all_twenty_rows() {
        let mut text = String::new();
        for j in JointId::ALL {
            text.push_str(&format!(
                "{}\t{}\t{}\n",
                j.name(),
                j.ordinal(),
                2 * j.ordinal()
            ));
        }
        let joints = parse_joints2d_tsv(&text).unwrap();
        assert_eq!(joints[JointId::Head], [1.0, 2.0]);
        assert_eq!(joints[JointId::RightFoot], [20.0, 40.0]);

        let with_header = format!("joint\tu\tv\n{text}");
        assert_eq!(parse_joints2d_tsv(&with_header).unwrap(), joints);

        let missing: String = text.lines().take(19).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            parse_joints2d_tsv(&missing).unwrap_err().kind,
            ParseErrorKind::MissingJoint { .. }
        ));

        let dup = format!("{text}head\t5\t5\n");
        assert!(matches!(
            parse_joints2d_tsv(&dup).unwrap_err().kind,
            ParseErrorKind::DuplicateJoint { .. }
        ));

        let unknown = "skull\t1\t2\n";
        assert!(matches!(
            parse_joints2d_tsv(unknown).unwrap_err().kind,
            ParseErrorKind::UnknownJoint { .. }
        ));
    }
}
