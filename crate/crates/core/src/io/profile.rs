//! Mass profile TSV: one `joint\tfraction` row per joint in ordinal order,
//! preceded by a `# source: standard|personalized` comment. A file without
//! the comment is treated as personalized.

use super::{ParseError, ParseErrorKind};
use crate::joint::{JointId, JointMap};
use crate::model::{MassProfile, ProfileSource};

/// Serializes a profile; fractions use shortest round-trip formatting.
pub fn emit_profile_tsv(profile: &MassProfile) -> String {
    let mut out = format!("# source: {}\n", profile.source().label());
    for joint in JointId::ALL {
        out.push_str(&format!("{}\t{}\n", joint.name(), profile.fraction(joint)));
    }
    out
}

/// Parses a profile; all 20 joints must appear exactly once, in any order.
pub fn parse_profile_tsv(text: &str) -> Result<MassProfile, ParseError> {
    let mut source = ProfileSource::Personalized;
    let mut seen: [Option<f64>; JointId::COUNT] = [None; JointId::COUNT];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("source:") {
                let value = value.trim();
                source = ProfileSource::from_label(value).ok_or_else(|| {
                    ParseError::at(
                        line_no,
                        ParseErrorKind::BadMetadata {
                            detail: format!("source {value:?}"),
                        },
                    )
                })?;
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: 2,
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
        let fraction: f64 = fields[1].trim().parse().map_err(|_| {
            ParseError::at(
                line_no,
                ParseErrorKind::Number {
                    column: 2,
                    value: fields[1].trim().to_string(),
                },
            )
        })?;
        if seen[joint.index()].replace(fraction).is_some() {
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
    let fractions = JointMap::from_fn(|j| seen[j.index()].unwrap());
    MassProfile::new(fractions, source).map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::standard_profile;

    #[test]
    fn standard_profile_round_trips_with_exact_sum() {
        let text = emit_profile_tsv(&standard_profile());
        assert!(text.starts_with("# source: standard\n"));
        let parsed = parse_profile_tsv(&text).unwrap();
        assert_eq!(parsed, standard_profile());
        assert_eq!(parsed.total(), 1.0);
    }

    #[test]
    fn personalized_profile_round_trips() {
        let mask =
            crate::mass::SegmentationMask::new(4, 2, vec![1, 2, 15, 15, 15, 0, 7, 20]).unwrap();
        let profile = crate::mass::profile_from_mask(&mask).unwrap();
        let parsed = parse_profile_tsv(&emit_profile_tsv(&profile)).unwrap();
        assert_eq!(parsed, profile);
        assert_eq!(parsed.source(), ProfileSource::Personalized);
    }

    #[test]
    fn missing_source_defaults_to_personalized() {
        let text: String = emit_profile_tsv(&standard_profile())
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        let parsed = parse_profile_tsv(&text).unwrap();
        assert_eq!(parsed.source(), ProfileSource::Personalized);
    }

    #[test]
    fn rejects_missing_duplicate_and_unknown_joints() {
        let full = emit_profile_tsv(&standard_profile());
        let missing: String = full.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            parse_profile_tsv(&missing).unwrap_err().kind,
            ParseErrorKind::MissingJoint { .. }
        ));

        let dup = format!("{full}head\t0.1\n");
        assert!(matches!(
            parse_profile_tsv(&dup).unwrap_err().kind,
            ParseErrorKind::DuplicateJoint { .. }
        ));

        let unknown = full.replacen("head\t", "skull\t", 1);
        assert!(matches!(
            parse_profile_tsv(&unknown).unwrap_err().kind,
            ParseErrorKind::UnknownJoint { .. }
        ));
    }

    #[test]
    fn rejects_fractions_that_do_not_sum_to_one() {
        let bad: String = JointId::ALL
            .iter()
            .map(|j| format!("{}\t0.1\n", j.name()))
            .collect();
        let err = parse_profile_tsv(&bad).unwrap_err();
        assert_eq!(err.line, 0);
        assert!(matches!(err.kind, ParseErrorKind::Domain { .. }));
    }

    #[test]
    fn rejects_bad_source_and_bad_numbers() {
        let text = "# source: guessed\nhead\t1.0\n";
        assert!(matches!(
            parse_profile_tsv(text).unwrap_err().kind,
            ParseErrorKind::BadMetadata { .. }
        ));
        let text = "head\tmany\n";
        assert!(matches!(
            parse_profile_tsv(text).unwrap_err().kind,
            ParseErrorKind::Number { .. }
        ));
    }
}
