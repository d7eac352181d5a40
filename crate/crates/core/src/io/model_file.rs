//! Trained calorie model serialization.
//!
//! `model.tsv`: a `bias` row plus one row per joint, tab separated. The
//! training keys ride along in a `# trained_on:` comment so a reloaded model
//! still reports what it was fit to.

use super::{ParseError, ParseErrorKind};
use crate::joint::{JointId, JointMap};
use crate::model::CalorieModel;

/// Serializes a model; rows follow joint ordinal order after the bias.
pub fn emit_model_tsv(model: &CalorieModel) -> String {
    let mut out = format!("# trained_on: {}\n", model.trained_on().join(","));
    out.push_str(&format!("bias\t{}\n", model.bias()));
    for joint in JointId::ALL {
        out.push_str(&format!("{}\t{}\n", joint.name(), model.coefficient(joint)));
    }
    out
}

/// Parses a model file. The bias row and all twenty joint rows must each
/// appear exactly once, in any order.
pub fn parse_model_tsv(text: &str) -> Result<CalorieModel, ParseError> {
    let mut bias: Option<f64> = None;
    let mut coefficients: JointMap<Option<f64>> = JointMap::splat(None);
    let mut trained_on: Vec<String> = Vec::new();
    let mut saw_row = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim_start().strip_prefix("trained_on:") {
                let value = value.trim();
                if !value.is_empty() {
                    trained_on = value.split(',').map(|k| k.trim().to_string()).collect();
                }
            }
            continue;
        }
        let (name, value) = line.split_once('\t').ok_or_else(|| {
            ParseError::at(
                line_no,
                ParseErrorKind::ColumnCount {
                    expected: 2,
                    found: 1,
                },
            )
        })?;
        let parsed: f64 = value.trim().parse().map_err(|_| {
            ParseError::at(
                line_no,
                ParseErrorKind::Number {
                    column: 2,
                    value: value.trim().to_string(),
                },
            )
        })?;
        saw_row = true;
        if name == "bias" {
            if bias.replace(parsed).is_some() {
                return Err(ParseError::at(line_no, ParseErrorKind::DuplicateBias));
            }
            continue;
        }
        let joint = JointId::from_name(name).ok_or_else(|| {
            ParseError::at(
                line_no,
                ParseErrorKind::UnknownJoint {
                    name: name.to_string(),
                },
            )
        })?;
        if coefficients[joint].replace(parsed).is_some() {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::DuplicateJoint {
                    name: name.to_string(),
                },
            ));
        }
    }
    if !saw_row {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    let bias = bias.ok_or_else(|| ParseError::at(0, ParseErrorKind::MissingBias))?;
    for (joint, value) in coefficients.iter() {
        if value.is_none() {
            return Err(ParseError::at(
                0,
                ParseErrorKind::MissingJoint {
                    name: joint.name().to_string(),
                },
            ));
        }
    }
    let coefficients = coefficients.map(|_, v| v.unwrap());
    CalorieModel::new(bias, coefficients, trained_on)
        .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))
}
