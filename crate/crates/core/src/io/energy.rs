//! Accumulated energy vector serialization.
//!
//! `energy.tsv`: one `name\tjoules` row per joint. The file is the bridge
//! between the energy command and the predict command.

use super::{ParseError, ParseErrorKind};
use crate::joint::{JointId, JointMap};
use crate::model::EnergyVector;

/// Serializes an energy vector in joint ordinal order.
pub fn emit_energy_tsv(energies: &EnergyVector) -> String {
    let mut out = String::new();
    for (joint, e) in energies.energies().iter() {
        out.push_str(&format!("{}\t{}\n", joint.name(), e));
    }
    out
}

/// Parses an energy vector; every joint exactly once, in any order.
pub fn parse_energy_tsv(text: &str) -> Result<EnergyVector, ParseError> {
    let mut seen: JointMap<Option<f64>> = JointMap::splat(None);
    let mut any = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
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
        let joint = JointId::from_name(name).ok_or_else(|| {
            ParseError::at(
                line_no,
                ParseErrorKind::UnknownJoint {
                    name: name.to_string(),
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
        if seen[joint].replace(parsed).is_some() {
            return Err(ParseError::at(
                line_no,
                ParseErrorKind::DuplicateJoint {
                    name: name.to_string(),
                },
            ));
        }
        any = true;
    }
    if !any {
        return Err(ParseError::at(0, ParseErrorKind::Empty));
    }
    for (joint, value) in seen.iter() {
        if value.is_none() {
            return Err(ParseError::at(
                0,
                ParseErrorKind::MissingJoint {
                    name: joint.name().to_string(),
                },
            ));
        }
    }
    EnergyVector::new(seen.map(|_, v| v.unwrap()))
        .map_err(|e| ParseError::at(0, ParseErrorKind::domain(e)))
}
