//! Shared domain types: frames, streams, mass profiles, subjects, sessions,
//! energy vectors, and the trained calorie model.
//!
//! All types are immutable values after construction; constructors validate
//! every invariant so downstream modules can rely on them without re-checking.

use crate::joint::{JointId, JointMap};
use crate::numeric::compensated_sum;

/// A 3D position or velocity component triple, in meters / meters per second.
pub type Vec3 = [f64; 3];

/// Tolerance on `sum(a_j) = 1` for mass profiles.
pub const MASS_FRACTION_SUM_TOL: f64 = 1e-9;

/// Nominal capture rate assumed when a stream does not state one.
pub const DEFAULT_NOMINAL_FPS: f64 = 25.0;

/// Invariant violations raised by domain-type constructors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("timestamp {t} is not a non-negative finite number")]
    BadTimestamp { t: f64 },
    #[error("joint {joint} has a non-finite coordinate")]
    NonFiniteCoordinate { joint: JointId },
    #[error("frame {index}: timestamp {t} does not increase over previous {prev}")]
    NonMonotoneTimestamps { index: usize, t: f64, prev: f64 },
    #[error("nominal fps must be positive and finite, got {fps}")]
    BadFps { fps: f64 },
    #[error("joint {joint} has mass fraction {fraction}, outside [0, 1]")]
    FractionOutOfRange { joint: JointId, fraction: f64 },
    #[error("mass fractions sum to {sum}, not 1 within {MASS_FRACTION_SUM_TOL:e}")]
    FractionsDoNotSumToOne { sum: f64 },
    #[error("subject weight must be positive and finite, got {weight} kg")]
    BadWeight { weight: f64 },
    #[error("exercise index must be at least 1")]
    BadExerciseIndex,
    #[error("{field} must be a non-negative finite kcal value, got {value}")]
    BadKcal { field: &'static str, value: f64 },
    #[error("joint {joint} has accumulated energy {energy}, expected non-negative finite")]
    BadEnergy { joint: JointId, energy: f64 },
    #[error("model {what} is not finite")]
    NonFiniteModel { what: &'static str },
}

/// One timestamped skeleton frame with all 20 joint positions.
#[derive(Debug, Clone, PartialEq)]
pub struct JointFrame {
    t: f64,
    positions: JointMap<Vec3>,
}

impl JointFrame {
    /// Validates the timestamp (non-negative, finite) and all coordinates
    /// (finite).
    pub fn new(t: f64, positions: JointMap<Vec3>) -> Result<Self, ModelError> {
        if !t.is_finite() || t < 0.0 {
            return Err(ModelError::BadTimestamp { t });
        }
        for (joint, p) in positions.iter() {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(ModelError::NonFiniteCoordinate { joint });
            }
        }
        Ok(JointFrame { t, positions })
    }

    /// Timestamp in seconds.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Position of one joint, in meters.
    pub fn position(&self, joint: JointId) -> Vec3 {
        self.positions[joint]
    }

    /// All joint positions.
    pub fn positions(&self) -> &JointMap<Vec3> {
        &self.positions
    }
}

/// An ordered sequence of skeleton frames with strictly increasing timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonStream {
    frames: Vec<JointFrame>,
    nominal_fps: f64,
}

impl SkeletonStream {
    /// Validates timestamp monotonicity and the nominal frame rate.
    ///
    /// A stream may hold fewer than two frames; velocity computation rejects
    /// such streams at its own boundary.
    pub fn new(frames: Vec<JointFrame>, nominal_fps: f64) -> Result<Self, ModelError> {
        if !nominal_fps.is_finite() || nominal_fps <= 0.0 {
            return Err(ModelError::BadFps { fps: nominal_fps });
        }
        for (index, pair) in frames.windows(2).enumerate() {
            if pair[1].t() <= pair[0].t() {
                return Err(ModelError::NonMonotoneTimestamps {
                    index: index + 1,
                    t: pair[1].t(),
                    prev: pair[0].t(),
                });
            }
        }
        Ok(SkeletonStream {
            frames,
            nominal_fps,
        })
    }

    pub fn frames(&self) -> &[JointFrame] {
        &self.frames
    }

    /// Nominal capture rate; metadata only, timestamps are authoritative.
    pub fn nominal_fps(&self) -> f64 {
        self.nominal_fps
    }

    /// Time spanned between the first and last frame, in seconds.
    pub fn duration(&self) -> f64 {
        match (self.frames.first(), self.frames.last()) {
            (Some(first), Some(last)) => last.t() - first.t(),
            _ => 0.0,
        }
    }
}

/// Where a mass profile came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    /// The built-in population-average scale.
    Standard,
    /// Derived from a labeled silhouette of one subject.
    Personalized,
}

impl ProfileSource {
    pub fn label(self) -> &'static str {
        match self {
            ProfileSource::Standard => "standard",
            ProfileSource::Personalized => "personalized",
        }
    }

    pub fn from_label(label: &str) -> Option<ProfileSource> {
        match label {
            "standard" => Some(ProfileSource::Standard),
            "personalized" => Some(ProfileSource::Personalized),
            _ => None,
        }
    }
}

/// Per-joint body-mass fractions `a_j`, non-negative and summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProfile {
    fractions: JointMap<f64>,
    source: ProfileSource,
}

impl MassProfile {
    pub fn new(fractions: JointMap<f64>, source: ProfileSource) -> Result<Self, ModelError> {
        for (joint, &fraction) in fractions.iter() {
            if !fraction.is_finite() || !(0.0..=1.0).contains(&fraction) {
                return Err(ModelError::FractionOutOfRange { joint, fraction });
            }
        }
        let sum = compensated_sum(fractions.values().iter().copied());
        if (sum - 1.0).abs() > MASS_FRACTION_SUM_TOL {
            return Err(ModelError::FractionsDoNotSumToOne { sum });
        }
        Ok(MassProfile { fractions, source })
    }

    pub fn fraction(&self, joint: JointId) -> f64 {
        self.fractions[joint]
    }

    pub fn fractions(&self) -> &JointMap<f64> {
        &self.fractions
    }

    pub fn source(&self) -> ProfileSource {
        self.source
    }

    /// Compensated sum of all fractions.
    pub fn total(&self) -> f64 {
        compensated_sum(self.fractions.values().iter().copied())
    }
}

/// A subject: identity, body weight, and the mass profile to use.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord {
    subject_id: String,
    weight_kg: f64,
    mass_profile: MassProfile,
}

impl SubjectRecord {
    pub fn new(
        subject_id: impl Into<String>,
        weight_kg: f64,
        mass_profile: MassProfile,
    ) -> Result<Self, ModelError> {
        if !weight_kg.is_finite() || weight_kg <= 0.0 {
            return Err(ModelError::BadWeight { weight: weight_kg });
        }
        Ok(SubjectRecord {
            subject_id: subject_id.into(),
            weight_kg,
            mass_profile,
        })
    }

    pub fn subject_id(&self) -> &str {
        &self.subject_id
    }

    pub fn weight_kg(&self) -> f64 {
        self.weight_kg
    }

    pub fn mass_profile(&self) -> &MassProfile {
        &self.mass_profile
    }

    /// A copy of this subject with a different mass profile.
    pub fn with_profile(&self, mass_profile: MassProfile) -> SubjectRecord {
        SubjectRecord {
            subject_id: self.subject_id.clone(),
            weight_kg: self.weight_kg,
            mass_profile,
        }
    }
}

/// One recorded exercise session with its ground-truth calorie readings.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionRecord {
    subject_id: String,
    exercise_index: u32,
    rest_kcal: f64,
    exercise_kcal: f64,
    stream_ref: String,
}

impl SessionRecord {
    pub fn new(
        subject_id: impl Into<String>,
        exercise_index: u32,
        rest_kcal: f64,
        exercise_kcal: f64,
        stream_ref: impl Into<String>,
    ) -> Result<Self, ModelError> {
        if exercise_index < 1 {
            return Err(ModelError::BadExerciseIndex);
        }
        if !rest_kcal.is_finite() || rest_kcal < 0.0 {
            return Err(ModelError::BadKcal {
                field: "rest_kcal",
                value: rest_kcal,
            });
        }
        if !exercise_kcal.is_finite() || exercise_kcal < 0.0 {
            return Err(ModelError::BadKcal {
                field: "exercise_kcal",
                value: exercise_kcal,
            });
        }
        Ok(SessionRecord {
            subject_id: subject_id.into(),
            exercise_index,
            rest_kcal,
            exercise_kcal,
            stream_ref: stream_ref.into(),
        })
    }

    pub fn subject_id(&self) -> &str {
        &self.subject_id
    }

    pub fn exercise_index(&self) -> u32 {
        self.exercise_index
    }

    pub fn rest_kcal(&self) -> f64 {
        self.rest_kcal
    }

    pub fn exercise_kcal(&self) -> f64 {
        self.exercise_kcal
    }

    pub fn stream_ref(&self) -> &str {
        &self.stream_ref
    }

    /// True when resting consumption exceeds exercising consumption.
    ///
    /// This is a measurement-validity screen, reported as a warning rather
    /// than rejected: the record itself is still a well-formed value.
    pub fn violates_rest_check(&self) -> bool {
        self.rest_kcal > self.exercise_kcal
    }
}

/// Accumulated kinetic energy per joint over one session, in joules.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyVector {
    energies: JointMap<f64>,
}

impl EnergyVector {
    pub fn new(energies: JointMap<f64>) -> Result<Self, ModelError> {
        for (joint, &energy) in energies.iter() {
            if !energy.is_finite() || energy < 0.0 {
                return Err(ModelError::BadEnergy { joint, energy });
            }
        }
        Ok(EnergyVector { energies })
    }

    /// An all-zero energy vector.
    pub fn zero() -> Self {
        EnergyVector {
            energies: JointMap::splat(0.0),
        }
    }

    pub fn energy(&self, joint: JointId) -> f64 {
        self.energies[joint]
    }

    pub fn energies(&self) -> &JointMap<f64> {
        &self.energies
    }
}

/// The trained linear calorie model: a bias plus one coefficient per joint.
#[derive(Debug, Clone, PartialEq)]
pub struct CalorieModel {
    bias: f64,
    coefficients: JointMap<f64>,
    trained_on: Vec<String>,
}

impl CalorieModel {
    /// `trained_on` identifies the training rows (free-form keys); it is
    /// carried as metadata and does not affect prediction.
    pub fn new(
        bias: f64,
        coefficients: JointMap<f64>,
        trained_on: Vec<String>,
    ) -> Result<Self, ModelError> {
        if !bias.is_finite() {
            return Err(ModelError::NonFiniteModel { what: "bias" });
        }
        if coefficients.values().iter().any(|c| !c.is_finite()) {
            return Err(ModelError::NonFiniteModel {
                what: "coefficient",
            });
        }
        Ok(CalorieModel {
            bias,
            coefficients,
            trained_on,
        })
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn coefficient(&self, joint: JointId) -> f64 {
        self.coefficients[joint]
    }

    pub fn coefficients(&self) -> &JointMap<f64> {
        &self.coefficients
    }

    pub fn trained_on(&self) -> &[String] {
        &self.trained_on
    }
}
