//! Mass profiles: the built-in standard scale, personalized profiles from
//! labeled silhouettes, nearest-joint silhouette segmentation, and per-joint
//! mass assignment.

use crate::joint::{JointId, JointMap};
use crate::model::{MassProfile, ModelError, ProfileSource};

/// Errors from mask handling and mass computation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MassError {
    #[error("label grid has {got} cells, expected {expected} ({width}x{height})")]
    GridSizeMismatch {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },
    #[error("pixel ({x}, {y}) has label {label}, outside 0..=20")]
    LabelOutOfRange { x: usize, y: usize, label: u8 },
    #[error("mask has no foreground pixels")]
    EmptyForeground,
    #[error("silhouette has no foreground pixels")]
    EmptySilhouette,
    #[error("joint {joint} has a non-finite pixel coordinate")]
    NonFiniteJointCoordinate { joint: JointId },
    #[error("weight must be positive and finite, got {weight} kg")]
    NonPositiveWeight { weight: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A labeled body image: 0 is background, 1..=20 is the owning joint ordinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentationMask {
    width: usize,
    height: usize,
    labels: Vec<u8>,
}

impl SegmentationMask {
    /// `labels` is row-major, `width * height` long, each value in `0..=20`.
    pub fn new(width: usize, height: usize, labels: Vec<u8>) -> Result<Self, MassError> {
        let expected = width * height;
        if labels.len() != expected {
            return Err(MassError::GridSizeMismatch {
                width,
                height,
                expected,
                got: labels.len(),
            });
        }
        for (i, &label) in labels.iter().enumerate() {
            if label > 20 {
                return Err(MassError::LabelOutOfRange {
                    x: i % width.max(1),
                    y: i / width.max(1),
                    label,
                });
            }
        }
        Ok(SegmentationMask {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn label(&self, x: usize, y: usize) -> u8 {
        self.labels[y * self.width + x]
    }

    /// Row-major labels.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Number of non-background pixels.
    pub fn foreground_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != 0).count()
    }
}

/// A binary body silhouette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Silhouette {
    width: usize,
    height: usize,
    foreground: Vec<bool>,
}

impl Silhouette {
    /// `foreground` is row-major and must contain at least one `true` pixel.
    pub fn new(width: usize, height: usize, foreground: Vec<bool>) -> Result<Self, MassError> {
        let expected = width * height;
        if foreground.len() != expected {
            return Err(MassError::GridSizeMismatch {
                width,
                height,
                expected,
                got: foreground.len(),
            });
        }
        if !foreground.iter().any(|&f| f) {
            return Err(MassError::EmptySilhouette);
        }
        Ok(Silhouette {
            width,
            height,
            foreground,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_foreground(&self, x: usize, y: usize) -> bool {
        self.foreground[y * self.width + x]
    }
}

/// The built-in population-average mass scale.
///
/// Fractions are exact decimals and sum to exactly 1.
pub fn standard_profile() -> MassProfile {
    let fractions = JointMap::from_fn(|joint| match joint {
        JointId::Head => 0.10,
        JointId::LeftElbow | JointId::RightElbow => 0.04,
        JointId::LeftWrist | JointId::RightWrist => 0.03,
        JointId::LeftHand | JointId::RightHand => 0.025,
        JointId::CenterShoulder => 0.06,
        JointId::LeftShoulder | JointId::RightShoulder => 0.03,
        JointId::Spine => 0.06,
        JointId::CenterHip => 0.06,
        JointId::LeftHip | JointId::RightHip => 0.03,
        JointId::LeftKnee | JointId::RightKnee => 0.10,
        JointId::LeftAnkle | JointId::RightAnkle => 0.07,
        JointId::LeftFoot | JointId::RightFoot => 0.035,
    });
    MassProfile::new(fractions, ProfileSource::Standard)
        .expect("standard scale fractions are valid by construction")
}

/// Derives a personalized profile from pixel counts of a labeled mask.
///
/// Each joint's fraction is its pixel count over the total foreground count;
/// joints that own no pixels get fraction 0.
pub fn profile_from_mask(mask: &SegmentationMask) -> Result<MassProfile, MassError> {
    let mut counts = [0usize; JointId::COUNT];
    for &label in mask.labels() {
        if let Some(joint) = JointId::from_ordinal(label) {
            counts[joint.index()] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(MassError::EmptyForeground);
    }
    let fractions = JointMap::from_fn(|j| counts[j.index()] as f64 / total as f64);
    Ok(MassProfile::new(fractions, ProfileSource::Personalized)?)
}

/// Labels every foreground pixel with the nearest joint in pixel space.
///
/// Distance is Euclidean between the pixel's integer grid coordinates and the
/// joint's `(u, v)` position; ties go to the lowest joint ordinal, which makes
/// the result deterministic.
pub fn segment_silhouette(
    silhouette: &Silhouette,
    joints2d: &JointMap<[f64; 2]>,
) -> Result<SegmentationMask, MassError> {
    for (joint, uv) in joints2d.iter() {
        if !uv.iter().all(|c| c.is_finite()) {
            return Err(MassError::NonFiniteJointCoordinate { joint });
        }
    }
    let mut labels = vec![0u8; silhouette.width() * silhouette.height()];
    for y in 0..silhouette.height() {
        for x in 0..silhouette.width() {
            if !silhouette.is_foreground(x, y) {
                continue;
            }
            let px = x as f64;
            let py = y as f64;
            let mut best = JointId::Head;
            let mut best_d2 = f64::INFINITY;
            for joint in JointId::ALL {
                let [u, v] = joints2d[joint];
                let d2 = (u - px) * (u - px) + (v - py) * (v - py);
                if d2 < best_d2 {
                    best_d2 = d2;
                    best = joint;
                }
            }
            labels[y * silhouette.width() + x] = best.ordinal();
        }
    }
    SegmentationMask::new(silhouette.width(), silhouette.height(), labels)
}

/// Splits a subject's body weight over joints: `M_j = weight * a_j`.
pub fn mass_of(profile: &MassProfile, weight_kg: f64) -> Result<JointMap<f64>, MassError> {
    if !weight_kg.is_finite() || weight_kg <= 0.0 {
        return Err(MassError::NonPositiveWeight { weight: weight_kg });
    }
    Ok(profile.fractions().map(|_, &a| weight_kg * a))
}
