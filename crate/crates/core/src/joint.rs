//! The canonical 20-joint vocabulary and a fixed-size per-joint container.
//!
//! Every per-joint quantity in this crate (positions, mass fractions,
//! accumulated energies, regression coefficients) is keyed by [`JointId`] and
//! stored in a [`JointMap`], so the cardinality of 20 is enforced by the type
//! system rather than by runtime checks.

use std::fmt;
use std::ops::{Index, IndexMut};

/// One of the 20 tracked skeleton joints.
///
/// Declaration order is the canonical ordinal order (`Head` is ordinal 1,
/// `RightFoot` is ordinal 20); mask labels, file column layouts, and feature
/// vectors all follow it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum JointId {
    Head,
    LeftElbow,
    RightElbow,
    LeftWrist,
    RightWrist,
    LeftHand,
    RightHand,
    CenterShoulder,
    LeftShoulder,
    RightShoulder,
    Spine,
    CenterHip,
    LeftHip,
    RightHip,
    LeftKnee,
    RightKnee,
    LeftAnkle,
    RightAnkle,
    LeftFoot,
    RightFoot,
}

impl JointId {
    /// Number of joints in the vocabulary.
    pub const COUNT: usize = 20;

    /// All joints in ordinal order.
    pub const ALL: [JointId; JointId::COUNT] = [
        JointId::Head,
        JointId::LeftElbow,
        JointId::RightElbow,
        JointId::LeftWrist,
        JointId::RightWrist,
        JointId::LeftHand,
        JointId::RightHand,
        JointId::CenterShoulder,
        JointId::LeftShoulder,
        JointId::RightShoulder,
        JointId::Spine,
        JointId::CenterHip,
        JointId::LeftHip,
        JointId::RightHip,
        JointId::LeftKnee,
        JointId::RightKnee,
        JointId::LeftAnkle,
        JointId::RightAnkle,
        JointId::LeftFoot,
        JointId::RightFoot,
    ];

    /// Stable 1-based ordinal, also used as the mask label for this joint.
    pub fn ordinal(self) -> u8 {
        self as u8 + 1
    }

    /// Inverse of [`ordinal`](Self::ordinal); `None` outside `1..=20`.
    pub fn from_ordinal(ordinal: u8) -> Option<JointId> {
        match ordinal {
            1..=20 => Some(JointId::ALL[ordinal as usize - 1]),
            _ => None,
        }
    }

    /// Zero-based index into a [`JointMap`].
    pub(crate) fn index(self) -> usize {
        self as usize
    }

    /// Canonical snake_case name, used in file headers and TSV rows.
    pub fn name(self) -> &'static str {
        match self {
            JointId::Head => "head",
            JointId::LeftElbow => "left_elbow",
            JointId::RightElbow => "right_elbow",
            JointId::LeftWrist => "left_wrist",
            JointId::RightWrist => "right_wrist",
            JointId::LeftHand => "left_hand",
            JointId::RightHand => "right_hand",
            JointId::CenterShoulder => "center_shoulder",
            JointId::LeftShoulder => "left_shoulder",
            JointId::RightShoulder => "right_shoulder",
            JointId::Spine => "spine",
            JointId::CenterHip => "center_hip",
            JointId::LeftHip => "left_hip",
            JointId::RightHip => "right_hip",
            JointId::LeftKnee => "left_knee",
            JointId::RightKnee => "right_knee",
            JointId::LeftAnkle => "left_ankle",
            JointId::RightAnkle => "right_ankle",
            JointId::LeftFoot => "left_foot",
            JointId::RightFoot => "right_foot",
        }
    }

    /// Looks a joint up by its canonical name.
    pub fn from_name(name: &str) -> Option<JointId> {
        JointId::ALL.iter().copied().find(|j| j.name() == name)
    }
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value of type `T` for every joint; total by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointMap<T>([T; JointId::COUNT]);

impl<T> JointMap<T> {
    /// Builds a map by evaluating `f` for each joint in ordinal order.
    pub fn from_fn(mut f: impl FnMut(JointId) -> T) -> Self {
        JointMap(std::array::from_fn(|i| f(JointId::ALL[i])))
    }

    /// Iterates `(joint, value)` pairs in ordinal order.
    pub fn iter(&self) -> impl Iterator<Item = (JointId, &T)> {
        JointId::ALL.iter().copied().zip(self.0.iter())
    }

    /// Values in ordinal order.
    pub fn values(&self) -> &[T; JointId::COUNT] {
        &self.0
    }

    /// Applies `f` to every entry, producing a new map.
    pub fn map<U>(&self, mut f: impl FnMut(JointId, &T) -> U) -> JointMap<U> {
        JointMap::from_fn(|j| f(j, &self.0[j.index()]))
    }
}

impl<T: Clone> JointMap<T> {
    /// A map holding `value` for every joint.
    pub fn splat(value: T) -> Self {
        JointMap::from_fn(|_| value.clone())
    }
}

impl<T: Default> Default for JointMap<T> {
    fn default() -> Self {
        JointMap::from_fn(|_| T::default())
    }
}

impl<T> Index<JointId> for JointMap<T> {
    type Output = T;

    fn index(&self, joint: JointId) -> &T {
        &self.0[joint.index()]
    }
}

impl<T> IndexMut<JointId> for JointMap<T> {
    fn index_mut(&mut self, joint: JointId) -> &mut T {
        &mut self.0[joint.index()]
    }
}

impl<T> From<[T; JointId::COUNT]> for JointMap<T> {
    fn from(values: [T; JointId::COUNT]) -> Self {
        JointMap(values)
    }
}
