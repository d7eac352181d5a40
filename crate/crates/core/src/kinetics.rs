//! The energy pipeline: finite-difference velocities, per-frame kinetic
//! energies, and per-joint accumulation into an [`EnergyVector`].

use crate::joint::{JointId, JointMap};
use crate::mass::{mass_of, MassError};
use crate::model::{EnergyVector, ModelError, SkeletonStream, SubjectRecord, Vec3};

/// Errors from the energy pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KineticsError {
    #[error("velocity needs at least 2 frames, got {got}")]
    TooFewFrames { got: usize },
    #[error("frame {index} repeats or precedes the previous timestamp (dt = {dt})")]
    NonPositiveDt { index: usize, dt: f64 },
    #[error("joint {joint} has negative mass {mass} kg")]
    NegativeMass { joint: JointId, mass: f64 },
    #[error(transparent)]
    Mass(#[from] MassError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Velocity of one joint over the interval ending at frame time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocitySample {
    pub joint: JointId,
    /// Timestamp of the later frame of the interval, in seconds.
    pub t: f64,
    /// Velocity components in m/s.
    pub v: Vec3,
    /// Euclidean norm of `v`, in m/s.
    pub speed: f64,
}

impl VelocitySample {
    pub fn new(joint: JointId, t: f64, v: Vec3) -> VelocitySample {
        let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        VelocitySample { joint, t, v, speed }
    }
}

/// Kinetic energy of one joint at one frame, in joules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameEnergy {
    pub joint: JointId,
    pub t: f64,
    pub e: f64,
}

/// Backward-difference velocities for every joint.
///
/// For consecutive frames k-1, k: `v = (p_k - p_{k-1}) / (t_k - t_{k-1})`,
/// timestamped at `t_k`. Yields n-1 samples per joint for n frames.
pub fn velocities(stream: &SkeletonStream) -> Result<JointMap<Vec<VelocitySample>>, KineticsError> {
    let frames = stream.frames();
    if frames.len() < 2 {
        return Err(KineticsError::TooFewFrames { got: frames.len() });
    }
    let mut out: JointMap<Vec<VelocitySample>> =
        JointMap::from_fn(|_| Vec::with_capacity(frames.len() - 1));
    for (index, pair) in frames.windows(2).enumerate() {
        let dt = pair[1].t() - pair[0].t();
        // The stream type already rejects non-monotone timestamps; this guard
        // keeps the pipeline self-contained.
        if dt <= 0.0 {
            return Err(KineticsError::NonPositiveDt {
                index: index + 1,
                dt,
            });
        }
        for joint in JointId::ALL {
            let a = pair[0].position(joint);
            let b = pair[1].position(joint);
            let v = [(b[0] - a[0]) / dt, (b[1] - a[1]) / dt, (b[2] - a[2]) / dt];
            out[joint].push(VelocitySample::new(joint, pair[1].t(), v));
        }
    }
    Ok(out)
}

/// Per-frame kinetic energies `e = 1/2 * M_j * speed^2`.
///
/// The per-dimension form `1/2 M vx^2 + 1/2 M vy^2 + 1/2 M vz^2` collapses to
/// this since all terms share `M_j`; taking an absolute value would be a
/// no-op because every term is non-negative.
pub fn frame_energies(
    velocities: &JointMap<Vec<VelocitySample>>,
    masses: &JointMap<f64>,
) -> Result<JointMap<Vec<FrameEnergy>>, KineticsError> {
    for (joint, &mass) in masses.iter() {
        if mass.is_nan() || mass < 0.0 {
            return Err(KineticsError::NegativeMass { joint, mass });
        }
    }
    Ok(JointMap::from_fn(|joint| {
        let mass = masses[joint];
        velocities[joint]
            .iter()
            .map(|s| FrameEnergy {
                joint,
                t: s.t,
                e: 0.5 * mass * s.speed * s.speed,
            })
            .collect()
    }))
}

/// Accumulated per-joint energy: `K_j` is the plain sum of that joint's
/// per-frame energies over the whole session.
///
/// Fails only if the accumulated value stops being a non-negative finite
/// number, which cannot happen for output of [`frame_energies`] on finite
/// streams.
pub fn accumulate(
    frame_energies: &JointMap<Vec<FrameEnergy>>,
) -> Result<EnergyVector, KineticsError> {
    let totals = JointMap::from_fn(|joint| frame_energies[joint].iter().map(|f| f.e).sum());
    Ok(EnergyVector::new(totals)?)
}

/// Full pipeline: velocities, per-frame energies with the subject's joint
/// masses, accumulation.
pub fn session_energy(
    stream: &SkeletonStream,
    subject: &SubjectRecord,
) -> Result<EnergyVector, KineticsError> {
    let masses = mass_of(subject.mass_profile(), subject.weight_kg())?;
    let v = velocities(stream)?;
    let e = frame_energies(&v, &masses)?;
    accumulate(&e)
}
