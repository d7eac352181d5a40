//! Deterministic input builders shared by the benchmarks.
//!
//! Everything here is closed-form (no RNG) so benchmark inputs are identical
//! across runs and machines.

use kinergy::kinetics::session_energy;
use kinergy::mass::standard_profile;
use kinergy::model::SkeletonStream;
use kinergy::regression::TrainingRow;
use kinergy::synth::{generate, Axis, Motion, MotionSpec};
use kinergy::{JointId, JointMap, SubjectRecord, Vec3};

/// Upright rest pose: joints spread along x, torso height, fixed depth.
pub fn rest_pose() -> JointMap<Vec3> {
    JointMap::from_fn(|j| [0.1 * j.ordinal() as f64, 1.0, 2.5])
}

/// Arm-swing motion: wrists and hands oscillate, knees bounce, head drifts.
/// `intensity` scales every amplitude.
pub fn swing_spec(intensity: f64, duration: f64, fps: f64) -> MotionSpec {
    let motions = JointMap::from_fn(|j| match j {
        JointId::LeftWrist | JointId::RightWrist | JointId::LeftHand | JointId::RightHand => {
            Motion::Sinusoid {
                amplitude: 0.25 * intensity,
                omega: 3.0,
                axis: Axis::Y,
            }
        }
        JointId::LeftKnee | JointId::RightKnee => Motion::Sinusoid {
            amplitude: 0.1 * intensity,
            omega: 2.0,
            axis: Axis::Z,
        },
        JointId::Head => Motion::ConstantVelocity([0.05 * intensity, 0.0, 0.0]),
        _ => Motion::Stationary,
    });
    MotionSpec::new(motions, duration, fps).expect("valid spec")
}

/// Clean swing stream of roughly `duration * fps` frames.
pub fn swing_stream(intensity: f64, duration: f64, fps: f64) -> SkeletonStream {
    generate(&swing_spec(intensity, duration, fps), &rest_pose()).expect("valid stream")
}

/// Standard-scale subject at a fixed weight.
pub fn subject(id: &str, weight_kg: f64) -> SubjectRecord {
    SubjectRecord::new(id, weight_kg, standard_profile()).expect("valid subject")
}

/// Training rows for a `subjects x exercises` cohort. Energies come from the
/// real pipeline on swing streams of varying intensity; truths follow a fixed
/// affine rule so the system is consistent.
pub fn cohort_rows(subjects: usize, exercises: usize) -> Vec<TrainingRow> {
    let mut rows = Vec::with_capacity(subjects * exercises);
    for s in 0..subjects {
        let subj = subject(&format!("s{}", s + 1), 60.0 + 5.0 * s as f64);
        for e in 0..exercises {
            let intensity = 0.5 + 0.1 * s as f64 + 0.25 * e as f64;
            let stream = swing_stream(intensity, 2.0, 25.0);
            let energies = session_energy(&stream, &subj).expect("pipeline ok");
            let cc_truth = 10.0 + 2.0 * s as f64 + 3.0 * e as f64;
            rows.push(TrainingRow {
                subject_id: subj.subject_id().to_string(),
                exercise_index: (e + 1) as u32,
                energies,
                cc_truth,
            });
        }
    }
    rows
}

/// `n` paired error rates where the first member is consistently lower, with
/// a deterministic ripple so ranks are non-trivial.
pub fn rate_pairs(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = i as f64;
            let a = 0.15 + 0.05 * (0.7 * t).sin().abs();
            let b = 0.30 + 0.08 * (1.3 * t).cos().abs();
            (a, b)
        })
        .collect()
}
