//! Exercise calorie estimation from skeleton motion streams.
//!
//! The crate turns a recorded 20-joint motion stream into per-joint kinetic
//! energy totals, personalizes the joint masses from a labeled silhouette,
//! fits a linear calorie model against measured consumption, and evaluates
//! competing mass assignments with cross-validated error rates and a
//! signed-rank test.
//!
//! Modules:
//! - [`joint`]: the fixed 20-joint skeleton layout and per-joint containers.
//! - [`model`]: validated core types (streams, profiles, subjects, sessions).
//! - [`mass`]: silhouette segmentation and body-mass fraction profiles.
//! - [`kinetics`]: finite-difference velocities and kinetic energy totals.
//! - [`regression`]: least-squares calorie model fitting and prediction.
//! - [`eval`]: error rates, cross-validation, and the signed-rank test.
//! - [`synth`]: parametric motion generators with closed-form energy.
//! - [`io`]: plain-text readers and writers for every artifact.

pub mod eval;
pub mod io;
pub mod joint;
pub mod kinetics;
pub mod mass;
pub mod model;
pub mod numeric;
pub mod regression;
pub mod synth;

pub use joint::{JointId, JointMap};
pub use model::{
    CalorieModel, EnergyVector, JointFrame, MassProfile, ProfileSource, SessionRecord,
    SkeletonStream, SubjectRecord, Vec3, DEFAULT_NOMINAL_FPS,
};
