//! Synthetic skeleton streams with analytically known energy, used as the
//! ground-truth oracle for the energy pipeline and as fixture input.

use crate::joint::JointMap;
use crate::model::{EnergyVector, JointFrame, ModelError, SkeletonStream, Vec3};
use crate::numeric::compensated_sum;

/// Errors from motion-spec validation and generation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("duration must be positive and finite, got {duration} s")]
    BadDuration { duration: f64 },
    #[error("fps must be positive and finite, got {fps}")]
    BadFps { fps: f64 },
    #[error("motion parameter {what} is not finite")]
    NonFiniteParameter { what: &'static str },
    #[error("jitter sigma must be non-negative and finite, got {sigma}")]
    BadJitter { sigma: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Coordinate axis a sinusoid oscillates along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    pub fn from_label(label: &str) -> Option<Axis> {
        match label {
            "x" => Some(Axis::X),
            "y" => Some(Axis::Y),
            "z" => Some(Axis::Z),
            _ => None,
        }
    }
}

/// Analytic trajectory of one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    /// Stays at the start position.
    Stationary,
    /// Start position plus `v * t`.
    ConstantVelocity(Vec3),
    /// Start position plus `amplitude * sin(omega * t)` along one axis.
    Sinusoid {
        amplitude: f64,
        omega: f64,
        axis: Axis,
    },
}

impl Motion {
    fn validate(&self) -> Result<(), SynthError> {
        match self {
            Motion::Stationary => Ok(()),
            Motion::ConstantVelocity(v) => {
                if v.iter().all(|c| c.is_finite()) {
                    Ok(())
                } else {
                    Err(SynthError::NonFiniteParameter { what: "velocity" })
                }
            }
            Motion::Sinusoid {
                amplitude, omega, ..
            } => {
                if !amplitude.is_finite() {
                    Err(SynthError::NonFiniteParameter { what: "amplitude" })
                } else if !omega.is_finite() {
                    Err(SynthError::NonFiniteParameter { what: "omega" })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Offset from the start position at time `t`.
    fn offset(&self, t: f64) -> Vec3 {
        match *self {
            Motion::Stationary => [0.0; 3],
            Motion::ConstantVelocity(v) => [v[0] * t, v[1] * t, v[2] * t],
            Motion::Sinusoid {
                amplitude,
                omega,
                axis,
            } => {
                let mut offset = [0.0; 3];
                offset[axis.index()] = amplitude * (omega * t).sin();
                offset
            }
        }
    }
}

/// Per-joint motions sampled over a fixed duration at a fixed rate.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionSpec {
    motions: JointMap<Motion>,
    duration: f64,
    fps: f64,
}

impl MotionSpec {
    pub fn new(motions: JointMap<Motion>, duration: f64, fps: f64) -> Result<Self, SynthError> {
        if !duration.is_finite() || duration <= 0.0 {
            return Err(SynthError::BadDuration { duration });
        }
        if !fps.is_finite() || fps <= 0.0 {
            return Err(SynthError::BadFps { fps });
        }
        for (_, motion) in motions.iter() {
            motion.validate()?;
        }
        Ok(MotionSpec {
            motions,
            duration,
            fps,
        })
    }

    pub fn motions(&self) -> &JointMap<Motion> {
        &self.motions
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    /// Frames in the generated stream: one at t = 0 plus one per sample
    /// interval, `round(duration * fps) + 1` total.
    pub fn frame_count(&self) -> usize {
        (self.duration * self.fps).round() as usize + 1
    }

    fn timestamp(&self, k: usize) -> f64 {
        k as f64 / self.fps
    }
}

/// Samples every joint's trajectory at `t_k = k / fps`.
pub fn generate(spec: &MotionSpec, start: &JointMap<Vec3>) -> Result<SkeletonStream, SynthError> {
    let mut frames = Vec::with_capacity(spec.frame_count());
    for k in 0..spec.frame_count() {
        let t = spec.timestamp(k);
        let positions = JointMap::from_fn(|j| {
            let s = start[j];
            let o = spec.motions[j].offset(t);
            [s[0] + o[0], s[1] + o[1], s[2] + o[2]]
        });
        frames.push(JointFrame::new(t, positions)?);
    }
    Ok(SkeletonStream::new(frames, spec.fps)?)
}

/// Like [`generate`], with zero-mean Gaussian noise of standard deviation
/// `sigma` added to every coordinate. Deterministic for a fixed `seed`.
pub fn generate_jittered(
    spec: &MotionSpec,
    start: &JointMap<Vec3>,
    sigma: f64,
    seed: u64,
) -> Result<SkeletonStream, SynthError> {
    use rand::{Rng, SeedableRng};
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(SynthError::BadJitter { sigma });
    }
    let clean = generate(spec, start)?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    // Box-Muller transform; the cosine branch alone is enough here.
    let mut gauss = move || {
        let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let frames = clean
        .frames()
        .iter()
        .map(|f| {
            let positions = f.positions().map(|_, p| {
                [
                    p[0] + sigma * gauss(),
                    p[1] + sigma * gauss(),
                    p[2] + sigma * gauss(),
                ]
            });
            JointFrame::new(f.t(), positions)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SkeletonStream::new(frames, spec.fps)?)
}

/// Accumulated energy the discrete pipeline will report for a clean
/// [`generate`] stream, computed independently.
///
/// The prediction targets the exact discrete scheme (backward differences on
/// the sampled grid, per-frame sum), not the continuum integral:
/// ConstantVelocity contributes `(n-1) * m/2 * |v|^2`; a sinusoid's interval
/// displacements are evaluated through the identity
/// `sin(b) - sin(a) = 2 sin((b-a)/2) cos((a+b)/2)` and summed with
/// compensation, which sidesteps the subtraction the pipeline performs.
pub fn expected_energy(
    spec: &MotionSpec,
    masses: &JointMap<f64>,
) -> Result<EnergyVector, SynthError> {
    let n = spec.frame_count();
    let intervals = n.saturating_sub(1);
    let energies = JointMap::from_fn(|j| {
        let m = masses[j];
        match spec.motions[j] {
            Motion::Stationary => 0.0,
            Motion::ConstantVelocity(v) => {
                let speed_sq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
                intervals as f64 * 0.5 * m * speed_sq
            }
            Motion::Sinusoid {
                amplitude, omega, ..
            } => compensated_sum((1..n).map(|k| {
                let t0 = spec.timestamp(k - 1);
                let t1 = spec.timestamp(k);
                let dt = t1 - t0;
                let ds =
                    2.0 * amplitude * (omega * dt / 2.0).sin() * (omega * (t0 + t1) / 2.0).cos();
                let v = ds / dt;
                0.5 * m * v * v
            })),
        }
    });
    Ok(EnergyVector::new(energies)?)
}
