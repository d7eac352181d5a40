//! Linear calorie model: `cc = b_0 + sum_j b_j K_j`, fitted by minimum-norm
//! least squares and applied by [`predict`].

use nalgebra::{DMatrix, DVector};

use crate::joint::{JointId, JointMap};
use crate::model::{CalorieModel, EnergyVector, ModelError};

/// Errors from training-set construction and fitting.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegressionError {
    #[error("training set has no rows")]
    EmptyTrainingSet,
    #[error("duplicate training key {subject_id}:{exercise_index}")]
    DuplicateKey {
        subject_id: String,
        exercise_index: u32,
    },
    #[error(
        "row {subject_id}:{exercise_index} has calorie truth {value}, expected non-negative finite"
    )]
    BadTruth {
        subject_id: String,
        exercise_index: u32,
        value: f64,
    },
    #[error("least-squares solve failed: {0}")]
    SolveFailed(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One training observation: a session's energy vector and its measured
/// calorie consumption.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRow {
    pub subject_id: String,
    pub exercise_index: u32,
    pub energies: EnergyVector,
    pub cc_truth: f64,
}

impl TrainingRow {
    pub fn key(&self) -> String {
        format!("{}:{}", self.subject_id, self.exercise_index)
    }
}

/// A non-empty set of training rows with unique (subject, exercise) keys.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    rows: Vec<TrainingRow>,
}

impl TrainingSet {
    pub fn new(rows: Vec<TrainingRow>) -> Result<Self, RegressionError> {
        if rows.is_empty() {
            return Err(RegressionError::EmptyTrainingSet);
        }
        let mut seen = std::collections::HashSet::new();
        for row in &rows {
            if !row.cc_truth.is_finite() || row.cc_truth < 0.0 {
                return Err(RegressionError::BadTruth {
                    subject_id: row.subject_id.clone(),
                    exercise_index: row.exercise_index,
                    value: row.cc_truth,
                });
            }
            if !seen.insert((row.subject_id.clone(), row.exercise_index)) {
                return Err(RegressionError::DuplicateKey {
                    subject_id: row.subject_id.clone(),
                    exercise_index: row.exercise_index,
                });
            }
        }
        Ok(TrainingSet { rows })
    }

    pub fn rows(&self) -> &[TrainingRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Minimum-norm least-squares solution of `a x = y` via singular value
/// decomposition.
///
/// Singular values at or below `max(nrows, ncols) * eps_machine * sigma_max`
/// are treated as zero, so rank-deficient systems get the pseudoinverse
/// solution: least residual first, smallest Euclidean norm among ties.
pub fn min_norm_least_squares(
    a: &DMatrix<f64>,
    y: &DVector<f64>,
) -> Result<DVector<f64>, RegressionError> {
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    let eps = a.nrows().max(a.ncols()) as f64 * f64::EPSILON * sigma_max;
    svd.solve(y, eps).map_err(RegressionError::SolveFailed)
}

/// Fits the calorie model on a training set.
///
/// The design matrix is `[1 | K]` (intercept column plus the 20 per-joint
/// energies in ordinal order), solved for all 21 unknowns at once. With fewer
/// than 21 rows the system is underdetermined and the minimum-norm solution
/// interpolates the training data.
pub fn fit(train: &TrainingSet) -> Result<CalorieModel, RegressionError> {
    let n = train.len();
    let rows = train.rows();
    let design = DMatrix::from_fn(n, 1 + JointId::COUNT, |r, c| {
        if c == 0 {
            1.0
        } else {
            rows[r].energies.energy(JointId::ALL[c - 1])
        }
    });
    let truth = DVector::from_fn(n, |r, _| rows[r].cc_truth);
    let b = min_norm_least_squares(&design, &truth)?;
    let coefficients = JointMap::from_fn(|j| b[1 + j.index()]);
    let mut trained_on: Vec<String> = rows.iter().map(TrainingRow::key).collect();
    trained_on.sort();
    Ok(CalorieModel::new(b[0], coefficients, trained_on)?)
}

/// Applies the model: `b_0 + sum_j b_j K_j`.
pub fn predict(model: &CalorieModel, k: &EnergyVector) -> f64 {
    let mut cc = model.bias();
    for joint in JointId::ALL {
        cc += model.coefficient(joint) * k.energy(joint);
    }
    cc
}
