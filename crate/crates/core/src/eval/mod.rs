//! Evaluation: the relative error metric, exercise-indexed k-fold cross
//! validation, and the paired signed-rank comparison between two methods.

mod wilcoxon;

pub use wilcoxon::{
    wilcoxon_signed_rank, wilcoxon_signed_rank_method, WilcoxonMethod, WilcoxonResult, EXACT_LIMIT,
};

use std::collections::{BTreeSet, HashMap};

use crate::kinetics::{session_energy, KineticsError};
use crate::mass::standard_profile;
use crate::model::{EnergyVector, SessionRecord, SkeletonStream, SubjectRecord};
use crate::numeric::compensated_sum;
use crate::regression::{fit, predict, RegressionError, TrainingRow, TrainingSet};

/// Errors from evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("calorie truth must be positive, got {value}")]
    NonPositiveTruth { value: f64 },
    #[error("prediction is not finite: {value}")]
    NonFinitePrediction { value: f64 },
    #[error("no sessions to evaluate")]
    NoSessions,
    #[error("session references unknown subject {subject_id}")]
    UnknownSubject { subject_id: String },
    #[error("subject {subject_id} appears more than once")]
    DuplicateSubject { subject_id: String },
    #[error("duplicate session {subject_id}:{exercise_index}")]
    DuplicateSession {
        subject_id: String,
        exercise_index: u32,
    },
    #[error(
        "subject {subject_id} is missing exercise {exercise_index}, which other subjects have"
    )]
    UnbalancedExercises {
        subject_id: String,
        exercise_index: u32,
    },
    #[error("k = {k} but the sessions hold {distinct} distinct exercise indices")]
    WrongFoldCount { k: usize, distinct: usize },
    #[error("session {subject_id}:{exercise_index} references unknown stream {stream_ref}")]
    MissingStream {
        subject_id: String,
        exercise_index: u32,
        stream_ref: String,
    },
    #[error("report has no entries")]
    EmptyReport,
    #[error(
        "entry {subject_id}:{exercise_index} has error rate {value}, expected non-negative finite"
    )]
    BadErrorRate {
        subject_id: String,
        exercise_index: u32,
        value: f64,
    },
    #[error("duplicate report entry {subject_id}:{exercise_index}")]
    DuplicateEntry {
        subject_id: String,
        exercise_index: u32,
    },
    #[error("reports disagree on entry keys: {detail}")]
    MismatchedReports { detail: String },
    #[error("no pairs to test")]
    NoPairs,
    #[error("pair {index} has a non-finite value")]
    NonFinitePair { index: usize },
    #[error(transparent)]
    Kinetics(#[from] KineticsError),
    #[error(transparent)]
    Regression(#[from] RegressionError),
}

/// Relative prediction error `|truth - pred| / truth`.
pub fn error_rate(cc_truth: f64, cc_pred: f64) -> Result<f64, EvalError> {
    if !cc_truth.is_finite() || cc_truth <= 0.0 {
        return Err(EvalError::NonPositiveTruth { value: cc_truth });
    }
    if !cc_pred.is_finite() {
        return Err(EvalError::NonFinitePrediction { value: cc_pred });
    }
    Ok((cc_truth - cc_pred).abs() / cc_truth)
}

/// Which mass profile feeds the energy pipeline during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassMethod {
    /// Each subject's own profile, as loaded with the subject record.
    Personalized,
    /// The built-in population-average scale for every subject.
    StandardScale,
}

impl MassMethod {
    pub fn label(self) -> &'static str {
        match self {
            MassMethod::Personalized => "personalized",
            MassMethod::StandardScale => "standard",
        }
    }

    pub fn from_label(label: &str) -> Option<MassMethod> {
        match label {
            "personalized" => Some(MassMethod::Personalized),
            "standard" => Some(MassMethod::StandardScale),
            _ => None,
        }
    }
}

/// One held-out prediction's error rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEntry {
    pub subject_id: String,
    pub exercise_index: u32,
    pub error_rate: f64,
}

impl ErrorEntry {
    pub fn key(&self) -> String {
        format!("{}:{}", self.subject_id, self.exercise_index)
    }
}

/// Which sessions one fold trained on and tested against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldManifest {
    /// Exercise index held out for testing.
    pub held_out_exercise: u32,
    /// Sorted `subject:exercise` keys used for training.
    pub train_keys: Vec<String>,
    /// Sorted `subject:exercise` keys predicted and scored.
    pub test_keys: Vec<String>,
}

/// Per-(subject, exercise) error rates plus the fold structure that produced
/// them. The aggregate mean is always recomputed from the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    label: String,
    entries: Vec<ErrorEntry>,
    folds: Vec<FoldManifest>,
}

impl ErrorReport {
    /// Entries are sorted by (subject, exercise) and must be unique with
    /// non-negative finite rates.
    pub fn new(
        label: impl Into<String>,
        mut entries: Vec<ErrorEntry>,
        folds: Vec<FoldManifest>,
    ) -> Result<Self, EvalError> {
        if entries.is_empty() {
            return Err(EvalError::EmptyReport);
        }
        for e in &entries {
            if !e.error_rate.is_finite() || e.error_rate < 0.0 {
                return Err(EvalError::BadErrorRate {
                    subject_id: e.subject_id.clone(),
                    exercise_index: e.exercise_index,
                    value: e.error_rate,
                });
            }
        }
        entries.sort_by(|a, b| {
            (&a.subject_id, a.exercise_index).cmp(&(&b.subject_id, b.exercise_index))
        });
        for pair in entries.windows(2) {
            if pair[0].subject_id == pair[1].subject_id
                && pair[0].exercise_index == pair[1].exercise_index
            {
                return Err(EvalError::DuplicateEntry {
                    subject_id: pair[1].subject_id.clone(),
                    exercise_index: pair[1].exercise_index,
                });
            }
        }
        Ok(ErrorReport {
            label: label.into(),
            entries,
            folds,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> &[ErrorEntry] {
        &self.entries
    }

    pub fn folds(&self) -> &[FoldManifest] {
        &self.folds
    }

    /// Arithmetic mean of all entry error rates.
    pub fn mean(&self) -> f64 {
        compensated_sum(self.entries.iter().map(|e| e.error_rate)) / self.entries.len() as f64
    }
}

/// Pairs two reports entry-by-entry for a signed-rank comparison.
///
/// Both must cover exactly the same (subject, exercise) keys; pairs come out
/// in the shared sorted entry order as (a, b).
pub fn paired_rates(a: &ErrorReport, b: &ErrorReport) -> Result<Vec<(f64, f64)>, EvalError> {
    if a.entries.len() != b.entries.len() {
        return Err(EvalError::MismatchedReports {
            detail: format!("{} vs {} entries", a.entries.len(), b.entries.len()),
        });
    }
    let mut pairs = Vec::with_capacity(a.entries.len());
    for (ea, eb) in a.entries.iter().zip(&b.entries) {
        if ea.subject_id != eb.subject_id || ea.exercise_index != eb.exercise_index {
            return Err(EvalError::MismatchedReports {
                detail: format!("{} vs {}", ea.key(), eb.key()),
            });
        }
        pairs.push((ea.error_rate, eb.error_rate));
    }
    Ok(pairs)
}

/// Exercise-indexed k-fold cross validation.
///
/// Fold f holds out exercise index f for every subject, trains the calorie
/// model on all remaining sessions, and scores the held-out predictions.
/// Fold assignment is fully deterministic; `k` must equal the number of
/// distinct exercise indices and every subject must cover all of them.
pub fn cross_validate(
    sessions: &[SessionRecord],
    subjects: &[SubjectRecord],
    streams: &HashMap<String, SkeletonStream>,
    k: usize,
    method: MassMethod,
) -> Result<ErrorReport, EvalError> {
    if sessions.is_empty() {
        return Err(EvalError::NoSessions);
    }

    let mut subject_map: HashMap<&str, &SubjectRecord> = HashMap::new();
    for s in subjects {
        if subject_map.insert(s.subject_id(), s).is_some() {
            return Err(EvalError::DuplicateSubject {
                subject_id: s.subject_id().to_string(),
            });
        }
    }

    let mut indices: BTreeSet<u32> = BTreeSet::new();
    let mut per_subject: HashMap<&str, BTreeSet<u32>> = HashMap::new();
    for s in sessions {
        if !subject_map.contains_key(s.subject_id()) {
            return Err(EvalError::UnknownSubject {
                subject_id: s.subject_id().to_string(),
            });
        }
        indices.insert(s.exercise_index());
        if !per_subject
            .entry(s.subject_id())
            .or_default()
            .insert(s.exercise_index())
        {
            return Err(EvalError::DuplicateSession {
                subject_id: s.subject_id().to_string(),
                exercise_index: s.exercise_index(),
            });
        }
    }
    for (subject_id, covered) in &per_subject {
        for &index in &indices {
            if !covered.contains(&index) {
                return Err(EvalError::UnbalancedExercises {
                    subject_id: subject_id.to_string(),
                    exercise_index: index,
                });
            }
        }
    }
    if indices.len() != k {
        return Err(EvalError::WrongFoldCount {
            k,
            distinct: indices.len(),
        });
    }

    // Each session's energy vector is method-dependent but fold-independent,
    // so compute it once.
    let mut energies: HashMap<(String, u32), EnergyVector> = HashMap::new();
    for s in sessions {
        let subject = subject_map[s.subject_id()];
        let effective = match method {
            MassMethod::Personalized => subject.clone(),
            MassMethod::StandardScale => subject.with_profile(standard_profile()),
        };
        let stream = streams
            .get(s.stream_ref())
            .ok_or_else(|| EvalError::MissingStream {
                subject_id: s.subject_id().to_string(),
                exercise_index: s.exercise_index(),
                stream_ref: s.stream_ref().to_string(),
            })?;
        energies.insert(
            (s.subject_id().to_string(), s.exercise_index()),
            session_energy(stream, &effective)?,
        );
    }

    let mut entries = Vec::new();
    let mut folds = Vec::new();
    for &held in &indices {
        let mut train_rows = Vec::new();
        let mut train_keys = Vec::new();
        let mut test_keys = Vec::new();
        for s in sessions {
            let key = (s.subject_id().to_string(), s.exercise_index());
            if s.exercise_index() == held {
                test_keys.push(format!("{}:{}", s.subject_id(), s.exercise_index()));
            } else {
                train_keys.push(format!("{}:{}", s.subject_id(), s.exercise_index()));
                train_rows.push(TrainingRow {
                    subject_id: s.subject_id().to_string(),
                    exercise_index: s.exercise_index(),
                    energies: energies[&key].clone(),
                    cc_truth: s.exercise_kcal(),
                });
            }
        }
        let model = fit(&TrainingSet::new(train_rows)?)?;
        for s in sessions.iter().filter(|s| s.exercise_index() == held) {
            let key = (s.subject_id().to_string(), s.exercise_index());
            let pred = predict(&model, &energies[&key]);
            entries.push(ErrorEntry {
                subject_id: s.subject_id().to_string(),
                exercise_index: s.exercise_index(),
                error_rate: error_rate(s.exercise_kcal(), pred)?,
            });
        }
        train_keys.sort();
        test_keys.sort();
        folds.push(FoldManifest {
            held_out_exercise: held,
            train_keys,
            test_keys,
        });
    }
    ErrorReport::new(method.label(), entries, folds)
}
