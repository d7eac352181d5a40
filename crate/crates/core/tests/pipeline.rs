//! End-to-end flow through the file formats: synthesize motion, write every
//! artifact to disk, read it all back, and check that training, prediction,
//! and evaluation see exactly the data that was saved.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use kinergy::eval::{cross_validate, paired_rates, wilcoxon_signed_rank, MassMethod};
use kinergy::io::{
    emit_mask_text, emit_model_tsv, emit_profile_tsv, emit_report_tsv, emit_sessions_csv,
    emit_skeleton_csv, emit_subjects_csv, load_mask, load_model_tsv, load_report_tsv,
    load_sessions_csv, load_skeleton_csv, parse_report_tsv, parse_subjects_csv, resolve_subjects,
    save_text, validate_session_subjects, SubjectRow,
};
use kinergy::kinetics::session_energy;
use kinergy::mass::{profile_from_mask, standard_profile, SegmentationMask};
use kinergy::regression::{fit, predict, TrainingRow, TrainingSet};
use kinergy::synth::{generate_jittered, Axis, Motion, MotionSpec};
use kinergy::{
    CalorieModel, JointId, JointMap, SessionRecord, SkeletonStream, SubjectRecord, Vec3,
};

fn rest_pose() -> JointMap<Vec3> {
    JointMap::from_fn(|j| [0.1 * f64::from(j.ordinal()), 1.0, 2.5])
}

/// A stream whose wrists swing and whose body drifts, seeded per session.
fn session_stream(seed: u64, intensity: f64) -> SkeletonStream {
    let motions = JointMap::from_fn(|j| match j {
        JointId::LeftWrist | JointId::RightWrist | JointId::LeftHand | JointId::RightHand => {
            Motion::Sinusoid {
                amplitude: 0.2 + 0.1 * intensity,
                omega: 3.0 + intensity,
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
    let spec = MotionSpec::new(motions, 2.0, 25.0).unwrap();
    generate_jittered(&spec, &rest_pose(), 1e-4, seed).unwrap()
}

/// Ground-truth calories as a fixed linear function of the energy vector.
fn truth_from_energy(energies: &kinergy::EnergyVector) -> f64 {
    let coef = JointMap::from_fn(|j| 0.02 + 0.003 * f64::from(j.ordinal()));
    8.0 + energies
        .energies()
        .iter()
        .map(|(j, &k)| coef[j] * k)
        .sum::<f64>()
}

/// A mask with plausible foreground coverage for a personalized profile.
fn sample_mask() -> SegmentationMask {
    let (width, height) = (16, 24);
    let labels = (0..width * height)
        .map(|i| {
            let (x, y) = (i % width, i / width);
            if x < 2 || x >= width - 2 {
                0 // background margin
            } else {
                ((x + y * width) % 20 + 1) as u8
            }
        })
        .collect();
    SegmentationMask::new(width, height, labels).unwrap()
}

#[test]
fn artifacts_survive_disk_and_feed_training() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();
    fs::create_dir(base.join("streams")).unwrap();

    // Segmentation mask -> personalized profile, both written and reloaded.
    let mask = sample_mask();
    save_text(&base.join("mask.txt"), &emit_mask_text(&mask)).unwrap();
    let mask_back = load_mask(&base.join("mask.txt")).unwrap();
    assert_eq!(mask_back.labels(), mask.labels());
    let profile = profile_from_mask(&mask_back).unwrap();
    save_text(&base.join("p2.tsv"), &emit_profile_tsv(&profile)).unwrap();

    let subject_rows = vec![
        SubjectRow {
            subject_id: "a1".into(),
            weight_kg: 68.0,
            mass_profile_ref: "standard".into(),
        },
        SubjectRow {
            subject_id: "a2".into(),
            weight_kg: 74.5,
            mass_profile_ref: "p2.tsv".into(),
        },
    ];
    save_text(
        &base.join("subjects.csv"),
        &emit_subjects_csv(&subject_rows),
    )
    .unwrap();

    // Three sessions per subject; truths derive from the in-memory energies.
    let mut sessions = Vec::new();
    let mut expected_energies = HashMap::new();
    let in_memory: Vec<SubjectRecord> = vec![
        SubjectRecord::new("a1", 68.0, standard_profile()).unwrap(),
        SubjectRecord::new("a2", 74.5, profile.clone()).unwrap(),
    ];
    for (si, subject) in in_memory.iter().enumerate() {
        for e in 1..=3u32 {
            let stream_ref = format!("streams/{}e{e}.csv", subject.subject_id());
            let seed = (si as u64) * 10 + u64::from(e);
            let stream = session_stream(seed, f64::from(e));
            save_text(&base.join(&stream_ref), &emit_skeleton_csv(&stream)).unwrap();
            let energies = session_energy(&stream, subject).unwrap();
            let cc = truth_from_energy(&energies);
            sessions.push(
                SessionRecord::new(subject.subject_id(), e, cc * 0.4, cc, &stream_ref).unwrap(),
            );
            expected_energies.insert(stream_ref, energies);
        }
    }
    save_text(&base.join("sessions.csv"), &emit_sessions_csv(&sessions)).unwrap();

    // Reload everything from disk.
    let sessions_back = load_sessions_csv(&base.join("sessions.csv")).unwrap();
    assert_eq!(sessions_back.records, sessions);
    assert!(sessions_back.warnings.is_empty());
    let rows_back =
        parse_subjects_csv(&fs::read_to_string(base.join("subjects.csv")).unwrap()).unwrap();
    assert_eq!(rows_back, subject_rows);
    let subjects_back = resolve_subjects(&rows_back, base).unwrap();
    assert_eq!(subjects_back, in_memory);
    validate_session_subjects(&sessions_back.records, &subjects_back).unwrap();

    // Streams and the energies they produce are identical after the round
    // trip: the writers keep full float precision.
    let mut training_rows = Vec::new();
    for record in &sessions_back.records {
        let stream = load_skeleton_csv(&base.join(record.stream_ref())).unwrap();
        let subject = subjects_back
            .iter()
            .find(|s| s.subject_id() == record.subject_id())
            .unwrap();
        let energies = session_energy(&stream, subject).unwrap();
        assert_eq!(&energies, &expected_energies[record.stream_ref()]);
        training_rows.push(TrainingRow {
            subject_id: record.subject_id().to_string(),
            exercise_index: record.exercise_index(),
            energies,
            cc_truth: record.exercise_kcal(),
        });
    }

    // Six rows, twenty-one parameters: the fit interpolates the truths.
    let expected_truths: Vec<f64> = training_rows.iter().map(|r| r.cc_truth).collect();
    let train = TrainingSet::new(training_rows.clone()).unwrap();
    let model = fit(&train).unwrap();
    for (row, want) in training_rows.iter().zip(&expected_truths) {
        let got = predict(&model, &row.energies);
        assert!(
            (got - want).abs() <= 1e-6 * want.abs().max(1.0),
            "prediction {got} strays from truth {want}"
        );
    }

    // The model file preserves coefficients bit for bit.
    save_text(&base.join("model.tsv"), &emit_model_tsv(&model)).unwrap();
    let model_back: CalorieModel = load_model_tsv(&base.join("model.tsv")).unwrap();
    assert_eq!(model_back, model);
    for row in &training_rows {
        let a = predict(&model, &row.energies);
        let b = predict(&model_back, &row.energies);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

fn cohort() -> (
    Vec<SessionRecord>,
    Vec<SubjectRecord>,
    HashMap<String, SkeletonStream>,
) {
    let mut sessions = Vec::new();
    let mut subjects = Vec::new();
    let mut streams = HashMap::new();
    for s in 0..6usize {
        let id = format!("s{}", s + 1);
        subjects.push(SubjectRecord::new(&id, 58.0 + 4.0 * s as f64, standard_profile()).unwrap());
        for e in 1..=3u32 {
            let stream_ref = format!("{id}e{e}");
            let stream = session_stream((s as u64) * 7 + u64::from(e), f64::from(e));
            let subject = &subjects[s];
            let energies = session_energy(&stream, subject).unwrap();
            let cc = truth_from_energy(&energies) + 0.3 * s as f64;
            sessions.push(SessionRecord::new(&id, e, cc * 0.4, cc, &stream_ref).unwrap());
            streams.insert(stream_ref, stream);
        }
    }
    (sessions, subjects, streams)
}

#[test]
fn evaluation_reports_round_trip_and_compare() {
    let (sessions, subjects, streams) = cohort();
    let ours = cross_validate(&sessions, &subjects, &streams, 3, MassMethod::Personalized).unwrap();
    let again =
        cross_validate(&sessions, &subjects, &streams, 3, MassMethod::Personalized).unwrap();
    assert_eq!(ours, again, "cross-validation must be deterministic");
    let baseline =
        cross_validate(&sessions, &subjects, &streams, 3, MassMethod::StandardScale).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ours.tsv");
    save_text(&path, &emit_report_tsv(&ours)).unwrap();
    let ours_back = load_report_tsv(&path).unwrap();
    assert_eq!(ours_back, ours);

    let baseline_back = parse_report_tsv(&emit_report_tsv(&baseline)).unwrap();
    assert_eq!(baseline_back, baseline);

    let pairs = paired_rates(&ours_back, &baseline_back).unwrap();
    assert_eq!(pairs.len(), 18);
    let result = wilcoxon_signed_rank(&pairs).unwrap();
    assert!(result.p_value > 0.0 && result.p_value <= 1.0);
}

#[test]
fn protocol_warnings_surface_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sessions.csv");
    let text = "\
subject,exercise_index,rest_kcal,exercise_kcal,stream_ref
s1,1,30,16,streams/s1e1.csv
s1,2,17,20,streams/s1e2.csv
";
    save_text(&path, text).unwrap();
    let file = load_sessions_csv(&path).unwrap();
    assert_eq!(file.records.len(), 2);
    assert_eq!(file.warnings.len(), 1);
    assert!(file.warnings[0].contains("s1:1"));
}

#[test]
fn located_errors_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.csv");
    save_text(
        &path,
        "subject,exercise_index,rest_kcal,exercise_kcal,stream_ref\ns1,1,abc,16,x.csv\n",
    )
    .unwrap();
    let err = load_sessions_csv(&path).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("broken.csv"), "{msg}");
    assert!(msg.contains("line 2"), "{msg}");

    let missing = load_skeleton_csv(Path::new("/nonexistent/skeleton.csv")).unwrap_err();
    assert!(missing.to_string().contains("/nonexistent/skeleton.csv"));
}
