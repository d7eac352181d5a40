//! Command-line pipeline for skeleton-based calorie estimation.
//!
//! Workflow: `profile` derives a mass profile, `energy` accumulates kinetic
//! energy for one motion stream, `train` fits a calorie model over recorded
//! sessions, `predict` applies a model to an energy vector, `evaluate` runs
//! an exercise-indexed cross-validation, and `compare` tests two evaluation
//! reports against each other. `synth` generates deterministic motion
//! streams for exercising the rest of the pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use kinergy::eval::{
    cross_validate, paired_rates, wilcoxon_signed_rank, wilcoxon_signed_rank_method, MassMethod,
    WilcoxonMethod,
};
use kinergy::io::{
    emit_energy_tsv, emit_model_tsv, emit_profile_tsv, emit_report_tsv, emit_skeleton_csv,
    load_energy_tsv, load_joints2d_tsv, load_mask, load_model_tsv, load_profile_tsv,
    load_report_tsv, load_sessions_csv, load_silhouette_text, load_skeleton_csv,
    parse_subjects_csv, resolve_subjects, save_text, validate_session_subjects,
};
use kinergy::kinetics::{accumulate, frame_energies, session_energy, velocities};
use kinergy::mass::{mass_of, profile_from_mask, segment_silhouette, standard_profile};
use kinergy::numeric::format_significant;
use kinergy::regression::{fit, predict, TrainingRow, TrainingSet};
use kinergy::synth::{generate, generate_jittered, Axis, Motion, MotionSpec};
use kinergy::{JointId, JointMap, SessionRecord, SkeletonStream, SubjectRecord, Vec3};

#[derive(Parser)]
#[command(
    name = "kinergy",
    version,
    about = "Exercise calorie estimation from skeleton motion streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Produce a per-joint mass profile TSV
    Profile(ProfileArgs),
    /// Accumulate per-joint kinetic energy for one motion stream
    Energy(EnergyArgs),
    /// Generate a synthetic skeleton stream
    Synth(SynthArgs),
    /// Fit a calorie model from recorded sessions
    Train(TrainArgs),
    /// Apply a trained model to an accumulated energy vector
    Predict(PredictArgs),
    /// Cross-validate a mass method and write an error-rate report
    Evaluate(EvaluateArgs),
    /// Compare two evaluation reports with a signed-rank test
    Compare(CompareArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true))]
struct ProfileArgs {
    /// Use the built-in standard mass scale
    #[arg(long, group = "source")]
    standard: bool,
    /// Labeled segmentation mask (text grid or PGM), labels 0..20
    #[arg(long, group = "source", value_name = "PATH")]
    mask: Option<PathBuf>,
    /// Binary silhouette text grid (0/1); needs --joints for labeling
    #[arg(long, group = "source", value_name = "PATH", requires = "joints")]
    silhouette: Option<PathBuf>,
    /// 2D joint pixel coordinates (`joint<TAB>u<TAB>v`, all 20 joints)
    #[arg(long, value_name = "PATH")]
    joints: Option<PathBuf>,
    /// Output file (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EnergyArgs {
    /// Skeleton stream CSV
    #[arg(long, value_name = "PATH")]
    skeleton: PathBuf,
    /// Mass profile TSV
    #[arg(long, value_name = "PATH")]
    profile: PathBuf,
    /// Subject weight in kilograms
    #[arg(long, value_name = "KG")]
    weight: f64,
    /// Output file (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MotionKind {
    /// All joints stationary
    Still,
    /// Head and hands drift at constant velocity
    Drift,
    /// Wrists, hands, and knees oscillate; head drifts
    Swing,
}

#[derive(Args)]
struct SynthArgs {
    /// Motion preset
    #[arg(long, value_enum, default_value_t = MotionKind::Swing)]
    motion: MotionKind,
    /// Stream length in seconds
    #[arg(long, default_value_t = 2.0)]
    duration: f64,
    /// Sampling rate in frames per second
    #[arg(long, default_value_t = 25.0)]
    fps: f64,
    /// Scales preset amplitudes and speeds
    #[arg(long, default_value_t = 1.0)]
    intensity: f64,
    /// Standard deviation of Gaussian coordinate noise (meters)
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    /// Noise seed; same seed reproduces the same stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Each subject's own profile from subjects.csv
    Personalized,
    /// The built-in standard scale for every subject
    Standard,
}

impl From<MethodArg> for MassMethod {
    fn from(m: MethodArg) -> MassMethod {
        match m {
            MethodArg::Personalized => MassMethod::Personalized,
            MethodArg::Standard => MassMethod::StandardScale,
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    /// Sessions table (subject,exercise_index,rest_kcal,exercise_kcal,stream_ref)
    #[arg(long, value_name = "PATH")]
    sessions: PathBuf,
    /// Subjects table (subject,weight_kg,mass_profile_ref)
    #[arg(long, value_name = "PATH")]
    subjects: PathBuf,
    /// Directory stream_ref paths are resolved against
    #[arg(long, value_name = "DIR")]
    stream_dir: PathBuf,
    /// Mass assignment used for the energy features
    #[arg(long, value_enum, default_value_t = MethodArg::Personalized)]
    method: MethodArg,
    /// Output file (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model TSV
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Accumulated energy TSV (output of `energy`)
    #[arg(long, value_name = "PATH")]
    energy: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Sessions table
    #[arg(long, value_name = "PATH")]
    sessions: PathBuf,
    /// Subjects table
    #[arg(long, value_name = "PATH")]
    subjects: PathBuf,
    /// Directory stream_ref paths are resolved against
    #[arg(long, value_name = "DIR")]
    stream_dir: PathBuf,
    /// Fold count; must equal the number of distinct exercise indices
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Mass assignment under evaluation
    #[arg(long, value_enum, default_value_t = MethodArg::Personalized)]
    method: MethodArg,
    /// Output file (stdout when omitted)
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Exact when the effective sample is small, else normal approximation
    Auto,
    /// Exact enumeration of the signed-rank distribution
    Exact,
    /// Normal approximation with tie correction
    Approx,
}

#[derive(Args)]
struct CompareArgs {
    /// First report (typically the personalized method)
    report_a: PathBuf,
    /// Second report (typically the standard-scale baseline)
    report_b: PathBuf,
    /// Signed-rank variant
    #[arg(long, value_enum, default_value_t = VariantArg::Auto)]
    variant: VariantArg,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is a usage error.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Profile(args) => cmd_profile(args),
        Command::Energy(args) => cmd_energy(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

fn write_output(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => Ok(save_text(path, content)?),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_profile(args: ProfileArgs) -> Result<()> {
    let profile = if args.standard {
        standard_profile()
    } else if let Some(mask_path) = &args.mask {
        profile_from_mask(&load_mask(mask_path)?)?
    } else {
        let sil_path = args.silhouette.as_ref().expect("clap enforces the group");
        let joints_path = args.joints.as_ref().expect("clap enforces requires");
        let silhouette = load_silhouette_text(sil_path)?;
        let joints2d = load_joints2d_tsv(joints_path)?;
        let mask = segment_silhouette(&silhouette, &joints2d)?;
        profile_from_mask(&mask)?
    };
    write_output(args.output.as_deref(), &emit_profile_tsv(&profile))
}

fn cmd_energy(args: EnergyArgs) -> Result<()> {
    let stream = load_skeleton_csv(&args.skeleton)?;
    let profile = load_profile_tsv(&args.profile)?;
    let masses = mass_of(&profile, args.weight)?;
    let v = velocities(&stream)?;
    let e = frame_energies(&v, &masses)?;
    let energies = accumulate(&e)?;
    write_output(args.output.as_deref(), &emit_energy_tsv(&energies))
}

fn rest_pose() -> JointMap<Vec3> {
    JointMap::from_fn(|j| [0.1 * f64::from(j.ordinal()), 1.0, 2.5])
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let s = args.intensity;
    let motions = match args.motion {
        MotionKind::Still => JointMap::splat(Motion::Stationary),
        MotionKind::Drift => JointMap::from_fn(|j| match j {
            JointId::Head | JointId::LeftHand | JointId::RightHand => {
                Motion::ConstantVelocity([0.2 * s, 0.0, 0.0])
            }
            _ => Motion::Stationary,
        }),
        MotionKind::Swing => JointMap::from_fn(|j| match j {
            JointId::LeftWrist | JointId::RightWrist | JointId::LeftHand | JointId::RightHand => {
                Motion::Sinusoid {
                    amplitude: 0.25 * s,
                    omega: 3.0,
                    axis: Axis::Y,
                }
            }
            JointId::LeftKnee | JointId::RightKnee => Motion::Sinusoid {
                amplitude: 0.1 * s,
                omega: 2.0,
                axis: Axis::Z,
            },
            JointId::Head => Motion::ConstantVelocity([0.05 * s, 0.0, 0.0]),
            _ => Motion::Stationary,
        }),
    };
    let spec = MotionSpec::new(motions, args.duration, args.fps)?;
    let stream = if args.jitter > 0.0 {
        generate_jittered(&spec, &rest_pose(), args.jitter, args.seed)?
    } else {
        generate(&spec, &rest_pose())?
    };
    write_output(args.output.as_deref(), &emit_skeleton_csv(&stream))
}

/// Loads and cross-checks the session and subject tables, printing protocol
/// warnings to stderr.
fn load_cohort(
    sessions_path: &Path,
    subjects_path: &Path,
) -> Result<(Vec<SessionRecord>, Vec<SubjectRecord>)> {
    let sessions = load_sessions_csv(sessions_path)?;
    for w in &sessions.warnings {
        eprintln!("warning: {w}");
    }
    let text = fs::read_to_string(subjects_path)
        .with_context(|| format!("reading {}", subjects_path.display()))?;
    let rows =
        parse_subjects_csv(&text).map_err(|e| anyhow!("{}: {e}", subjects_path.display()))?;
    let base = subjects_path.parent().unwrap_or_else(|| Path::new("."));
    let subjects = resolve_subjects(&rows, base)?;
    validate_session_subjects(&sessions.records, &subjects)
        .map_err(|e| anyhow!("{}: {e}", sessions_path.display()))?;
    Ok((sessions.records, subjects))
}

fn load_streams(sessions: &[SessionRecord], dir: &Path) -> Result<HashMap<String, SkeletonStream>> {
    let mut streams = HashMap::new();
    for record in sessions {
        if !streams.contains_key(record.stream_ref()) {
            let stream = load_skeleton_csv(&dir.join(record.stream_ref()))?;
            streams.insert(record.stream_ref().to_string(), stream);
        }
    }
    Ok(streams)
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let (sessions, subjects) = load_cohort(&args.sessions, &args.subjects)?;
    let streams = load_streams(&sessions, &args.stream_dir)?;
    let method = MassMethod::from(args.method);
    let mut rows = Vec::with_capacity(sessions.len());
    for record in &sessions {
        let subject = subjects
            .iter()
            .find(|s| s.subject_id() == record.subject_id())
            .expect("cross-checked above");
        let subject = match method {
            MassMethod::Personalized => subject.clone(),
            MassMethod::StandardScale => subject.with_profile(standard_profile()),
        };
        let energies = session_energy(&streams[record.stream_ref()], &subject)?;
        rows.push(TrainingRow {
            subject_id: record.subject_id().to_string(),
            exercise_index: record.exercise_index(),
            energies,
            cc_truth: record.exercise_kcal(),
        });
    }
    let model = fit(&TrainingSet::new(rows)?)?;
    write_output(args.output.as_deref(), &emit_model_tsv(&model))
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let model = load_model_tsv(&args.model)?;
    let energies = load_energy_tsv(&args.energy)?;
    // Full precision: the single number is meant for machines and scripts.
    println!("{}", predict(&model, &energies));
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let (sessions, subjects) = load_cohort(&args.sessions, &args.subjects)?;
    let streams = load_streams(&sessions, &args.stream_dir)?;
    let report = cross_validate(
        &sessions,
        &subjects,
        &streams,
        args.k,
        MassMethod::from(args.method),
    )?;
    eprintln!(
        "mean error rate {} over {} sessions ({}, k = {})",
        format_significant(report.mean(), 6),
        report.entries().len(),
        report.label(),
        args.k
    );
    write_output(args.output.as_deref(), &emit_report_tsv(&report))
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let a = load_report_tsv(&args.report_a)?;
    let b = load_report_tsv(&args.report_b)?;
    let pairs = paired_rates(&a, &b)?;
    let result = match args.variant {
        VariantArg::Auto => wilcoxon_signed_rank(&pairs)?,
        VariantArg::Exact => wilcoxon_signed_rank_method(&pairs, WilcoxonMethod::Exact)?,
        VariantArg::Approx => wilcoxon_signed_rank_method(&pairs, WilcoxonMethod::NormalApprox)?,
    };
    println!(
        "{} mean error rate: {}",
        a.label(),
        format_significant(a.mean(), 6)
    );
    println!(
        "{} mean error rate: {}",
        b.label(),
        format_significant(b.mean(), 6)
    );
    let variant = match result.method {
        WilcoxonMethod::Exact => "exact",
        WilcoxonMethod::NormalApprox => "normal approximation",
    };
    println!(
        "signed-rank: W = {}, n = {}, p = {} ({variant})",
        result.w_statistic,
        result.n_effective,
        format_significant(result.p_value, 6)
    );
    Ok(())
}
