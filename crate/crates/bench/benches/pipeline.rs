use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use kinergy::eval::{wilcoxon_signed_rank_method, WilcoxonMethod};
use kinergy::kinetics::session_energy;
use kinergy::regression::{fit, predict, TrainingSet};
use kinergy_bench::{cohort_rows, rate_pairs, subject, swing_stream};

fn bench_session_energy(c: &mut Criterion) {
    let mut group = c.benchmark_group("session_energy");
    let subj = subject("s1", 72.5);
    for &(secs, fps) in &[(2.0, 25.0), (10.0, 30.0), (60.0, 30.0)] {
        let stream = swing_stream(1.0, secs, fps);
        let label = format!("{}s_at_{}fps", secs as u32, fps as u32);
        group.bench_function(label, |b| {
            b.iter(|| session_energy(black_box(&stream), black_box(&subj)).unwrap())
        });
    }
    group.finish();
}

fn bench_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    for &(subjects, exercises) in &[(6usize, 3usize), (20, 5)] {
        let train = TrainingSet::new(cohort_rows(subjects, exercises)).unwrap();
        let label = format!("{}x{}", subjects, exercises);
        group.bench_function(label, |b| b.iter(|| fit(black_box(&train)).unwrap()));
    }
    group.finish();
}

fn bench_predict(c: &mut Criterion) {
    let train = TrainingSet::new(cohort_rows(6, 3)).unwrap();
    let model = fit(&train).unwrap();
    let energies = train.rows()[0].energies.clone();
    c.bench_function("predict", |b| {
        b.iter(|| predict(black_box(&model), black_box(&energies)))
    });
}

fn bench_wilcoxon(c: &mut Criterion) {
    let mut group = c.benchmark_group("signed_rank");
    let small = rate_pairs(18);
    group.bench_function("exact_n18", |b| {
        b.iter(|| wilcoxon_signed_rank_method(black_box(&small), WilcoxonMethod::Exact).unwrap())
    });
    let exact_cap = rate_pairs(25);
    group.bench_function("exact_n25", |b| {
        b.iter(|| {
            wilcoxon_signed_rank_method(black_box(&exact_cap), WilcoxonMethod::Exact).unwrap()
        })
    });
    let large = rate_pairs(500);
    group.bench_function("approx_n500", |b| {
        b.iter(|| {
            wilcoxon_signed_rank_method(black_box(&large), WilcoxonMethod::NormalApprox).unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_session_energy,
    bench_fit,
    bench_predict,
    bench_wilcoxon
);
criterion_main!(benches);
