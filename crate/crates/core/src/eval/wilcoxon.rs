//! Two-sided Wilcoxon signed-rank test for paired samples.
//!
//! Zero differences are dropped, tied absolute differences get mid-ranks,
//! and the reported statistic is `W = min(W+, W-)`. Small samples use the
//! exact null distribution over all sign assignments; larger samples use the
//! normal approximation with tie correction and no continuity correction.

use statrs::distribution::{ContinuousCDF, Normal};

use super::EvalError;

/// Largest effective sample size for which the automatic variant enumerates
/// the exact null distribution.
pub const EXACT_LIMIT: usize = 25;

/// Which null distribution produced the p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    /// Full enumeration of the 2^n sign assignments (counted by dynamic
    /// programming over rank sums, which yields the same distribution).
    Exact,
    /// Normal approximation with tie-corrected variance and no continuity
    /// correction.
    NormalApprox,
}

/// Outcome of the signed-rank test.
#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    /// Pairs remaining after zero differences are dropped.
    pub n_effective: usize,
    /// `min(W+, W-)`; half-integral when mid-ranks occur.
    pub w_statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub method: WilcoxonMethod,
}

impl WilcoxonResult {
    /// True when every difference was zero, leaving nothing to test.
    pub fn is_degenerate(&self) -> bool {
        self.n_effective == 0
    }
}

/// Runs the test, choosing the exact variant for `n_effective <=`
/// [`EXACT_LIMIT`] and the normal approximation above it.
pub fn wilcoxon_signed_rank(pairs: &[(f64, f64)]) -> Result<WilcoxonResult, EvalError> {
    let diffs = nonzero_diffs(pairs)?;
    let method = if diffs.len() <= EXACT_LIMIT {
        WilcoxonMethod::Exact
    } else {
        WilcoxonMethod::NormalApprox
    };
    Ok(run(&diffs, method))
}

/// Runs the test with a caller-chosen variant.
pub fn wilcoxon_signed_rank_method(
    pairs: &[(f64, f64)],
    method: WilcoxonMethod,
) -> Result<WilcoxonResult, EvalError> {
    let diffs = nonzero_diffs(pairs)?;
    Ok(run(&diffs, method))
}

fn nonzero_diffs(pairs: &[(f64, f64)]) -> Result<Vec<f64>, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::NoPairs);
    }
    let mut diffs = Vec::with_capacity(pairs.len());
    for (index, &(a, b)) in pairs.iter().enumerate() {
        if !a.is_finite() || !b.is_finite() {
            return Err(EvalError::NonFinitePair { index });
        }
        let d = a - b;
        if d != 0.0 {
            diffs.push(d);
        }
    }
    Ok(diffs)
}

fn run(diffs: &[f64], method: WilcoxonMethod) -> WilcoxonResult {
    let n = diffs.len();
    if n == 0 {
        return WilcoxonResult {
            n_effective: 0,
            w_statistic: 0.0,
            p_value: 1.0,
            method,
        };
    }

    let (ranks, tie_sizes) = midranks(diffs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();
    let total: f64 = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;
    let w = w_plus.min(w_minus);

    let p_value = match method {
        WilcoxonMethod::Exact => exact_p(&ranks, w),
        WilcoxonMethod::NormalApprox => normal_p(n, &tie_sizes, w_plus),
    };
    WilcoxonResult {
        n_effective: n,
        w_statistic: w,
        p_value,
        method,
    }
}

/// Ascending mid-ranks of `|d|`, plus the size of each tie group.
fn midranks(diffs: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diffs[a].abs().total_cmp(&diffs[b].abs()));
    let mut ranks = vec![0.0; n];
    let mut tie_sizes = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && diffs[order[end]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        // 1-based positions start+1 ..= end share the mid-rank.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        tie_sizes.push(end - start);
        start = end;
    }
    (ranks, tie_sizes)
}

/// Exact two-sided p-value: `min(1, 2 * P(W+ <= min(W+, W-)))` under the
/// uniform null over all sign assignments.
///
/// Mid-ranks are multiples of one half, so doubling makes them integers and
/// the distribution of `2 * W+` is counted by dynamic programming; counts
/// stay exact in f64 up to 2^53 assignments.
fn exact_p(ranks: &[f64], w_min: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r) as usize).collect();
    let span: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; span + 1];
    counts[0] = 1.0;
    let mut reach = 0;
    for &d in &doubled {
        reach += d;
        for s in (d..=reach).rev() {
            counts[s] += counts[s - d];
        }
    }
    let threshold = (2.0 * w_min).round() as usize;
    let at_or_below: f64 = counts[..=threshold.min(span)].iter().sum();
    let total = (ranks.len() as f64).exp2();
    (2.0 * at_or_below / total).min(1.0)
}

/// Normal approximation: `z = (W+ - n(n+1)/4) / sigma` with the tie-corrected
/// variance `n(n+1)(2n+1)/24 - sum(t^3 - t)/48`; no continuity correction.
fn normal_p(n: usize, tie_sizes: &[usize], w_plus: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            (t * t * t - t) / 48.0
        })
        .sum();
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    if var <= 0.0 {
        return 1.0;
    }
    let z = (w_plus - mean) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * normal.cdf(-z.abs())).min(1.0)
}
