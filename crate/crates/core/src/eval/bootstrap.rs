//! Paired bootstrap over queries.
//!
//! Resamples are drawn in fixed-size chunks, each from its own ChaCha stream
//! derived from the seed, so the result does not depend on how many threads
//! run the chunks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_RESAMPLES: usize = 10_000;
const CHUNK: usize = 256;
/// Smallest p-value ever reported.
pub const P_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapResult {
    /// Observed `mean(b) - mean(a)`.
    pub mean_delta: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Resamples whose mean delta has the opposite sign to the observed one.
    pub sign_reversals: usize,
    /// Centered resamples at least as extreme as the observation:
    /// `|delta* - observed| >= |observed|`.
    pub centered_extreme: usize,
    pub resamples: usize,
    pub seed: u64,
    pub n_queries: usize,
}

impl BootstrapResult {
    /// Empirical p-value, never below `max(1 / resamples, 1e-4)`.
    pub fn p_value(&self) -> f64 {
        let floor = (1.0 / self.resamples as f64).max(P_FLOOR);
        (self.centered_extreme as f64 / self.resamples as f64).max(floor)
    }

    /// True when no centered resample reached the observed difference.
    pub fn at_resolution_limit(&self) -> bool {
        self.centered_extreme == 0
    }

    pub fn p_display(&self) -> String {
        if self.at_resolution_limit() {
            format!("p ≤ {:.0e} (empirical resolution)", self.p_value())
        } else {
            format!("p = {:.4}", self.p_value())
        }
    }
}

/// Paired bootstrap of `mean(b) - mean(a)` over shared query ids.
pub fn paired_bootstrap(
    metric_a: &BTreeMap<String, f64>,
    metric_b: &BTreeMap<String, f64>,
    resamples: usize,
    seed: u64,
) -> Result<BootstrapResult> {
    if metric_a.len() != metric_b.len() || metric_a.keys().zip(metric_b.keys()).any(|(x, y)| x != y) {
        return Err(Error::Invalid("paired bootstrap needs identical query sets".into()));
    }
    if metric_a.is_empty() {
        return Err(Error::Invalid("paired bootstrap needs at least one query".into()));
    }
    if resamples == 0 {
        return Err(Error::Invalid("resamples must be positive".into()));
    }
    let deltas: Vec<f64> = metric_a.values().zip(metric_b.values()).map(|(a, b)| b - a).collect();
    let n = deltas.len();
    let observed = deltas.iter().sum::<f64>() / n as f64;

    let n_chunks = resamples.div_ceil(CHUNK);
    let mut means: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(resamples - c * CHUNK);
            (0..count)
                .map(|_| {
                    let mut sum = 0.0;
                    for _ in 0..n {
                        sum += deltas[rng.gen_range(0..n)];
                    }
                    sum / n as f64
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let sign_reversals = means.iter().filter(|&&m| m * observed < 0.0).count();
    let centered_extreme = means.iter().filter(|&&m| (m - observed).abs() >= observed.abs()).count();
    means.sort_unstable_by(f64::total_cmp);
    Ok(BootstrapResult {
        mean_delta: observed,
        ci_lo: percentile(&means, 0.025),
        ci_hi: percentile(&means, 0.975),
        sign_reversals,
        centered_extreme,
        resamples,
        seed,
        n_queries: n,
    })
}

/// Linear-interpolation percentile of sorted data.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}
