use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::RngStream;
use crate::error::{Error, Result};

/// Scenarios per independent random stream in block-partitioned runs.
pub const MC_BLOCK_SIZE: u64 = 4096;

/// A Monte Carlo probability estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_scenarios: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_counts(successes: u64, n_scenarios: u64, seed: u64) -> Result<Self> {
        if n_scenarios == 0 {
            return Err(Error::param("n", "at least one scenario is required"));
        }
        if successes > n_scenarios {
            return Err(Error::param("successes", "exceeds the number of scenarios"));
        }
        let n = n_scenarios as f64;
        let mean = successes as f64 / n;
        Ok(Self {
            mean,
            stderr: (mean * (1.0 - mean) / n).sqrt(),
            n_scenarios,
            seed,
        })
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Estimate from the first `n` entries of an indicator stream.
pub fn mc_estimate<I>(indicators: I, n: u64, seed: u64) -> Result<McEstimate>
where
    I: IntoIterator<Item = bool>,
{
    if n == 0 {
        return Err(Error::param("n", "at least one scenario is required"));
    }
    let mut seen = 0u64;
    let mut hits = 0u64;
    for hit in indicators.into_iter().take(n as usize) {
        seen += 1;
        hits += u64::from(hit);
    }
    if seen < n {
        return Err(Error::param(
            "indicators",
            format!("stream ended after {seen} of {n} entries"),
        ));
    }
    McEstimate::from_counts(hits, n, seed)
}

/// Runs `scenarios` Bernoulli trials and counts successes.
///
/// Scenarios are cut into blocks of [`MC_BLOCK_SIZE`]; block `b` draws from
/// `rng.split(b)`. Blocks run on the current rayon pool and the count is an
/// integer sum, so the result does not depend on the number of workers.
pub fn count_successes<F>(scenarios: u64, rng: &RngStream, trial: F) -> u64
where
    F: Fn(&mut RngStream) -> bool + Sync,
{
    let blocks = scenarios.div_ceil(MC_BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = rng.split(b);
            let len = MC_BLOCK_SIZE.min(scenarios - b * MC_BLOCK_SIZE);
            (0..len).filter(|_| trial(&mut stream)).count() as u64
        })
        .sum()
}
