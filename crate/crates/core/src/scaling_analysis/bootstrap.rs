use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_RESAMPLE_SIZE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub mean: f64,
    pub stderr: f64,
    pub resamples: usize,
    pub resample_size: usize,
}

/// Spread of means of `resamples` draws of `size` values taken with
/// replacement. With a fixed `size` this is the error of a size-`size` mean,
/// whatever the length of `sample`. The input is sorted first so the result
/// does not depend on its order.
pub fn bootstrap_stderr(sample: &[f64], resamples: usize, size: usize, seed: u64) -> Result<BootstrapResult> {
    if sample.is_empty() {
        return Err(Error::EmptySupport);
    }
    if resamples < 2 || size == 0 {
        return Err(Error::InvalidArgument(
            "need at least two resamples of positive size".into(),
        ));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // shifted so a constant sample gives exactly zero spread
    let base = sorted[0];
    let means: Vec<f64> = (0..resamples)
        .map(|_| (0..size).map(|_| sorted[rng.gen_range(0..sorted.len())] - base).sum::<f64>() / size as f64)
        .collect();
    let mm = means.iter().sum::<f64>() / resamples as f64;
    let var = means.iter().map(|m| (m - mm).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    Ok(BootstrapResult {
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        stderr: var.sqrt(),
        resamples,
        resample_size: size,
    })
}
