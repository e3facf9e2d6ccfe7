//! Monte Carlo estimates with batch-means error bars.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Batches cut from each chain when estimating errors.
pub const DEFAULT_BATCHES_PER_CHAIN: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub mean_im: f64,
    /// Batch-means standard error of the real part.
    pub std_error: f64,
    pub std_error_im: f64,
    pub n_samples: usize,
    /// `sample variance / std_error^2` for the real part.
    pub n_effective: usize,
    pub batch_count: usize,
}

impl MCEstimate {
    /// Estimate from independent chains, each cut into `batches_per_chain`
    /// consecutive batches of equal size. A trailing remainder is dropped.
    pub fn from_chains(chains: &[Vec<Complex64>], batches_per_chain: usize) -> Result<MCEstimate> {
        if batches_per_chain == 0 {
            return Err(Error::InsufficientSamples("zero batches per chain".into()));
        }
        let mut batch_re = Vec::new();
        let mut batch_im = Vec::new();
        let mut all_re = Vec::new();
        for chain in chains {
            let size = chain.len() / batches_per_chain;
            if size == 0 {
                continue;
            }
            for b in chain[..size * batches_per_chain].chunks(size) {
                let s: Complex64 = b.iter().sum();
                batch_re.push(s.re / size as f64);
                batch_im.push(s.im / size as f64);
            }
            all_re.extend(chain[..size * batches_per_chain].iter().map(|z| z.re));
        }
        let batch_count = batch_re.len();
        if batch_count < 2 {
            return Err(Error::InsufficientSamples(format!(
                "{batch_count} batch(es); need at least 2"
            )));
        }
        let (mean, var_re) = mean_var(&batch_re);
        let (mean_im, var_im) = mean_var(&batch_im);
        let std_error = (var_re / batch_count as f64).sqrt();
        let std_error_im = (var_im / batch_count as f64).sqrt();
        let n_samples = all_re.len();
        let (_, sample_var) = mean_var(&all_re);
        Ok(MCEstimate {
            mean,
            mean_im,
            std_error,
            std_error_im,
            n_samples,
            n_effective: effective_size(sample_var, std_error, n_samples),
            batch_count,
        })
    }

    /// Estimate from independent draws: one batch per sample.
    pub fn iid(samples: &[f64]) -> Result<MCEstimate> {
        if samples.len() < 2 {
            return Err(Error::InsufficientSamples(format!("{} sample(s)", samples.len())));
        }
        let (mean, var) = mean_var(samples);
        let std_error = (var / samples.len() as f64).sqrt();
        Ok(MCEstimate {
            mean,
            mean_im: 0.0,
            std_error,
            std_error_im: 0.0,
            n_samples: samples.len(),
            n_effective: samples.len(),
            batch_count: samples.len(),
        })
    }

    /// Exact value with no statistical error.
    pub fn exact(value: Complex64) -> MCEstimate {
        MCEstimate {
            mean: value.re,
            mean_im: value.im,
            std_error: 0.0,
            std_error_im: 0.0,
            n_samples: 0,
            n_effective: 0,
            batch_count: 0,
        }
    }

    pub fn complex_mean(&self) -> Complex64 {
        Complex64::new(self.mean, self.mean_im)
    }

    /// `|mean - target| / std_error`, infinite when the error is zero and the mean is off.
    pub fn z_score(&self, target: f64) -> f64 {
        z(self.mean - target, self.std_error)
    }
}

/// `|diff| / sigma`, with `0/0 = 0`.
pub fn z(diff: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        diff.abs() / sigma
    } else if diff.abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Standard error of `a - b` for independent estimates.
pub fn combined_sigma(a: &MCEstimate, b: &MCEstimate) -> f64 {
    a.std_error.hypot(b.std_error)
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn effective_size(sample_var: f64, std_error: f64, n: usize) -> usize {
    if std_error > 0.0 {
        (sample_var / (std_error * std_error)).round() as usize
    } else {
        n
    }
}
