//! Runtime encoder/decoder: seeded categorical sampling of code vectors,
//! superposition decoding, and a Monte-Carlo estimate of the constrained
//! reconstruction distortion.
//!
//! Under the factorized encoder and superposition decoder, the constrained
//! distortion decomposes exactly into the two bound terms `d1 + d2`, so the
//! Monte-Carlo estimate here doubles as an independent numerical check of
//! the training objective.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{squared_distance, StageActivation, StageParams, WeightedDataset};
use crate::error::SvqError;

/// A vector of code indices, 1-based in `[1, M]`, one per sample drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeVector {
    indices: Vec<usize>,
}

impl CodeVector {
    /// Build a code vector. Entries must be 1-based; the upper bound is
    /// checked against a concrete stage by [`decode`].
    pub fn new(indices: Vec<usize>) -> Result<Self, SvqError> {
        if indices.is_empty() {
            return Err(SvqError::invalid(
                "code vector must have at least one index",
            ));
        }
        if indices.contains(&0) {
            return Err(SvqError::invalid("code indices are 1-based"));
        }
        Ok(CodeVector { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Draw `draws` code indices independently from the posterior by
/// inverse-CDF walking in index order. Deterministic given the rng state.
pub fn sample_code(
    activation: &StageActivation,
    draws: usize,
    rng: &mut impl Rng,
) -> Result<CodeVector, SvqError> {
    if draws == 0 {
        return Err(SvqError::invalid("must draw at least one code index"));
    }
    let posterior = activation.posterior();
    let indices = (0..draws)
        .map(|_| {
            let u: f64 = rng.random();
            let mut cumulative = 0.0;
            for (y, p) in posterior.iter().enumerate() {
                cumulative += p;
                if u < cumulative {
                    return y + 1;
                }
            }
            // Rounding can leave the final cumulative fractionally below 1.
            posterior.len()
        })
        .collect();
    Ok(CodeVector { indices })
}

/// Decode a code vector as the arithmetic mean of the addressed
/// reconstruction rows.
pub fn decode(stage: &StageParams, code: &CodeVector) -> Result<Vec<f64>, SvqError> {
    let m = stage.codebook_size();
    let mut out = vec![0.0; stage.input_dim()];
    for &y in code.indices() {
        if y < 1 || y > m {
            return Err(SvqError::invalid(format!(
                "code index {y} out of range [1, {m}]"
            )));
        }
        for (o, r) in out.iter_mut().zip(&stage.recons()[y - 1]) {
            *o += r;
        }
    }
    let scale = 1.0 / code.len() as f64;
    for o in &mut out {
        *o *= scale;
    }
    Ok(out)
}

/// Monte-Carlo estimate of the constrained distortion with its standard
/// error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Estimate `2 E ||x - decode(code)||^2` over the dataset with `trials`
/// sampled code vectors per item.
///
/// Each dataset item gets its own rng substream derived from `seed`, so
/// the estimate is reproducible and items are independent.
pub fn estimate_constrained_distortion(
    stage: &StageParams,
    data: &WeightedDataset,
    trials: usize,
    seed: u64,
) -> Result<DistortionEstimate, SvqError> {
    if trials < 2 {
        return Err(SvqError::invalid(
            "need at least 2 trials per item to estimate a standard error",
        ));
    }
    if data.is_empty() {
        return Err(SvqError::EmptyDataset);
    }

    let mut estimate = 0.0;
    let mut variance = 0.0;
    for (item_idx, item) in data.items().iter().enumerate() {
        let activation = stage.posterior(&item.vector)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(item_idx as u64);

        // Welford accumulation of the per-item mean and sample variance.
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for k in 0..trials {
            let code = sample_code(&activation, stage.code_samples(), &mut rng)?;
            let recon = decode(stage, &code)?;
            let value = 2.0 * squared_distance(&item.vector, &recon);
            let delta = value - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (value - mean);
        }
        let sample_variance = m2 / (trials - 1) as f64;
        estimate += item.prob * mean;
        variance += item.prob * item.prob * sample_variance / trials as f64;
    }
    Ok(DistortionEstimate {
        estimate,
        std_error: variance.max(0.0).sqrt(),
    })
}
