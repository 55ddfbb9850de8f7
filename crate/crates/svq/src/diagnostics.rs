//! Diagnostics that classify what a trained encoder learned: peak profiles
//! of reconstruction rows (single object, object pair, ...) and a score for
//! how invariant the final posterior is to object separation.

use crate::chain::ChainParams;
use crate::error::SvqError;
use crate::scene::{circular_distance, SceneConfig, SceneMode};

/// Default peak acceptance threshold; single humps peak near 1.
pub const PEAK_THRESHOLD: f64 = 0.5;
/// Default minimum circular distance between accepted peaks.
pub const PEAK_MIN_SEPARATION: usize = 2;

/// Circular local maxima of a vector, as 1-based positions in ascending
/// order.
///
/// A position qualifies when its value reaches `threshold` and is no
/// smaller than both circular neighbours; candidates within
/// `min_separation` (circular) of an already-accepted higher peak are
/// suppressed greedily.
pub fn peak_profile(values: &[f64], threshold: f64, min_separation: usize) -> Vec<usize> {
    let dim = values.len();
    if dim == 0 {
        return Vec::new();
    }
    let mut candidates: Vec<usize> = (0..dim)
        .filter(|&j| {
            let left = values[(j + dim - 1) % dim];
            let right = values[(j + 1) % dim];
            values[j] >= threshold && values[j] >= left && values[j] >= right
        })
        .collect();
    // Highest first; ties broken by position for determinism.
    candidates.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut accepted: Vec<usize> = Vec::new();
    for j in candidates {
        if accepted
            .iter()
            .all(|&a| circular_distance(dim, a, j) > min_separation)
        {
            accepted.push(j);
        }
    }
    let mut positions: Vec<usize> = accepted.into_iter().map(|j| j + 1).collect();
    positions.sort_unstable();
    positions
}

/// Separation-invariance score of a chain on the correlated scene.
///
/// Lower is more invariant: the score compares how much the final stage's
/// posterior varies with object separation (at a fixed pair centroid)
/// against how much it varies across centroids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceScore {
    pub score: f64,
    /// Set when the across-centroid variation is numerically zero (for
    /// example a uniform posterior everywhere); `score` is then infinite.
    pub degenerate: bool,
}

/// Score how invariant the final posterior is to object separation.
///
/// For every centroid `c` and separation `u` of the enumerated correlated
/// distribution, let `p(c, u)` be the final stage's posterior for the
/// corresponding scene. The score is
/// `mean_c mean_u ||p(c,u) - mean_u p(c,·)||^2 / mean_c ||mean_u p(c,·) - grand mean||^2`.
/// The centroid of a pair `(p1, p1 + u)` is `p1 + u/2` rounded half-down
/// and wrapped.
pub fn invariance_score(
    chain: &ChainParams,
    cfg: &SceneConfig,
) -> Result<InvarianceScore, SvqError> {
    if cfg.mode() != SceneMode::Correlated {
        return Err(SvqError::invalid(
            "invariance score is defined on the correlated scene",
        ));
    }
    score_posterior_map(cfg, |p1, sep| {
        let p2 = cfg.wrap_position(p1 + sep);
        let x = cfg.vector(p1, p2)?;
        let activations = chain.forward(&x)?;
        Ok(activations
            .last()
            .expect("chains have at least one stage")
            .posterior()
            .to_vec())
    })
}

/// Core of [`invariance_score`] over an arbitrary posterior map, so the
/// scoring arithmetic can be exercised with constructed posteriors.
fn score_posterior_map(
    cfg: &SceneConfig,
    mut posterior_for: impl FnMut(usize, usize) -> Result<Vec<f64>, SvqError>,
) -> Result<InvarianceScore, SvqError> {
    let dim = cfg.dim();
    let (sep_min, sep_max) = cfg.separation();
    let sep_count = sep_max - sep_min + 1;

    // For a fixed separation the centroid map p1 -> wrap(p1 + u/2) is a
    // bijection, so every (centroid, separation) cell holds one posterior.
    let mut cells: Vec<Vec<Vec<f64>>> = vec![Vec::with_capacity(sep_count); dim];
    for p1 in 1..=dim {
        for sep in sep_min..=sep_max {
            let centroid = cfg.wrap_position(p1 + sep / 2);
            cells[centroid - 1].push(posterior_for(p1, sep)?);
        }
    }

    let posterior_len = cells[0][0].len();
    let mean_of = |group: &[Vec<f64>]| -> Vec<f64> {
        let mut mean = vec![0.0; posterior_len];
        for p in group {
            for (m, v) in mean.iter_mut().zip(p) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= group.len() as f64;
        }
        mean
    };

    let centroid_means: Vec<Vec<f64>> = cells.iter().map(|g| mean_of(g)).collect();
    let grand_mean = mean_of(&centroid_means);

    let mut within = 0.0;
    for (group, center) in cells.iter().zip(&centroid_means) {
        let mut acc = 0.0;
        for p in group {
            acc += p
                .iter()
                .zip(center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
        within += acc / group.len() as f64;
    }
    within /= dim as f64;

    let mut across = 0.0;
    for center in &centroid_means {
        across += center
            .iter()
            .zip(&grand_mean)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
    }
    across /= dim as f64;

    if across < 1e-12 {
        return Ok(InvarianceScore {
            score: f64::INFINITY,
            degenerate: true,
        });
    }
    Ok(InvarianceScore {
        score: within / across,
        degenerate: false,
    })
}
