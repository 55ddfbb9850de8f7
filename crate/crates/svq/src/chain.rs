//! Stage and chain parameter types with posterior evaluation, per-stage
//! distortion bound terms, and the weighted chain objective.
//!
//! One stage maps an input vector to a categorical posterior over its code
//! indices through a sigmoidal response, and carries one reconstruction
//! vector per code index. The per-sample distortion of a stage splits into
//! two terms: `d1`, the posterior-weighted squared residual against each
//! reconstruction vector, and `d2`, the squared residual against the
//! posterior-mean reconstruction. Stages chain by feeding the full posterior
//! vector of one stage to the next stage as its input, and the chain
//! objective is a non-negative weighted sum of per-stage terms averaged
//! exactly over a finite weighted dataset.

use crate::error::SvqError;

/// Tolerance for "sums to one" checks on probability vectors.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

/// Sigmoid outputs are kept inside `[Q_FLOOR, 1 - Q_FLOOR]` so the
/// normalizer stays positive and the `q(1-q)` derivative factor stays
/// finite even for saturating arguments.
pub const Q_FLOOR: f64 = f64::EPSILON;

/// Numerically safe logistic sigmoid, clamped away from exact 0 and 1.
pub(crate) fn sigmoid(z: f64) -> f64 {
    let q = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    };
    q.clamp(Q_FLOOR, 1.0 - Q_FLOOR)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let r = x - y;
            r * r
        })
        .sum()
}

fn check_dim(context: &'static str, expected: usize, actual: usize) -> Result<(), SvqError> {
    if expected == actual {
        Ok(())
    } else {
        Err(SvqError::DimensionMismatch {
            context,
            expected,
            actual,
        })
    }
}

fn check_finite_matrix(name: &str, rows: &[Vec<f64>]) -> Result<(), SvqError> {
    for (i, row) in rows.iter().enumerate() {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(SvqError::invalid(format!(
                "{name} row {i} contains a non-finite value"
            )));
        }
    }
    Ok(())
}

/// Parameters of a single encoder stage: the sigmoidal response weights and
/// biases that shape the posterior, and one reconstruction vector per code
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct StageParams {
    codebook_size: usize,
    code_samples: usize,
    input_dim: usize,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    recons: Vec<Vec<f64>>,
}

impl StageParams {
    /// Build a stage, validating shapes and finiteness.
    ///
    /// `weights` and `recons` must have `codebook_size` rows of length
    /// `input_dim`; `biases` must have `codebook_size` entries.
    pub fn new(
        codebook_size: usize,
        code_samples: usize,
        input_dim: usize,
        weights: Vec<Vec<f64>>,
        biases: Vec<f64>,
        recons: Vec<Vec<f64>>,
    ) -> Result<Self, SvqError> {
        if codebook_size == 0 || code_samples == 0 || input_dim == 0 {
            return Err(SvqError::invalid(
                "codebook_size, code_samples and input_dim must all be at least 1",
            ));
        }
        check_dim("weights row count", codebook_size, weights.len())?;
        check_dim("recons row count", codebook_size, recons.len())?;
        check_dim("biases length", codebook_size, biases.len())?;
        for row in weights.iter().chain(recons.iter()) {
            check_dim("parameter row length", input_dim, row.len())?;
        }
        check_finite_matrix("weights", &weights)?;
        check_finite_matrix("recons", &recons)?;
        if biases.iter().any(|v| !v.is_finite()) {
            return Err(SvqError::invalid("biases contain a non-finite value"));
        }
        Ok(StageParams {
            codebook_size,
            code_samples,
            input_dim,
            weights,
            biases,
            recons,
        })
    }

    /// Number of code indices (M).
    pub fn codebook_size(&self) -> usize {
        self.codebook_size
    }

    /// Number of code indices sampled per input (n).
    pub fn code_samples(&self) -> usize {
        self.code_samples
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn recons(&self) -> &[Vec<f64>] {
        &self.recons
    }

    // Crate-internal mutable access for coordinate-addressed updates; the
    // callers preserve shapes and validate finiteness.
    pub(crate) fn weights_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.weights
    }

    pub(crate) fn biases_mut(&mut self) -> &mut [f64] {
        &mut self.biases
    }

    pub(crate) fn recons_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.recons
    }

    /// Unnormalized response `q(y|x) = sigmoid(w(y)·x + b(y))` for every
    /// code index. Every entry is strictly inside (0, 1).
    pub fn unnormalized_response(&self, x: &[f64]) -> Result<Vec<f64>, SvqError> {
        check_dim("unnormalized_response input", self.input_dim, x.len())?;
        Ok(self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| sigmoid(dot(w, x) + b))
            .collect())
    }

    /// Posterior `p(y|x) = q(y|x) / sum_y' q(y'|x)` together with the
    /// unnormalized responses it came from.
    pub fn posterior(&self, x: &[f64]) -> Result<StageActivation, SvqError> {
        let unnormalized = self.unnormalized_response(x)?;
        let norm: f64 = unnormalized.iter().sum();
        let posterior = unnormalized.iter().map(|q| q / norm).collect();
        Ok(StageActivation {
            posterior,
            unnormalized,
        })
    }

    /// Per-sample bound terms for one input vector.
    ///
    /// `d1 = (2/n) * sum_y p(y|x) ||x - x'(y)||^2` and
    /// `d2 = (2(n-1)/n) * ||x - sum_y p(y|x) x'(y)||^2`. The dataset
    /// expectation over these terms is taken by [`ChainParams::objective`].
    pub fn bound_terms(&self, x: &[f64]) -> Result<BoundTerms, SvqError> {
        let activation = self.posterior(x)?;
        Ok(self.bound_terms_given(x, activation.posterior()))
    }

    /// Bound terms for an already-computed posterior. Shared by the
    /// objective and the gradient pass so both see identical arithmetic.
    pub(crate) fn bound_terms_given(&self, x: &[f64], posterior: &[f64]) -> BoundTerms {
        let n = self.code_samples as f64;
        let mut weighted_sq = 0.0;
        // The d2 residual x - sum_y p(y) x'(y) is accumulated as
        // sum_y p(y) (x - x'(y)) so it is exactly zero when every
        // reconstruction row equals the input.
        let mut mean_residual = vec![0.0; self.input_dim];
        for (p, recon) in posterior.iter().zip(&self.recons) {
            weighted_sq += p * squared_distance(x, recon);
            for ((m, xj), r) in mean_residual.iter_mut().zip(x).zip(recon) {
                *m += p * (xj - r);
            }
        }
        let mean_residual_sq: f64 = mean_residual.iter().map(|v| v * v).sum();
        BoundTerms {
            d1: 2.0 / n * weighted_sq,
            d2: 2.0 * (n - 1.0) / n * mean_residual_sq,
        }
    }
}

/// The two per-sample distortion terms of one stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTerms {
    pub d1: f64,
    pub d2: f64,
}

impl BoundTerms {
    pub fn total(&self) -> f64 {
        self.d1 + self.d2
    }
}

/// One stage's response to one input: the posterior over code indices and
/// the unnormalized responses behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct StageActivation {
    posterior: Vec<f64>,
    unnormalized: Vec<f64>,
}

impl StageActivation {
    /// Build an activation from raw vectors, validating the invariants:
    /// the posterior must be non-negative, bounded by one, and sum to one
    /// within [`PROBABILITY_SUM_TOLERANCE`]; every unnormalized entry must
    /// lie strictly inside (0, 1).
    pub fn new(posterior: Vec<f64>, unnormalized: Vec<f64>) -> Result<Self, SvqError> {
        check_dim(
            "activation unnormalized length",
            posterior.len(),
            unnormalized.len(),
        )?;
        if posterior.is_empty() {
            return Err(SvqError::invalid("activation must have at least one entry"));
        }
        if posterior.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(SvqError::invalid("posterior entries must lie in [0, 1]"));
        }
        let sum: f64 = posterior.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(SvqError::invalid(format!("posterior sums to {sum}, not 1")));
        }
        if unnormalized.iter().any(|q| !(*q > 0.0 && *q < 1.0)) {
            return Err(SvqError::invalid(
                "unnormalized responses must lie strictly in (0, 1)",
            ));
        }
        Ok(StageActivation {
            posterior,
            unnormalized,
        })
    }

    pub fn posterior(&self) -> &[f64] {
        &self.posterior
    }

    pub fn unnormalized(&self) -> &[f64] {
        &self.unnormalized
    }
}

/// An ordered chain of stages plus the non-negative weighting each stage's
/// bound terms carry in the overall objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    stages: Vec<StageParams>,
    stage_weights: Vec<f64>,
}

impl ChainParams {
    /// Build a chain, validating the linking rule: every stage after the
    /// first must accept the previous stage's posterior vector as input.
    pub fn new(stages: Vec<StageParams>, stage_weights: Vec<f64>) -> Result<Self, SvqError> {
        if stages.is_empty() {
            return Err(SvqError::invalid("chain must have at least one stage"));
        }
        for l in 1..stages.len() {
            let expected = stages[l - 1].codebook_size();
            let actual = stages[l].input_dim();
            if expected != actual {
                return Err(SvqError::InvalidLinking {
                    stage: l,
                    expected,
                    actual,
                });
            }
        }
        let mut chain = ChainParams {
            stages,
            stage_weights: Vec::new(),
        };
        chain.set_stage_weights(stage_weights)?;
        Ok(chain)
    }

    pub fn stages(&self) -> &[StageParams] {
        &self.stages
    }

    pub fn stage_weights(&self) -> &[f64] {
        &self.stage_weights
    }

    pub(crate) fn stages_mut(&mut self) -> &mut [StageParams] {
        &mut self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Replace the per-stage objective weightings (training schedules vary
    /// them between phases).
    pub fn set_stage_weights(&mut self, stage_weights: Vec<f64>) -> Result<(), SvqError> {
        check_dim(
            "stage_weights length",
            self.stages.len(),
            stage_weights.len(),
        )?;
        if stage_weights.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(SvqError::invalid(
                "stage weights must be finite and non-negative",
            ));
        }
        self.stage_weights = stage_weights;
        Ok(())
    }

    pub(crate) fn replace_stages(&mut self, stages: Vec<StageParams>) -> Result<(), SvqError> {
        let weights = self.stage_weights.clone();
        *self = ChainParams::new(stages, weights)?;
        Ok(())
    }

    /// Run the chain forward: stage 1 sees `x`, and every later stage sees
    /// the full posterior vector of the stage before it. The raw input is
    /// deliberately not renormalized to a probability vector.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<StageActivation>, SvqError> {
        check_dim("chain input", self.stages[0].input_dim(), x.len())?;
        let mut activations = Vec::with_capacity(self.stages.len());
        for (l, stage) in self.stages.iter().enumerate() {
            let activation = if l == 0 {
                stage.posterior(x)?
            } else {
                let prev: &StageActivation = &activations[l - 1];
                stage.posterior(prev.posterior())?
            };
            activations.push(activation);
        }
        Ok(activations)
    }

    /// Exact dataset expectation of every stage's bound terms plus the
    /// weighted total. Items are accumulated in dataset order so repeated
    /// evaluations are bit-identical.
    pub fn objective(&self, data: &WeightedDataset) -> Result<ChainObjective, SvqError> {
        if data.is_empty() {
            return Err(SvqError::EmptyDataset);
        }
        check_dim("dataset vectors", self.stages[0].input_dim(), data.dim())?;
        let mut d1 = vec![0.0; self.stages.len()];
        let mut d2 = vec![0.0; self.stages.len()];
        for item in data.items() {
            let activations = self.forward(&item.vector)?;
            for (l, stage) in self.stages.iter().enumerate() {
                let input = if l == 0 {
                    item.vector.as_slice()
                } else {
                    activations[l - 1].posterior()
                };
                let terms = stage.bound_terms_given(input, activations[l].posterior());
                d1[l] += item.prob * terms.d1;
                d2[l] += item.prob * terms.d2;
            }
        }
        Ok(ChainObjective::from_accumulated(
            &self.stage_weights,
            d1,
            d2,
        ))
    }
}

/// Per-stage expectations of the bound terms and their weighted total.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainObjective {
    pub total: f64,
    pub per_stage: Vec<BoundTerms>,
}

impl ChainObjective {
    /// Final reduction shared with the gradient pass: totals computed here
    /// and there agree bit-for-bit.
    pub(crate) fn from_accumulated(stage_weights: &[f64], d1: Vec<f64>, d2: Vec<f64>) -> Self {
        let per_stage: Vec<BoundTerms> = d1
            .into_iter()
            .zip(d2)
            .map(|(d1, d2)| BoundTerms { d1, d2 })
            .collect();
        let mut total = 0.0;
        for (s, terms) in stage_weights.iter().zip(&per_stage) {
            total += s * terms.total();
        }
        ChainObjective { total, per_stage }
    }
}

/// One dataset item: an input vector and the exact probability mass the
/// source distribution puts on it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedItem {
    pub vector: Vec<f64>,
    pub prob: f64,
}

/// A finite distribution over input vectors, represented exactly so that
/// expectations are plain weighted sums with no sampling noise.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDataset {
    items: Vec<WeightedItem>,
    dim: usize,
}

impl WeightedDataset {
    /// Build a dataset, validating that all vectors share one finite
    /// dimensionality and the probabilities are non-negative and sum to one
    /// within [`PROBABILITY_SUM_TOLERANCE`].
    pub fn new(items: Vec<(Vec<f64>, f64)>) -> Result<Self, SvqError> {
        let Some(dim) = items.first().map(|(v, _)| v.len()) else {
            return Err(SvqError::EmptyDataset);
        };
        if dim == 0 {
            return Err(SvqError::invalid("dataset vectors must be non-empty"));
        }
        let mut sum = 0.0;
        for (vector, prob) in &items {
            check_dim("dataset vector length", dim, vector.len())?;
            if vector.iter().any(|v| !v.is_finite()) {
                return Err(SvqError::invalid(
                    "dataset vector contains a non-finite value",
                ));
            }
            if !(prob.is_finite() && *prob >= 0.0) {
                return Err(SvqError::invalid(
                    "item probabilities must be finite and non-negative",
                ));
            }
            sum += prob;
        }
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(SvqError::invalid(format!(
                "item probabilities sum to {sum}, not 1"
            )));
        }
        Ok(WeightedDataset {
            items: items
                .into_iter()
                .map(|(vector, prob)| WeightedItem { vector, prob })
                .collect(),
            dim,
        })
    }

    pub fn items(&self) -> &[WeightedItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Dimensionality shared by every vector.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Probability-weighted mean vector.
    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for item in &self.items {
            for (m, v) in mean.iter_mut().zip(&item.vector) {
                *m += item.prob * v;
            }
        }
        mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn uniform_stage(m: usize, n: usize, dim: usize) -> StageParams {
        StageParams::new(
            m,
            n,
            dim,
            vec![vec![0.0; dim]; m],
            vec![0.0; m],
            vec![vec![0.0; dim]; m],
        )
        .unwrap()
    }

    #[test]
    fn sigmoid_at_zero_argument_is_half() {
        let stage = uniform_stage(4, 2, 3);
        let q = stage.unnormalized_response(&[0.5, -1.0, 2.0]).unwrap();
        assert_eq!(q, vec![0.5; 4]);
    }

    #[test]
    fn unnormalized_response_matches_direct_evaluation() {
        // w = (1), b = 0, x = ln 3 gives q = 1 / (1 + 1/3) = 0.75.
        let stage = StageParams::new(1, 1, 1, vec![vec![1.0]], vec![0.0], vec![vec![0.0]]).unwrap();
        let q = stage.unnormalized_response(&[3.0_f64.ln()]).unwrap();
        assert!((q[0] - 0.75).abs() < 1e-15, "q = {}", q[0]);
    }

    #[test]
    fn saturated_response_stays_positive_and_finite() {
        let stage = StageParams::new(1, 1, 1, vec![vec![1.0]], vec![0.0], vec![vec![0.0]]).unwrap();
        for x in [-745.0, -1e4, -1e8, 1e8] {
            let q = stage.unnormalized_response(&[x]).unwrap()[0];
            assert!(q.is_finite());
            assert!(q > 0.0 && q < 1.0, "q = {q} at x = {x}");
        }
    }

    #[test]
    fn posterior_is_uniform_for_zero_parameters() {
        let stage = uniform_stage(4, 2, 3);
        let act = stage.posterior(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(act.posterior(), &[0.25; 4]);
    }

    #[test]
    fn posterior_symmetric_arguments() {
        let stage = StageParams::new(
            2,
            1,
            1,
            vec![vec![1.0], vec![-1.0]],
            vec![0.0; 2],
            vec![vec![0.0]; 2],
        )
        .unwrap();
        let act = stage.posterior(&[0.0]).unwrap();
        assert_eq!(act.posterior(), &[0.5, 0.5]);
    }

    #[test]
    fn posterior_normalizes_unequal_responses() {
        // q = (0.75, 0.5) at x = ln 3, so the posterior is (0.6, 0.4).
        let stage = StageParams::new(
            2,
            1,
            1,
            vec![vec![1.0], vec![0.0]],
            vec![0.0; 2],
            vec![vec![0.0]; 2],
        )
        .unwrap();
        let act = stage.posterior(&[3.0_f64.ln()]).unwrap();
        assert!((act.posterior()[0] - 0.6).abs() < 1e-15);
        assert!((act.posterior()[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn posterior_rejects_dimension_mismatch() {
        let stage = uniform_stage(2, 1, 3);
        assert!(matches!(
            stage.posterior(&[1.0, 2.0]),
            Err(SvqError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bound_terms_vanish_when_recons_equal_input() {
        let x = [0.3, -0.7, 1.1];
        let stage = StageParams::new(
            2,
            3,
            3,
            vec![vec![0.1, 0.2, 0.3], vec![-0.2, 0.0, 0.4]],
            vec![0.5, -0.5],
            vec![x.to_vec(), x.to_vec()],
        )
        .unwrap();
        let terms = stage.bound_terms(&x).unwrap();
        assert_eq!(terms.d1, 0.0);
        assert_eq!(terms.d2, 0.0);
    }

    #[test]
    fn d2_is_exactly_zero_for_single_sample() {
        let stage = StageParams::new(
            2,
            1,
            1,
            vec![vec![0.7], vec![-0.3]],
            vec![0.1, 0.2],
            vec![vec![4.0], vec![-2.0]],
        )
        .unwrap();
        let terms = stage.bound_terms(&[1.0]).unwrap();
        assert_eq!(terms.d2, 0.0);
        assert!(terms.d1 > 0.0);
    }

    #[test]
    fn bound_terms_match_hand_computation() {
        // Zero weights force a (0.5, 0.5) posterior; recons 0 and 2 around
        // x = 1 give d1 = (2/2)(0.5 + 0.5) = 1 and a perfectly balanced
        // mean reconstruction, so d2 = 0.
        let stage = StageParams::new(
            2,
            2,
            1,
            vec![vec![0.0]; 2],
            vec![0.0; 2],
            vec![vec![0.0], vec![2.0]],
        )
        .unwrap();
        let terms = stage.bound_terms(&[1.0]).unwrap();
        assert!((terms.d1 - 1.0).abs() < 1e-15);
        assert_eq!(terms.d2, 0.0);
    }

    #[test]
    fn single_index_stage_degenerates_to_plain_residual() {
        let recon = vec![0.25, -0.5];
        let stage = StageParams::new(
            1,
            3,
            2,
            vec![vec![0.3, -0.9]],
            vec![0.2],
            vec![recon.clone()],
        )
        .unwrap();
        let x = [1.0, 2.0];
        let act = stage.posterior(&x).unwrap();
        assert_eq!(act.posterior(), &[1.0]);
        let terms = stage.bound_terms(&x).unwrap();
        let r2 = squared_distance(&x, &recon);
        assert!((terms.d1 - 2.0 / 3.0 * r2).abs() < 1e-15);
        assert!((terms.d2 - 2.0 * 2.0 / 3.0 * r2).abs() < 1e-15);
    }

    fn two_stage_chain() -> ChainParams {
        let stage1 = StageParams::new(
            16,
            20,
            3,
            vec![vec![0.01; 3]; 16],
            vec![0.0; 16],
            vec![vec![0.5; 3]; 16],
        )
        .unwrap();
        let stage2 = uniform_stage(4, 3, 16);
        ChainParams::new(vec![stage1, stage2], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn chain_rejects_bad_linking() {
        let stage1 = uniform_stage(4, 2, 3);
        let stage2 = uniform_stage(2, 1, 5);
        assert!(matches!(
            ChainParams::new(vec![stage1, stage2], vec![1.0, 1.0]),
            Err(SvqError::InvalidLinking { stage: 1, .. })
        ));
    }

    #[test]
    fn forward_single_stage_equals_posterior() {
        let stage = uniform_stage(4, 2, 3);
        let chain = ChainParams::new(vec![stage.clone()], vec![1.0]).unwrap();
        let x = [0.2, -0.4, 0.9];
        let acts = chain.forward(&x).unwrap();
        assert_eq!(acts.len(), 1);
        assert_eq!(acts[0], stage.posterior(&x).unwrap());
    }

    #[test]
    fn forward_feeds_posterior_vector_to_next_stage() {
        let chain = two_stage_chain();
        let acts = chain.forward(&[1.0, 0.0, 2.0]).unwrap();
        assert_eq!(acts[0].posterior().len(), 16);
        let sum: f64 = acts[0].posterior().iter().sum();
        assert!((sum - 1.0).abs() <= PROBABILITY_SUM_TOLERANCE);
        // Stage 2 has zero weights and biases, so its posterior is uniform
        // regardless of what stage 1 produced.
        assert_eq!(acts[1].posterior(), &[0.25; 4]);
    }

    #[test]
    fn objective_single_item_is_weighted_bound_total() {
        let stage = StageParams::new(
            2,
            2,
            1,
            vec![vec![0.4], vec![-0.1]],
            vec![0.0; 2],
            vec![vec![0.0], vec![2.0]],
        )
        .unwrap();
        let chain = ChainParams::new(vec![stage.clone()], vec![3.0]).unwrap();
        let data = WeightedDataset::new(vec![(vec![1.0], 1.0)]).unwrap();
        let obj = chain.objective(&data).unwrap();
        let terms = stage.bound_terms(&[1.0]).unwrap();
        assert_eq!(obj.total, 3.0 * terms.total());
        assert_eq!(obj.per_stage[0], terms);
    }

    #[test]
    fn objective_zero_weights_still_reports_per_stage_terms() {
        let chain = ChainParams::new(
            vec![StageParams::new(
                2,
                2,
                1,
                vec![vec![0.0]; 2],
                vec![0.0; 2],
                vec![vec![0.0], vec![2.0]],
            )
            .unwrap()],
            vec![0.0],
        )
        .unwrap();
        let data = WeightedDataset::new(vec![(vec![1.0], 1.0)]).unwrap();
        let obj = chain.objective(&data).unwrap();
        assert_eq!(obj.total, 0.0);
        assert!(obj.per_stage[0].d1 > 0.0);
    }

    #[test]
    fn objective_of_equiprobable_pair_averages_single_item_totals() {
        let chain = two_stage_chain();
        let a = vec![0.1, 0.9, -0.3];
        let b = vec![1.4, -0.2, 0.3];
        let both = WeightedDataset::new(vec![(a.clone(), 0.5), (b.clone(), 0.5)]).unwrap();
        let only_a = WeightedDataset::new(vec![(a, 1.0)]).unwrap();
        let only_b = WeightedDataset::new(vec![(b, 1.0)]).unwrap();
        let total = chain.objective(&both).unwrap().total;
        let mean = 0.5 * chain.objective(&only_a).unwrap().total
            + 0.5 * chain.objective(&only_b).unwrap().total;
        assert!((total - mean).abs() <= 1e-12 * mean.abs().max(1.0));
    }

    #[test]
    fn objective_rejects_empty_dataset() {
        assert!(matches!(
            WeightedDataset::new(vec![]),
            Err(SvqError::EmptyDataset)
        ));
    }

    #[test]
    fn dataset_rejects_bad_probability_sum() {
        assert!(WeightedDataset::new(vec![(vec![1.0], 0.5), (vec![2.0], 0.6)]).is_err());
    }

    #[test]
    fn activation_validation() {
        assert!(StageActivation::new(vec![1.0, 0.0], vec![0.9, 0.1]).is_ok());
        assert!(StageActivation::new(vec![0.7, 0.7], vec![0.5, 0.5]).is_err());
        assert!(StageActivation::new(vec![0.5, 0.5], vec![1.0, 0.5]).is_err());
    }
}
