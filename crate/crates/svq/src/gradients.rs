//! Hand-coded derivatives of the weighted chain objective.
//!
//! For every stage the per-sample bound terms are differentiated with
//! respect to the stage's weights, biases, and reconstruction vectors, and
//! with respect to the stage *input*. The input derivative is what links
//! stages: a later stage's input is the previous stage's posterior vector,
//! so its input gradient is pushed backward through the posterior map by
//! reverse accumulation over the stage sequence, reusing one cached forward
//! pass. A central finite-difference oracle is provided to verify every
//! coordinate independently.
//!
//! All accumulation is in `f64` and walks dataset items in order, so
//! results are deterministic and bit-reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{
    dot, squared_distance, ChainObjective, ChainParams, StageActivation, StageParams,
    WeightedDataset,
};
use crate::error::SvqError;

/// Gradients for one stage, shaped exactly like the stage's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct StageGradients {
    /// Gradient w.r.t. the response weights, `codebook_size x input_dim`.
    pub weights: Vec<Vec<f64>>,
    /// Gradient w.r.t. the biases, length `codebook_size`.
    pub biases: Vec<f64>,
    /// Gradient w.r.t. the reconstruction vectors, `codebook_size x input_dim`.
    pub recons: Vec<Vec<f64>>,
}

impl StageGradients {
    pub fn zeros(stage: &StageParams) -> Self {
        let m = stage.codebook_size();
        let d = stage.input_dim();
        StageGradients {
            weights: vec![vec![0.0; d]; m],
            biases: vec![0.0; m],
            recons: vec![vec![0.0; d]; m],
        }
    }

    fn add_assign(&mut self, other: &StageGradients) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (x, y) in self.biases.iter_mut().zip(&other.biases) {
            *x += y;
        }
        for (a, b) in self.recons.iter_mut().zip(&other.recons) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.weights
            .iter()
            .chain(self.recons.iter())
            .all(|row| row.iter().all(|v| v.is_finite()))
            && self.biases.iter().all(|v| v.is_finite())
    }
}

/// Gradients for every stage of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet {
    pub per_stage: Vec<StageGradients>,
}

impl GradientSet {
    pub fn zeros(chain: &ChainParams) -> Self {
        GradientSet {
            per_stage: chain.stages().iter().map(StageGradients::zeros).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.per_stage.iter().all(StageGradients::is_finite)
    }
}

struct StageBackward {
    grads: StageGradients,
    input_grad: Vec<f64>,
}

/// Core backward step for one stage and one sample.
///
/// `weight` scales the stage's own bound terms (dataset probability times
/// stage weighting); `downstream`, when present, is the gradient of
/// everything later in the chain with respect to this stage's posterior
/// vector. Both flow through the same posterior derivative:
/// `dp(y) = p(y) [(1-q(y)) a(y) - sum_y' p(y')(1-q(y')) a(y')]` with
/// `a(y) = dw(y)·x + w(y)·dx + db(y)`.
fn stage_backward(
    stage: &StageParams,
    x: &[f64],
    activation: &StageActivation,
    weight: f64,
    downstream: Option<&[f64]>,
) -> StageBackward {
    let m = stage.codebook_size();
    let d = stage.input_dim();
    let n = stage.code_samples() as f64;
    let posterior = activation.posterior();
    let unnormalized = activation.unnormalized();
    let recons = stage.recons();

    // mean_residual is x - sum_y p(y) x'(y), accumulated the same way as
    // the objective so the trivial zero-residual case stays exactly zero.
    let mut mean_residual = vec![0.0; d];
    for (p, recon) in posterior.iter().zip(recons) {
        for ((mr, xj), r) in mean_residual.iter_mut().zip(x).zip(recon) {
            *mr += p * (xj - r);
        }
    }

    let d1_coeff = 2.0 / n * weight;
    let d2_coeff = 2.0 * (n - 1.0) / n * weight;

    // Sensitivity of the total to each posterior entry: the d1 term enters
    // through its p(y) factor, the d2 term through the posterior-mean
    // reconstruction, and later stages through `downstream`.
    let mut sensitivity = vec![0.0; m];
    for y in 0..m {
        sensitivity[y] = d1_coeff * squared_distance(x, &recons[y])
            - 2.0 * d2_coeff * dot(&recons[y], &mean_residual);
        if let Some(v) = downstream {
            sensitivity[y] += v[y];
        }
    }
    let mean_sensitivity: f64 = posterior.iter().zip(&sensitivity).map(|(p, c)| p * c).sum();

    let mut grads = StageGradients::zeros(stage);
    let mut input_grad = vec![0.0; d];

    for y in 0..m {
        // Gradient w.r.t. the logit w(y)·x + b(y).
        let logit_grad =
            posterior[y] * (1.0 - unnormalized[y]) * (sensitivity[y] - mean_sensitivity);
        grads.biases[y] = logit_grad;
        let w_row = &stage.weights()[y];
        for j in 0..d {
            grads.weights[y][j] = logit_grad * x[j];
            input_grad[j] += logit_grad * w_row[j];
        }

        // Reconstruction-vector gradient and the explicit dx pathways.
        let p = posterior[y];
        for j in 0..d {
            let residual = x[j] - recons[y][j];
            grads.recons[y][j] =
                -2.0 * d1_coeff * p * residual - 2.0 * d2_coeff * p * mean_residual[j];
            input_grad[j] += 2.0 * d1_coeff * p * residual;
        }
    }
    for j in 0..d {
        input_grad[j] += 2.0 * d2_coeff * mean_residual[j];
    }

    StageBackward { grads, input_grad }
}

/// Exact gradients of `weight * (d1 + d2)` for a single stage and sample,
/// with respect to the stage parameters and the stage input.
///
/// The returned input gradient carries both the `w(y)·dx` pathway through
/// the posterior and the explicit residual terms of `d1` and `d2`.
pub fn stage_local_gradients(
    stage: &StageParams,
    x: &[f64],
    weight: f64,
) -> Result<(StageGradients, Vec<f64>), SvqError> {
    let activation = stage.posterior(x)?;
    let out = stage_backward(stage, x, &activation, weight, None);
    Ok((out.grads, out.input_grad))
}

/// Objective value, per-stage bound terms, and full gradient set from one
/// pass over the dataset.
#[derive(Debug, Clone)]
pub struct ChainEvaluation {
    pub objective: ChainObjective,
    pub grads: GradientSet,
}

/// Evaluate the chain objective and its gradients together.
///
/// Every stage receives (a) the local gradient of its own weighted bound
/// terms and (b) contributions from all later stages, propagated backward
/// through the posterior-vector links. The objective value is accumulated
/// with the same arithmetic as [`ChainParams::objective`], so the two
/// totals agree exactly.
pub fn chain_evaluation(
    chain: &ChainParams,
    data: &WeightedDataset,
) -> Result<ChainEvaluation, SvqError> {
    if data.is_empty() {
        return Err(SvqError::EmptyDataset);
    }
    let stages = chain.stages();
    let num_stages = stages.len();
    let mut grads = GradientSet::zeros(chain);
    let mut d1 = vec![0.0; num_stages];
    let mut d2 = vec![0.0; num_stages];

    for item in data.items() {
        let activations = chain.forward(&item.vector)?;
        let mut downstream: Vec<f64> = Vec::new();
        for l in (0..num_stages).rev() {
            let input: &[f64] = if l == 0 {
                &item.vector
            } else {
                activations[l - 1].posterior()
            };
            let terms = stages[l].bound_terms_given(input, activations[l].posterior());
            d1[l] += item.prob * terms.d1;
            d2[l] += item.prob * terms.d2;

            let weight = item.prob * chain.stage_weights()[l];
            let carry = if l + 1 == num_stages {
                None
            } else {
                Some(downstream.as_slice())
            };
            let out = stage_backward(&stages[l], input, &activations[l], weight, carry);
            grads.per_stage[l].add_assign(&out.grads);
            downstream = out.input_grad;
        }
    }

    Ok(ChainEvaluation {
        objective: ChainObjective::from_accumulated(chain.stage_weights(), d1, d2),
        grads,
    })
}

/// Total objective and gradient set; see [`chain_evaluation`].
pub fn chain_gradients(
    chain: &ChainParams,
    data: &WeightedDataset,
) -> Result<(f64, GradientSet), SvqError> {
    let eval = chain_evaluation(chain, data)?;
    Ok((eval.objective.total, eval.grads))
}

/// Which parameter family a coordinate addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamFamily {
    Weight,
    Bias,
    Recon,
}

/// Address of one scalar parameter inside a chain.
///
/// `index` selects the code index (row); `component` selects the vector
/// component and must be 0 for biases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamCoordinate {
    pub stage: usize,
    pub family: ParamFamily,
    pub index: usize,
    pub component: usize,
}

impl std::fmt::Display for ParamCoordinate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.family {
            ParamFamily::Weight => write!(
                f,
                "stage {} weights[{}][{}]",
                self.stage, self.index, self.component
            ),
            ParamFamily::Bias => write!(f, "stage {} biases[{}]", self.stage, self.index),
            ParamFamily::Recon => write!(
                f,
                "stage {} recons[{}][{}]",
                self.stage, self.index, self.component
            ),
        }
    }
}

fn out_of_range(coordinate: ParamCoordinate) -> SvqError {
    SvqError::invalid(format!("parameter coordinate out of range: {coordinate}"))
}

fn check_coordinate_shape(coordinate: ParamCoordinate) -> Result<(), SvqError> {
    if coordinate.family == ParamFamily::Bias && coordinate.component != 0 {
        return Err(SvqError::invalid("bias coordinates must have component 0"));
    }
    Ok(())
}

fn coordinate_slot(
    chain: &mut ChainParams,
    coordinate: ParamCoordinate,
) -> Result<&mut f64, SvqError> {
    let stage = chain
        .stages_mut()
        .get_mut(coordinate.stage)
        .ok_or_else(|| out_of_range(coordinate))?;
    let slot = match coordinate.family {
        ParamFamily::Bias => stage.biases_mut().get_mut(coordinate.index),
        ParamFamily::Weight => stage
            .weights_mut()
            .get_mut(coordinate.index)
            .and_then(|row| row.get_mut(coordinate.component)),
        ParamFamily::Recon => stage
            .recons_mut()
            .get_mut(coordinate.index)
            .and_then(|row| row.get_mut(coordinate.component)),
    };
    slot.ok_or_else(|| out_of_range(coordinate))
}

/// Read the scalar a coordinate addresses.
pub fn param_value(chain: &ChainParams, coordinate: ParamCoordinate) -> Result<f64, SvqError> {
    check_coordinate_shape(coordinate)?;
    let stage = chain
        .stages()
        .get(coordinate.stage)
        .ok_or_else(|| out_of_range(coordinate))?;
    let value = match coordinate.family {
        ParamFamily::Bias => stage.biases().get(coordinate.index).copied(),
        ParamFamily::Weight => stage
            .weights()
            .get(coordinate.index)
            .and_then(|row| row.get(coordinate.component))
            .copied(),
        ParamFamily::Recon => stage
            .recons()
            .get(coordinate.index)
            .and_then(|row| row.get(coordinate.component))
            .copied(),
    };
    value.ok_or_else(|| out_of_range(coordinate))
}

/// Write the scalar a coordinate addresses.
pub fn set_param_value(
    chain: &mut ChainParams,
    coordinate: ParamCoordinate,
    value: f64,
) -> Result<(), SvqError> {
    check_coordinate_shape(coordinate)?;
    if !value.is_finite() {
        return Err(SvqError::invalid("parameter values must be finite"));
    }
    *coordinate_slot(chain, coordinate)? = value;
    Ok(())
}

/// Every parameter coordinate of a chain, in stage order and family order
/// (weights, biases, recons).
pub fn all_coordinates(chain: &ChainParams) -> Vec<ParamCoordinate> {
    let mut coords = Vec::new();
    for (stage_idx, stage) in chain.stages().iter().enumerate() {
        let m = stage.codebook_size();
        let d = stage.input_dim();
        for index in 0..m {
            for component in 0..d {
                coords.push(ParamCoordinate {
                    stage: stage_idx,
                    family: ParamFamily::Weight,
                    index,
                    component,
                });
            }
        }
        for index in 0..m {
            coords.push(ParamCoordinate {
                stage: stage_idx,
                family: ParamFamily::Bias,
                index,
                component: 0,
            });
        }
        for index in 0..m {
            for component in 0..d {
                coords.push(ParamCoordinate {
                    stage: stage_idx,
                    family: ParamFamily::Recon,
                    index,
                    component,
                });
            }
        }
    }
    coords
}

/// Gradient entry addressed by a coordinate, for comparison against the
/// finite-difference oracle.
pub fn gradient_entry(grads: &GradientSet, coordinate: ParamCoordinate) -> Option<f64> {
    let stage = grads.per_stage.get(coordinate.stage)?;
    match coordinate.family {
        ParamFamily::Weight => stage
            .weights
            .get(coordinate.index)?
            .get(coordinate.component)
            .copied(),
        ParamFamily::Bias => stage.biases.get(coordinate.index).copied(),
        ParamFamily::Recon => stage
            .recons
            .get(coordinate.index)?
            .get(coordinate.component)
            .copied(),
    }
}

/// Central finite difference of the chain objective along one coordinate:
/// `(F(theta + h) - F(theta - h)) / (2h)`. The chain is not mutated.
pub fn finite_difference_gradient(
    chain: &ChainParams,
    data: &WeightedDataset,
    coordinate: ParamCoordinate,
    step: f64,
) -> Result<f64, SvqError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(SvqError::invalid("finite-difference step must be positive"));
    }
    let base = param_value(chain, coordinate)?;
    let mut plus = chain.clone();
    set_param_value(&mut plus, coordinate, base + step)?;
    let mut minus = chain.clone();
    set_param_value(&mut minus, coordinate, base - step)?;
    let f_plus = plus.objective(data)?.total;
    let f_minus = minus.objective(data)?.total;
    Ok((f_plus - f_minus) / (2.0 * step))
}

/// Relative error used by the gradient checks:
/// `|analytic - numeric| / max(1, |analytic|)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(1.0)
}

/// Randomized chain plus dataset for gradient checking. `stage_dims` lists
/// `(codebook_size, code_samples)` per stage; stage 1 reads `input_dim`
/// inputs and every later stage reads the previous codebook's posterior.
/// Deterministic in `seed`.
pub fn random_check_instance(
    input_dim: usize,
    stage_dims: &[(usize, usize)],
    num_items: usize,
    seed: u64,
) -> Result<(ChainParams, WeightedDataset), SvqError> {
    if stage_dims.is_empty() || num_items == 0 {
        return Err(SvqError::invalid(
            "gradient check needs at least one stage and one dataset item",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stages = Vec::with_capacity(stage_dims.len());
    let mut dim = input_dim;
    for &(m, n) in stage_dims {
        let weights = (0..m)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let biases = (0..m).map(|_| rng.random_range(-0.5..0.5)).collect();
        let recons = (0..m)
            .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect();
        stages.push(StageParams::new(m, n, dim, weights, biases, recons)?);
        dim = m;
    }
    let stage_weights = (0..stage_dims.len())
        .map(|_| rng.random_range(0.5..1.5))
        .collect();
    let chain = ChainParams::new(stages, stage_weights)?;

    let raw: Vec<(Vec<f64>, f64)> = (0..num_items)
        .map(|_| {
            let v = (0..input_dim).map(|_| rng.random_range(0.0..1.0)).collect();
            let p = rng.random_range(0.1..1.1);
            (v, p)
        })
        .collect();
    let mass: f64 = raw.iter().map(|(_, p)| p).sum();
    let data = WeightedDataset::new(raw.into_iter().map(|(v, p)| (v, p / mass)).collect())?;
    Ok((chain, data))
}
