//! Full-batch gradient-descent training with self-normalized step sizes.
//!
//! One training step evaluates the exact chain gradients over the whole
//! weighted dataset and moves every parameter family by at most `epsilon`
//! per normalized unit: biases by at most `epsilon`, weight and recon rows
//! by at most `epsilon` per dimension (root-mean-square). The fixed step
//! size means parameters never settle exactly at a stationary point; they
//! jitter in its neighbourhood, so schedules shrink `epsilon` over phases
//! rather than waiting for convergence.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{BoundTerms, ChainParams, StageParams, WeightedDataset};
use crate::error::SvqError;
use crate::gradients::{chain_evaluation, StageGradients};

/// Update normalizers below this are treated as zero and the corresponding
/// parameter family is left unchanged for the step.
pub const NORMALIZER_GUARD: f64 = 1e-12;

/// Scale of the uniform initialization noise on weights and recon rows.
pub const INIT_NOISE: f64 = 0.01;

/// How the bias update normalizer is computed.
///
/// `GradientMax` divides by the largest bias-gradient magnitude, which
/// caps the bias step at exactly `epsilon` (the same contract the weight
/// and recon rows get). `CurrentBiasMax` divides by the largest current
/// bias magnitude instead; with the zero bias initialization used here the
/// guard then keeps biases frozen and the response is shaped by the
/// weights alone. The bundled recipes use `CurrentBiasMax` because the
/// self-organisation outcomes are far more reproducible under it (see the
/// acceptance suite).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BiasNormalizer {
    #[default]
    GradientMax,
    CurrentBiasMax,
}

/// Model-order choices for one stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageSpec {
    pub codebook_size: usize,
    pub code_samples: usize,
    pub input_dim: usize,
}

/// Build a chain ready for training: response weights are small uniform
/// noise, biases start at zero, and every reconstruction row starts at the
/// mean of that stage's input (the dataset mean for stage 1, the uniform
/// posterior for later stages) plus the same small noise. Deterministic in
/// `seed`.
pub fn initialize(
    specs: &[StageSpec],
    data: &WeightedDataset,
    seed: u64,
) -> Result<ChainParams, SvqError> {
    initialize_with_noise(specs, data, seed, INIT_NOISE)
}

/// [`initialize`] with an explicit noise scale; zero noise gives exact
/// input-mean recon rows, which some tests rely on.
pub fn initialize_with_noise(
    specs: &[StageSpec],
    data: &WeightedDataset,
    seed: u64,
    noise: f64,
) -> Result<ChainParams, SvqError> {
    if specs.is_empty() {
        return Err(SvqError::invalid("chain spec must list at least one stage"));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(SvqError::invalid(
            "initialization noise must be non-negative",
        ));
    }
    if specs[0].input_dim != data.dim() {
        return Err(SvqError::InvalidLinking {
            stage: 0,
            expected: data.dim(),
            actual: specs[0].input_dim,
        });
    }
    for l in 1..specs.len() {
        if specs[l].input_dim != specs[l - 1].codebook_size {
            return Err(SvqError::InvalidLinking {
                stage: l,
                expected: specs[l - 1].codebook_size,
                actual: specs[l].input_dim,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = |rng: &mut ChaCha8Rng| noise * rng.random_range(-1.0..1.0);

    let mut stages = Vec::with_capacity(specs.len());
    for (l, spec) in specs.iter().enumerate() {
        let m = spec.codebook_size;
        let d = spec.input_dim;
        let input_mean = if l == 0 {
            data.mean()
        } else {
            vec![1.0 / specs[l - 1].codebook_size as f64; d]
        };
        let weights = (0..m)
            .map(|_| (0..d).map(|_| jitter(&mut rng)).collect())
            .collect();
        let biases = vec![0.0; m];
        let recons = (0..m)
            .map(|_| input_mean.iter().map(|v| v + jitter(&mut rng)).collect())
            .collect();
        stages.push(StageParams::new(
            m,
            spec.code_samples,
            d,
            weights,
            biases,
            recons,
        )?);
    }
    ChainParams::new(stages, vec![1.0; specs.len()])
}

fn row_rms(row: &[f64], dim: f64) -> f64 {
    (row.iter().map(|v| v * v).sum::<f64>() / dim).sqrt()
}

/// One normalized descent update for a single stage:
/// `p <- p - epsilon * g / g0` per family, where `g0` is the largest
/// per-index gradient magnitude (root-mean-square over components for the
/// vector families). Families whose normalizer falls below
/// [`NORMALIZER_GUARD`] are left unchanged.
pub fn apply_updates(
    stage: &StageParams,
    grads: &StageGradients,
    epsilon: f64,
    bias_normalizer: BiasNormalizer,
) -> Result<StageParams, SvqError> {
    let m = stage.codebook_size();
    let d = stage.input_dim();
    if grads.weights.len() != m || grads.biases.len() != m || grads.recons.len() != m {
        return Err(SvqError::DimensionMismatch {
            context: "gradient row count",
            expected: m,
            actual: grads.weights.len(),
        });
    }
    if grads
        .weights
        .iter()
        .chain(grads.recons.iter())
        .any(|row| row.len() != d)
    {
        return Err(SvqError::DimensionMismatch {
            context: "gradient row length",
            expected: d,
            actual: 0,
        });
    }
    if !(epsilon.is_finite()) {
        return Err(SvqError::invalid("epsilon must be finite"));
    }

    let dim = d as f64;
    let w_norm = grads
        .weights
        .iter()
        .map(|row| row_rms(row, dim))
        .fold(0.0, f64::max);
    let x_norm = grads
        .recons
        .iter()
        .map(|row| row_rms(row, dim))
        .fold(0.0, f64::max);
    let b_norm = match bias_normalizer {
        BiasNormalizer::GradientMax => grads.biases.iter().fold(0.0, |a: f64, g| a.max(g.abs())),
        BiasNormalizer::CurrentBiasMax => {
            stage.biases().iter().fold(0.0, |a: f64, b| a.max(b.abs()))
        }
    };

    let update_rows = |rows: &[Vec<f64>], g_rows: &[Vec<f64>], norm: f64| -> Vec<Vec<f64>> {
        if norm < NORMALIZER_GUARD {
            return rows.to_vec();
        }
        rows.iter()
            .zip(g_rows)
            .map(|(row, g_row)| {
                row.iter()
                    .zip(g_row)
                    .map(|(v, g)| v - epsilon * g / norm)
                    .collect()
            })
            .collect()
    };

    let weights = update_rows(stage.weights(), &grads.weights, w_norm);
    let recons = update_rows(stage.recons(), &grads.recons, x_norm);
    let biases = if b_norm < NORMALIZER_GUARD {
        stage.biases().to_vec()
    } else {
        stage
            .biases()
            .iter()
            .zip(&grads.biases)
            .map(|(b, g)| b - epsilon * g / b_norm)
            .collect()
    };

    StageParams::new(m, stage.code_samples(), d, weights, biases, recons)
}

/// One phase of a schedule: a fixed step size, a step count, and the
/// per-stage objective weightings in force during the phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    pub epsilon: f64,
    pub steps: usize,
    pub stage_weights: Vec<f64>,
}

/// An ordered list of phases.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSchedule {
    phases: Vec<Phase>,
}

impl TrainingSchedule {
    pub fn new(phases: Vec<Phase>) -> Result<Self, SvqError> {
        if phases.is_empty() {
            return Err(SvqError::invalid("schedule must have at least one phase"));
        }
        for phase in &phases {
            if !(phase.epsilon.is_finite() && phase.epsilon > 0.0) {
                return Err(SvqError::invalid("phase epsilon must be positive"));
            }
            if phase.steps == 0 {
                return Err(SvqError::invalid("phase step count must be positive"));
            }
            if phase
                .stage_weights
                .iter()
                .any(|s| !(s.is_finite() && *s >= 0.0))
            {
                return Err(SvqError::invalid(
                    "phase stage weights must be finite and non-negative",
                ));
            }
        }
        Ok(TrainingSchedule { phases })
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn total_steps(&self) -> usize {
        self.phases.iter().map(|p| p.steps).sum()
    }

    /// Number of stages the phase weightings address (taken from the first
    /// phase; [`run_schedule`] validates the rest against the chain).
    pub fn stage_count(&self) -> usize {
        self.phases[0].stage_weights.len()
    }
}

/// Objective record for one training step, measured at the parameters the
/// step started from.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub step: usize,
    pub per_stage: Vec<BoundTerms>,
    pub total: f64,
}

/// A chain in training: the evolving parameters, the step counter, an rng
/// stream reserved for stochastic extensions of the loop, and the
/// objective history.
#[derive(Debug, Clone)]
pub struct TrainState {
    chain: ChainParams,
    step_counter: usize,
    rng: ChaCha8Rng,
    history: Vec<HistoryEntry>,
    bias_normalizer: BiasNormalizer,
}

impl TrainState {
    pub fn new(chain: ChainParams, seed: u64) -> Self {
        TrainState {
            chain,
            step_counter: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            history: Vec::new(),
            bias_normalizer: BiasNormalizer::default(),
        }
    }

    pub fn with_bias_normalizer(mut self, bias_normalizer: BiasNormalizer) -> Self {
        self.bias_normalizer = bias_normalizer;
        self
    }

    pub fn chain(&self) -> &ChainParams {
        &self.chain
    }

    pub fn into_chain(self) -> ChainParams {
        self.chain
    }

    pub fn step_counter(&self) -> usize {
        self.step_counter
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// One full-batch training step: evaluate the exact gradients at the
/// current parameters under the given stage weightings, then apply the
/// normalized update to every stage. Appends the pre-update objective to
/// the history.
pub fn train_step(
    state: &mut TrainState,
    data: &WeightedDataset,
    epsilon: f64,
    stage_weights: &[f64],
) -> Result<(), SvqError> {
    state.chain.set_stage_weights(stage_weights.to_vec())?;
    let eval = chain_evaluation(&state.chain, data)?;
    let new_stages = state
        .chain
        .stages()
        .iter()
        .zip(&eval.grads.per_stage)
        .map(|(stage, grads)| apply_updates(stage, grads, epsilon, state.bias_normalizer))
        .collect::<Result<Vec<_>, _>>()?;
    state.chain.replace_stages(new_stages)?;
    state.step_counter += 1;
    state.history.push(HistoryEntry {
        step: state.step_counter,
        per_stage: eval.objective.per_stage,
        total: eval.objective.total,
    });
    Ok(())
}

/// Receives periodic training snapshots: the step number, one stage's
/// reconstruction rows, and the step's history entry.
pub trait SnapshotSink {
    fn record(
        &mut self,
        step: usize,
        stage: usize,
        recons: &[Vec<f64>],
        entry: &HistoryEntry,
    ) -> std::io::Result<()>;
}

/// Discards every snapshot.
pub struct NullSink;

impl SnapshotSink for NullSink {
    fn record(
        &mut self,
        _step: usize,
        _stage: usize,
        _recons: &[Vec<f64>],
        _entry: &HistoryEntry,
    ) -> std::io::Result<()> {
        Ok(())
    }
}

/// Run a whole schedule, phase by phase, emitting a snapshot of every
/// stage's recon rows to the sink whenever the step counter is a multiple
/// of `snapshot_every`. A sink failure aborts training with the error.
pub fn run_schedule(
    state: &mut TrainState,
    data: &WeightedDataset,
    schedule: &TrainingSchedule,
    snapshot_every: usize,
    sink: &mut dyn SnapshotSink,
) -> Result<(), SvqError> {
    if snapshot_every == 0 {
        return Err(SvqError::invalid("snapshot_every must be positive"));
    }
    for phase in schedule.phases() {
        for _ in 0..phase.steps {
            train_step(state, data, phase.epsilon, &phase.stage_weights)?;
            if state.step_counter.is_multiple_of(snapshot_every) {
                let entry = state
                    .history
                    .last()
                    .expect("train_step always appends an entry")
                    .clone();
                for (stage_idx, stage) in state.chain.stages().iter().enumerate() {
                    sink.record(state.step_counter, stage_idx, stage.recons(), &entry)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradients::random_check_instance;
    use crate::scene::{SceneConfig, SceneMode};

    fn two_stage_specs() -> Vec<StageSpec> {
        vec![
            StageSpec {
                codebook_size: 16,
                code_samples: 20,
                input_dim: 24,
            },
            StageSpec {
                codebook_size: 8,
                code_samples: 3,
                input_dim: 16,
            },
        ]
    }

    #[test]
    fn zero_noise_initialization_hits_the_input_means() {
        let cfg = SceneConfig::standard(SceneMode::Independent);
        let data = cfg.enumerate_distribution();
        let chain = initialize_with_noise(&two_stage_specs(), &data, 3, 0.0).unwrap();

        let mean = data.mean();
        for row in chain.stages()[0].recons() {
            assert_eq!(row, &mean);
        }
        for row in chain.stages()[1].recons() {
            assert_eq!(row, &vec![1.0 / 16.0; 16]);
        }
        for stage in chain.stages() {
            assert!(stage.weights().iter().all(|r| r.iter().all(|v| *v == 0.0)));
            assert!(stage.biases().iter().all(|b| *b == 0.0));
        }
    }

    #[test]
    fn stage_one_recon_mean_matches_the_hump_sum() {
        // Each mean component is 2/dim times the hump profile summed over
        // every circular distance.
        let cfg = SceneConfig::standard(SceneMode::Independent);
        let data = cfg.enumerate_distribution();
        let chain = initialize_with_noise(
            &[StageSpec {
                codebook_size: 4,
                code_samples: 2,
                input_dim: 24,
            }],
            &data,
            0,
            0.0,
        )
        .unwrap();

        let sigma = cfg.half_width();
        let hump_sum: f64 = (1..=24)
            .map(|p| {
                let d = crate::scene::circular_distance(24, 1, p) as f64;
                (-d * d / (2.0 * sigma * sigma)).exp()
            })
            .sum();
        let expected = 2.0 / 24.0 * hump_sum;
        for component in &chain.stages()[0].recons()[0] {
            assert!((component - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn initialization_is_deterministic_in_the_seed() {
        let cfg = SceneConfig::standard(SceneMode::Correlated);
        let data = cfg.enumerate_distribution();
        let a = initialize(&two_stage_specs(), &data, 11).unwrap();
        let b = initialize(&two_stage_specs(), &data, 11).unwrap();
        assert_eq!(a, b);
        let c = initialize(&two_stage_specs(), &data, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn initialization_rejects_impossible_linking() {
        let cfg = SceneConfig::standard(SceneMode::Independent);
        let data = cfg.enumerate_distribution();
        let mut specs = two_stage_specs();
        specs[1].input_dim = 5;
        assert!(matches!(
            initialize(&specs, &data, 0),
            Err(SvqError::InvalidLinking { stage: 1, .. })
        ));
    }

    fn small_stage_and_grads(seed: u64) -> (StageParams, StageGradients) {
        let (chain, data) = random_check_instance(4, &[(3, 2)], 3, seed).unwrap();
        let eval = chain_evaluation(&chain, &data).unwrap();
        (chain.stages()[0].clone(), eval.grads.per_stage[0].clone())
    }

    #[test]
    fn zero_gradients_leave_parameters_unchanged() {
        let (stage, _) = small_stage_and_grads(1);
        let zeros = StageGradients::zeros(&stage);
        let updated = apply_updates(&stage, &zeros, 0.2, BiasNormalizer::GradientMax).unwrap();
        assert_eq!(updated, stage);
    }

    #[test]
    fn single_nonzero_bias_gradient_moves_by_exactly_epsilon() {
        let (reference, _) = small_stage_and_grads(2);
        // Zero biases so the applied step is observable without rounding.
        let stage = StageParams::new(
            reference.codebook_size(),
            reference.code_samples(),
            reference.input_dim(),
            reference.weights().to_vec(),
            vec![0.0; reference.codebook_size()],
            reference.recons().to_vec(),
        )
        .unwrap();
        let mut grads = StageGradients::zeros(&stage);
        grads.biases[1] = -3.7;
        let updated = apply_updates(&stage, &grads, 0.05, BiasNormalizer::GradientMax).unwrap();
        assert_eq!(updated.biases()[1], 0.05);
        assert_eq!(updated.biases()[0], 0.0);
        assert_eq!(updated.weights(), stage.weights());
    }

    #[test]
    fn normalized_update_caps_the_step_at_epsilon() {
        let (stage, grads) = small_stage_and_grads(3);
        let epsilon = 0.125;
        let updated = apply_updates(&stage, &grads, epsilon, BiasNormalizer::GradientMax).unwrap();

        let max_bias_step = updated
            .biases()
            .iter()
            .zip(stage.biases())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!((max_bias_step - epsilon).abs() <= 1e-12);

        let dim = stage.input_dim() as f64;
        for (new_rows, old_rows) in [
            (updated.weights(), stage.weights()),
            (updated.recons(), stage.recons()),
        ] {
            let max_row_step = new_rows
                .iter()
                .zip(old_rows)
                .map(|(a, b)| {
                    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                    (sq / dim).sqrt()
                })
                .fold(0.0, f64::max);
            assert!((max_row_step - epsilon).abs() <= 1e-12);
        }
    }

    #[test]
    fn literal_bias_normalizer_freezes_zero_biases() {
        let cfg = SceneConfig::standard(SceneMode::Independent);
        let data = cfg.enumerate_distribution();
        let chain = initialize(
            &[StageSpec {
                codebook_size: 4,
                code_samples: 3,
                input_dim: 24,
            }],
            &data,
            7,
        )
        .unwrap();
        let mut state =
            TrainState::new(chain, 0).with_bias_normalizer(BiasNormalizer::CurrentBiasMax);
        train_step(&mut state, &data, 0.2, &[1.0]).unwrap();
        // Biases start at zero, so the literal normalizer never lets them move.
        assert!(state.chain().stages()[0].biases().iter().all(|b| *b == 0.0));
    }

    #[test]
    fn zero_stage_weights_freeze_the_chain() {
        let (chain, data) = random_check_instance(4, &[(3, 2), (2, 2)], 4, 9).unwrap();
        let mut state = TrainState::new(chain.clone(), 0);
        train_step(&mut state, &data, 0.3, &[0.0, 0.0]).unwrap();
        assert_eq!(state.chain().stages(), chain.stages());
        assert_eq!(state.history()[0].total, 0.0);
        assert_eq!(state.history()[0].step, 1);
        // The unweighted bound terms are still reported.
        assert!(state.history()[0].per_stage[0].d1 > 0.0);
    }

    #[test]
    fn training_steps_are_deterministic() {
        let (chain, data) = random_check_instance(4, &[(3, 2)], 4, 17).unwrap();
        let mut a = TrainState::new(chain.clone(), 5);
        let mut b = TrainState::new(chain, 5);
        for _ in 0..5 {
            train_step(&mut a, &data, 0.1, &[1.0]).unwrap();
            train_step(&mut b, &data, 0.1, &[1.0]).unwrap();
        }
        assert_eq!(a.chain(), b.chain());
        assert_eq!(a.history(), b.history());
    }

    #[test]
    fn near_stationary_step_stays_in_the_neighbourhood() {
        // At a stationary point the fixed step size keeps the parameters
        // jumping around nearby rather than converging: every family moves
        // by at most epsilon per normalized unit.
        let (chain, data) = random_check_instance(3, &[(2, 3)], 4, 29).unwrap();
        let mut state = TrainState::new(chain, 0);
        let epsilon = 0.01;
        train_step(&mut state, &data, epsilon, &[1.0]).unwrap();
        let before = state.chain().clone();
        train_step(&mut state, &data, epsilon, &[1.0]).unwrap();
        let after = state.chain();
        let dim = before.stages()[0].input_dim() as f64;
        for (new_row, old_row) in after.stages()[0]
            .recons()
            .iter()
            .zip(before.stages()[0].recons())
        {
            let sq: f64 = new_row
                .iter()
                .zip(old_row)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            assert!((sq / dim).sqrt() <= epsilon + 1e-12);
        }
    }

    struct CountingSink {
        records: Vec<(usize, usize)>,
        fail_at: Option<usize>,
    }

    impl SnapshotSink for CountingSink {
        fn record(
            &mut self,
            step: usize,
            stage: usize,
            recons: &[Vec<f64>],
            entry: &HistoryEntry,
        ) -> std::io::Result<()> {
            assert!(!recons.is_empty());
            assert_eq!(entry.step, step);
            if self.fail_at == Some(step) {
                return Err(std::io::Error::other("sink full"));
            }
            self.records.push((step, stage));
            Ok(())
        }
    }

    fn tiny_schedule(steps: usize) -> TrainingSchedule {
        TrainingSchedule::new(vec![
            Phase {
                epsilon: 0.2,
                steps,
                stage_weights: vec![1.0],
            },
            Phase {
                epsilon: 0.1,
                steps,
                stage_weights: vec![1.0],
            },
        ])
        .unwrap()
    }

    #[test]
    fn schedule_history_and_snapshot_cadence() {
        let (chain, data) = random_check_instance(4, &[(3, 2)], 5, 41).unwrap();
        let mut state = TrainState::new(chain, 0);
        let mut sink = CountingSink {
            records: Vec::new(),
            fail_at: None,
        };
        run_schedule(&mut state, &data, &tiny_schedule(6), 4, &mut sink).unwrap();
        assert_eq!(state.step_counter(), 12);
        assert_eq!(state.history().len(), 12);
        assert!(state.history().windows(2).all(|w| w[0].step < w[1].step));
        assert_eq!(sink.records, vec![(4, 0), (8, 0), (12, 0)]);
    }

    #[test]
    fn snapshot_every_step_produces_one_entry_per_step() {
        let (chain, data) = random_check_instance(4, &[(2, 2)], 3, 43).unwrap();
        let mut state = TrainState::new(chain, 0);
        let mut sink = CountingSink {
            records: Vec::new(),
            fail_at: None,
        };
        run_schedule(&mut state, &data, &tiny_schedule(3), 1, &mut sink).unwrap();
        assert_eq!(state.history().len(), 6);
        assert_eq!(sink.records.len(), 6);
    }

    #[test]
    fn sink_failure_aborts_training() {
        let (chain, data) = random_check_instance(4, &[(2, 2)], 3, 47).unwrap();
        let mut state = TrainState::new(chain, 0);
        let mut sink = CountingSink {
            records: Vec::new(),
            fail_at: Some(2),
        };
        let err = run_schedule(&mut state, &data, &tiny_schedule(3), 1, &mut sink);
        assert!(matches!(err, Err(SvqError::SnapshotSink(_))));
        assert_eq!(state.step_counter(), 2);
    }

    #[test]
    fn small_scene_training_decreases_the_objective() {
        let cfg = SceneConfig::new(8, 1.5, 1.0, SceneMode::Independent, (1, 3)).unwrap();
        let data = cfg.enumerate_distribution();
        let chain = initialize(
            &[StageSpec {
                codebook_size: 4,
                code_samples: 6,
                input_dim: 8,
            }],
            &data,
            1,
        )
        .unwrap();
        let start = chain.objective(&data).unwrap().total;
        let mut state = TrainState::new(chain, 1);
        for _ in 0..50 {
            train_step(&mut state, &data, 0.2, &[1.0]).unwrap();
        }
        let end = state.chain().objective(&data).unwrap().total;
        assert!(end < start, "objective {start} -> {end}");
    }

    #[test]
    fn schedule_validation() {
        assert!(TrainingSchedule::new(vec![]).is_err());
        assert!(TrainingSchedule::new(vec![Phase {
            epsilon: 0.0,
            steps: 5,
            stage_weights: vec![1.0],
        }])
        .is_err());
        assert!(TrainingSchedule::new(vec![Phase {
            epsilon: 0.1,
            steps: 0,
            stage_weights: vec![1.0],
        }])
        .is_err());
    }
}
