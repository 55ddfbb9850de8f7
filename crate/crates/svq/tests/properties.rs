//! Property tests for the structural invariants: posterior normalization,
//! non-negative bound terms, expectation linearity, and sampling symmetry.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use svq::chain::{ChainParams, StageParams, WeightedDataset, PROBABILITY_SUM_TOLERANCE};
use svq::codec::{decode, CodeVector};
use svq::diagnostics::peak_profile;

fn stage_strategy() -> impl Strategy<Value = (StageParams, Vec<f64>)> {
    (1usize..=5, 1usize..=4, 1usize..=4).prop_flat_map(|(m, n, d)| {
        let value = -2.0f64..2.0f64;
        (
            proptest::collection::vec(proptest::collection::vec(value.clone(), d), m),
            proptest::collection::vec(value.clone(), m),
            proptest::collection::vec(proptest::collection::vec(value.clone(), d), m),
            proptest::collection::vec(value, d),
        )
            .prop_map(move |(weights, biases, recons, x)| {
                (
                    StageParams::new(m, n, d, weights, biases, recons).unwrap(),
                    x,
                )
            })
    })
}

proptest! {
    #[test]
    fn posterior_is_a_probability_vector((stage, x) in stage_strategy()) {
        let act = stage.posterior(&x).unwrap();
        let sum: f64 = act.posterior().iter().sum();
        prop_assert!((sum - 1.0).abs() <= PROBABILITY_SUM_TOLERANCE);
        prop_assert!(act.posterior().iter().all(|p| (0.0..=1.0).contains(p)));
        prop_assert!(act.unnormalized().iter().all(|q| *q > 0.0 && *q < 1.0));
    }

    #[test]
    fn bound_terms_are_non_negative((stage, x) in stage_strategy()) {
        let terms = stage.bound_terms(&x).unwrap();
        prop_assert!(terms.d1 >= 0.0);
        prop_assert!(terms.d2 >= 0.0);
        if stage.code_samples() == 1 {
            prop_assert_eq!(terms.d2, 0.0);
        }
    }

    #[test]
    fn decode_is_invariant_under_index_permutation(
        (stage, _) in stage_strategy(),
        raw in proptest::collection::vec(0usize..5, 1..6),
        seed in any::<u64>(),
    ) {
        let m = stage.codebook_size();
        let indices: Vec<usize> = raw.iter().map(|i| i % m + 1).collect();
        let mut shuffled = indices.clone();
        // Fisher-Yates with a seeded stream.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            let j = rng.random_range(0..=i);
            shuffled.swap(i, j);
        }
        let a = decode(&stage, &CodeVector::new(indices).unwrap()).unwrap();
        let b = decode(&stage, &CodeVector::new(shuffled).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn peak_profile_commutes_with_circular_shifts(
        values in proptest::collection::vec(0.0f64..2.0, 6..24),
        shift in 0usize..24,
    ) {
        let dim = values.len();
        let shift = shift % dim;
        let shifted: Vec<f64> = (0..dim).map(|j| values[(j + dim - shift) % dim]).collect();
        let base = peak_profile(&values, 0.5, 2);
        let moved = peak_profile(&shifted, 0.5, 2);
        let mut expected: Vec<usize> = base.iter().map(|p| (p - 1 + shift) % dim + 1).collect();
        expected.sort_unstable();
        prop_assert_eq!(moved, expected);
    }
}

fn random_chain_and_data(seed: u64) -> (ChainParams, WeightedDataset) {
    svq::gradients::random_check_instance(4, &[(3, 2), (2, 3)], 5, seed).unwrap()
}

#[test]
fn posterior_sums_hold_over_a_thousand_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for _ in 0..1000 {
        let m = rng.random_range(1..=8);
        let d = rng.random_range(1..=6);
        let n = rng.random_range(1..=4);
        let weights = (0..m)
            .map(|_| (0..d).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let biases = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let recons = (0..m)
            .map(|_| (0..d).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let stage = StageParams::new(m, n, d, weights, biases, recons).unwrap();
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let sum: f64 = stage.posterior(&x).unwrap().posterior().iter().sum();
        assert!((sum - 1.0).abs() <= PROBABILITY_SUM_TOLERANCE);
    }
}

#[test]
fn objective_is_invariant_under_item_permutation() {
    let (chain, data) = random_chain_and_data(55);
    let total = chain.objective(&data).unwrap().total;

    let mut items: Vec<_> = data
        .items()
        .iter()
        .map(|item| (item.vector.clone(), item.prob))
        .collect();
    items.reverse();
    items.swap(0, 2);
    let permuted = WeightedDataset::new(items).unwrap();
    let permuted_total = chain.objective(&permuted).unwrap().total;
    assert!((total - permuted_total).abs() <= 1e-12 * total.abs().max(1.0));
}

#[test]
fn scaling_stage_weights_scales_the_total() {
    let (mut chain, data) = random_chain_and_data(56);
    let base = chain.objective(&data).unwrap();

    // Powers of two scale every addend exactly.
    for c in [0.25, 0.5, 2.0, 8.0] {
        let scaled_weights: Vec<f64> = chain.stage_weights().iter().map(|s| c * s).collect();
        let mut scaled = chain.clone();
        scaled.set_stage_weights(scaled_weights).unwrap();
        let obj = scaled.objective(&data).unwrap();
        assert_eq!(obj.total, c * base.total);
        assert_eq!(obj.per_stage, base.per_stage);
    }

    // A general positive factor holds to rounding.
    let c = 1.7;
    let scaled_weights: Vec<f64> = chain.stage_weights().iter().map(|s| c * s).collect();
    chain.set_stage_weights(scaled_weights).unwrap();
    let obj = chain.objective(&data).unwrap();
    assert!((obj.total - c * base.total).abs() <= 1e-12 * base.total.abs().max(1.0));
    assert_eq!(obj.per_stage, base.per_stage);
}
