//! The `eval` subcommand: load a model, report per-stage distortion terms,
//! and optionally cross-check them against the Monte-Carlo codec estimate
//! or summarize the structure of the learned code.

use std::path::Path;

use svq::chain::{ChainParams, WeightedDataset};
use svq::codec::estimate_constrained_distortion;
use svq::diagnostics::{invariance_score, peak_profile, PEAK_MIN_SEPARATION, PEAK_THRESHOLD};
use svq::scene::SceneMode;

use crate::model_file::load_model;
use crate::CliError;

/// Dataset each stage sees: the scene data for stage 1, the previous
/// stage's posteriors for later stages.
fn induced_datasets(
    chain: &ChainParams,
    data: &WeightedDataset,
) -> Result<Vec<WeightedDataset>, CliError> {
    let mut per_stage: Vec<Vec<(Vec<f64>, f64)>> = vec![Vec::new(); chain.len()];
    for item in data.items() {
        per_stage[0].push((item.vector.clone(), item.prob));
        if chain.len() > 1 {
            let activations = chain
                .forward(&item.vector)
                .map_err(|e| CliError::usage(format!("forward pass: {e}")))?;
            for l in 1..chain.len() {
                per_stage[l].push((activations[l - 1].posterior().to_vec(), item.prob));
            }
        }
    }
    per_stage
        .into_iter()
        .map(|items| {
            WeightedDataset::new(items).map_err(|e| CliError::usage(format!("dataset: {e}")))
        })
        .collect()
}

pub fn run(
    model_path: &Path,
    mc_trials: Option<usize>,
    diagnostics: bool,
    seed: u64,
) -> Result<(), CliError> {
    let (chain, scene) = load_model(model_path)?;
    let data = scene.enumerate_distribution();
    let objective = chain
        .objective(&data)
        .map_err(|e| CliError::usage(format!("evaluating model: {e}")))?;

    for (l, terms) in objective.per_stage.iter().enumerate() {
        println!(
            "stage {l}: D1 {} D2 {} (weight {})",
            terms.d1,
            terms.d2,
            chain.stage_weights()[l]
        );
    }
    println!("weighted total: {}", objective.total);

    if let Some(trials) = mc_trials {
        let datasets = induced_datasets(&chain, &data)?;
        for (l, (stage, stage_data)) in chain.stages().iter().zip(&datasets).enumerate() {
            let est = estimate_constrained_distortion(
                stage,
                stage_data,
                trials,
                seed.wrapping_add(l as u64),
            )
            .map_err(|e| CliError::usage(format!("--mc: {e}")))?;
            let bound = objective.per_stage[l].total();
            let residual = (est.estimate - bound).abs();
            let verdict = if residual <= 3.0 * est.std_error {
                "PASS"
            } else {
                "FAIL"
            };
            println!(
                "stage {l} mc: estimate {} +/- {} vs D1+D2 {} | residual {} <= 3 sigma: {verdict}",
                est.estimate, est.std_error, bound, residual
            );
        }
    }

    if diagnostics {
        let mut histogram = std::collections::BTreeMap::new();
        for (y, row) in chain.stages()[0].recons().iter().enumerate() {
            let peaks = peak_profile(row, PEAK_THRESHOLD, PEAK_MIN_SEPARATION);
            *histogram.entry(peaks.len()).or_insert(0usize) += 1;
            println!("stage 0 index {}: peaks {:?}", y + 1, peaks);
        }
        let summary: Vec<String> = histogram
            .iter()
            .map(|(peaks, count)| format!("{peaks} peaks x{count}"))
            .collect();
        println!("peak-count histogram: {}", summary.join(", "));

        if scene.mode() == SceneMode::Correlated {
            let score = invariance_score(&chain, &scene)
                .map_err(|e| CliError::usage(format!("--diagnostics: {e}")))?;
            if score.degenerate {
                println!("invariance score: degenerate (no across-centroid variation)");
            } else {
                println!("invariance score: {}", score.score);
            }
        } else {
            println!("invariance score: n/a (independent scene)");
        }
    }
    Ok(())
}
