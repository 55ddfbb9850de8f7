//! The `gradcheck` subcommand: sweep analytic gradients of a randomized
//! chain against central finite differences and report the worst relative
//! error.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use svq::gradients::{
    all_coordinates, chain_evaluation, finite_difference_gradient, gradient_entry,
    random_check_instance, relative_error, ParamCoordinate, ParamFamily,
};

use crate::CliError;

const FD_STEP: f64 = 1e-5;

/// Sweep everything for small chains; otherwise sample `min_coords` random
/// coordinates after seeding one per parameter family per stage.
const FULL_SWEEP_LIMIT: usize = 500;

fn parse_stage_dims(spec: &str) -> Result<Vec<(usize, usize)>, CliError> {
    spec.split(',')
        .map(|pair| {
            pair.split_once(':')
                .and_then(|(m, n)| Some((m.trim().parse().ok()?, n.trim().parse().ok()?)))
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "bad stage spec `{pair}`: expected `M:n` (e.g. `16:20`)"
                    ))
                })
        })
        .collect()
}

fn select_coordinates(
    all: Vec<ParamCoordinate>,
    min_coords: usize,
    seed: u64,
) -> Vec<ParamCoordinate> {
    if all.len() <= FULL_SWEEP_LIMIT.max(min_coords) {
        return all;
    }
    let mut selected: Vec<ParamCoordinate> = Vec::new();
    for family in [ParamFamily::Weight, ParamFamily::Bias, ParamFamily::Recon] {
        let mut seen_stage = usize::MAX;
        for &c in &all {
            if c.family == family && c.stage != seen_stage {
                selected.push(c);
                seen_stage = c.stage;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut pool = all;
    pool.shuffle(&mut rng);
    for c in pool {
        if selected.len() >= min_coords {
            break;
        }
        if !selected.contains(&c) {
            selected.push(c);
        }
    }
    selected
}

pub fn run(
    input_dim: usize,
    stages_spec: &str,
    items: usize,
    tolerance: f64,
    min_coords: usize,
    seed: u64,
) -> Result<(), CliError> {
    let stage_dims = parse_stage_dims(stages_spec)?;
    let (chain, data) = random_check_instance(input_dim, &stage_dims, items, seed)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let eval = chain_evaluation(&chain, &data)
        .map_err(|e| CliError::failed(format!("gradient evaluation: {e}")))?;

    let coordinates = select_coordinates(all_coordinates(&chain), min_coords, seed);
    let mut worst: Option<(f64, ParamCoordinate, f64, f64)> = None;
    for coordinate in coordinates.iter().copied() {
        let analytic = gradient_entry(&eval.grads, coordinate).expect("coordinate is in range");
        let numeric = finite_difference_gradient(&chain, &data, coordinate, FD_STEP)
            .map_err(|e| CliError::failed(format!("finite difference: {e}")))?;
        let err = relative_error(analytic, numeric);
        if worst.is_none_or(|(w, ..)| err > w) {
            worst = Some((err, coordinate, analytic, numeric));
        }
    }
    let (worst_err, coordinate, analytic, numeric) =
        worst.expect("at least one coordinate is always swept");

    println!(
        "swept {} of {} coordinates (h = {FD_STEP:e}, seed {seed})",
        coordinates.len(),
        all_coordinates(&chain).len()
    );
    println!(
        "worst relative error {worst_err:.3e} at {coordinate} \
         (analytic {analytic:.9e}, finite difference {numeric:.9e})"
    );
    if worst_err <= tolerance {
        println!("PASS (tolerance {tolerance:e})");
        Ok(())
    } else {
        Err(CliError::failed(format!(
            "worst relative error {worst_err:.3e} at {coordinate} exceeds tolerance {tolerance:e}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_dim_parsing() {
        assert_eq!(parse_stage_dims("4:3,3:2").unwrap(), vec![(4, 3), (3, 2)]);
        assert_eq!(parse_stage_dims("16:20").unwrap(), vec![(16, 20)]);
        assert!(parse_stage_dims("4").is_err());
        assert!(parse_stage_dims("a:b").is_err());
    }

    #[test]
    fn coordinate_selection_covers_every_family_when_sampling() {
        let (chain, _) = random_check_instance(24, &[(16, 3), (16, 3)], 1, 0).unwrap();
        let all = all_coordinates(&chain);
        assert!(all.len() > FULL_SWEEP_LIMIT);
        let selected = select_coordinates(all, 50, 1);
        assert!(selected.len() >= 50);
        for family in [ParamFamily::Weight, ParamFamily::Bias, ParamFamily::Recon] {
            for stage in 0..2 {
                assert!(selected
                    .iter()
                    .any(|c| c.family == family && c.stage == stage));
            }
        }
    }
}
