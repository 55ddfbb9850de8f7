//! The `gen-data` subcommand: scene vectors as CSV, either the exact
//! enumerated distribution (probability column first) or seeded samples.

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use svq::scene::{SceneConfig, SceneMode};

use crate::CliError;

fn append_row(text: &mut String, prefix: Option<f64>, vector: &[f64]) {
    let mut first = true;
    if let Some(p) = prefix {
        let _ = write!(text, "{p}");
        first = false;
    }
    for v in vector {
        if !first {
            text.push(',');
        }
        let _ = write!(text, "{v}");
        first = false;
    }
    text.push('\n');
}

pub fn run(
    mode: &str,
    enumerate: bool,
    count: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mode = match mode {
        "independent" => SceneMode::Independent,
        "correlated" => SceneMode::Correlated,
        other => {
            return Err(CliError::usage(format!(
                "unknown mode `{other}` (expected `independent` or `correlated`)"
            )))
        }
    };
    let cfg = SceneConfig::standard(mode);

    let mut text = String::new();
    match (enumerate, count) {
        (true, None) => {
            for item in cfg.enumerate_distribution().items() {
                append_row(&mut text, Some(item.prob), &item.vector);
            }
        }
        (false, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let (p1, p2) = cfg.sample_positions(&mut rng);
                let vector = cfg.vector(p1, p2).expect("sampled positions are in range");
                append_row(&mut text, None, &vector);
            }
        }
        (true, Some(_)) => {
            return Err(CliError::usage(
                "--enumerate and --count are mutually exclusive",
            ))
        }
        (false, None) => return Err(CliError::usage("pass either --enumerate or --count <N>")),
    }

    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
