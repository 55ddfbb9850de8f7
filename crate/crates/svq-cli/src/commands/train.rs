//! The `train` subcommand: config in, reproducible run directory out.
//!
//! Run layout:
//! ```text
//! <output_dir>/
//!   manifest.toml                      effective config + provenance
//!   history.csv                        step, stage, d1, d2, weighted_total
//!   snapshots/step_<k>_stage_<l>.csv   recon rows at snapshot steps
//!   render/stage_<l>_index_<y>.pgm     per-index waterfalls
//!   render/stage_<l>_combined.pgm      all indices tiled
//!   model.txt                          final parameters
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use svq::error::SvqError;
use svq::trainer::{initialize, run_schedule, HistoryEntry, SnapshotSink, TrainState};

use crate::commands::render;
use crate::config::{ExperimentConfig, Manifest};
use crate::model_file::save_model;
use crate::CliError;

/// Writes one CSV per (snapshot step, stage) into the snapshots directory.
struct CsvSnapshotSink {
    dir: PathBuf,
    records: usize,
}

impl SnapshotSink for CsvSnapshotSink {
    fn record(
        &mut self,
        step: usize,
        stage: usize,
        recons: &[Vec<f64>],
        _entry: &HistoryEntry,
    ) -> std::io::Result<()> {
        let mut text = String::new();
        for (y, row) in recons.iter().enumerate() {
            let _ = write!(text, "{}", y + 1);
            for v in row {
                let _ = write!(text, ",{v}");
            }
            text.push('\n');
        }
        self.records += 1;
        std::fs::write(
            self.dir.join(format!("step_{step}_stage_{stage}.csv")),
            text,
        )
    }
}

fn history_csv(history: &[HistoryEntry]) -> String {
    let mut text = String::from("step,stage,d1,d2,weighted_total\n");
    for entry in history {
        for (stage, terms) in entry.per_stage.iter().enumerate() {
            let _ = writeln!(
                text,
                "{},{},{},{},{}",
                entry.step, stage, terms.d1, terms.d2, entry.total
            );
        }
    }
    text
}

pub fn run(
    config_path: &Path,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = seed_override {
        config.run.seed = seed;
    }
    if let Some(out) = out_override {
        config.run.output_dir = out;
    }

    let scene = config.scene_config()?;
    let data = scene.enumerate_distribution();
    let schedule = config.schedule()?;
    let specs = config.stage_specs();

    let out_dir = config.run.output_dir.clone();
    let snapshots_dir = out_dir.join("snapshots");
    std::fs::create_dir_all(&snapshots_dir)
        .map_err(|e| CliError::io(format!("creating {}: {e}", snapshots_dir.display())))?;

    let chain = initialize(&specs, &data, config.run.seed)
        .map_err(|e| CliError::usage(format!("initialization: {e}")))?;
    let mut state = TrainState::new(chain, config.run.seed)
        .with_bias_normalizer(config.run.bias_normalizer.into());

    let mut sink = CsvSnapshotSink {
        dir: snapshots_dir.clone(),
        records: 0,
    };
    run_schedule(
        &mut state,
        &data,
        &schedule,
        config.run.snapshot_every,
        &mut sink,
    )
    .map_err(|e| match e {
        SvqError::SnapshotSink(io) => CliError::io(format!("writing snapshots: {io}")),
        other => CliError::usage(format!("training: {other}")),
    })?;

    let write = |name: &str, contents: String| -> Result<(), CliError> {
        let path = out_dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))
    };
    write("history.csv", history_csv(state.history()))?;
    write("manifest.toml", Manifest::new(config.clone()).to_toml())?;
    save_model(&out_dir.join("model.txt"), state.chain(), &scene)?;

    if sink.records > 0 {
        let render_dir = out_dir.join("render");
        for stage in 0..state.chain().len() {
            render::run(&snapshots_dir, stage, Some(render_dir.clone()))?;
        }
    } else {
        println!("no snapshot steps fell inside the schedule; skipping waterfalls");
    }

    let final_total = state
        .history()
        .last()
        .map(|entry| entry.total)
        .unwrap_or(f64::NAN);
    println!(
        "trained {} steps ({} stages, {} items); last objective {final_total}",
        state.step_counter(),
        state.chain().len(),
        data.len()
    );
    println!("outputs in {}", out_dir.display());
    Ok(())
}
