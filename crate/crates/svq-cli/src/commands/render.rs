//! The `render` subcommand: turn snapshot CSVs into PGM waterfalls, one
//! image per code index (snapshots stacked top to bottom) plus a combined
//! image tiling every index left to right.

use std::path::{Path, PathBuf};

use crate::pgm::{combined_waterfall, index_waterfalls, write_pgm};
use crate::CliError;

/// Load every `step_<k>_stage_<stage>.csv` under `dir`, sorted by step.
/// Each snapshot is an `M x dim` matrix of recon rows.
pub fn load_stage_snapshots(dir: &Path, stage: usize) -> Result<Vec<Vec<Vec<f64>>>, CliError> {
    let suffix = format!("_stage_{stage}.csv");
    let mut found: Vec<(usize, PathBuf)> = Vec::new();
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::usage(format!("cannot read snapshot dir {}: {e}", dir.display())))?;
    for entry in entries {
        let entry = entry.map_err(|e| CliError::io(format!("listing {}: {e}", dir.display())))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(step) = name
            .strip_prefix("step_")
            .and_then(|rest| rest.strip_suffix(&suffix))
        {
            if let Ok(step) = step.parse::<usize>() {
                found.push((step, entry.path()));
            }
        }
    }
    if found.is_empty() {
        return Err(CliError::usage(format!(
            "no stage-{stage} snapshots found in {}",
            dir.display()
        )));
    }
    found.sort();

    let mut snapshots = Vec::with_capacity(found.len());
    let mut shape: Option<(usize, usize)> = None;
    for (_, path) in found {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))?;
        let mut matrix: Vec<Vec<f64>> = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let mut cols = line.split(',');
            let _index = cols.next();
            let row: Vec<f64> = cols
                .map(|tok| tok.parse())
                .collect::<Result<_, _>>()
                .map_err(|e| {
                    CliError::usage(format!(
                        "{} line {}: bad number: {e}",
                        path.display(),
                        line_no + 1
                    ))
                })?;
            matrix.push(row);
        }
        let this_shape = (matrix.len(), matrix.first().map_or(0, Vec::len));
        if this_shape.0 == 0 || this_shape.1 == 0 {
            return Err(CliError::usage(format!("{} is empty", path.display())));
        }
        if matrix.iter().any(|row| row.len() != this_shape.1) {
            return Err(CliError::usage(format!(
                "{} has ragged rows",
                path.display()
            )));
        }
        match shape {
            None => shape = Some(this_shape),
            Some(s) if s == this_shape => {}
            Some(s) => {
                return Err(CliError::usage(format!(
                    "{} has shape {:?} but earlier snapshots have {:?}",
                    path.display(),
                    this_shape,
                    s
                )))
            }
        }
        snapshots.push(matrix);
    }
    Ok(snapshots)
}

pub fn run(snapshot_dir: &Path, stage: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let snapshots = load_stage_snapshots(snapshot_dir, stage)?;
    let out_dir = out.unwrap_or_else(|| PathBuf::from("render"));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::io(format!("creating {}: {e}", out_dir.display())))?;

    for (y, (width, height, pixels)) in index_waterfalls(&snapshots).into_iter().enumerate() {
        let path = out_dir.join(format!("stage_{stage}_index_{}.pgm", y + 1));
        write_pgm(&path, width, height, &pixels)?;
    }
    let (width, height, pixels) = combined_waterfall(&snapshots);
    write_pgm(
        &out_dir.join(format!("stage_{stage}_combined.pgm")),
        width,
        height,
        &pixels,
    )?;
    println!(
        "rendered {} snapshots of stage {stage} into {}",
        snapshots.len(),
        out_dir.display()
    );
    Ok(())
}
