//! Binary PGM (P5) output and the waterfall images built from training
//! snapshots.

use std::path::Path;

use crate::CliError;

/// Gray level for a reconstruction value: clamp to [0, 1], scale to 255.
pub fn gray_value(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Write a binary P5 graymap with maxval 255.
pub fn write_pgm(path: &Path, width: usize, height: usize, pixels: &[u8]) -> Result<(), CliError> {
    assert_eq!(pixels.len(), width * height, "pixel payload size");
    let mut bytes = format!("P5\n{width} {height}\n255\n").into_bytes();
    bytes.extend_from_slice(pixels);
    std::fs::write(path, bytes)
        .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))
}

/// Gray level between tiles in combined images.
pub const TILE_SEPARATOR: u8 = 255;

/// One waterfall image per code index: row `t` is that index's recon row at
/// the `t`-th snapshot. Returns `(width, height, pixels)` per index.
pub fn index_waterfalls(snapshots: &[Vec<Vec<f64>>]) -> Vec<(usize, usize, Vec<u8>)> {
    let m = snapshots[0].len();
    let dim = snapshots[0][0].len();
    (0..m)
        .map(|y| {
            let mut pixels = Vec::with_capacity(snapshots.len() * dim);
            for snapshot in snapshots {
                pixels.extend(snapshot[y].iter().copied().map(gray_value));
            }
            (dim, snapshots.len(), pixels)
        })
        .collect()
}

/// All code indices tiled left to right with a one-pixel separator column.
pub fn combined_waterfall(snapshots: &[Vec<Vec<f64>>]) -> (usize, usize, Vec<u8>) {
    let m = snapshots[0].len();
    let dim = snapshots[0][0].len();
    let width = m * dim + (m - 1);
    let height = snapshots.len();
    let mut pixels = Vec::with_capacity(width * height);
    for snapshot in snapshots {
        for (y, row) in snapshot.iter().enumerate() {
            if y > 0 {
                pixels.push(TILE_SEPARATOR);
            }
            pixels.extend(row.iter().copied().map(gray_value));
        }
    }
    (width, height, pixels)
}
