//! Plain-text model files: a versioned header carrying the scene the model
//! was trained on, then every stage's parameters in full precision.
//!
//! Values are written with Rust's shortest round-trip float formatting, so
//! a saved model reloads bit-for-bit.

use std::fmt::Write as _;
use std::path::Path;

use svq::chain::{ChainParams, StageParams};
use svq::scene::{SceneConfig, SceneMode};

use crate::CliError;

const MAGIC: &str = "svq-model v1";

fn fmt_row(row: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in row.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        let _ = write!(line, "{v}");
    }
    line
}

/// Serialize a chain and its scene to the model text format.
pub fn render_model(chain: &ChainParams, scene: &SceneConfig) -> String {
    let mode = match scene.mode() {
        SceneMode::Independent => "independent",
        SceneMode::Correlated => "correlated",
    };
    let (sep_min, sep_max) = scene.separation();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "scene mode={mode} dim={} half_width={} amplitude={} sep_min={sep_min} sep_max={sep_max}",
        scene.dim(),
        scene.half_width(),
        scene.amplitude(),
    );
    let _ = writeln!(out, "stages {}", chain.len());
    for (l, stage) in chain.stages().iter().enumerate() {
        let _ = writeln!(
            out,
            "stage {l} codebook_size={} code_samples={} input_dim={}",
            stage.codebook_size(),
            stage.code_samples(),
            stage.input_dim()
        );
        let _ = writeln!(out, "weights");
        for row in stage.weights() {
            let _ = writeln!(out, "{}", fmt_row(row));
        }
        let _ = writeln!(out, "biases");
        let _ = writeln!(out, "{}", fmt_row(stage.biases()));
        let _ = writeln!(out, "recons");
        for row in stage.recons() {
            let _ = writeln!(out, "{}", fmt_row(row));
        }
    }
    let _ = writeln!(out, "stage_weights");
    let _ = writeln!(out, "{}", fmt_row(chain.stage_weights()));
    let _ = writeln!(out, "end");
    out
}

pub fn save_model(path: &Path, chain: &ChainParams, scene: &SceneConfig) -> Result<(), CliError> {
    std::fs::write(path, render_model(chain, scene))
        .map_err(|e| CliError::io(format!("writing model {}: {e}", path.display())))
}

struct Lines<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str), CliError> {
        self.lines
            .next()
            .map(|(i, line)| (i + 1, line.trim_end()))
            .ok_or_else(|| CliError::usage("model file ended unexpectedly"))
    }

    fn expect(&mut self, keyword: &str) -> Result<(), CliError> {
        let (line_no, line) = self.next()?;
        if line == keyword {
            Ok(())
        } else {
            Err(CliError::usage(format!(
                "model line {line_no}: expected `{keyword}`, found `{line}`"
            )))
        }
    }
}

fn parse_row(line_no: usize, line: &str, expected_len: usize) -> Result<Vec<f64>, CliError> {
    let row: Vec<f64> = line
        .split_whitespace()
        .map(|tok| tok.parse())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("model line {line_no}: bad number: {e}")))?;
    if row.len() != expected_len {
        return Err(CliError::usage(format!(
            "model line {line_no}: expected {expected_len} values, found {}",
            row.len()
        )));
    }
    Ok(row)
}

/// Parse `key=value` fields from a header line into lookups.
fn fields(line: &str) -> impl Iterator<Item = (&str, &str)> {
    line.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
}

fn field<T: std::str::FromStr>(line_no: usize, line: &str, key: &str) -> Result<T, CliError> {
    let raw = fields(line)
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| CliError::usage(format!("model line {line_no}: missing field `{key}`")))?;
    raw.parse().map_err(|_| {
        CliError::usage(format!(
            "model line {line_no}: bad value for `{key}`: {raw}"
        ))
    })
}

/// Parse a model file back into a chain and its scene.
pub fn load_model(path: &Path) -> Result<(ChainParams, SceneConfig), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read model {}: {e}", path.display())))?;
    parse_model(&text)
}

pub fn parse_model(text: &str) -> Result<(ChainParams, SceneConfig), CliError> {
    let mut lines = Lines {
        lines: text.lines().enumerate(),
    };
    let (line_no, magic) = lines.next()?;
    if magic != MAGIC {
        return Err(CliError::usage(format!(
            "model line {line_no}: unsupported header `{magic}` (expected `{MAGIC}`)"
        )));
    }

    let (line_no, scene_line) = lines.next()?;
    if !scene_line.starts_with("scene ") {
        return Err(CliError::usage(format!(
            "model line {line_no}: expected scene header"
        )));
    }
    let mode = match field::<String>(line_no, scene_line, "mode")?.as_str() {
        "independent" => SceneMode::Independent,
        "correlated" => SceneMode::Correlated,
        other => {
            return Err(CliError::usage(format!(
                "model line {line_no}: unknown scene mode `{other}`"
            )))
        }
    };
    let scene = SceneConfig::new(
        field(line_no, scene_line, "dim")?,
        field(line_no, scene_line, "half_width")?,
        field(line_no, scene_line, "amplitude")?,
        mode,
        (
            field(line_no, scene_line, "sep_min")?,
            field(line_no, scene_line, "sep_max")?,
        ),
    )
    .map_err(|e| CliError::usage(format!("model line {line_no}: {e}")))?;

    let (line_no, stages_line) = lines.next()?;
    let stage_count: usize = stages_line
        .strip_prefix("stages ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            CliError::usage(format!("model line {line_no}: expected `stages <count>`"))
        })?;

    let mut stages = Vec::with_capacity(stage_count);
    for expected_idx in 0..stage_count {
        let (line_no, header) = lines.next()?;
        if !header.starts_with("stage ") {
            return Err(CliError::usage(format!(
                "model line {line_no}: expected `stage {expected_idx} ...`"
            )));
        }
        let m: usize = field(line_no, header, "codebook_size")?;
        let n: usize = field(line_no, header, "code_samples")?;
        let dim: usize = field(line_no, header, "input_dim")?;

        lines.expect("weights")?;
        let mut weights = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next()?;
            weights.push(parse_row(ln, line, dim)?);
        }
        lines.expect("biases")?;
        let (ln, line) = lines.next()?;
        let biases = parse_row(ln, line, m)?;
        lines.expect("recons")?;
        let mut recons = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next()?;
            recons.push(parse_row(ln, line, dim)?);
        }
        let stage = StageParams::new(m, n, dim, weights, biases, recons)
            .map_err(|e| CliError::usage(format!("model stage {expected_idx}: {e}")))?;
        stages.push(stage);
    }

    lines.expect("stage_weights")?;
    let (ln, line) = lines.next()?;
    let stage_weights = parse_row(ln, line, stage_count)?;
    lines.expect("end")?;

    let chain = ChainParams::new(stages, stage_weights)
        .map_err(|e| CliError::usage(format!("model chain: {e}")))?;
    Ok((chain, scene))
}
