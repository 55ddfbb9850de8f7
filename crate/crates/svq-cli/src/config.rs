//! Experiment configuration files and run manifests.
//!
//! Configs are TOML: a `[scene]` table, one `[[stages]]` table per encoder
//! stage, one `[[phases]]` table per schedule phase, and a `[run]` table.
//! The manifest written next to a run's outputs echoes the effective
//! config under `[config]` so the run can be reproduced byte-for-byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use svq::scene::{SceneConfig, SceneMode};
use svq::trainer::{BiasNormalizer, Phase, StageSpec, TrainingSchedule};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSetting {
    Independent,
    Correlated,
}

impl From<ModeSetting> for SceneMode {
    fn from(mode: ModeSetting) -> SceneMode {
        match mode {
            ModeSetting::Independent => SceneMode::Independent,
            ModeSetting::Correlated => SceneMode::Correlated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BiasNormalizerSetting {
    #[default]
    GradientMax,
    CurrentBiasMax,
}

impl From<BiasNormalizerSetting> for BiasNormalizer {
    fn from(setting: BiasNormalizerSetting) -> BiasNormalizer {
        match setting {
            BiasNormalizerSetting::GradientMax => BiasNormalizer::GradientMax,
            BiasNormalizerSetting::CurrentBiasMax => BiasNormalizer::CurrentBiasMax,
        }
    }
}

fn default_half_width() -> f64 {
    SceneConfig::DEFAULT_HALF_WIDTH
}

fn default_amplitude() -> f64 {
    SceneConfig::DEFAULT_AMPLITUDE
}

fn default_sep_min() -> usize {
    SceneConfig::DEFAULT_SEPARATION.0
}

fn default_sep_max() -> usize {
    SceneConfig::DEFAULT_SEPARATION.1
}

fn default_snapshot_every() -> usize {
    25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSection {
    pub dim: usize,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    pub mode: ModeSetting,
    #[serde(default = "default_sep_min")]
    pub sep_min: usize,
    #[serde(default = "default_sep_max")]
    pub sep_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSection {
    pub codebook_size: usize,
    pub code_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSection {
    pub epsilon: f64,
    pub steps: usize,
    pub stage_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub seed: u64,
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: usize,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub bias_normalizer: BiasNormalizerSetting,
}

/// One experiment: scene, stage model orders, schedule, and run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scene: SceneSection,
    pub stages: Vec<StageSection>,
    pub phases: Vec<PhaseSection>,
    pub run: RunSection,
}

impl ExperimentConfig {
    /// Parse and validate a config file. TOML errors are reported with
    /// their line and column.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// Semantic validation on top of the TOML schema.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.stages.is_empty() {
            return Err(CliError::usage(
                "config must declare at least one [[stages]]",
            ));
        }
        if self.phases.is_empty() {
            return Err(CliError::usage(
                "config must declare at least one [[phases]]",
            ));
        }
        for (i, phase) in self.phases.iter().enumerate() {
            if phase.stage_weights.len() != self.stages.len() {
                return Err(CliError::usage(format!(
                    "phases[{i}].stage_weights has {} entries but the config declares {} stages",
                    phase.stage_weights.len(),
                    self.stages.len()
                )));
            }
        }
        if self.run.snapshot_every == 0 {
            return Err(CliError::usage("run.snapshot_every must be positive"));
        }
        self.scene_config()?;
        self.schedule()?;
        Ok(())
    }

    pub fn scene_config(&self) -> Result<SceneConfig, CliError> {
        SceneConfig::new(
            self.scene.dim,
            self.scene.half_width,
            self.scene.amplitude,
            self.scene.mode.into(),
            (self.scene.sep_min, self.scene.sep_max),
        )
        .map_err(|e| CliError::usage(format!("[scene]: {e}")))
    }

    /// Stage specs with input dimensions derived from the scene and the
    /// linking rule.
    pub fn stage_specs(&self) -> Vec<StageSpec> {
        let mut input_dim = self.scene.dim;
        self.stages
            .iter()
            .map(|s| {
                let spec = StageSpec {
                    codebook_size: s.codebook_size,
                    code_samples: s.code_samples,
                    input_dim,
                };
                input_dim = s.codebook_size;
                spec
            })
            .collect()
    }

    pub fn schedule(&self) -> Result<TrainingSchedule, CliError> {
        TrainingSchedule::new(
            self.phases
                .iter()
                .map(|p| Phase {
                    epsilon: p.epsilon,
                    steps: p.steps,
                    stage_weights: p.stage_weights.clone(),
                })
                .collect(),
        )
        .map_err(|e| CliError::usage(format!("[[phases]]: {e}")))
    }
}

/// Everything needed to rerun an experiment, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
}

impl Manifest {
    pub fn new(config: ExperimentConfig) -> Self {
        let seed = config.run.seed;
        Manifest {
            config,
            provenance: Provenance {
                tool: "svq".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed,
            },
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::usage(format!("manifest: {e}")))
    }
}
