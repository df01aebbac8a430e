use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use es_core::dist::ProcessSpec;
use es_core::functionals::es_exact;
use es_core::mc::ExperimentSpec;
use es_core::{CorruptionModel, EstimatorConfig, RiskLevel};
use serde::Deserialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: u32,
    experiment: Value,
    #[serde(default)]
    estimators: Vec<EstimatorConfig>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    emit_svg: bool,
    #[serde(default)]
    workers: usize,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    histogram: HistogramOptions,
    #[serde(default)]
    longrun: LongRunOptions,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramOptions {
    /// Sample size of the histogram runs; defaults to the largest in the grid.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_bins")]
    pub bins: usize,
}

impl Default for HistogramOptions {
    fn default() -> Self {
        HistogramOptions {
            n: None,
            bins: default_bins(),
        }
    }
}

fn default_bins() -> usize {
    50
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LongRunOptions {
    #[serde(default = "default_block_size")]
    pub block_size: usize,
    #[serde(default = "default_blocks")]
    pub blocks: usize,
}

impl Default for LongRunOptions {
    fn default() -> Self {
        LongRunOptions {
            block_size: default_block_size(),
            blocks: default_blocks(),
        }
    }
}

fn default_block_size() -> usize {
    10_000
}

fn default_blocks() -> usize {
    500
}

/// Where the ground truth of a run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthSource {
    Config,
    ClosedForm,
}

impl TruthSource {
    pub fn as_str(self) -> &'static str {
        match self {
            TruthSource::Config => "config",
            TruthSource::ClosedForm => "closed_form",
        }
    }
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub experiment: ExperimentSpec,
    /// Estimators compared on shared draws; never empty.
    pub estimators: Vec<EstimatorConfig>,
    pub output_dir: Option<PathBuf>,
    pub emit_svg: bool,
    pub workers: usize,
    pub title: Option<String>,
    pub histogram: HistogramOptions,
    pub longrun: LongRunOptions,
    pub truth_source: TruthSource,
    /// Whether `experiment.corruption` was set explicitly.
    pub corruption_given: bool,
    /// SHA-256 of the canonical JSON form of the file.
    pub spec_hash: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
        let spec_hash = hash_value(&value)?;
        let raw: RawConfig = serde_json::from_value(value)?;
        if raw.version != CONFIG_VERSION {
            bail!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                raw.version
            );
        }
        let corruption_given = raw.experiment.get("corruption").is_some();
        let (experiment, truth_source) = resolve_experiment(raw.experiment)?;
        experiment.validate()?;
        let estimators = if raw.estimators.is_empty() {
            vec![experiment.estimator]
        } else {
            raw.estimators
        };
        for e in &estimators {
            e.validate()?;
        }
        if raw.histogram.bins == 0 {
            bail!("histogram.bins must be at least 1");
        }
        Ok(RunConfig {
            experiment,
            estimators,
            output_dir: raw.output_dir,
            emit_svg: raw.emit_svg,
            workers: raw.workers,
            title: raw.title,
            histogram: raw.histogram,
            longrun: raw.longrun,
            truth_source,
            corruption_given,
            spec_hash,
        })
    }

    /// File-name labels, one per estimator, unique within the run.
    pub fn labels(&self) -> Vec<String> {
        let kinds: Vec<&str> = self.estimators.iter().map(|e| e.kind()).collect();
        kinds
            .iter()
            .enumerate()
            .map(|(i, kind)| {
                if kinds.iter().filter(|k| *k == kind).count() > 1 {
                    format!("{kind}_{}", i + 1)
                } else {
                    kind.to_string()
                }
            })
            .collect()
    }

    pub fn with_corruption(&self, corruption: CorruptionModel) -> ExperimentSpec {
        ExperimentSpec {
            corruption,
            ..self.experiment.clone()
        }
    }
}

fn hash_value(value: &Value) -> Result<String> {
    // serde_json keeps object keys sorted, so this form ignores layout and key order.
    let canonical = serde_json::to_vec(value)?;
    Ok(hex::encode(Sha256::digest(&canonical)))
}

fn resolve_experiment(mut value: Value) -> Result<(ExperimentSpec, TruthSource)> {
    let object = value
        .as_object_mut()
        .context("`experiment` must be an object")?;
    let source = if object.contains_key("truth") {
        TruthSource::Config
    } else {
        let process: ProcessSpec = serde_json::from_value(
            object
                .get("process")
                .cloned()
                .context("`experiment.process` is required")?,
        )
        .context("in `experiment.process`")?;
        let alpha: RiskLevel = serde_json::from_value(
            object
                .get("alpha")
                .cloned()
                .context("`experiment.alpha` is required")?,
        )
        .context("in `experiment.alpha`")?;
        let truth = es_exact(&process.marginal(), alpha)
            .context("no closed-form ES for this process; set `experiment.truth`")?;
        object.insert("truth".into(), truth.into());
        TruthSource::ClosedForm
    };
    let spec = serde_json::from_value(value).context("in `experiment`")?;
    Ok((spec, source))
}
