//! JSON experiment descriptions for simulation campaigns.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::flcc::{BuiltinJob, FlccDims, FlccError};
use crate::sim::{AdversaryKind, AdversaryModel, ModeKind, SimConfig};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Flcc(#[from] FlccError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    Deterministic,
    Probabilistic,
}

/// Mirrors the `simulate` flags. Protocol dimensions use their usual
/// one-letter names (`N`, `K`, `T`, `S`, `A`, `m`, `D2`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_q")]
    pub q: u64,
    #[serde(rename = "N")]
    pub workers: usize,
    #[serde(rename = "K")]
    pub batch: usize,
    #[serde(rename = "T", default)]
    pub privacy: usize,
    #[serde(rename = "S", default)]
    pub stragglers: usize,
    #[serde(rename = "A", default)]
    pub adversaries: usize,
    #[serde(rename = "m", default = "one")]
    pub fold: usize,
    #[serde(rename = "D2")]
    pub degree: usize,
    #[serde(default = "default_job")]
    pub job: String,
    #[serde(default)]
    pub mode: ModeName,
    /// Random side-information points; required in probabilistic mode.
    #[serde(default)]
    pub t: Option<u64>,
    #[serde(default = "default_adversary")]
    pub adversary: AdversaryKind,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "two")]
    pub rows: usize,
    #[serde(default = "two")]
    pub cols: usize,
    /// Where to write the summary. Not echoed back, so summaries of the same
    /// run written to different files are identical.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub consistency_check: bool,
}

fn default_q() -> u64 {
    257
}
fn one() -> usize {
    1
}
fn two() -> usize {
    2
}
fn default_job() -> String {
    "square".into()
}
fn default_adversary() -> AdversaryKind {
    AdversaryKind::Aliasing
}
fn default_trials() -> u64 {
    100
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.into(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn dims(&self) -> FlccDims {
        FlccDims {
            workers: self.workers,
            batch: self.batch,
            privacy: self.privacy,
            stragglers: self.stragglers,
            adversaries: self.adversaries,
            fold: self.fold,
            degree: self.degree,
        }
    }

    /// Checks everything [`FlccParams`](crate::flcc::FlccParams) checks plus
    /// the run settings, and builds the simulator configuration.
    pub fn to_sim(&self) -> Result<SimConfig, ConfigError> {
        let job: BuiltinJob = self.job.parse().map_err(ConfigError::Invalid)?;
        let mode = match (self.mode, self.t) {
            (ModeName::Deterministic, _) => ModeKind::Deterministic,
            (ModeName::Probabilistic, Some(t)) => ModeKind::Probabilistic { t },
            (ModeName::Probabilistic, None) => {
                return Err(ConfigError::Invalid("probabilistic mode needs t".into()))
            }
        };
        if self.trials == 0 {
            return Err(ConfigError::Invalid("trials must be at least 1".into()));
        }
        let sim = SimConfig {
            q: self.q,
            dims: self.dims(),
            job,
            mode,
            adversary: AdversaryModel {
                kind: self.adversary,
                count: self.adversaries,
            },
            shape: (self.rows, self.cols),
            consistency_check: self.consistency_check,
        };
        sim.params()?;
        Ok(sim)
    }
}
