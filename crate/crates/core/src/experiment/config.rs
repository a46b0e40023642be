use std::collections::HashSet;
use std::path::PathBuf;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::samplers::SamplerConfig;
use crate::targets::{Target, TargetDensity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Init {
    Keyword(InitKeyword),
    Point(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKeyword {
    ModeCenter,
}

impl Default for Init {
    fn default() -> Self {
        Init::Keyword(InitKeyword::ModeCenter)
    }
}

impl Init {
    pub fn resolve(&self, target: &Target) -> Vec<f64> {
        match self {
            Init::Keyword(InitKeyword::ModeCenter) => target.mode_center(),
            Init::Point(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: Target,
    #[serde(alias = "sampler", deserialize_with = "one_or_many")]
    pub samplers: Vec<SamplerConfig>,
    pub n: usize,
    #[serde(default)]
    pub burn_in: usize,
    #[serde(default = "default_chains")]
    pub chains: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub init: Init,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default = "default_grid_res")]
    pub grid_res: usize,
    #[serde(default = "default_max_lag")]
    pub max_lag: usize,
}

fn default_chains() -> usize {
    1
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

fn default_grid_res() -> usize {
    32
}

fn default_max_lag() -> usize {
    200
}

fn one_or_many<'de, D>(de: D) -> std::result::Result<Vec<SamplerConfig>, D::Error>
where
    D: Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(SamplerConfig),
        Many(Vec<SamplerConfig>),
    }
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

impl ExperimentConfig {
    /// Parses and validates a config document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be >= 1".into()));
        }
        if self.chains == 0 {
            return Err(Error::Config("chains must be >= 1".into()));
        }
        if self.grid_res < 2 {
            return Err(Error::Config("grid_res must be >= 2".into()));
        }
        if self.samplers.is_empty() {
            return Err(Error::Config(
                "at least one sampler block is required".into(),
            ));
        }
        self.target.validate()?;
        let mut labels = HashSet::new();
        for s in &self.samplers {
            s.validate()?;
            if !labels.insert(s.label()) {
                return Err(Error::Config(format!(
                    "duplicate sampler label {:?}; set distinct \"label\" fields",
                    s.label()
                )));
            }
        }
        let init = self.init.resolve(&self.target);
        if init.len() != self.target.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.target.dim(),
                got: init.len(),
            });
        }
        if !self.target.log_density(&init)?.is_finite() {
            return Err(Error::InvalidInit(init));
        }
        Ok(())
    }
}
