use std::path::PathBuf;

use minatar_agents::{AgentConfig, AgentKind};
use minatar_core::{GameId, DEFAULT_STICKY_PROB};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("frame budget must be positive")]
    NoFrames,
    #[error("at least one seed is required")]
    NoSeeds,
    #[error("at least one step-size exponent is required")]
    NoAlphas,
    #[error("sticky probability must be in [0, 1], got {0}")]
    Sticky(f64),
    #[error("bad exponent range `{0}` (expected lo..hi, e.g. -10..-4)")]
    AlphaRange(String),
    #[error("invalid agent overrides: {0}")]
    Overrides(#[from] serde_json::Error),
    #[error(transparent)]
    Config(#[from] minatar_agents::ConfigError),
}

/// Either a seed count (seeds `0..n`) or an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    Count(u64),
    List(Vec<u64>),
}

impl Seeds {
    pub fn to_vec(&self) -> Vec<u64> {
        match self {
            Seeds::Count(n) => (0..*n).collect(),
            Seeds::List(v) => v.clone(),
        }
    }
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::Count(1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    /// Per-episode JSONL log.
    pub episodes: Option<PathBuf>,
    /// Per-alpha CSV summary.
    pub summary: Option<PathBuf>,
}

/// One experiment: a game, an agent family, a step-size sweep and a seed set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub game: GameId,
    pub agent: AgentKind,
    /// Partial agent configuration merged over the family defaults.
    #[serde(default)]
    pub overrides: serde_json::Map<String, serde_json::Value>,
    /// Step sizes as powers of two.
    #[serde(default = "default_alpha_exps")]
    pub alpha_exps: Vec<i32>,
    #[serde(default)]
    pub seeds: Seeds,
    pub frames: u64,
    #[serde(default = "yes")]
    pub ramping: bool,
    #[serde(default = "default_sticky")]
    pub sticky: f64,
    #[serde(default)]
    pub out: OutputPaths,
}

fn default_alpha_exps() -> Vec<i32> {
    vec![-8]
}

fn yes() -> bool {
    true
}

fn default_sticky() -> f64 {
    DEFAULT_STICKY_PROB
}

impl ExperimentSpec {
    pub fn new(game: GameId, agent: AgentKind, frames: u64) -> Self {
        Self {
            game,
            agent,
            overrides: Default::default(),
            alpha_exps: default_alpha_exps(),
            seeds: Seeds::default(),
            frames,
            ramping: true,
            sticky: DEFAULT_STICKY_PROB,
            out: OutputPaths::default(),
        }
    }

    /// Family defaults with the overrides applied (step size untouched).
    pub fn base_config(&self) -> Result<AgentConfig, SpecError> {
        let mut value = serde_json::to_value(self.agent.default_config())?;
        let obj = value
            .as_object_mut()
            .expect("config serializes to an object");
        for (k, v) in &self.overrides {
            obj.insert(k.clone(), v.clone());
        }
        Ok(serde_json::from_value(value)?)
    }

    /// Step sizes in sweep order. The random agent ignores the step size
    /// and gets a single cell per seed.
    pub fn alphas(&self) -> Vec<(i32, f64)> {
        if !self.agent.learns() {
            return vec![(self.alpha_exps.first().copied().unwrap_or(0), 0.0)];
        }
        self.alpha_exps.iter().map(|&e| (e, 2f64.powi(e))).collect()
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.frames == 0 {
            return Err(SpecError::NoFrames);
        }
        if self.seeds.to_vec().is_empty() {
            return Err(SpecError::NoSeeds);
        }
        if self.alpha_exps.is_empty() {
            return Err(SpecError::NoAlphas);
        }
        if !(0.0..=1.0).contains(&self.sticky) {
            return Err(SpecError::Sticky(self.sticky));
        }
        let base = self.base_config()?;
        for (_, alpha) in self.alphas() {
            if self.agent.learns() {
                base.clone().with_alpha(alpha).validate()?;
            }
        }
        Ok(())
    }
}

/// Parses `lo..hi` (inclusive) or a single exponent.
pub fn parse_alpha_range(s: &str) -> Result<Vec<i32>, SpecError> {
    let bad = || SpecError::AlphaRange(s.to_string());
    match s.split_once("..") {
        Some((lo, hi)) => {
            let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i32 = hi
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(|_| bad())?]),
    }
}
