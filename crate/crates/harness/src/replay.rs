use std::path::Path;
use std::str::FromStr;

use minatar_agents::random_policy;
use minatar_core::replay::{Replay, ReplayError};
use minatar_core::{mix, Action, EnvConfig, Rng};
use serde::{Deserialize, Serialize};

/// Policies available for recording without a trained agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RecordPolicy {
    #[default]
    Random,
    Noop,
    Fire,
}

impl FromStr for RecordPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Self::Random),
            "noop" => Ok(Self::Noop),
            "fire" => Ok(Self::Fire),
            _ => Err(format!("unknown policy `{s}` (random, noop, fire)")),
        }
    }
}

/// Records one episode (or the first `max_frames` frames of it) and writes it
/// to `out` when given.
pub fn record_replay(
    config: &EnvConfig,
    policy: RecordPolicy,
    max_frames: usize,
    out: Option<&Path>,
) -> Result<Replay, ReplayError> {
    let mut rng = Rng::new(mix(config.seed ^ 0x7265_706c_6179));
    let replay = Replay::record(config, max_frames, |_| match policy {
        RecordPolicy::Random => random_policy(&mut rng),
        RecordPolicy::Noop => Action::NoOp,
        RecordPolicy::Fire => Action::Fire,
    })?;
    if let Some(path) = out {
        replay.save(path)?;
    }
    Ok(replay)
}

/// Reads a replay and re-simulates it; any mismatch is a corrupt-replay error.
pub fn load_replay(path: &Path) -> Result<Replay, ReplayError> {
    Replay::load(path)
}
