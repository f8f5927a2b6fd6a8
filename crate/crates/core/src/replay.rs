//! JSON Lines replay files.
//!
//! Line 1 is a header `{game, seed, sticky_prob, ramping, version}`; every
//! following line is one frame `{requested_action, executed_action, reward,
//! terminal}`. A replay covers one episode from creation and is
//! self-validating: re-running the session from the header seed reproduces
//! every logged frame.

use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Action, BinaryObservation, EnvConfig, EnvError, EnvSession, GameId, Transition};

pub const REPLAY_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayHeader {
    pub game: GameId,
    pub seed: u64,
    pub sticky_prob: f64,
    pub ramping: bool,
    pub version: u32,
}

impl ReplayHeader {
    pub fn config(&self) -> EnvConfig {
        EnvConfig::new(self.game, self.seed)
            .with_sticky(self.sticky_prob)
            .with_ramping(self.ramping)
    }
}

impl From<&EnvConfig> for ReplayHeader {
    fn from(c: &EnvConfig) -> Self {
        Self {
            game: c.game,
            seed: c.seed,
            sticky_prob: c.sticky_prob,
            ramping: c.ramping,
            version: REPLAY_VERSION,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayFrame {
    pub requested_action: Action,
    pub executed_action: Action,
    pub reward: f64,
    pub terminal: bool,
}

impl From<Transition> for ReplayFrame {
    fn from(t: Transition) -> Self {
        Self {
            requested_action: t.requested,
            executed_action: t.executed,
            reward: t.reward,
            terminal: t.terminal,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("replay has no header line")]
    MissingHeader,
    #[error("unsupported replay version {found} (expected {REPLAY_VERSION})")]
    Version { found: u32 },
    #[error("corrupt replay at frame {frame}: {reason}")]
    Corrupt { frame: usize, reason: String },
    #[error(transparent)]
    Env(#[from] EnvError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Replay {
    pub header: ReplayHeader,
    pub frames: Vec<ReplayFrame>,
}

/// Re-simulated view of one replay frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayedFrame {
    pub transition: Transition,
    pub observation: BinaryObservation,
}

impl Replay {
    pub fn new(config: &EnvConfig) -> Self {
        Self {
            header: config.into(),
            frames: Vec::new(),
        }
    }

    /// Plays `policy` from a fresh session until the episode ends or
    /// `max_frames` frames have been logged.
    pub fn record<P>(config: &EnvConfig, max_frames: usize, mut policy: P) -> Result<Self, EnvError>
    where
        P: FnMut(&BinaryObservation) -> Action,
    {
        let mut env = EnvSession::new(config.clone())?;
        let mut replay = Self::new(config);
        let mut obs = env.observe();
        while replay.frames.len() < max_frames && !env.is_terminal() {
            let t = env.act(policy(&obs))?;
            replay.frames.push(t.into());
            env.observe_into(&mut obs);
        }
        Ok(replay)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer(&mut w, &self.header)?;
        w.write_all(b"\n")?;
        for f in &self.frames {
            serde_json::to_writer(&mut w, f)?;
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(io::BufWriter::new(file))
    }

    /// Parses without re-simulating. Blank lines are ignored.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, ReplayError> {
        let mut lines = reader
            .lines()
            .enumerate()
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let (i, header_line) = lines.next().ok_or(ReplayError::MissingHeader)?;
        let header: ReplayHeader =
            serde_json::from_str(&header_line?).map_err(|source| ReplayError::Json {
                line: i + 1,
                source,
            })?;
        if header.version != REPLAY_VERSION {
            return Err(ReplayError::Version {
                found: header.version,
            });
        }
        let mut frames = Vec::new();
        for (i, line) in lines {
            let frame = serde_json::from_str(&line?).map_err(|source| ReplayError::Json {
                line: i + 1,
                source,
            })?;
            frames.push(frame);
        }
        Ok(Self { header, frames })
    }

    pub fn from_jsonl(text: &str) -> Result<Self, ReplayError> {
        Self::parse(text.as_bytes())
    }

    /// Reads, parses and verifies a replay file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ReplayError> {
        let file = std::fs::File::open(path)?;
        let replay = Self::parse(io::BufReader::new(file))?;
        replay.verify()?;
        Ok(replay)
    }

    /// Re-simulates the episode from the header and returns every frame's
    /// transition and observation; fails on the first frame whose logged
    /// values disagree with the simulation.
    pub fn resimulate(&self) -> Result<Vec<ReplayedFrame>, ReplayError> {
        let mut env = EnvSession::new(self.header.config())?;
        let mut out = Vec::with_capacity(self.frames.len());
        for (i, logged) in self.frames.iter().enumerate() {
            let corrupt = |reason: String| ReplayError::Corrupt { frame: i, reason };
            if env.is_terminal() {
                return Err(corrupt("frame logged after the episode ended".into()));
            }
            let t = env.act(logged.requested_action)?;
            if t.executed != logged.executed_action {
                return Err(corrupt(format!(
                    "executed action {} but log says {}",
                    t.executed, logged.executed_action
                )));
            }
            if t.reward != logged.reward {
                return Err(corrupt(format!(
                    "reward {} but log says {}",
                    t.reward, logged.reward
                )));
            }
            if t.terminal != logged.terminal {
                return Err(corrupt(format!(
                    "terminal {} but log says {}",
                    t.terminal, logged.terminal
                )));
            }
            out.push(ReplayedFrame {
                transition: t,
                observation: env.observe(),
            });
        }
        Ok(out)
    }

    /// Full validation: the requested-action re-simulation must match the
    /// log, and replaying the executed actions with stickiness disabled must
    /// reproduce the same rewards. The second route works because the sticky
    /// draw is consumed every frame regardless of its outcome.
    pub fn verify(&self) -> Result<(), ReplayError> {
        self.resimulate()?;
        let config = self.header.config().with_sticky(0.0);
        let mut env = EnvSession::new(config)?;
        for (i, logged) in self.frames.iter().enumerate() {
            let t = env.act(logged.executed_action)?;
            if t.reward != logged.reward || t.terminal != logged.terminal {
                return Err(ReplayError::Corrupt {
                    frame: i,
                    reason: "executed-action re-simulation diverges".into(),
                });
            }
        }
        Ok(())
    }

    pub fn total_reward(&self) -> f64 {
        self.frames.iter().map(|f| f.reward).sum()
    }
}
