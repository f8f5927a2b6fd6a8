use std::time::Instant;

use minatar_agents::{build_agent, AgentKind, Experience, FeatureVector};
use minatar_core::{Action, EnvConfig, EnvSession, GameId};
use serde::{Deserialize, Serialize};

pub const MIN_BENCH_FRAMES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub frames: u64,
    pub median_ns: f64,
    pub p99_ns: f64,
    pub mean_ns: f64,
}

impl LatencyStats {
    pub fn from_samples(mut samples: Vec<u64>) -> Self {
        assert!(!samples.is_empty(), "no samples");
        let mean_ns = samples.iter().map(|&s| s as f64).sum::<f64>() / samples.len() as f64;
        samples.sort_unstable();
        Self {
            frames: samples.len() as u64,
            median_ns: percentile(&samples, 0.5),
            p99_ns: percentile(&samples, 0.99),
            mean_ns,
        }
    }

    pub fn median_ms(&self) -> f64 {
        self.median_ns / 1e6
    }

    pub fn p99_ms(&self) -> f64 {
        self.p99_ns / 1e6
    }
}

/// Nearest-rank percentile of sorted samples.
fn percentile(sorted: &[u64], q: f64) -> f64 {
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1] as f64
}

/// Fixed action cycle so every run sees the same inputs.
fn scripted_action(frame: u64) -> Action {
    const SCRIPT: [Action; 8] = [
        Action::Left,
        Action::Fire,
        Action::Up,
        Action::Right,
        Action::Right,
        Action::Down,
        Action::NoOp,
        Action::Left,
    ];
    SCRIPT[(frame as usize / 3) % SCRIPT.len()]
}

/// Times `act` plus `observe` per frame; episode resets are not timed.
pub fn bench_env(game: GameId, frames: u64, seed: u64) -> LatencyStats {
    let mut env = EnvSession::new(EnvConfig::new(game, seed)).expect("valid config");
    let mut obs = env.observe();
    let mut samples = Vec::with_capacity(frames as usize);
    for f in 0..frames {
        let a = scripted_action(f);
        let start = Instant::now();
        let t = env.act(a).expect("reset on terminal");
        env.observe_into(&mut obs);
        samples.push(start.elapsed().as_nanos() as u64);
        std::hint::black_box(&obs);
        if t.terminal {
            env.reset();
        }
    }
    LatencyStats::from_samples(samples)
}

/// Times a full training step: agent action, environment step, observation,
/// feature extraction and learning update.
pub fn bench_agent(game: GameId, kind: AgentKind, frames: u64, seed: u64) -> LatencyStats {
    let mut env = EnvSession::new(EnvConfig::new(game, seed)).expect("valid config");
    let mut obs = env.observe();
    let cfg = kind.default_config();
    let mut agent =
        build_agent::<f64>(kind, cfg, obs.as_flat().len(), seed).expect("defaults are valid");
    let mut phi = FeatureVector::from_observation(&obs);
    let mut samples = Vec::with_capacity(frames as usize);
    for _ in 0..frames {
        let start = Instant::now();
        let a = agent.act(&phi);
        let t = env.act(a).expect("reset on terminal");
        env.observe_into(&mut obs);
        let next = FeatureVector::from_observation(&obs);
        let _ = agent.learn(Experience {
            state: phi,
            action: a,
            reward: t.reward,
            next_state: next.clone(),
            terminal: t.terminal,
        });
        samples.push(start.elapsed().as_nanos() as u64);
        phi = next;
        if t.terminal {
            env.reset();
            env.observe_into(&mut obs);
            phi = FeatureVector::from_observation(&obs);
        }
    }
    LatencyStats::from_samples(samples)
}
