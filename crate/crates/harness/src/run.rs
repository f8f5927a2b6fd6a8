use std::time::Instant;

use minatar_agents::{build_agent, Agent, AgentConfig, AgentKind, Experience, FeatureVector};
use minatar_core::{mix, EnvConfig, EnvSession, GameId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spec::{ExperimentSpec, SpecError};

/// Identifies one (alpha, seed) cell of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub game: GameId,
    pub agent: AgentKind,
    pub alpha_exp: i32,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    /// Training frame at which the episode ended (1-based, cumulative).
    pub end_frame: u64,
    pub ret: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellStatus {
    Completed,
    Failed { frame: u64, reason: String },
}

/// Wall-clock cost of the cell, kept apart from its deterministic outcome.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CellTiming {
    pub seconds: f64,
    pub ns_per_frame: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub key: CellKey,
    pub frames: u64,
    pub episodes: Vec<Episode>,
    #[serde(flatten)]
    pub status: CellStatus,
    pub timing: CellTiming,
}

impl RunRecord {
    pub fn returns(&self) -> impl Iterator<Item = f64> + '_ {
        self.episodes.iter().map(|e| e.ret)
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, CellStatus::Failed { .. })
    }

    /// Equality of everything except timing.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        self.key == other.key
            && self.frames == other.frames
            && self.episodes == other.episodes
            && self.status == other.status
    }
}

/// Everything needed to run one cell in isolation.
#[derive(Clone, Debug)]
pub struct Cell {
    pub key: CellKey,
    pub config: AgentConfig,
    pub frames: u64,
    pub ramping: bool,
    pub sticky: f64,
}

impl Cell {
    pub fn env_seed(&self) -> u64 {
        mix(self.key.seed.wrapping_mul(2))
    }

    pub fn agent_seed(&self) -> u64 {
        mix(self.key.seed.wrapping_mul(2).wrapping_add(1))
    }
}

pub fn cells(spec: &ExperimentSpec) -> Result<Vec<Cell>, SpecError> {
    spec.validate()?;
    let base = spec.base_config()?;
    let mut out = Vec::new();
    for (alpha_exp, alpha) in spec.alphas() {
        for seed in spec.seeds.to_vec() {
            out.push(Cell {
                key: CellKey {
                    game: spec.game,
                    agent: spec.agent,
                    alpha_exp,
                    alpha,
                    seed,
                },
                config: if spec.agent.learns() {
                    base.clone().with_alpha(alpha)
                } else {
                    base.clone()
                },
                frames: spec.frames,
                ramping: spec.ramping,
                sticky: spec.sticky,
            });
        }
    }
    Ok(out)
}

/// Trains one agent for exactly `cell.frames` frames. Only completed
/// episodes are recorded; a trailing partial episode is dropped.
pub fn run_cell(cell: &Cell) -> RunRecord {
    let start = Instant::now();
    let env_config = EnvConfig::new(cell.key.game, cell.env_seed())
        .with_sticky(cell.sticky)
        .with_ramping(cell.ramping);
    let mut env = EnvSession::new(env_config).expect("validated environment config");
    let mut obs = env.observe();
    let n_features = obs.as_flat().len();
    let mut agent: Box<dyn Agent> = build_agent::<f64>(
        cell.key.agent,
        cell.config.clone(),
        n_features,
        cell.agent_seed(),
    )
    .expect("validated agent config");

    let mut episodes = Vec::new();
    let mut status = CellStatus::Completed;
    let mut phi = FeatureVector::from_observation(&obs);
    let mut ret = 0.0;
    let mut frame = 0;
    while frame < cell.frames {
        let action = agent.act(&phi);
        let t = env.act(action).expect("episode resets on terminal");
        frame += 1;
        ret += t.reward;
        env.observe_into(&mut obs);
        let next = FeatureVector::from_observation(&obs);
        let learned = agent.learn(Experience {
            state: phi,
            action,
            reward: t.reward,
            next_state: next.clone(),
            terminal: t.terminal,
        });
        if let Err(fault) = learned {
            status = CellStatus::Failed {
                frame,
                reason: fault.to_string(),
            };
            break;
        }
        if t.terminal {
            episodes.push(Episode {
                end_frame: frame,
                ret,
            });
            ret = 0.0;
            env.reset();
            env.observe_into(&mut obs);
            phi = FeatureVector::from_observation(&obs);
        } else {
            phi = next;
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    RunRecord {
        key: cell.key.clone(),
        frames: frame,
        episodes,
        status,
        timing: CellTiming {
            seconds,
            ns_per_frame: if frame > 0 {
                seconds * 1e9 / frame as f64
            } else {
                0.0
            },
        },
    }
}

/// Runs every cell of `spec` on the rayon pool. Records come back in cell
/// order (alpha-major, then seed).
pub fn run(spec: &ExperimentSpec) -> Result<Vec<RunRecord>, SpecError> {
    Ok(run_cells(&cells(spec)?))
}

pub fn run_cells(cells: &[Cell]) -> Vec<RunRecord> {
    cells.par_iter().map(run_cell).collect()
}
