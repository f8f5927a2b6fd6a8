use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optim::OptimizerKind;

/// Agent family selected on the command line or in an experiment file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AgentKind {
    #[serde(rename = "random")]
    Random,
    /// Q-learning with experience replay and a target network.
    #[serde(rename = "qlin")]
    QLinear,
    #[serde(rename = "qlin-noreplay")]
    QLinearNoReplay,
    #[serde(rename = "qlin-notarget")]
    QLinearNoTarget,
    #[serde(rename = "ac-lambda")]
    AcLambda,
    #[serde(rename = "ac0")]
    Ac0,
}

impl AgentKind {
    pub const ALL: [AgentKind; 6] = [
        AgentKind::Random,
        AgentKind::QLinear,
        AgentKind::QLinearNoReplay,
        AgentKind::QLinearNoTarget,
        AgentKind::AcLambda,
        AgentKind::Ac0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Random => "random",
            AgentKind::QLinear => "qlin",
            AgentKind::QLinearNoReplay => "qlin-noreplay",
            AgentKind::QLinearNoTarget => "qlin-notarget",
            AgentKind::AcLambda => "ac-lambda",
            AgentKind::Ac0 => "ac0",
        }
    }

    pub fn is_q_learning(self) -> bool {
        matches!(
            self,
            AgentKind::QLinear | AgentKind::QLinearNoReplay | AgentKind::QLinearNoTarget
        )
    }

    pub fn is_actor_critic(self) -> bool {
        matches!(self, AgentKind::AcLambda | AgentKind::Ac0)
    }

    /// Whether the agent has a step size worth sweeping.
    pub fn learns(self) -> bool {
        self != AgentKind::Random
    }

    /// Defaults for this family, with the ablation flags applied.
    pub fn default_config(self) -> AgentConfig {
        let mut cfg = if self.is_actor_critic() {
            AgentConfig::actor_critic()
        } else {
            AgentConfig::q_learning()
        };
        match self {
            AgentKind::QLinearNoReplay => cfg.use_replay = false,
            AgentKind::QLinearNoTarget => cfg.use_target = false,
            AgentKind::Ac0 => cfg.lambda = 0.0,
            _ => {}
        }
        cfg
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown agent `{0}` (expected one of random, qlin, qlin-noreplay, qlin-notarget, ac-lambda, ac0)")]
pub struct UnknownAgent(pub String);

impl FromStr for AgentKind {
    type Err = UnknownAgent;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        AgentKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| UnknownAgent(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be {requirement}, got {value}")]
    OutOfRange {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("{0} must be at least 1")]
    Zero(&'static str),
}

/// Hyperparameters shared by all learners. Fields a family does not use are
/// ignored by it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub rms_beta: f64,
    pub min_sq_grad: f64,
    pub optimizer: OptimizerKind,
    pub eps_start: f64,
    pub eps_end: f64,
    pub eps_anneal_frames: u64,
    pub replay_capacity: usize,
    pub replay_fill: usize,
    pub batch_size: usize,
    pub target_period: u64,
    pub use_replay: bool,
    pub use_target: bool,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self::q_learning()
    }
}

impl AgentConfig {
    pub fn q_learning() -> Self {
        Self {
            alpha: 2f64.powi(-8),
            gamma: 0.99,
            lambda: 0.0,
            rms_beta: 0.95,
            min_sq_grad: 0.01,
            optimizer: OptimizerKind::RmsProp,
            eps_start: 1.0,
            eps_end: 0.1,
            eps_anneal_frames: 100_000,
            replay_capacity: 100_000,
            replay_fill: 5_000,
            batch_size: 32,
            target_period: 1_000,
            use_replay: true,
            use_target: true,
        }
    }

    pub fn actor_critic() -> Self {
        Self {
            alpha: 2f64.powi(-8),
            lambda: 0.8,
            rms_beta: 0.999,
            min_sq_grad: 1e-4,
            ..Self::q_learning()
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Exploration rate after `frame` frames of linear annealing.
    pub fn epsilon(&self, frame: u64) -> f64 {
        if frame >= self.eps_anneal_frames {
            return self.eps_end;
        }
        let frac = frame as f64 / self.eps_anneal_frames as f64;
        self.eps_start + (self.eps_end - self.eps_start) * frac
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn check(
            field: &'static str,
            requirement: &'static str,
            value: f64,
            ok: bool,
        ) -> Result<(), ConfigError> {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange {
                    field,
                    requirement,
                    value,
                })
            }
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        check(
            "alpha",
            "positive and finite",
            self.alpha,
            self.alpha > 0.0 && self.alpha.is_finite(),
        )?;
        check("gamma", "in [0, 1]", self.gamma, unit(self.gamma))?;
        check("lambda", "in [0, 1]", self.lambda, unit(self.lambda))?;
        check(
            "rms_beta",
            "in [0, 1)",
            self.rms_beta,
            (0.0..1.0).contains(&self.rms_beta),
        )?;
        check(
            "min_sq_grad",
            "positive",
            self.min_sq_grad,
            self.min_sq_grad > 0.0 && self.min_sq_grad.is_finite(),
        )?;
        check(
            "eps_start",
            "in [0, 1]",
            self.eps_start,
            unit(self.eps_start),
        )?;
        check("eps_end", "in [0, 1]", self.eps_end, unit(self.eps_end))?;
        if self.replay_capacity == 0 {
            return Err(ConfigError::Zero("replay_capacity"));
        }
        if self.batch_size == 0 {
            return Err(ConfigError::Zero("batch_size"));
        }
        if self.target_period == 0 {
            return Err(ConfigError::Zero("target_period"));
        }
        Ok(())
    }
}
