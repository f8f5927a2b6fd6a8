use minatar_core::{Action, Rng};
use thiserror::Error;

use crate::actor_critic::ActorCriticAgent;
use crate::checkpoint::{CheckpointError, Tensor};
use crate::config::{AgentConfig, AgentKind, ConfigError};
use crate::policy::random_policy;
use crate::q_learning::QAgent;
use crate::replay::Experience;
use crate::scalar::Scalar;
use crate::FeatureVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrainingFault {
    #[error("non-finite {what} parameters after update")]
    NonFinite { what: &'static str },
}

/// A learner bound to one environment stream.
///
/// The caller alternates `act` and `learn`; `learn` receives the action the
/// agent chose, which may differ from the executed one under sticky actions.
pub trait Agent: Send {
    fn kind(&self) -> AgentKind;

    fn config(&self) -> &AgentConfig;

    fn act(&mut self, phi: &FeatureVector) -> Action;

    fn learn(&mut self, exp: Experience) -> Result<(), TrainingFault>;

    /// Called when an episode is cut short without a terminal transition.
    fn end_episode(&mut self) {}

    fn tensors(&self) -> Vec<Tensor>;

    fn load_tensors(&mut self, tensors: &[Tensor]) -> Result<(), CheckpointError>;
}

#[derive(Clone, Debug)]
pub struct RandomAgent {
    config: AgentConfig,
    rng: Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        Self {
            config: AgentKind::Random.default_config(),
            rng: Rng::new(seed),
        }
    }
}

impl Agent for RandomAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Random
    }

    fn config(&self) -> &AgentConfig {
        &self.config
    }

    fn act(&mut self, _phi: &FeatureVector) -> Action {
        random_policy(&mut self.rng)
    }

    fn learn(&mut self, _exp: Experience) -> Result<(), TrainingFault> {
        Ok(())
    }

    fn tensors(&self) -> Vec<Tensor> {
        Vec::new()
    }

    fn load_tensors(&mut self, _tensors: &[Tensor]) -> Result<(), CheckpointError> {
        Ok(())
    }
}

/// Builds an agent of `kind` over `n_features` inputs. The ablation flags of
/// `kind` override the ones in `config`.
pub fn build_agent<F: Scalar>(
    kind: AgentKind,
    mut config: AgentConfig,
    n_features: usize,
    seed: u64,
) -> Result<Box<dyn Agent>, ConfigError> {
    match kind {
        AgentKind::QLinearNoReplay => config.use_replay = false,
        AgentKind::QLinearNoTarget => config.use_target = false,
        AgentKind::Ac0 => config.lambda = 0.0,
        _ => {}
    }
    config.validate()?;
    Ok(match kind {
        AgentKind::Random => Box::new(RandomAgent::new(seed)),
        AgentKind::QLinear | AgentKind::QLinearNoReplay | AgentKind::QLinearNoTarget => {
            Box::new(QAgent::<F>::new(kind, config, n_features, seed))
        }
        AgentKind::AcLambda | AgentKind::Ac0 => {
            Box::new(ActorCriticAgent::<F>::new(kind, config, n_features, seed))
        }
    })
}
