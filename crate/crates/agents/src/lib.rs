//! Baseline agents over flattened MinAtar observations: epsilon-greedy
//! Q-learning with optional experience replay and target parameters, online
//! actor-critic with eligibility traces, and a uniform random agent. All
//! learners are linear in the binary state and use RMSProp with
//! initialization bias correction.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the precision.
//!
//! ```
//! use minatar_agents::{build_agent, AgentKind, FeatureVector};
//! use minatar_core::{EnvConfig, EnvSession, GameId};
//!
//! let mut env = EnvSession::new(EnvConfig::new(GameId::Breakout, 1)).unwrap();
//! let kind = AgentKind::AcLambda;
//! let mut agent = build_agent::<f64>(kind, kind.default_config(), 400, 1).unwrap();
//! let phi = FeatureVector::from_observation(&env.observe());
//! let a = agent.act(&phi);
//! let t = env.act(a).unwrap();
//! # let _ = t;
//! ```

mod actor_critic;
mod agent;
pub mod checkpoint;
mod config;
mod features;
mod linear;
mod optim;
mod policy;
mod q_learning;
mod replay;
mod scalar;

pub use actor_critic::{
    ac_lambda_step, AcOptimizer, AcScratch, ActorCriticAgent, ActorCriticModel, TraceState,
};
pub use agent::{build_agent, Agent, RandomAgent, TrainingFault};
pub use checkpoint::{CheckpointError, Tensor};
pub use config::{AgentConfig, AgentKind, ConfigError, UnknownAgent};
pub use features::FeatureVector;
pub use linear::{argmax, softmax, LinearModel};
pub use optim::{Optimizer, OptimizerKind, RmsPropState};
pub use policy::{epsilon_greedy, greedy, random_policy, sample_categorical};
pub use q_learning::{q_gradient, q_update, td_target, QAgent};
pub use replay::{Experience, NotReady, ReplayBuffer};
pub use scalar::Scalar;

pub type LinearModel64 = LinearModel<f64>;
pub type LinearModel32 = LinearModel<f32>;
pub type QAgent64 = QAgent<f64>;
pub type QAgent32 = QAgent<f32>;
pub type ActorCriticAgent64 = ActorCriticAgent<f64>;
pub type ActorCriticAgent32 = ActorCriticAgent<f32>;
pub type RmsProp64 = RmsPropState<f64>;
pub type RmsProp32 = RmsPropState<f32>;
