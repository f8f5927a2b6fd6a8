//! Online actor-critic with accumulating eligibility traces.

use minatar_core::{Action, Rng};

use crate::agent::{Agent, TrainingFault};
use crate::checkpoint::{CheckpointError, Tensor};
use crate::config::{AgentConfig, AgentKind};
use crate::linear::{softmax, LinearModel};
use crate::optim::Optimizer;
use crate::policy::sample_categorical;
use crate::replay::Experience;
use crate::scalar::{all_finite, Scalar};
use crate::FeatureVector;

/// Linear critic `v(s) = w . phi + b` and linear-softmax actor over six actions.
#[derive(Clone, Debug, PartialEq)]
pub struct ActorCriticModel<F> {
    pub critic: LinearModel<F>,
    pub actor: LinearModel<F>,
}

impl<F: Scalar> ActorCriticModel<F> {
    pub fn zeros(n_features: usize) -> Self {
        Self {
            critic: LinearModel::zeros(n_features, 1),
            actor: LinearModel::zeros(n_features, Action::COUNT),
        }
    }

    pub fn value(&self, phi: &FeatureVector) -> F {
        self.critic.output(phi, 0)
    }

    pub fn policy(&self, phi: &FeatureVector) -> Vec<F> {
        softmax(&self.actor.outputs(phi))
    }

    /// Adds `scale * grad_w v(s)` into a critic-shaped buffer.
    pub fn accumulate_value_gradient(&self, phi: &FeatureVector, scale: F, grad: &mut [F]) {
        self.critic.accumulate_gradient(phi, 0, scale, grad);
    }

    /// Adds `scale * grad_theta ln pi(a | s)` into an actor-shaped buffer.
    pub fn accumulate_log_policy_gradient(
        &self,
        phi: &FeatureVector,
        action: Action,
        scale: F,
        grad: &mut [F],
    ) {
        let probs = self.policy(phi);
        for (o, p) in probs.into_iter().enumerate() {
            let indicator = if o == action.index() {
                F::one()
            } else {
                F::zero()
            };
            self.actor
                .accumulate_gradient(phi, o, scale * (indicator - p), grad);
        }
    }
}

/// Eligibility traces shaped like the critic and actor parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceState<F> {
    pub critic: Vec<F>,
    pub actor: Vec<F>,
}

impl<F: Scalar> TraceState<F> {
    pub fn zeros(model: &ActorCriticModel<F>) -> Self {
        Self {
            critic: vec![F::zero(); model.critic.params().len()],
            actor: vec![F::zero(); model.actor.params().len()],
        }
    }

    pub fn reset(&mut self) {
        self.critic.iter_mut().for_each(|z| *z = F::zero());
        self.actor.iter_mut().for_each(|z| *z = F::zero());
    }

    pub fn is_zero(&self) -> bool {
        self.critic.iter().chain(&self.actor).all(|z| z.is_zero())
    }
}

/// Separate optimizer state for each parameter group.
#[derive(Clone, Debug, PartialEq)]
pub struct AcOptimizer<F> {
    pub critic: Optimizer<F>,
    pub actor: Optimizer<F>,
}

impl<F: Scalar> AcOptimizer<F> {
    pub fn new(model: &ActorCriticModel<F>, config: &AgentConfig) -> Self {
        let make = |n| Optimizer::new(config.optimizer, n, config.rms_beta, config.min_sq_grad);
        Self {
            critic: make(model.critic.params().len()),
            actor: make(model.actor.params().len()),
        }
    }
}

/// Scratch buffers reused across steps.
#[derive(Clone, Debug, Default)]
pub struct AcScratch<F> {
    critic: Vec<F>,
    actor: Vec<F>,
}

/// One online AC(lambda) update. Returns the TD error.
///
/// ```text
/// delta   = r + gamma v(s') - v(s)          (v(s') = 0 at a terminal)
/// z_w     = gamma lambda z_w + grad v(s)
/// z_theta = gamma lambda z_theta + grad ln pi(a | s)
/// ```
///
/// Both parameter groups then take an optimizer step on `-delta * z`.
/// Traces are cleared after a terminal transition.
#[allow(clippy::too_many_arguments)]
pub fn ac_lambda_step<F: Scalar>(
    model: &mut ActorCriticModel<F>,
    traces: &mut TraceState<F>,
    opt: &mut AcOptimizer<F>,
    phi: &FeatureVector,
    action: Action,
    reward: f64,
    next_phi: &FeatureVector,
    terminal: bool,
    config: &AgentConfig,
    scratch: &mut AcScratch<F>,
) -> Result<F, TrainingFault> {
    assert_eq!(
        traces.critic.len(),
        model.critic.params().len(),
        "critic trace shape"
    );
    assert_eq!(
        traces.actor.len(),
        model.actor.params().len(),
        "actor trace shape"
    );
    let gamma = F::lit(config.gamma);
    let decay = gamma * F::lit(config.lambda);

    let v = model.value(phi);
    let v_next = if terminal {
        F::zero()
    } else {
        model.value(next_phi)
    };
    let delta = F::lit(reward) + gamma * v_next - v;

    traces.critic.iter_mut().for_each(|z| *z = decay * *z);
    model.accumulate_value_gradient(phi, F::one(), &mut traces.critic);
    traces.actor.iter_mut().for_each(|z| *z = decay * *z);
    model.accumulate_log_policy_gradient(phi, action, F::one(), &mut traces.actor);

    let alpha = F::lit(config.alpha);
    scratch.critic.clear();
    scratch
        .critic
        .extend(traces.critic.iter().map(|&z| -delta * z));
    opt.critic
        .step(model.critic.params_mut(), &scratch.critic, alpha);
    scratch.actor.clear();
    scratch
        .actor
        .extend(traces.actor.iter().map(|&z| -delta * z));
    opt.actor
        .step(model.actor.params_mut(), &scratch.actor, alpha);

    if terminal {
        traces.reset();
    }
    if !all_finite(model.critic.params()) {
        return Err(TrainingFault::NonFinite { what: "critic" });
    }
    if !all_finite(model.actor.params()) {
        return Err(TrainingFault::NonFinite { what: "actor" });
    }
    Ok(delta)
}

#[derive(Clone, Debug)]
pub struct ActorCriticAgent<F: Scalar> {
    kind: AgentKind,
    config: AgentConfig,
    model: ActorCriticModel<F>,
    traces: TraceState<F>,
    optimizer: AcOptimizer<F>,
    scratch: AcScratch<F>,
    rng: Rng,
}

impl<F: Scalar> ActorCriticAgent<F> {
    pub fn new(kind: AgentKind, config: AgentConfig, n_features: usize, seed: u64) -> Self {
        let model = ActorCriticModel::zeros(n_features);
        Self {
            kind,
            traces: TraceState::zeros(&model),
            optimizer: AcOptimizer::new(&model, &config),
            scratch: AcScratch::default(),
            model,
            config,
            rng: Rng::new(seed),
        }
    }

    pub fn model(&self) -> &ActorCriticModel<F> {
        &self.model
    }

    pub fn traces(&self) -> &TraceState<F> {
        &self.traces
    }
}

impl<F: Scalar> Agent for ActorCriticAgent<F> {
    fn kind(&self) -> AgentKind {
        self.kind
    }

    fn config(&self) -> &AgentConfig {
        &self.config
    }

    fn act(&mut self, phi: &FeatureVector) -> Action {
        let probs = self.model.policy(phi);
        Action::ALL[sample_categorical(&probs, &mut self.rng)]
    }

    fn learn(&mut self, exp: Experience) -> Result<(), TrainingFault> {
        ac_lambda_step(
            &mut self.model,
            &mut self.traces,
            &mut self.optimizer,
            &exp.state,
            exp.action,
            exp.reward,
            &exp.next_state,
            exp.terminal,
            &self.config,
            &mut self.scratch,
        )
        .map(|_| ())
    }

    fn end_episode(&mut self) {
        self.traces.reset();
    }

    fn tensors(&self) -> Vec<Tensor> {
        vec![
            Tensor::from_model("critic", &self.model.critic),
            Tensor::from_model("actor", &self.model.actor),
        ]
    }

    fn load_tensors(&mut self, tensors: &[Tensor]) -> Result<(), CheckpointError> {
        Tensor::find(tensors, "critic")?.copy_into(&mut self.model.critic)?;
        Tensor::find(tensors, "actor")?.copy_into(&mut self.model.actor)?;
        self.traces.reset();
        Ok(())
    }
}
