//! Linear Q-learning with optional experience replay and target parameters.

use minatar_core::{Action, Rng};

use crate::agent::{Agent, TrainingFault};
use crate::checkpoint::{CheckpointError, Tensor};
use crate::config::{AgentConfig, AgentKind};
use crate::linear::LinearModel;
use crate::optim::Optimizer;
use crate::policy::epsilon_greedy;
use crate::replay::{Experience, ReplayBuffer};
use crate::scalar::{all_finite, Scalar};
use crate::FeatureVector;

/// TD target `r + gamma * max_a Q_target(s', a)`, or `r` at a terminal.
pub fn td_target<F: Scalar>(target: &LinearModel<F>, exp: &Experience, gamma: F) -> F {
    let r = F::lit(exp.reward);
    if exp.terminal {
        return r;
    }
    let best = (0..target.n_out())
        .map(|o| target.output(&exp.next_state, o))
        .fold(F::neg_infinity(), F::max);
    r + gamma * best
}

/// Writes the batch-mean gradient of `0.5 * (y - Q(s, a))^2` with respect to
/// the parameters of `model` into `grad`, holding each `y` fixed. Returns the
/// mean loss.
pub fn q_gradient<F: Scalar>(
    model: &LinearModel<F>,
    targets: &[F],
    batch: &[&Experience],
    grad: &mut [F],
) -> F {
    assert!(!batch.is_empty(), "empty batch");
    assert_eq!(targets.len(), batch.len());
    grad.iter_mut().for_each(|g| *g = F::zero());
    let scale = F::one() / F::lit(batch.len() as f64);
    let mut loss = F::zero();
    for (exp, &y) in batch.iter().zip(targets) {
        let a = exp.action.index();
        let err = y - model.output(&exp.state, a);
        loss = loss + F::lit(0.5) * err * err;
        model.accumulate_gradient(&exp.state, a, -err * scale, grad);
    }
    loss * scale
}

/// One optimizer step on a minibatch. Pass `target = None` to bootstrap from
/// `model` itself.
pub fn q_update<F: Scalar>(
    model: &mut LinearModel<F>,
    target: Option<&LinearModel<F>>,
    batch: &[&Experience],
    config: &AgentConfig,
    opt: &mut Optimizer<F>,
    grad: &mut [F],
) -> Result<F, TrainingFault> {
    let gamma = F::lit(config.gamma);
    let bootstrap = target.unwrap_or(model);
    let targets: Vec<F> = batch
        .iter()
        .map(|e| td_target(bootstrap, e, gamma))
        .collect();
    let loss = q_gradient(model, &targets, batch, grad);
    opt.step(model.params_mut(), grad, F::lit(config.alpha));
    if all_finite(model.params()) {
        Ok(loss)
    } else {
        Err(TrainingFault::NonFinite {
            what: "action values",
        })
    }
}

/// Epsilon-greedy linear Q-learning agent (replay and target both optional).
#[derive(Clone, Debug)]
pub struct QAgent<F: Scalar> {
    kind: AgentKind,
    config: AgentConfig,
    model: LinearModel<F>,
    target: Option<LinearModel<F>>,
    optimizer: Optimizer<F>,
    buffer: Option<ReplayBuffer>,
    rng: Rng,
    grad: Vec<F>,
    frames: u64,
    learn_steps: u64,
    updates: u64,
}

impl<F: Scalar> QAgent<F> {
    pub fn new(kind: AgentKind, config: AgentConfig, n_features: usize, seed: u64) -> Self {
        let model = LinearModel::zeros(n_features, Action::COUNT);
        let n_params = model.params().len();
        Self {
            kind,
            target: config.use_target.then(|| model.clone()),
            buffer: config
                .use_replay
                .then(|| ReplayBuffer::new(config.replay_capacity, config.replay_fill)),
            optimizer: Optimizer::new(
                config.optimizer,
                n_params,
                config.rms_beta,
                config.min_sq_grad,
            ),
            grad: vec![F::zero(); n_params],
            model,
            config,
            rng: Rng::new(seed),
            frames: 0,
            learn_steps: 0,
            updates: 0,
        }
    }

    pub fn model(&self) -> &LinearModel<F> {
        &self.model
    }

    pub fn target_model(&self) -> Option<&LinearModel<F>> {
        self.target.as_ref()
    }

    pub fn buffer(&self) -> Option<&ReplayBuffer> {
        self.buffer.as_ref()
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn epsilon(&self) -> f64 {
        self.config.epsilon(self.frames)
    }
}

impl<F: Scalar> Agent for QAgent<F> {
    fn kind(&self) -> AgentKind {
        self.kind
    }

    fn config(&self) -> &AgentConfig {
        &self.config
    }

    fn act(&mut self, phi: &FeatureVector) -> Action {
        let eps = self.epsilon();
        self.frames += 1;
        epsilon_greedy(&self.model, phi, eps, &mut self.rng)
    }

    fn learn(&mut self, exp: Experience) -> Result<(), TrainingFault> {
        self.learn_steps += 1;
        let result = match &mut self.buffer {
            Some(buffer) => {
                buffer.push(exp);
                match buffer.sample_indices(self.config.batch_size, &mut self.rng) {
                    Ok(slots) => {
                        let batch: Vec<&Experience> = slots
                            .iter()
                            .map(|&i| buffer.get(i).expect("sampled slot"))
                            .collect();
                        Some(q_update(
                            &mut self.model,
                            self.target.as_ref(),
                            &batch,
                            &self.config,
                            &mut self.optimizer,
                            &mut self.grad,
                        ))
                    }
                    Err(_) => None,
                }
            }
            None => Some(q_update(
                &mut self.model,
                self.target.as_ref(),
                &[&exp],
                &self.config,
                &mut self.optimizer,
                &mut self.grad,
            )),
        };
        if let Some(result) = result {
            result?;
            self.updates += 1;
        }
        if let Some(target) = &mut self.target {
            if self.learn_steps.is_multiple_of(self.config.target_period) {
                target.params_mut().copy_from_slice(self.model.params());
            }
        }
        Ok(())
    }

    fn tensors(&self) -> Vec<Tensor> {
        let mut out = vec![Tensor::from_model("q", &self.model)];
        if let Some(t) = &self.target {
            out.push(Tensor::from_model("q_target", t));
        }
        out
    }

    fn load_tensors(&mut self, tensors: &[Tensor]) -> Result<(), CheckpointError> {
        Tensor::find(tensors, "q")?.copy_into(&mut self.model)?;
        if let Some(t) = &mut self.target {
            Tensor::find(tensors, "q_target")?.copy_into(t)?;
        }
        Ok(())
    }
}
