//! Central finite-difference oracles for the learners' gradients. Shared by
//! the gradient tests and the acceptance suite.

#![allow(dead_code)]

use minatar_agents::{
    q_gradient, td_target, ActorCriticModel, Experience, FeatureVector, LinearModel,
};
use minatar_core::{Action, Rng};

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

pub fn random_phi(rng: &mut Rng, n: usize) -> FeatureVector {
    let active = (0..n as u32).filter(|_| rng.next_bool(0.4)).collect();
    FeatureVector::from_active(n, active)
}

pub fn random_model(rng: &mut Rng, n_in: usize, n_out: usize) -> LinearModel<f64> {
    let params = (0..n_out * (n_in + 1))
        .map(|_| rng.next_uniform() * 2.0 - 1.0)
        .collect();
    LinearModel::from_params(n_in, n_out, params).unwrap()
}

pub fn random_experience(rng: &mut Rng, n: usize) -> Experience {
    Experience {
        state: random_phi(rng, n),
        action: Action::ALL[rng.next_below(6) as usize],
        reward: rng.next_below(2) as f64,
        next_state: random_phi(rng, n),
        terminal: rng.next_bool(0.2),
    }
}

/// Central difference of `f` with respect to each parameter of `model`.
pub fn finite_difference(
    model: &LinearModel<f64>,
    h: f64,
    f: impl Fn(&LinearModel<f64>) -> f64,
) -> Vec<f64> {
    let mut probe = model.clone();
    (0..model.params().len())
        .map(|i| {
            let x = model.params()[i];
            probe.params_mut()[i] = x + h;
            let up = f(&probe);
            probe.params_mut()[i] = x - h;
            let down = f(&probe);
            probe.params_mut()[i] = x;
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn worst(analytic: &[f64], numeric: &[f64]) -> f64 {
    assert_eq!(analytic.len(), numeric.len());
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| rel_err(*a, *n))
        .fold(0.0, f64::max)
}

/// Worst relative error of the minibatch Q-learning gradient over random
/// instances (feature count, batch, discount, weights and targets all drawn).
pub fn q_gradient_error(seed: u64, instances: usize) -> f64 {
    let mut rng = Rng::new(seed);
    let mut max = 0.0f64;
    for _ in 0..instances {
        let n = 2 + rng.next_below(10) as usize;
        let batch_len = 1 + rng.next_below(8) as usize;
        let gamma = rng.next_uniform();
        let model = random_model(&mut rng, n, 6);
        let target = random_model(&mut rng, n, 6);
        let batch: Vec<Experience> = (0..batch_len)
            .map(|_| random_experience(&mut rng, n))
            .collect();
        let refs: Vec<&Experience> = batch.iter().collect();
        let ys: Vec<f64> = batch.iter().map(|e| td_target(&target, e, gamma)).collect();

        let mut grad = vec![0.0; model.params().len()];
        let loss = q_gradient(&model, &ys, &refs, &mut grad);
        let objective = |m: &LinearModel<f64>| {
            batch
                .iter()
                .zip(&ys)
                .map(|(e, y)| 0.5 * (y - m.output(&e.state, e.action.index())).powi(2))
                .sum::<f64>()
                / batch.len() as f64
        };
        max = max.max(rel_err(loss, objective(&model)));
        max = max.max(worst(&grad, &finite_difference(&model, 1e-4, objective)));
    }
    max
}

/// Worst relative error of the actor's log-policy gradient.
pub fn log_policy_gradient_error(seed: u64, instances: usize) -> f64 {
    let mut rng = Rng::new(seed);
    let mut max = 0.0f64;
    for _ in 0..instances {
        let n = 2 + rng.next_below(10) as usize;
        let mut model = ActorCriticModel::<f64>::zeros(n);
        model.actor = random_model(&mut rng, n, 6);
        let phi = random_phi(&mut rng, n);
        let a = Action::ALL[rng.next_below(6) as usize];

        let mut grad = vec![0.0; model.actor.params().len()];
        model.accumulate_log_policy_gradient(&phi, a, 1.0, &mut grad);
        let log_pi = |actor: &LinearModel<f64>| {
            let logits = actor.outputs(&phi);
            let max = logits.iter().copied().fold(f64::MIN, f64::max);
            let lse = max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
            logits[a.index()] - lse
        };
        max = max.max(worst(&grad, &finite_difference(&model.actor, 1e-5, log_pi)));
    }
    max
}

/// Worst relative error of the critic's semi-gradient `-delta * grad v(s)`
/// against the squared TD error with the target held fixed.
pub fn critic_gradient_error(seed: u64, instances: usize) -> f64 {
    let mut rng = Rng::new(seed);
    let mut max = 0.0f64;
    for _ in 0..instances {
        let n = 2 + rng.next_below(10) as usize;
        let mut model = ActorCriticModel::<f64>::zeros(n);
        model.critic = random_model(&mut rng, n, 1);
        let phi = random_phi(&mut rng, n);
        let y = rng.next_uniform() * 4.0 - 2.0;

        let delta = y - model.value(&phi);
        let mut grad = vec![0.0; model.critic.params().len()];
        model.accumulate_value_gradient(&phi, -delta, &mut grad);
        let objective = |c: &LinearModel<f64>| 0.5 * (y - c.output(&phi, 0)).powi(2);
        max = max.max(worst(
            &grad,
            &finite_difference(&model.critic, 1e-4, objective),
        ));
    }
    max
}
