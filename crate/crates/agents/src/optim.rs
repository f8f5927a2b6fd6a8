//! Per-parameter step-size adaptation.
//!
//! RMSProp keeps an exponential average of squared gradients,
//!
//! ```text
//! s  <- beta * s + (1 - beta) * g^2
//! s^ =  s / (1 - beta^t)              (initialization bias correction)
//! dp = -alpha * g / sqrt(max(s^, min_sq_grad))
//! ```
//!
//! The optimizer always consumes descent gradients; ascent updates negate
//! their direction before calling it.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    #[default]
    RmsProp,
    Sgd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RmsPropState<F> {
    /// Running average of squared gradients, one per parameter.
    pub sq_avg: Vec<F>,
    /// Number of updates applied.
    pub t: u64,
    beta_pow: F,
}

impl<F: Scalar> RmsPropState<F> {
    pub fn new(n_params: usize) -> Self {
        Self {
            sq_avg: vec![F::zero(); n_params],
            t: 0,
            beta_pow: F::one(),
        }
    }

    /// One update; writes the parameter deltas into `delta`.
    pub fn apply_into(&mut self, grad: &[F], alpha: F, beta: F, min_sq_grad: F, delta: &mut [F]) {
        assert_eq!(grad.len(), self.sq_avg.len(), "gradient shape mismatch");
        assert_eq!(delta.len(), grad.len(), "delta shape mismatch");
        self.t += 1;
        self.beta_pow = self.beta_pow * beta;
        let correction = F::one() / (F::one() - self.beta_pow);
        let one_minus_beta = F::one() - beta;
        let tiny = F::min_positive_value();
        for ((s, &g), d) in self.sq_avg.iter_mut().zip(grad).zip(delta.iter_mut()) {
            *s = beta * *s + one_minus_beta * g * g;
            if *s < tiny {
                *s = F::zero();
            }
            let s_hat = *s * correction;
            *d = -alpha * g / s_hat.max(min_sq_grad).sqrt();
        }
    }

    /// One update, returning the parameter deltas.
    pub fn apply(&mut self, grad: &[F], alpha: F, beta: F, min_sq_grad: F) -> Vec<F> {
        let mut delta = vec![F::zero(); grad.len()];
        self.apply_into(grad, alpha, beta, min_sq_grad, &mut delta);
        delta
    }

    /// One update applied directly to `params`.
    pub fn step(&mut self, params: &mut [F], grad: &[F], alpha: F, beta: F, min_sq_grad: F) {
        assert_eq!(params.len(), grad.len(), "parameter shape mismatch");
        self.t += 1;
        self.beta_pow = self.beta_pow * beta;
        let correction = F::one() / (F::one() - self.beta_pow);
        let one_minus_beta = F::one() - beta;
        let tiny = F::min_positive_value();
        for ((s, &g), p) in self.sq_avg.iter_mut().zip(grad).zip(params.iter_mut()) {
            *s = beta * *s + one_minus_beta * g * g;
            if *s < tiny {
                // Long runs of zero gradients would otherwise decay into
                // subnormals, which are slow and far below min_sq_grad anyway.
                *s = F::zero();
            }
            if g != F::zero() {
                *p = *p - alpha * g / (*s * correction).max(min_sq_grad).sqrt();
            }
        }
    }
}

/// Optimizer selected by configuration.
#[derive(Clone, Debug, PartialEq)]
pub enum Optimizer<F> {
    RmsProp {
        state: RmsPropState<F>,
        beta: F,
        min_sq_grad: F,
    },
    Sgd,
}

impl<F: Scalar> Optimizer<F> {
    pub fn new(kind: OptimizerKind, n_params: usize, beta: f64, min_sq_grad: f64) -> Self {
        match kind {
            OptimizerKind::RmsProp => Optimizer::RmsProp {
                state: RmsPropState::new(n_params),
                beta: F::lit(beta),
                min_sq_grad: F::lit(min_sq_grad),
            },
            OptimizerKind::Sgd => Optimizer::Sgd,
        }
    }

    pub fn step(&mut self, params: &mut [F], grad: &[F], alpha: F) {
        match self {
            Optimizer::RmsProp {
                state,
                beta,
                min_sq_grad,
            } => state.step(params, grad, alpha, *beta, *min_sq_grad),
            Optimizer::Sgd => {
                for (p, &g) in params.iter_mut().zip(grad) {
                    *p = *p - alpha * g;
                }
            }
        }
    }
}
