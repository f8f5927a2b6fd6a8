use minatar_core::{Action, Rng};

use crate::linear::{argmax, LinearModel};
use crate::scalar::Scalar;
use crate::FeatureVector;

/// Uniform over the six actions; one draw per call.
pub fn random_policy(rng: &mut Rng) -> Action {
    Action::ALL[rng.next_below(Action::COUNT as u64) as usize]
}

/// Greedy action under `model` (ties to the lowest code), replaced by a
/// uniform action with probability `epsilon`.
///
/// Always consumes one uniform draw, plus one more when exploring.
pub fn epsilon_greedy<F: Scalar>(
    model: &LinearModel<F>,
    phi: &FeatureVector,
    epsilon: f64,
    rng: &mut Rng,
) -> Action {
    if rng.next_uniform() < epsilon {
        random_policy(rng)
    } else {
        greedy(model, phi)
    }
}

pub fn greedy<F: Scalar>(model: &LinearModel<F>, phi: &FeatureVector) -> Action {
    Action::ALL[argmax(&model.outputs(phi))]
}

/// Samples an index from a probability vector by inversion.
pub fn sample_categorical<F: Scalar>(probs: &[F], rng: &mut Rng) -> usize {
    let u = F::lit(rng.next_uniform());
    let mut acc = F::zero();
    for (i, &p) in probs.iter().enumerate() {
        acc = acc + p;
        if u < acc {
            return i;
        }
    }
    // Rounding left the cumulative sum just under one.
    probs
        .iter()
        .rposition(|&p| p > F::zero())
        .unwrap_or(probs.len() - 1)
}
