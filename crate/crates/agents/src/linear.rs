use crate::scalar::Scalar;
use crate::FeatureVector;

/// `n_out` linear units over a binary feature vector, each with a bias.
///
/// Parameters are stored output-major; unit `o` owns the contiguous slice
/// `[o * (n_in + 1), (o + 1) * (n_in + 1))` whose last entry is its bias,
/// so the bias behaves like an always-on feature.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearModel<F> {
    n_in: usize,
    n_out: usize,
    params: Vec<F>,
}

impl<F: Scalar> LinearModel<F> {
    pub fn zeros(n_in: usize, n_out: usize) -> Self {
        Self {
            n_in,
            n_out,
            params: vec![F::zero(); n_out * (n_in + 1)],
        }
    }

    pub fn from_params(n_in: usize, n_out: usize, params: Vec<F>) -> Option<Self> {
        (params.len() == n_out * (n_in + 1)).then_some(Self {
            n_in,
            n_out,
            params,
        })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn params(&self) -> &[F] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [F] {
        &mut self.params
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.n_in + 1
    }

    #[inline]
    pub fn weight_index(&self, out: usize, feature: usize) -> usize {
        out * self.stride() + feature
    }

    #[inline]
    pub fn bias_index(&self, out: usize) -> usize {
        out * self.stride() + self.n_in
    }

    pub fn output(&self, phi: &FeatureVector, out: usize) -> F {
        debug_assert_eq!(phi.len(), self.n_in);
        let row = &self.params[out * self.stride()..(out + 1) * self.stride()];
        phi.active()
            .iter()
            .fold(row[self.n_in], |acc, &i| acc + row[i as usize])
    }

    pub fn outputs(&self, phi: &FeatureVector) -> Vec<F> {
        (0..self.n_out).map(|o| self.output(phi, o)).collect()
    }

    /// Adds `scale * d output_o / d params` (the feature vector plus bias)
    /// into a gradient buffer of the same layout.
    pub fn accumulate_gradient(&self, phi: &FeatureVector, out: usize, scale: F, grad: &mut [F]) {
        let base = out * self.stride();
        for &i in phi.active() {
            grad[base + i as usize] = grad[base + i as usize] + scale;
        }
        grad[base + self.n_in] = grad[base + self.n_in] + scale;
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax<F: Scalar>(values: &[F]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Numerically stable softmax.
pub fn softmax<F: Scalar>(logits: &[F]) -> Vec<F> {
    let max = logits.iter().copied().fold(F::neg_infinity(), F::max);
    let exps: Vec<F> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: F = exps.iter().copied().sum();
    exps.into_iter().map(|e| e / total).collect()
}
