use minatar_core::{Action, Rng};
use thiserror::Error;

use crate::FeatureVector;

/// One stored step `(s, a, r, s', terminal)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Experience {
    pub state: FeatureVector,
    pub action: Action,
    pub reward: f64,
    pub next_state: FeatureVector,
    pub terminal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("replay buffer holds {len} transitions, needs {threshold} before sampling")]
pub struct NotReady {
    pub len: usize,
    pub threshold: usize,
}

/// Fixed-capacity ring of experiences with uniform sampling.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    items: Vec<Experience>,
    capacity: usize,
    cursor: usize,
    fill_threshold: usize,
}

impl ReplayBuffer {
    /// # Panics
    /// If `capacity` is zero.
    pub fn new(capacity: usize, fill_threshold: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            items: Vec::with_capacity(capacity.min(1 << 16)),
            capacity,
            cursor: 0,
            fill_threshold: fill_threshold.max(1),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_ready(&self) -> bool {
        self.items.len() >= self.fill_threshold
    }

    /// Stores an experience, overwriting the oldest one when full.
    pub fn push(&mut self, item: Experience) {
        if self.items.len() < self.capacity {
            self.items.push(item);
        } else {
            self.items[self.cursor] = item;
        }
        self.cursor = (self.cursor + 1) % self.capacity;
    }

    /// Storage slot of the `k`-th draw, uniform with replacement.
    pub fn sample_indices(&self, k: usize, rng: &mut Rng) -> Result<Vec<usize>, NotReady> {
        if !self.is_ready() {
            return Err(NotReady {
                len: self.items.len(),
                threshold: self.fill_threshold,
            });
        }
        let n = self.items.len() as u64;
        Ok((0..k).map(|_| rng.next_below(n) as usize).collect())
    }

    pub fn sample(&self, k: usize, rng: &mut Rng) -> Result<Vec<&Experience>, NotReady> {
        Ok(self
            .sample_indices(k, rng)?
            .into_iter()
            .map(|i| &self.items[i])
            .collect())
    }

    pub fn get(&self, slot: usize) -> Option<&Experience> {
        self.items.get(slot)
    }

    /// Items from oldest to newest.
    pub fn iter(&self) -> impl Iterator<Item = &Experience> {
        let split = if self.items.len() < self.capacity {
            0
        } else {
            self.cursor
        };
        self.items[split..].iter().chain(&self.items[..split])
    }
}
