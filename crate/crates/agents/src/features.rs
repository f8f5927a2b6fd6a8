use minatar_core::BinaryObservation;

/// Flattened binary observation, kept as the sorted list of active entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FeatureVector {
    active: Vec<u32>,
    len: usize,
}

impl FeatureVector {
    pub fn from_observation(obs: &BinaryObservation) -> Self {
        Self {
            active: obs.active_indices().map(|i| i as u32).collect(),
            len: obs.as_flat().len(),
        }
    }

    /// # Panics
    /// If an index is out of range.
    pub fn from_active(len: usize, mut active: Vec<u32>) -> Self {
        active.sort_unstable();
        active.dedup();
        assert!(
            active.iter().all(|&i| (i as usize) < len),
            "feature index out of range"
        );
        Self { active, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn active(&self) -> &[u32] {
        &self.active
    }

    pub fn to_dense(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len];
        for &i in &self.active {
            out[i as usize] = 1;
        }
        out
    }
}
