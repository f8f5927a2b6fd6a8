use serde::{Deserialize, Serialize};

/// Side length of every game grid.
pub const GRID: usize = 10;

/// A `10 x 10 x n` boolean tensor, stored row-major over `(row, col, channel)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryObservation {
    channel_names: &'static [&'static str],
    cells: Vec<u8>,
}

/// One active cell in the sparse encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActiveCell {
    pub channel: u8,
    pub row: u8,
    pub col: u8,
}

/// JSON manifest describing a packed observation buffer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationManifest {
    pub shape: [usize; 3],
    pub channels: Vec<String>,
    pub layout: String,
    pub bit_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PackError {
    #[error("packed buffer has {got} bytes, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("padding bits past the last cell must be zero")]
    Padding,
}

impl BinaryObservation {
    pub fn new(channel_names: &'static [&'static str]) -> Self {
        Self {
            channel_names,
            cells: vec![0; GRID * GRID * channel_names.len()],
        }
    }

    pub fn channel_names(&self) -> &'static [&'static str] {
        self.channel_names
    }

    pub fn n_channels(&self) -> usize {
        self.channel_names.len()
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (GRID, GRID, self.n_channels())
    }

    #[inline]
    fn index(&self, row: usize, col: usize, channel: usize) -> usize {
        debug_assert!(row < GRID && col < GRID && channel < self.n_channels());
        (row * GRID + col) * self.n_channels() + channel
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> bool {
        self.cells[self.index(row, col, channel)] != 0
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, channel: usize) {
        let i = self.index(row, col, channel);
        self.cells[i] = 1;
    }

    pub fn clear(&mut self) {
        self.cells.fill(0);
    }

    /// Flat 0/1 values in layout order.
    pub fn as_flat(&self) -> &[u8] {
        &self.cells
    }

    /// Flat indices of the active entries, ascending.
    pub fn active_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| (v != 0).then_some(i))
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channel_names.iter().position(|&n| n == name)
    }

    /// Number of active cells in one channel.
    pub fn channel_count(&self, channel: usize) -> usize {
        (0..GRID * GRID)
            .filter(|cell| self.cells[cell * self.n_channels() + channel] != 0)
            .count()
    }

    /// Active-cell count of a channel looked up by name.
    ///
    /// # Panics
    /// If the game has no such channel.
    pub fn count(&self, name: &str) -> usize {
        let ch = self
            .channel_index(name)
            .unwrap_or_else(|| panic!("no channel named {name:?}"));
        self.channel_count(ch)
    }

    /// Cells of one channel as `(row, col)` pairs in row-major order.
    pub fn channel_cells(&self, channel: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in 0..GRID {
            for col in 0..GRID {
                if self.get(row, col, channel) {
                    out.push((row, col));
                }
            }
        }
        out
    }

    /// Sparse encoding sorted by `(channel, row, col)`.
    pub fn sparse(&self) -> Vec<ActiveCell> {
        let n = self.n_channels();
        let mut out: Vec<ActiveCell> = self
            .active_indices()
            .map(|i| ActiveCell {
                channel: (i % n) as u8,
                row: (i / n / GRID) as u8,
                col: (i / n % GRID) as u8,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn from_sparse(
        channel_names: &'static [&'static str],
        cells: &[ActiveCell],
    ) -> Option<Self> {
        let mut obs = Self::new(channel_names);
        for c in cells {
            let (ch, row, col) = (
                usize::from(c.channel),
                usize::from(c.row),
                usize::from(c.col),
            );
            if ch >= obs.n_channels() || row >= GRID || col >= GRID {
                return None;
            }
            obs.set(row, col, ch);
        }
        Some(obs)
    }

    /// Bit-packed buffer: flat entry `i` is bit `i % 8` (least significant
    /// first) of byte `i / 8`; trailing padding bits are zero.
    pub fn pack(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.cells.len().div_ceil(8)];
        for i in self.active_indices() {
            out[i / 8] |= 1 << (i % 8);
        }
        out
    }

    pub fn unpack(channel_names: &'static [&'static str], bytes: &[u8]) -> Result<Self, PackError> {
        let mut obs = Self::new(channel_names);
        let len = obs.cells.len();
        let expected = len.div_ceil(8);
        if bytes.len() != expected {
            return Err(PackError::Length {
                got: bytes.len(),
                expected,
            });
        }
        for (i, cell) in obs.cells.iter_mut().enumerate() {
            *cell = (bytes[i / 8] >> (i % 8)) & 1;
        }
        let used_bits = len % 8;
        if used_bits != 0 && bytes[expected - 1] >> used_bits != 0 {
            return Err(PackError::Padding);
        }
        Ok(obs)
    }

    pub fn manifest(&self) -> ObservationManifest {
        ObservationManifest {
            shape: [GRID, GRID, self.n_channels()],
            channels: self.channel_names.iter().map(|s| s.to_string()).collect(),
            layout: "row-major (row, col, channel)".to_string(),
            bit_order: "lsb-first".to_string(),
        }
    }
}
