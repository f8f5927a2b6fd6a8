//! The five game state machines.
//!
//! Every state struct exposes its fields so tests and tools can stage
//! specific situations; the invariants each game maintains are listed on the
//! type.

pub mod asterix;
pub mod breakout;
pub mod freeway;
pub mod seaquest;
pub mod space_invaders;

pub use asterix::{AsterixEntity, AsterixState};
pub use breakout::BreakoutState;
pub use freeway::{Car, FreewayState};
pub use seaquest::{Diver, Enemy, EnemyKind, SeaquestBullet, SeaquestState};
pub use space_invaders::SpaceInvadersState;

use crate::observation::GRID;

pub(crate) const MAX: i32 = GRID as i32 - 1;

#[inline]
pub(crate) fn on_grid(row: i32, col: i32) -> bool {
    (0..=MAX).contains(&row) && (0..=MAX).contains(&col)
}

/// Horizontal direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Heading {
    Left,
    Right,
}

impl Heading {
    pub fn dx(self) -> i32 {
        match self {
            Heading::Left => -1,
            Heading::Right => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Heading::Left => Heading::Right,
            Heading::Right => Heading::Left,
        }
    }

    /// Heading of an entity entering from `side`: 0 enters at column 0
    /// moving right, anything else enters at column 9 moving left.
    pub(crate) fn from_side(side: u64) -> (i32, Heading) {
        if side == 0 {
            (0, Heading::Right)
        } else {
            (MAX, Heading::Left)
        }
    }
}
