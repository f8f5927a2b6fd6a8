use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::games::{AsterixState, BreakoutState, FreewayState, SeaquestState, SpaceInvadersState};
use crate::{Action, BinaryObservation, Rng};

/// Result of advancing a game by one frame.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct StepOutcome {
    pub reward: f64,
    pub terminal: bool,
}

impl StepOutcome {
    pub fn new(reward: f64, terminal: bool) -> Self {
        Self { reward, terminal }
    }
}

/// A single-life game state machine on the 10x10 grid.
///
/// `step` is only called on non-terminal states; every random draw it makes
/// goes through the supplied [`Rng`] in a fixed order.
pub trait Game: Clone + fmt::Debug {
    const ID: GameId;
    const CHANNELS: &'static [&'static str];

    fn reset(rng: &mut Rng, ramping: bool) -> Self;

    fn step(&mut self, action: Action, rng: &mut Rng) -> StepOutcome;

    /// Writes the active cells into a cleared observation.
    fn render(&self, obs: &mut BinaryObservation);

    fn observe(&self) -> BinaryObservation {
        let mut obs = BinaryObservation::new(Self::CHANNELS);
        self.render(&mut obs);
        obs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameId {
    Asterix,
    Breakout,
    Freeway,
    Seaquest,
    SpaceInvaders,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown game {0:?}")]
pub struct UnknownGame(pub String);

impl GameId {
    pub const ALL: [GameId; 5] = [
        GameId::Asterix,
        GameId::Breakout,
        GameId::Freeway,
        GameId::Seaquest,
        GameId::SpaceInvaders,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameId::Asterix => "asterix",
            GameId::Breakout => "breakout",
            GameId::Freeway => "freeway",
            GameId::Seaquest => "seaquest",
            GameId::SpaceInvaders => "space_invaders",
        }
    }

    pub fn channel_names(self) -> &'static [&'static str] {
        match self {
            GameId::Asterix => AsterixState::CHANNELS,
            GameId::Breakout => BreakoutState::CHANNELS,
            GameId::Freeway => FreewayState::CHANNELS,
            GameId::Seaquest => SeaquestState::CHANNELS,
            GameId::SpaceInvaders => SpaceInvadersState::CHANNELS,
        }
    }

    pub fn n_channels(self) -> usize {
        self.channel_names().len()
    }

    /// Whether the game has an in-episode difficulty ramp.
    pub fn has_ramp(self) -> bool {
        matches!(
            self,
            GameId::Asterix | GameId::Seaquest | GameId::SpaceInvaders
        )
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameId {
    type Err = UnknownGame;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        match normalized.as_str() {
            "asterix" => Ok(GameId::Asterix),
            "breakout" => Ok(GameId::Breakout),
            "freeway" => Ok(GameId::Freeway),
            "seaquest" => Ok(GameId::Seaquest),
            "space_invaders" | "spaceinvaders" => Ok(GameId::SpaceInvaders),
            _ => Err(UnknownGame(s.to_string())),
        }
    }
}

/// Ordered channel names of a game given by name.
pub fn channel_names(game: &str) -> Result<&'static [&'static str], UnknownGame> {
    Ok(game.parse::<GameId>()?.channel_names())
}

/// Type-erased state of any of the five games.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GameState {
    Asterix(AsterixState),
    Breakout(BreakoutState),
    Freeway(FreewayState),
    Seaquest(SeaquestState),
    SpaceInvaders(SpaceInvadersState),
}

macro_rules! dispatch {
    ($self:expr, $g:ident => $body:expr) => {
        match $self {
            GameState::Asterix($g) => $body,
            GameState::Breakout($g) => $body,
            GameState::Freeway($g) => $body,
            GameState::Seaquest($g) => $body,
            GameState::SpaceInvaders($g) => $body,
        }
    };
}

impl GameState {
    pub fn reset(id: GameId, rng: &mut Rng, ramping: bool) -> Self {
        match id {
            GameId::Asterix => GameState::Asterix(AsterixState::reset(rng, ramping)),
            GameId::Breakout => GameState::Breakout(BreakoutState::reset(rng, ramping)),
            GameId::Freeway => GameState::Freeway(FreewayState::reset(rng, ramping)),
            GameId::Seaquest => GameState::Seaquest(SeaquestState::reset(rng, ramping)),
            GameId::SpaceInvaders => {
                GameState::SpaceInvaders(SpaceInvadersState::reset(rng, ramping))
            }
        }
    }

    pub fn id(&self) -> GameId {
        match self {
            GameState::Asterix(_) => GameId::Asterix,
            GameState::Breakout(_) => GameId::Breakout,
            GameState::Freeway(_) => GameId::Freeway,
            GameState::Seaquest(_) => GameId::Seaquest,
            GameState::SpaceInvaders(_) => GameId::SpaceInvaders,
        }
    }

    pub fn step(&mut self, action: Action, rng: &mut Rng) -> StepOutcome {
        dispatch!(self, g => g.step(action, rng))
    }

    pub fn render(&self, obs: &mut BinaryObservation) {
        dispatch!(self, g => g.render(obs))
    }

    pub fn observe(&self) -> BinaryObservation {
        dispatch!(self, g => g.observe())
    }
}
