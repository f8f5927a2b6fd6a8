use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::game::{GameId, GameState, StepOutcome, UnknownGame};
use crate::{Action, BinaryObservation, Rng};

pub const DEFAULT_STICKY_PROB: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    pub game: GameId,
    pub seed: u64,
    #[serde(default = "default_sticky")]
    pub sticky_prob: f64,
    #[serde(default = "default_ramping")]
    pub ramping: bool,
}

fn default_sticky() -> f64 {
    DEFAULT_STICKY_PROB
}

fn default_ramping() -> bool {
    true
}

impl EnvConfig {
    pub fn new(game: GameId, seed: u64) -> Self {
        Self {
            game,
            seed,
            sticky_prob: DEFAULT_STICKY_PROB,
            ramping: true,
        }
    }

    /// Builds a config from a game name, rejecting unknown games.
    pub fn parse(game: &str, seed: u64) -> Result<Self, EnvError> {
        Ok(Self::new(game.parse()?, seed))
    }

    pub fn with_sticky(mut self, sticky_prob: f64) -> Self {
        self.sticky_prob = sticky_prob;
        self
    }

    pub fn with_ramping(mut self, ramping: bool) -> Self {
        self.ramping = ramping;
        self
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        if !(0.0..=1.0).contains(&self.sticky_prob) {
            return Err(EnvError::InvalidSticky(self.sticky_prob));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnvError {
    #[error(transparent)]
    UnknownGame(#[from] UnknownGame),
    #[error("sticky probability {0} is outside [0, 1]")]
    InvalidSticky(f64),
    #[error("episode is over; call reset before acting")]
    EpisodeOver,
}

/// Result of one `act` call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub requested: Action,
    pub executed: Action,
    pub reward: f64,
    pub terminal: bool,
}

/// A running environment: one game plus sticky actions and the episode
/// bookkeeping.
///
/// Every frame draws the sticky-action uniform first, then whatever the game
/// draws. `reset` draws one `u64` from the current stream and reseeds from
/// it, so a whole multi-episode run is fixed by the creation seed.
#[derive(Clone, Debug)]
pub struct EnvSession {
    config: EnvConfig,
    rng: Rng,
    last_action: Action,
    frame_count: u64,
    game: GameState,
    terminal: bool,
}

impl EnvSession {
    pub fn new(config: EnvConfig) -> Result<Self, EnvError> {
        config.validate()?;
        let mut rng = Rng::new(config.seed);
        let game = GameState::reset(config.game, &mut rng, config.ramping);
        Ok(Self {
            config,
            rng,
            last_action: Action::NoOp,
            frame_count: 0,
            game,
            terminal: false,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn game_id(&self) -> GameId {
        self.config.game
    }

    pub fn channel_names(&self) -> &'static [&'static str] {
        self.config.game.channel_names()
    }

    pub fn frame_count(&self) -> u64 {
        self.frame_count
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal
    }

    pub fn last_action(&self) -> Action {
        self.last_action
    }

    pub fn game(&self) -> &GameState {
        &self.game
    }

    /// Direct access to the game state for staging scenarios.
    pub fn game_mut(&mut self) -> &mut GameState {
        &mut self.game
    }

    pub fn act(&mut self, action: Action) -> Result<Transition, EnvError> {
        if self.terminal {
            return Err(EnvError::EpisodeOver);
        }
        let u = self.rng.next_uniform();
        let executed = if u < self.config.sticky_prob {
            self.last_action
        } else {
            action
        };
        self.last_action = executed;
        let StepOutcome { reward, terminal } = self.game.step(executed, &mut self.rng);
        self.frame_count += 1;
        self.terminal = terminal;
        Ok(Transition {
            requested: action,
            executed,
            reward,
            terminal,
        })
    }

    pub fn observe(&self) -> BinaryObservation {
        self.game.observe()
    }

    /// Renders into a caller-owned buffer, avoiding an allocation per frame.
    pub fn observe_into(&self, obs: &mut BinaryObservation) {
        debug_assert_eq!(obs.channel_names(), self.channel_names());
        obs.clear();
        self.game.render(obs);
    }

    pub fn reset(&mut self) {
        let seed = self.rng.next_u64();
        self.rng = Rng::new(seed);
        self.game = GameState::reset(self.config.game, &mut self.rng, self.config.ramping);
        self.last_action = Action::NoOp;
        self.frame_count = 0;
        self.terminal = false;
    }

    /// Hash of the complete mutable state.
    pub fn state_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.rng.hash(&mut h);
        self.last_action.hash(&mut h);
        self.frame_count.hash(&mut h);
        self.game.hash(&mut h);
        self.terminal.hash(&mut h);
        h.finish()
    }
}
