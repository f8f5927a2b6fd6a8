//! Miniature Atari environments on a 10x10 grid.
//!
//! Each game exposes a `10 x 10 x n` binary observation whose channels carry
//! a fixed meaning (ball, paddle, brick, ...). Sessions add sticky actions on
//! top of the game state machines and are fully reproducible from a seed.
//!
//! ```
//! use minatar_core::{Action, EnvConfig, EnvSession, GameId};
//!
//! let mut env = EnvSession::new(EnvConfig::new(GameId::Breakout, 42)).unwrap();
//! let step = env.act(Action::Left).unwrap();
//! assert!(step.reward >= 0.0);
//! assert_eq!(env.observe().shape(), (10, 10, 4));
//! ```

mod action;
mod game;
pub mod games;
mod observation;
pub mod replay;
mod rng;
mod session;

pub use action::{Action, InvalidAction};
pub use game::{channel_names, Game, GameId, GameState, StepOutcome, UnknownGame};
pub use observation::{ActiveCell, BinaryObservation, ObservationManifest, PackError, GRID};
pub use rng::{mix, Rng};
pub use session::{EnvConfig, EnvError, EnvSession, Transition, DEFAULT_STICKY_PROB};
