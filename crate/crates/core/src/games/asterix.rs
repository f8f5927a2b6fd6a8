use crate::game::{Game, GameId, StepOutcome};
use crate::games::{Heading, MAX};
use crate::{Action, BinaryObservation, Rng};

const PLAYER: usize = 0;
const ENEMY: usize = 1;
const TRAIL: usize = 2;
const GOLD: usize = 3;

pub const LANES: usize = 8;
pub const SPAWN_INTERVAL: u32 = 10;
pub const MOVE_INTERVAL: u32 = 5;
pub const RAMP_PERIOD: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AsterixEntity {
    pub col: i32,
    pub heading: Heading,
    pub gold: bool,
    /// Column left behind on a frame the entity moved.
    pub trail: Option<i32>,
}

/// Free-moving player dodging enemies and collecting gold that cross the
/// screen horizontally in eight lanes (rows 1 to 8).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AsterixState {
    /// `(row, col)`.
    pub player: (i32, i32),
    /// Lane `i` is grid row `i + 1`.
    pub lanes: [Option<AsterixEntity>; LANES],
    pub spawn_timer: u32,
    pub move_timer: u32,
    pub spawn_interval: u32,
    pub move_interval: u32,
    pub ramp_timer: u32,
    pub ramp_index: u32,
    pub ramping: bool,
    pub terminal: bool,
}

impl AsterixState {
    pub fn entity_count(&self) -> usize {
        self.lanes.iter().flatten().count()
    }

    /// Spawn attempt: picks a uniformly random empty lane, then a side, then
    /// whether the entity is gold (probability 1/3). Consumes no draws when
    /// every lane is occupied.
    pub fn try_spawn(&mut self, rng: &mut Rng) -> Option<usize> {
        let empty: Vec<usize> = (0..LANES).filter(|&i| self.lanes[i].is_none()).collect();
        let &lane = rng.next_choice(&empty)?;
        let (col, heading) = Heading::from_side(rng.next_below(2));
        let gold = rng.next_below(3) == 0;
        self.lanes[lane] = Some(AsterixEntity {
            col,
            heading,
            gold,
            trail: None,
        });
        Some(lane)
    }

    fn lane_of_row(row: i32) -> Option<usize> {
        (1..=LANES as i32)
            .contains(&row)
            .then(|| (row - 1) as usize)
    }

    /// Resolves player contact: gold is collected, an enemy ends the game.
    /// At most one gold is collected per frame; a second one stays put until
    /// the next frame.
    fn resolve_contact(&mut self, reward: &mut f64) {
        let (row, col) = self.player;
        let Some(lane) = Self::lane_of_row(row) else {
            return;
        };
        if let Some(e) = self.lanes[lane] {
            if e.col == col {
                if e.gold {
                    if *reward > 0.0 {
                        return;
                    }
                    *reward = 1.0;
                    self.lanes[lane] = None;
                } else {
                    self.terminal = true;
                }
            }
        }
    }

    fn advance_entities(&mut self, fresh: Option<usize>) {
        for (i, slot) in self.lanes.iter_mut().enumerate() {
            if Some(i) == fresh {
                continue;
            }
            if let Some(e) = slot {
                e.trail = Some(e.col);
                e.col += e.heading.dx();
                if !(0..=MAX).contains(&e.col) {
                    *slot = None;
                }
            }
        }
    }

    fn ramp(&mut self) {
        self.ramp_timer -= 1;
        if self.ramp_timer == 0 {
            self.ramp_timer = RAMP_PERIOD;
            if self.ramp_index.is_multiple_of(2) {
                self.spawn_interval = self.spawn_interval.saturating_sub(1).max(1);
            } else {
                self.move_interval = self.move_interval.saturating_sub(1).max(1);
            }
            self.ramp_index += 1;
        }
    }
}

impl Game for AsterixState {
    const ID: GameId = GameId::Asterix;
    const CHANNELS: &'static [&'static str] = &["player", "enemy", "trail", "gold"];

    fn reset(_rng: &mut Rng, ramping: bool) -> Self {
        Self {
            player: (5, 5),
            lanes: [None; LANES],
            spawn_timer: SPAWN_INTERVAL,
            move_timer: MOVE_INTERVAL,
            spawn_interval: SPAWN_INTERVAL,
            move_interval: MOVE_INTERVAL,
            ramp_timer: RAMP_PERIOD,
            ramp_index: 0,
            ramping,
            terminal: false,
        }
    }

    fn step(&mut self, action: Action, rng: &mut Rng) -> StepOutcome {
        let mut reward = 0.0;
        let (dr, dc) = action.delta();
        self.player = (
            (self.player.0 + dr).clamp(0, MAX),
            (self.player.1 + dc).clamp(0, MAX),
        );
        self.resolve_contact(&mut reward);
        if self.terminal {
            return StepOutcome::new(reward, true);
        }

        for e in self.lanes.iter_mut().flatten() {
            e.trail = None;
        }

        self.spawn_timer -= 1;
        let mut fresh = None;
        if self.spawn_timer == 0 {
            self.spawn_timer = self.spawn_interval;
            fresh = self.try_spawn(rng);
        }

        self.move_timer -= 1;
        if self.move_timer == 0 {
            self.move_timer = self.move_interval;
            self.advance_entities(fresh);
        }

        self.resolve_contact(&mut reward);

        if self.ramping {
            self.ramp();
        }
        StepOutcome::new(reward, self.terminal)
    }

    fn render(&self, obs: &mut BinaryObservation) {
        obs.set(self.player.0 as usize, self.player.1 as usize, PLAYER);
        for (lane, e) in self.lanes.iter().enumerate() {
            if let Some(e) = e {
                let row = lane + 1;
                obs.set(row, e.col as usize, if e.gold { GOLD } else { ENEMY });
                if let Some(t) = e.trail {
                    obs.set(row, t as usize, TRAIL);
                }
            }
        }
    }
}
