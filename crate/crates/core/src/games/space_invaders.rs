use crate::game::{Game, GameId, StepOutcome};
use crate::games::{Heading, MAX};
use crate::{Action, BinaryObservation, Rng};

const CANNON: usize = 0;
const ALIEN: usize = 1;
const ALIEN_LEFT: usize = 2;
const ALIEN_RIGHT: usize = 3;
const FRIENDLY_BULLET: usize = 4;
const ENEMY_BULLET: usize = 5;

pub const INITIAL_WAVE_INTERVAL: u32 = 12;
pub const MIN_WAVE_INTERVAL: u32 = 6;
pub const SHOT_COOLDOWN: u32 = 5;
pub const ENEMY_FIRE_PERIOD: u32 = 10;
const CANNON_ROW: i32 = MAX;

/// Cannon on the bottom row against a rigid block of aliens that sweeps
/// sideways, steps down at the edges and speeds up as it thins out.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceInvadersState {
    pub cannon_col: i32,
    pub aliens: [[bool; 10]; 10],
    pub alien_dir: Heading,
    pub alien_move_timer: u32,
    /// Frames per block move for a full block in the current wave.
    pub wave_interval: u32,
    pub wave_index: u32,
    /// `(row, col)` of bullets travelling up.
    pub friendly_bullets: Vec<(i32, i32)>,
    /// `(row, col)` of bullets travelling down.
    pub enemy_bullets: Vec<(i32, i32)>,
    pub player_shot_cooldown: u32,
    pub enemy_shot_timer: u32,
    pub ramping: bool,
    pub terminal: bool,
}

pub fn initial_block() -> [[bool; 10]; 10] {
    let mut map = [[false; 10]; 10];
    for row in map.iter_mut().take(5).skip(1) {
        row[2..8].fill(true);
    }
    map
}

impl SpaceInvadersState {
    pub fn alien_count(&self) -> u32 {
        self.aliens.iter().flatten().filter(|&&a| a).count() as u32
    }

    /// Frames between block moves: the wave speed, sped up to one move per
    /// remaining alien once fewer aliens than that are left.
    pub fn effective_interval(&self) -> u32 {
        self.wave_interval.min(self.alien_count()).max(1)
    }

    /// Moves the block one cell sideways, or one row down with a direction
    /// flip when any alien would leave the grid. Returns `true` when the
    /// block is already on the bottom row and cannot step down.
    pub fn shift_block(&mut self) -> bool {
        let dx = self.alien_dir.dx();
        let blocked = self.aliens.iter().any(|row| {
            row.iter()
                .enumerate()
                .any(|(c, &a)| a && !(0..=MAX).contains(&(c as i32 + dx)))
        });
        if blocked {
            if self.aliens[MAX as usize].iter().any(|&a| a) {
                return true;
            }
            self.aliens.rotate_right(1);
            self.alien_dir = self.alien_dir.flipped();
        } else {
            for row in self.aliens.iter_mut() {
                if dx > 0 {
                    row.rotate_right(1);
                } else {
                    row.rotate_left(1);
                }
            }
        }
        false
    }

    fn strike_aliens(&mut self) -> u32 {
        let aliens = &mut self.aliens;
        let before = self.friendly_bullets.len();
        self.friendly_bullets.retain(|&(r, c)| {
            let cell = &mut aliens[r as usize][c as usize];
            let hit = *cell;
            *cell = false;
            !hit
        });
        (before - self.friendly_bullets.len()) as u32
    }

    fn cannon_hit(&self) -> bool {
        let cannon = (CANNON_ROW, self.cannon_col);
        self.aliens[CANNON_ROW as usize][self.cannon_col as usize]
            || self.enemy_bullets.contains(&cannon)
    }

    /// Picks a uniformly random occupied column; its lowest alien fires.
    fn enemy_fire(&mut self, rng: &mut Rng) {
        let columns: Vec<usize> = (0..10)
            .filter(|&c| self.aliens.iter().any(|row| row[c]))
            .collect();
        if let Some(&col) = rng.next_choice(&columns) {
            let bottom = (0..10).rev().find(|&r| self.aliens[r][col]).unwrap_or(0) as i32;
            if bottom < MAX {
                self.enemy_bullets.push((bottom + 1, col as i32));
            }
        }
    }

    fn new_wave(&mut self) {
        self.aliens = initial_block();
        self.alien_dir = Heading::Right;
        if self.ramping {
            self.wave_interval = self.wave_interval.saturating_sub(1).max(MIN_WAVE_INTERVAL);
        }
        self.wave_index += 1;
        self.alien_move_timer = self.effective_interval();
    }
}

impl Game for SpaceInvadersState {
    const ID: GameId = GameId::SpaceInvaders;
    const CHANNELS: &'static [&'static str] = &[
        "cannon",
        "alien",
        "alien_left",
        "alien_right",
        "friendly_bullet",
        "enemy_bullet",
    ];

    fn reset(_rng: &mut Rng, ramping: bool) -> Self {
        Self {
            cannon_col: 4,
            aliens: initial_block(),
            alien_dir: Heading::Right,
            alien_move_timer: INITIAL_WAVE_INTERVAL,
            wave_interval: INITIAL_WAVE_INTERVAL,
            wave_index: 0,
            friendly_bullets: Vec::new(),
            enemy_bullets: Vec::new(),
            player_shot_cooldown: 0,
            enemy_shot_timer: ENEMY_FIRE_PERIOD,
            ramping,
            terminal: false,
        }
    }

    fn step(&mut self, action: Action, rng: &mut Rng) -> StepOutcome {
        let mut reward = 0.0;
        self.player_shot_cooldown = self.player_shot_cooldown.saturating_sub(1);
        match action {
            Action::Left => self.cannon_col = (self.cannon_col - 1).max(0),
            Action::Right => self.cannon_col = (self.cannon_col + 1).min(MAX),
            _ => {}
        }
        if self.cannon_hit() {
            self.terminal = true;
            return StepOutcome::new(reward, true);
        }

        self.friendly_bullets.retain_mut(|b| {
            b.0 -= 1;
            b.0 >= 0
        });
        self.enemy_bullets.retain_mut(|b| {
            b.0 += 1;
            b.0 <= MAX
        });
        // A new shot appears just above the cannon and starts moving next frame.
        if action == Action::Fire && self.player_shot_cooldown == 0 {
            self.friendly_bullets
                .push((CANNON_ROW - 1, self.cannon_col));
            self.player_shot_cooldown = SHOT_COOLDOWN;
        }
        reward += f64::from(self.strike_aliens());

        if self.alien_count() > 0 {
            let interval = self.effective_interval();
            self.alien_move_timer = self.alien_move_timer.min(interval) - 1;
            if self.alien_move_timer == 0 {
                self.alien_move_timer = interval;
                if self.shift_block() {
                    self.terminal = true;
                    return StepOutcome::new(reward, true);
                }
                reward += f64::from(self.strike_aliens());
            }
        }

        self.enemy_shot_timer -= 1;
        if self.enemy_shot_timer == 0 {
            self.enemy_shot_timer = ENEMY_FIRE_PERIOD;
            self.enemy_fire(rng);
        }

        if self.cannon_hit() {
            self.terminal = true;
        } else if self.alien_count() == 0 {
            self.new_wave();
        }
        StepOutcome::new(reward, self.terminal)
    }

    fn render(&self, obs: &mut BinaryObservation) {
        obs.set(CANNON_ROW as usize, self.cannon_col as usize, CANNON);
        let dir_channel = match self.alien_dir {
            Heading::Left => ALIEN_LEFT,
            Heading::Right => ALIEN_RIGHT,
        };
        for (r, row) in self.aliens.iter().enumerate() {
            for (c, &a) in row.iter().enumerate() {
                if a {
                    obs.set(r, c, ALIEN);
                    obs.set(r, c, dir_channel);
                }
            }
        }
        for &(r, c) in &self.friendly_bullets {
            obs.set(r as usize, c as usize, FRIENDLY_BULLET);
        }
        for &(r, c) in &self.enemy_bullets {
            obs.set(r as usize, c as usize, ENEMY_BULLET);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fresh() -> SpaceInvadersState {
        SpaceInvadersState::reset(&mut Rng::new(0), true)
    }

    #[test]
    fn reset_block() {
        let s = fresh();
        assert_eq!(s.alien_count(), 24);
        let obs = s.observe();
        assert_eq!(obs.channel_count(ALIEN_RIGHT), 24);
        assert_eq!(obs.channel_count(ALIEN_LEFT), 0);
        assert_eq!(
            obs.channel_count(FRIENDLY_BULLET) + obs.channel_count(ENEMY_BULLET),
            0
        );
        assert_eq!(obs.channel_cells(CANNON), vec![(9, 4)]);
    }

    #[test]
    fn single_alien_moves_every_frame() {
        let mut s = fresh();
        s.aliens = [[false; 10]; 10];
        s.aliens[2][3] = true;
        assert_eq!(s.effective_interval(), 1);
        let mut rng = Rng::new(0);
        for expected_col in 4..=6 {
            s.step(Action::NoOp, &mut rng);
            assert!(s.aliens[2][expected_col as usize]);
        }
    }

    #[test]
    fn edge_steps_down_and_flips() {
        let mut s = fresh();
        s.aliens = [[false; 10]; 10];
        s.aliens[1][9] = true;
        s.aliens[2][5] = true;
        assert!(!s.shift_block());
        assert!(s.aliens[2][9] && s.aliens[3][5]);
        assert_eq!(s.alien_dir, Heading::Left);
    }

    #[test]
    fn shot_kills_alien() {
        let mut s = fresh();
        s.friendly_bullets.push((5, 3));
        s.alien_move_timer = 100;
        let out = s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!(out.reward, 1.0);
        assert!(!s.aliens[4][3]);
        assert!(s.friendly_bullets.is_empty());
        assert_eq!(s.alien_count(), 23);
    }

    #[test]
    fn fire_cooldown() {
        let mut s = fresh();
        s.aliens = [[false; 10]; 10];
        s.aliens[0][0] = true;
        s.alien_move_timer = 1000;
        s.wave_interval = 1000;
        let mut rng = Rng::new(0);
        let mut shots = 0;
        for _ in 0..10 {
            s.step(Action::Fire, &mut rng);
            if s.friendly_bullets.contains(&(8, 4)) {
                shots += 1;
            }
        }
        assert_eq!(shots, 2);
    }

    #[test]
    fn enemy_bullet_kills_cannon() {
        let mut s = fresh();
        s.enemy_bullets.push((8, 4));
        assert!(s.step(Action::NoOp, &mut Rng::new(0)).terminal);
    }

    #[test]
    fn wave_respawn_ramps() {
        let mut s = fresh();
        s.aliens = [[false; 10]; 10];
        s.aliens[5][5] = true;
        s.friendly_bullets.push((6, 5));
        let out = s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!(out.reward, 1.0);
        assert_eq!(s.alien_count(), 24);
        assert_eq!(s.wave_index, 1);
        assert_eq!(s.wave_interval, INITIAL_WAVE_INTERVAL - 1);

        let mut s = fresh();
        s.ramping = false;
        s.aliens = [[false; 10]; 10];
        s.aliens[5][5] = true;
        s.friendly_bullets.push((6, 5));
        s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!(s.wave_interval, INITIAL_WAVE_INTERVAL);
        assert_eq!(s.wave_index, 1);
    }

    #[test]
    fn wave_interval_floor() {
        let mut s = fresh();
        s.wave_interval = MIN_WAVE_INTERVAL;
        s.new_wave();
        assert_eq!(s.wave_interval, MIN_WAVE_INTERVAL);
    }

    #[test]
    fn invasion_terminates() {
        let mut s = fresh();
        s.aliens = [[false; 10]; 10];
        s.aliens[9][9] = true;
        s.cannon_col = 0;
        assert!(s.shift_block());
    }
}
