use crate::game::{Game, GameId, StepOutcome};
use crate::games::{on_grid, Heading, MAX};
use crate::{Action, BinaryObservation, Rng};

const SUB_FRONT: usize = 0;
const SUB_BACK: usize = 1;
const FRIENDLY_BULLET: usize = 2;
const TRAIL: usize = 3;
const ENEMY_BULLET: usize = 4;
const ENEMY_FISH: usize = 5;
const ENEMY_SUB: usize = 6;
const OXYGEN_GAUGE: usize = 7;
const DIVER_GAUGE: usize = 8;
const DIVER: usize = 9;

/// Lowest row the submarine and other entities may occupy; row 9 holds the gauges.
pub const SEA_FLOOR: i32 = 8;
pub const GAUGE_ROW: usize = 9;
pub const MAX_OXYGEN: u32 = 10;
pub const OXYGEN_PERIOD: u32 = 10;
pub const MAX_DIVERS: u32 = 6;
pub const SUB_FIRE_PERIOD: u32 = 10;
pub const ENEMY_SPAWN_INTERVAL: u32 = 20;
pub const DIVER_SPAWN_INTERVAL: u32 = 30;
pub const ENEMY_MOVE_INTERVAL: u32 = 5;
pub const DIVER_MOVE_INTERVAL: u32 = 5;
/// Upper bound of a single frame's reward; only reachable when strikes land
/// on the same frame as a full-oxygen surfacing bonus.
pub const MAX_FRAME_REWARD: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnemyKind {
    Fish,
    Sub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Enemy {
    pub pos: (i32, i32),
    pub heading: Heading,
    pub kind: EnemyKind,
    pub move_timer: u32,
    pub shot_timer: u32,
    pub shots_fired: u32,
    pub trail: Option<(i32, i32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Diver {
    pub pos: (i32, i32),
    pub heading: Heading,
    pub move_timer: u32,
    pub trail: Option<(i32, i32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeaquestBullet {
    pub pos: (i32, i32),
    pub heading: Heading,
}

impl SeaquestBullet {
    fn advance(&mut self) -> bool {
        self.pos.1 += self.heading.dx();
        on_grid(self.pos.0, self.pos.1)
    }
}

/// Two-cell submarine that shoots enemies, rescues divers and must surface
/// for oxygen.
///
/// Invariants: `diver_count <= 6`, `oxygen <= 10`, and every gameplay entity
/// stays in rows 0 to 8.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeaquestState {
    /// Front cell `(row, col)`.
    pub player: (i32, i32),
    pub facing: Heading,
    pub diver_count: u32,
    pub oxygen: u32,
    pub oxygen_timer: u32,
    pub friendly_bullets: Vec<SeaquestBullet>,
    pub enemy_bullets: Vec<SeaquestBullet>,
    pub enemies: Vec<Enemy>,
    pub divers: Vec<Diver>,
    pub enemy_spawn_timer: u32,
    pub diver_spawn_timer: u32,
    pub spawn_interval: u32,
    pub enemy_move_interval: u32,
    /// Number of completed surfacings.
    pub difficulty: u32,
    pub surfaced: bool,
    pub ramping: bool,
    pub terminal: bool,
}

impl SeaquestState {
    /// Back cell: one step behind the front, clamped into the grid. `None`
    /// when clamping folds it onto the front cell.
    pub fn back(&self) -> Option<(i32, i32)> {
        let col = (self.player.1 - self.facing.dx()).clamp(0, MAX);
        (col != self.player.1).then_some((self.player.0, col))
    }

    fn occupies(&self, pos: (i32, i32)) -> bool {
        pos == self.player || Some(pos) == self.back()
    }

    fn player_hit(&self) -> bool {
        self.enemies.iter().any(|e| self.occupies(e.pos))
            || self.enemy_bullets.iter().any(|b| self.occupies(b.pos))
    }

    /// Removes every friendly bullet sharing a cell with an enemy, along with
    /// that enemy. Returns the number of enemies struck.
    fn strike_enemies(&mut self) -> u32 {
        let mut hits = 0;
        let enemies = &mut self.enemies;
        self.friendly_bullets.retain(|b| {
            if let Some(i) = enemies.iter().position(|e| e.pos == b.pos) {
                enemies.remove(i);
                hits += 1;
                false
            } else {
                true
            }
        });
        hits
    }

    fn move_player(&mut self, action: Action) {
        let (row, col) = self.player;
        match action {
            Action::Up => self.player.0 = (row - 1).max(0),
            Action::Down => self.player.0 = (row + 1).min(SEA_FLOOR),
            Action::Left => {
                self.player.1 = (col - 1).max(0);
                self.facing = Heading::Left;
            }
            Action::Right => {
                self.player.1 = (col + 1).min(MAX);
                self.facing = Heading::Right;
            }
            Action::Fire => self.friendly_bullets.push(SeaquestBullet {
                pos: self.player,
                heading: self.facing,
            }),
            Action::NoOp => {}
        }
    }

    fn move_entities(&mut self) {
        let interval = self.enemy_move_interval;
        let new_bullets = &mut self.enemy_bullets;
        self.enemies.retain_mut(|e| {
            e.trail = None;
            e.move_timer -= 1;
            if e.move_timer == 0 {
                e.move_timer = interval;
                e.trail = Some(e.pos);
                e.pos.1 += e.heading.dx();
                if !on_grid(e.pos.0, e.pos.1) {
                    return false;
                }
            }
            if e.kind == EnemyKind::Sub {
                e.shot_timer -= 1;
                if e.shot_timer == 0 {
                    e.shot_timer = SUB_FIRE_PERIOD;
                    e.shots_fired += 1;
                    new_bullets.push(SeaquestBullet {
                        pos: e.pos,
                        heading: e.heading,
                    });
                }
            }
            true
        });
        self.divers.retain_mut(|d| {
            d.trail = None;
            d.move_timer -= 1;
            if d.move_timer == 0 {
                d.move_timer = DIVER_MOVE_INTERVAL;
                d.trail = Some(d.pos);
                d.pos.1 += d.heading.dx();
            }
            on_grid(d.pos.0, d.pos.1)
        });
    }

    /// Enemy spawn draws side, row, then kind; diver spawn draws side, row.
    fn spawn(&mut self, rng: &mut Rng) {
        self.enemy_spawn_timer -= 1;
        if self.enemy_spawn_timer == 0 {
            self.enemy_spawn_timer = self.spawn_interval;
            let (col, heading) = Heading::from_side(rng.next_below(2));
            let row = 1 + rng.next_below(8) as i32;
            let kind = if rng.next_below(3) == 0 {
                EnemyKind::Sub
            } else {
                EnemyKind::Fish
            };
            self.enemies.push(Enemy {
                pos: (row, col),
                heading,
                kind,
                move_timer: self.enemy_move_interval,
                shot_timer: SUB_FIRE_PERIOD,
                shots_fired: 0,
                trail: None,
            });
        }
        self.diver_spawn_timer -= 1;
        if self.diver_spawn_timer == 0 {
            self.diver_spawn_timer = DIVER_SPAWN_INTERVAL;
            let (col, heading) = Heading::from_side(rng.next_below(2));
            let row = 1 + rng.next_below(8) as i32;
            self.divers.push(Diver {
                pos: (row, col),
                heading,
                move_timer: DIVER_MOVE_INTERVAL,
                trail: None,
            });
        }
    }

    fn surface(&mut self, reward: &mut f64) {
        match self.diver_count {
            0 => {
                self.terminal = true;
                return;
            }
            MAX_DIVERS => {
                *reward += f64::from(self.oxygen);
                self.diver_count = 0;
            }
            _ => self.diver_count -= 1,
        }
        self.oxygen = MAX_OXYGEN;
        self.oxygen_timer = OXYGEN_PERIOD;
        self.difficulty += 1;
        if self.ramping {
            self.spawn_interval = self.spawn_interval.saturating_sub(1).max(1);
            self.enemy_move_interval = self.enemy_move_interval.saturating_sub(1).max(1);
        }
    }
}

impl Game for SeaquestState {
    const ID: GameId = GameId::Seaquest;
    const CHANNELS: &'static [&'static str] = &[
        "sub_front",
        "sub_back",
        "friendly_bullet",
        "trail",
        "enemy_bullet",
        "enemy_fish",
        "enemy_sub",
        "oxygen_gauge",
        "diver_gauge",
        "diver",
    ];

    fn reset(_rng: &mut Rng, ramping: bool) -> Self {
        Self {
            player: (4, 4),
            facing: Heading::Right,
            diver_count: 0,
            oxygen: MAX_OXYGEN,
            oxygen_timer: OXYGEN_PERIOD,
            friendly_bullets: Vec::new(),
            enemy_bullets: Vec::new(),
            enemies: Vec::new(),
            divers: Vec::new(),
            enemy_spawn_timer: ENEMY_SPAWN_INTERVAL,
            diver_spawn_timer: DIVER_SPAWN_INTERVAL,
            spawn_interval: ENEMY_SPAWN_INTERVAL,
            enemy_move_interval: ENEMY_MOVE_INTERVAL,
            difficulty: 0,
            surfaced: false,
            ramping,
            terminal: false,
        }
    }

    fn step(&mut self, action: Action, rng: &mut Rng) -> StepOutcome {
        let mut out = self.advance(action, rng);
        out.reward = out.reward.min(MAX_FRAME_REWARD);
        out
    }

    fn render(&self, obs: &mut BinaryObservation) {
        self.draw(obs)
    }
}

impl SeaquestState {
    fn advance(&mut self, action: Action, rng: &mut Rng) -> StepOutcome {
        let mut reward = 0.0;

        self.move_player(action);
        if self.player_hit() {
            self.terminal = true;
            return StepOutcome::new(reward, true);
        }

        self.friendly_bullets.retain_mut(SeaquestBullet::advance);
        self.enemy_bullets.retain_mut(SeaquestBullet::advance);
        reward += f64::from(self.strike_enemies());

        self.move_entities();
        reward += f64::from(self.strike_enemies());

        self.spawn(rng);

        let before = self.divers.len();
        let (front, back) = (self.player, self.back());
        self.divers
            .retain(|d| d.pos != front && Some(d.pos) != back);
        let rescued = (before - self.divers.len()) as u32;
        self.diver_count = (self.diver_count + rescued).min(MAX_DIVERS);

        if self.player.0 > 0 {
            self.oxygen_timer -= 1;
            if self.oxygen_timer == 0 {
                self.oxygen_timer = OXYGEN_PERIOD;
                self.oxygen = self.oxygen.saturating_sub(1);
                if self.oxygen == 0 {
                    self.terminal = true;
                    return StepOutcome::new(reward, true);
                }
            }
            self.surfaced = false;
        } else if !self.surfaced {
            self.surfaced = true;
            self.surface(&mut reward);
            if self.terminal {
                return StepOutcome::new(reward, true);
            }
        }

        if self.player_hit() {
            self.terminal = true;
        }
        StepOutcome::new(reward, self.terminal)
    }

    fn draw(&self, obs: &mut BinaryObservation) {
        let set = |obs: &mut BinaryObservation, (r, c): (i32, i32), ch| {
            obs.set(r as usize, c as usize, ch)
        };
        set(obs, self.player, SUB_FRONT);
        if let Some(back) = self.back() {
            set(obs, back, SUB_BACK);
        }
        for b in &self.friendly_bullets {
            set(obs, b.pos, FRIENDLY_BULLET);
        }
        for b in &self.enemy_bullets {
            set(obs, b.pos, ENEMY_BULLET);
        }
        for e in &self.enemies {
            let ch = match e.kind {
                EnemyKind::Fish => ENEMY_FISH,
                EnemyKind::Sub => ENEMY_SUB,
            };
            set(obs, e.pos, ch);
            if let Some(t) = e.trail {
                set(obs, t, TRAIL);
            }
        }
        for d in &self.divers {
            set(obs, d.pos, DIVER);
            if let Some(t) = d.trail {
                set(obs, t, TRAIL);
            }
        }
        for col in 0..self.oxygen as usize {
            obs.set(GAUGE_ROW, col, OXYGEN_GAUGE);
        }
        for col in (10 - self.diver_count as usize)..10 {
            obs.set(GAUGE_ROW, col, DIVER_GAUGE);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fresh() -> SeaquestState {
        SeaquestState::reset(&mut Rng::new(0), true)
    }

    fn fish(pos: (i32, i32), heading: Heading) -> Enemy {
        Enemy {
            pos,
            heading,
            kind: EnemyKind::Fish,
            move_timer: 100,
            shot_timer: SUB_FIRE_PERIOD,
            shots_fired: 0,
            trail: None,
        }
    }

    #[test]
    fn reset_gauges() {
        let obs = fresh().observe();
        assert_eq!(
            obs.channel_cells(OXYGEN_GAUGE),
            (0..10).map(|c| (9, c)).collect::<Vec<_>>()
        );
        assert_eq!(obs.channel_count(DIVER_GAUGE), 0);
        assert_eq!(
            obs.channel_count(ENEMY_FISH) + obs.channel_count(ENEMY_SUB),
            0
        );
        assert_eq!(obs.channel_cells(SUB_FRONT), vec![(4, 4)]);
        assert_eq!(obs.channel_cells(SUB_BACK), vec![(4, 3)]);
    }

    #[test]
    fn surfacing_with_six_divers_pays_oxygen() {
        let mut s = fresh();
        s.player = (1, 4);
        s.diver_count = 6;
        s.oxygen = 7;
        let out = s.step(Action::Up, &mut Rng::new(0));
        assert_eq!(out, StepOutcome::new(7.0, false));
        assert_eq!(s.diver_count, 0);
        assert_eq!(s.oxygen, MAX_OXYGEN);
        assert_eq!(s.difficulty, 1);
        assert_eq!(s.spawn_interval, ENEMY_SPAWN_INTERVAL - 1);
        assert_eq!(s.enemy_move_interval, ENEMY_MOVE_INTERVAL - 1);
    }

    #[test]
    fn surfacing_without_divers_terminates() {
        let mut s = fresh();
        s.player = (1, 4);
        assert!(s.step(Action::Up, &mut Rng::new(0)).terminal);
    }

    #[test]
    fn surfacing_with_few_divers_removes_one() {
        let mut s = fresh();
        s.player = (1, 4);
        s.diver_count = 3;
        s.oxygen = 2;
        let out = s.step(Action::Up, &mut Rng::new(0));
        assert_eq!(out.reward, 0.0);
        assert_eq!(s.diver_count, 2);
        assert_eq!(s.oxygen, 10);
        // Staying on the surface does not trigger again.
        s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!((s.diver_count, s.difficulty), (2, 1));
    }

    #[test]
    fn ramp_respects_switch() {
        let mut s = fresh();
        s.ramping = false;
        s.player = (1, 4);
        s.diver_count = 2;
        s.step(Action::Up, &mut Rng::new(0));
        assert_eq!(s.difficulty, 1);
        assert_eq!(s.spawn_interval, ENEMY_SPAWN_INTERVAL);
    }

    #[test]
    fn bullet_strikes_fish() {
        let mut s = fresh();
        s.enemies.push(fish((4, 6), Heading::Left));
        let out = s.step(Action::Fire, &mut Rng::new(0));
        assert_eq!(out.reward, 0.0);
        assert_eq!(s.friendly_bullets[0].pos, (4, 5));
        let out = s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!(out, StepOutcome::new(1.0, false));
        assert!(s.enemies.is_empty() && s.friendly_bullets.is_empty());
    }

    #[test]
    fn fish_moving_onto_bullet_is_struck() {
        let mut s = fresh();
        s.friendly_bullets.push(SeaquestBullet {
            pos: (2, 3),
            heading: Heading::Right,
        });
        let mut f = fish((2, 5), Heading::Left);
        f.move_timer = 1;
        s.enemies.push(f);
        let out = s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!(out.reward, 1.0);
    }

    #[test]
    fn oxygen_runs_out() {
        let mut s = fresh();
        s.oxygen = 1;
        s.oxygen_timer = 1;
        assert!(s.step(Action::NoOp, &mut Rng::new(0)).terminal);
        assert_eq!(s.oxygen, 0);
    }

    #[test]
    fn contact_with_fish_terminates() {
        let mut s = fresh();
        s.enemies.push(fish((4, 5), Heading::Left));
        assert!(s.step(Action::Right, &mut Rng::new(0)).terminal);
        let mut s = fresh();
        // Back cell counts too.
        s.enemies.push(fish((4, 3), Heading::Left));
        assert!(s.step(Action::NoOp, &mut Rng::new(0)).terminal);
    }

    #[test]
    fn subs_fire_fish_do_not() {
        let mut s = fresh();
        s.player = (8, 0);
        let mut sub = fish((2, 5), Heading::Left);
        sub.kind = EnemyKind::Sub;
        sub.shot_timer = 1;
        s.enemies.push(sub);
        let mut f = fish((3, 5), Heading::Left);
        f.shot_timer = 1;
        s.enemies.push(f);
        s.step(Action::NoOp, &mut Rng::new(0));
        assert_eq!(s.enemy_bullets.len(), 1);
        assert_eq!(s.enemy_bullets[0].pos, (2, 5));
        assert_eq!(s.enemies[1].shots_fired, 0);
    }

    #[test]
    fn pickup_caps_at_six() {
        let mut s = fresh();
        s.diver_count = 6;
        s.divers.push(Diver {
            pos: (4, 5),
            heading: Heading::Left,
            move_timer: 100,
            trail: None,
        });
        s.step(Action::Right, &mut Rng::new(0));
        assert!(s.divers.is_empty());
        assert_eq!(s.diver_count, 6);
        let obs = s.observe();
        assert_eq!(
            obs.channel_cells(DIVER_GAUGE),
            (4..10).map(|c| (9, c)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn back_cell_folds_at_wall() {
        let mut s = fresh();
        s.player = (3, 0);
        s.facing = Heading::Right;
        assert_eq!(s.back(), None);
        s.facing = Heading::Left;
        assert_eq!(s.back(), Some((3, 1)));
    }
}
