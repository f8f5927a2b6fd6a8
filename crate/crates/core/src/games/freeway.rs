use crate::game::{Game, GameId, StepOutcome};
use crate::games::MAX;
use crate::{Action, BinaryObservation, Rng};

const CHICKEN: usize = 0;
const CAR: usize = 1;
const SPEED1: usize = 2;

pub const CHICKEN_COL: i32 = 4;
pub const EPISODE_FRAMES: u32 = 2500;
pub const MOVE_COOLDOWN: u32 = 2;
pub const MAX_PERIOD: u64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Car {
    pub col: i32,
    /// `-1` or `+1`.
    pub dir: i32,
    /// Frames per move, 1 to 5.
    pub period: u32,
    pub timer: u32,
}

impl Car {
    fn random(rng: &mut Rng) -> Self {
        let col = rng.next_below(10) as i32;
        let dir = if rng.next_below(2) == 0 { -1 } else { 1 };
        let period = rng.next_below(MAX_PERIOD) as u32 + 1;
        Self {
            col,
            dir,
            period,
            timer: period,
        }
    }

    /// Cell the car just left, wrapping around the screen edge.
    pub fn trail_col(&self) -> i32 {
        (self.col - self.dir).rem_euclid(10)
    }
}

/// Chicken crossing eight lanes of wrapping traffic; fixed 2500-frame episodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreewayState {
    pub chicken_row: i32,
    pub move_cooldown: u32,
    /// Car `i` drives on row `i + 1`.
    pub cars: [Car; 8],
    pub frame_count: u32,
    pub terminal: bool,
}

impl FreewayState {
    /// Draws every car in row order, three draws per car: column, direction,
    /// period.
    pub fn randomize_cars(&mut self, rng: &mut Rng) {
        for car in self.cars.iter_mut() {
            *car = Car::random(rng);
        }
    }

    fn hit(&self) -> bool {
        (1..=8).contains(&self.chicken_row)
            && self.cars[(self.chicken_row - 1) as usize].col == CHICKEN_COL
    }
}

impl Game for FreewayState {
    const ID: GameId = GameId::Freeway;
    const CHANNELS: &'static [&'static str] = &[
        "chicken", "car", "speed1", "speed2", "speed3", "speed4", "speed5",
    ];

    fn reset(rng: &mut Rng, _ramping: bool) -> Self {
        let placeholder = Car {
            col: 0,
            dir: 1,
            period: 1,
            timer: 1,
        };
        let mut state = Self {
            chicken_row: MAX,
            move_cooldown: 0,
            cars: [placeholder; 8],
            frame_count: 0,
            terminal: false,
        };
        state.randomize_cars(rng);
        state
    }

    fn step(&mut self, action: Action, rng: &mut Rng) -> StepOutcome {
        let mut reward = 0.0;
        if self.move_cooldown > 0 {
            self.move_cooldown -= 1;
        } else if matches!(action, Action::Up | Action::Down) {
            self.chicken_row = (self.chicken_row + action.delta().0).clamp(0, MAX);
            self.move_cooldown = MOVE_COOLDOWN;
        }

        for car in self.cars.iter_mut() {
            car.timer -= 1;
            if car.timer == 0 {
                car.timer = car.period;
                car.col = (car.col + car.dir).rem_euclid(10);
            }
        }

        if self.hit() {
            self.chicken_row = MAX;
        }
        if self.chicken_row == 0 {
            reward = 1.0;
            self.chicken_row = MAX;
            self.randomize_cars(rng);
            if self.hit() {
                self.chicken_row = MAX;
            }
        }

        self.frame_count += 1;
        self.terminal = self.frame_count >= EPISODE_FRAMES;
        StepOutcome::new(reward, self.terminal)
    }

    fn render(&self, obs: &mut BinaryObservation) {
        obs.set(self.chicken_row as usize, CHICKEN_COL as usize, CHICKEN);
        for (i, car) in self.cars.iter().enumerate() {
            let row = i + 1;
            obs.set(row, car.col as usize, CAR);
            obs.set(
                row,
                car.trail_col() as usize,
                SPEED1 + car.period as usize - 1,
            );
        }
    }
}
