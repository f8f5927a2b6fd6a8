use crate::game::{Game, GameId, StepOutcome};
use crate::games::{on_grid, MAX};
use crate::{Action, BinaryObservation, Rng};

const PADDLE: usize = 0;
const BALL: usize = 1;
const TRAIL: usize = 2;
const BRICK: usize = 3;

const BRICK_ROWS: std::ops::RangeInclusive<usize> = 1..=3;
pub const FULL_BRICKS: usize = 30;

/// Paddle on the bottom row, one diagonally moving ball and three rows of
/// bricks that refill once cleared.
///
/// Between refills the ball never sits inside an active brick; on the frame
/// the last brick breaks the rows are restored in full even if the ball is
/// currently inside them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BreakoutState {
    pub paddle_col: i32,
    /// `(row, col)`.
    pub ball: (i32, i32),
    /// `(d_row, d_col)`, each component `+1` or `-1`.
    pub ball_dir: (i32, i32),
    pub last_ball: (i32, i32),
    pub bricks: [[bool; 10]; 10],
    pub terminal: bool,
}

impl BreakoutState {
    pub fn brick_count(&self) -> usize {
        self.bricks.iter().flatten().filter(|&&b| b).count()
    }

    pub fn fill_bricks(&mut self) {
        for row in BRICK_ROWS {
            self.bricks[row] = [true; 10];
        }
    }

    /// A state with no bricks, used to stage kinematics scenarios.
    pub fn empty(ball: (i32, i32), ball_dir: (i32, i32), paddle_col: i32) -> Self {
        Self {
            paddle_col,
            ball,
            ball_dir,
            last_ball: ball,
            bricks: [[false; 10]; 10],
            terminal: false,
        }
    }
}

impl Game for BreakoutState {
    const ID: GameId = GameId::Breakout;
    const CHANNELS: &'static [&'static str] = &["paddle", "ball", "trail", "brick"];

    fn reset(rng: &mut Rng, _ramping: bool) -> Self {
        let (ball, ball_dir) = if rng.next_below(2) == 0 {
            ((4, 0), (1, 1))
        } else {
            ((4, MAX), (1, -1))
        };
        let mut state = Self::empty(ball, ball_dir, 4);
        state.fill_bricks();
        state
    }

    fn step(&mut self, action: Action, _rng: &mut Rng) -> StepOutcome {
        match action {
            Action::Left => self.paddle_col = (self.paddle_col - 1).max(0),
            Action::Right => self.paddle_col = (self.paddle_col + 1).min(MAX),
            _ => {}
        }

        self.last_ball = self.ball;
        let (row, col) = self.ball;
        let (mut d_row, mut d_col) = self.ball_dir;

        // Walls first, then bricks or paddle at the reflected target.
        let mut new_col = col + d_col;
        if !(0..=MAX).contains(&new_col) {
            d_col = -d_col;
            new_col = col + d_col;
        }
        let mut new_row = row + d_row;
        if new_row < 0 {
            d_row = -d_row;
            new_row = row + d_row;
        }
        debug_assert!(on_grid(new_row, new_col));

        let mut reward = 0.0;
        let brick = &mut self.bricks[new_row as usize][new_col as usize];
        if *brick {
            *brick = false;
            reward = 1.0;
            d_row = -d_row;
            if self.brick_count() == 0 {
                self.fill_bricks();
            }
        } else if new_row == MAX {
            if new_col == self.paddle_col {
                let side = (new_col - self.paddle_col).signum();
                d_col = if side != 0 { side } else { -d_col };
                d_row = -1;
            } else {
                self.ball = (new_row, new_col);
                self.terminal = true;
            }
        } else {
            self.ball = (new_row, new_col);
        }
        self.ball_dir = (d_row, d_col);
        StepOutcome::new(reward, self.terminal)
    }

    fn render(&self, obs: &mut BinaryObservation) {
        obs.set(MAX as usize, self.paddle_col as usize, PADDLE);
        obs.set(self.ball.0 as usize, self.ball.1 as usize, BALL);
        obs.set(self.last_ball.0 as usize, self.last_ball.1 as usize, TRAIL);
        for (r, row) in self.bricks.iter().enumerate() {
            for (c, &b) in row.iter().enumerate() {
                if b {
                    obs.set(r, c, BRICK);
                }
            }
        }
    }
}
