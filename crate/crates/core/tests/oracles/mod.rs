//! Brute-force reference simulators, written independently of the game
//! modules. Shared by the kinematics tests and the acceptance suite.

#![allow(dead_code, clippy::needless_range_loop)]

use minatar_core::games::{BreakoutState, SpaceInvadersState};
use minatar_core::{Action, Game, Rng};

/// Mirror a coordinate that stepped one cell outside `0..=9` back inside.
fn mirror(x: i32) -> (i32, bool) {
    if x < 0 {
        (-x, true)
    } else if x > 9 {
        (18 - x, true)
    } else {
        (x, false)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BreakoutExpectation {
    pub ball: (i32, i32),
    pub dir: (i32, i32),
    pub paddle: i32,
    pub reward: f64,
    pub terminal: bool,
    pub bricks: [[bool; 10]; 10],
}

/// Reference single step for Breakout.
pub fn breakout_reference(
    ball: (i32, i32),
    dir: (i32, i32),
    paddle: i32,
    action: Action,
    bricks: &[[bool; 10]; 10],
) -> BreakoutExpectation {
    let paddle = match action {
        Action::Left if paddle > 0 => paddle - 1,
        Action::Right if paddle < 9 => paddle + 1,
        _ => paddle,
    };
    let (tc, flip_c) = mirror(ball.1 + dir.1);
    let dc = if flip_c { -dir.1 } else { dir.1 };
    // Only the ceiling reflects vertically; the floor is handled below.
    let raw_row = ball.0 + dir.0;
    let (tr, flip_r) = if raw_row < 0 {
        mirror(raw_row)
    } else {
        (raw_row, false)
    };
    let dr = if flip_r { -dir.0 } else { dir.0 };

    let mut bricks = *bricks;
    if bricks[tr as usize][tc as usize] {
        bricks[tr as usize][tc as usize] = false;
        if bricks.iter().flatten().all(|b| !b) {
            for row in 1..=3 {
                bricks[row] = [true; 10];
            }
        }
        return BreakoutExpectation {
            ball,
            dir: (-dr, dc),
            paddle,
            reward: 1.0,
            terminal: false,
            bricks,
        };
    }
    if tr == 9 {
        if tc == paddle {
            return BreakoutExpectation {
                ball,
                dir: (-1, -dc),
                paddle,
                reward: 0.0,
                terminal: false,
                bricks,
            };
        }
        return BreakoutExpectation {
            ball: (tr, tc),
            dir: (dr, dc),
            paddle,
            reward: 0.0,
            terminal: true,
            bricks,
        };
    }
    BreakoutExpectation {
        ball: (tr, tc),
        dir: (dr, dc),
        paddle,
        reward: 0.0,
        terminal: false,
        bricks,
    }
}

/// Runs the exhaustive Breakout comparison and returns
/// `(cases checked, mismatching cases)`.
pub fn breakout_exhaustive() -> (usize, Vec<String>) {
    let dirs = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
    let actions = [Action::NoOp, Action::Left, Action::Right, Action::Fire];
    let mut checked = 0;
    let mut failures = Vec::new();
    for row in 0..9 {
        for col in 0..10 {
            for dir in dirs {
                // Candidate target cells: straight, wall-reflected,
                // ceiling-reflected and corner-reflected.
                let candidates: Vec<(i32, i32)> = [
                    (row + dir.0, col + dir.1),
                    (row + dir.0, col - dir.1),
                    (row - dir.0, col + dir.1),
                    (row - dir.0, col - dir.1),
                ]
                .into_iter()
                .filter(|&(r, c)| (1..=3).contains(&r) && (0..10).contains(&c))
                .filter(|&cell| cell != (row, col))
                .collect();
                for pattern in 0u32..(1 << candidates.len()) {
                    for full_background in [false, true] {
                        let mut bricks = [[false; 10]; 10];
                        if full_background {
                            for r in 1..=3 {
                                bricks[r] = [true; 10];
                            }
                            for &(r, c) in &candidates {
                                bricks[r as usize][c as usize] = false;
                            }
                            if (1..=3).contains(&row) {
                                bricks[row as usize][col as usize] = false;
                            }
                        }
                        for (i, &(r, c)) in candidates.iter().enumerate() {
                            if pattern & (1 << i) != 0 {
                                bricks[r as usize][c as usize] = true;
                            }
                        }
                        for paddle in 0..10 {
                            for action in actions {
                                checked += 1;
                                let expected =
                                    breakout_reference((row, col), dir, paddle, action, &bricks);
                                let mut state = BreakoutState::empty((row, col), dir, paddle);
                                state.bricks = bricks;
                                let out = state.step(action, &mut Rng::new(0));
                                let got = BreakoutExpectation {
                                    ball: state.ball,
                                    dir: state.ball_dir,
                                    paddle: state.paddle_col,
                                    reward: out.reward,
                                    terminal: out.terminal,
                                    bricks: state.bricks,
                                };
                                if got != expected || state.last_ball != (row, col) {
                                    failures.push(format!(
                                        "ball {:?} dir {:?} paddle {} action {:?} pattern {} bg {}: got {:?}, expected {:?}",
                                        (row, col), dir, paddle, action, pattern, full_background, got, expected
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    (checked, failures)
}

/// Reference block move for Space Invaders: each alien is moved on its own
/// after deciding whether the formation touches the edge it is heading for.
/// Returns `None` when the block would step below the bottom row.
pub fn invaders_reference(aliens: &[(i32, i32)], dir: i32) -> Option<(Vec<(i32, i32)>, i32)> {
    let at_edge = if dir > 0 {
        aliens.iter().any(|&(_, c)| c == 9)
    } else {
        aliens.iter().any(|&(_, c)| c == 0)
    };
    if at_edge {
        if aliens.iter().any(|&(r, _)| r == 9) {
            return None;
        }
        let mut moved: Vec<_> = aliens.iter().map(|&(r, c)| (r + 1, c)).collect();
        moved.sort_unstable();
        Some((moved, -dir))
    } else {
        let mut moved: Vec<_> = aliens.iter().map(|&(r, c)| (r, c + dir)).collect();
        moved.sort_unstable();
        Some((moved, dir))
    }
}

fn alien_cells(map: &[[bool; 10]; 10]) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for (r, row) in map.iter().enumerate() {
        for (c, &a) in row.iter().enumerate() {
            if a {
                out.push((r as i32, c as i32));
            }
        }
    }
    out
}

/// Every rectangular formation plus every two-corner formation, in both
/// directions. Returns `(cases checked, failures)`.
pub fn invaders_exhaustive() -> (usize, Vec<String>) {
    use minatar_core::games::Heading;
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut formations: Vec<Vec<(i32, i32)>> = Vec::new();
    for top in 0..10 {
        for bottom in top..10 {
            for left in 0..10 {
                for right in left..10 {
                    let mut rect = Vec::new();
                    for r in top..=bottom {
                        for c in left..=right {
                            rect.push((r, c));
                        }
                    }
                    formations.push(rect);
                    let mut corners = vec![(top, left), (bottom, right)];
                    corners.dedup();
                    formations.push(corners);
                }
            }
        }
    }
    for cells in formations {
        for dir in [-1, 1] {
            checked += 1;
            let mut state = SpaceInvadersState::reset(&mut Rng::new(0), true);
            state.aliens = [[false; 10]; 10];
            for &(r, c) in &cells {
                state.aliens[r as usize][c as usize] = true;
            }
            state.alien_dir = if dir > 0 {
                Heading::Right
            } else {
                Heading::Left
            };
            let invaded = state.shift_block();
            let got = if invaded {
                None
            } else {
                Some((alien_cells(&state.aliens), state.alien_dir.dx()))
            };
            let expected = invaders_reference(&cells, dir);
            if got != expected {
                failures.push(format!(
                    "formation {cells:?} dir {dir}: got {got:?}, expected {expected:?}"
                ));
            }
        }
    }
    (checked, failures)
}
